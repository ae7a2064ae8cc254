//! Monte Carlo experiment orchestration.
//!
//! One trial of one design: build the item pool from the trial's item stream,
//! sample fresh workers for every item from the design's accuracy model, cast
//! `b` votes per question instance, aggregate, and score against the IN
//! label. Item pools depend only on `(seed, trial)`, so all designs within a
//! trial classify the same items.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aggregation::{conjunction, majority_vote};
use crate::datagen::{class_distribution_pool, selectivity_pool, DatagenError, ItemPool};
use crate::metrics::{f_beta, ConfusionCounts, MetricsError};
use crate::model::{
    validate_config, ComplexPredicateSpec, GenerationMode, PredicateSpec, SimulationConfig, TaskDesign,
    ValidationReport,
};
use crate::stream::{item_stream, vote_stream, SimRng};
use crate::worker::{baseline_mean, cast_vote, same_task_mean, WorkerAccuracyModel, WorkerError};

pub const RESULTS_HEADER: &str =
    "design,n,selectivities,mu_list,sigma2,budget,gamma,trial,precision,recall,beta,f_beta,cost_labels";

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid configuration:\n{0}")]
    Invalid(ValidationReport),
    #[error("invalid sweep grid: {0}")]
    Grid(String),
    #[error(transparent)]
    Worker(#[from] WorkerError),
    #[error(transparent)]
    Datagen(#[from] DatagenError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl EngineError {
    /// Whether the failure is an I/O problem rather than bad input.
    pub fn is_io(&self) -> bool {
        match self {
            EngineError::Io(_) => true,
            EngineError::Csv(e) => matches!(e.kind(), csv::ErrorKind::Io(_)),
            EngineError::Datagen(DatagenError::Io(_)) => true,
            _ => false,
        }
    }
}

/// The simulation parameters a result was produced under.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamPoint {
    pub n: usize,
    pub selectivities: Vec<f64>,
    pub mu_list: Vec<f64>,
    pub sigma2: Vec<f64>,
    pub budget: u32,
    pub gamma: f64,
}

impl ParamPoint {
    pub fn of(config: &SimulationConfig) -> Self {
        let cp = &config.complex_predicate;
        Self {
            n: cp.n(),
            selectivities: cp.selectivities(),
            mu_list: cp.accuracy_means(),
            sigma2: cp.accuracy_vars(),
            budget: config.budget_b,
            gamma: cp.penalty,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FScore {
    pub beta: f64,
    /// `None` when the trial had no positive truths and no positive decisions.
    pub score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionResult {
    pub design: TaskDesign,
    pub params: ParamPoint,
    pub trial: u32,
    pub counts: ConfusionCounts,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f_scores: Vec<FScore>,
    pub cost_labels: u64,
}

impl ConditionResult {
    pub fn f_score(&self, beta: f64) -> Option<f64> {
        self.f_scores.iter().find(|f| f.beta == beta).and_then(|f| f.score)
    }
}

/// Total binary answers elicited for `items` items.
pub fn expected_cost(design: TaskDesign, items: usize, n: usize, budget: u32) -> u64 {
    let per_question = items as u64 * u64::from(budget);
    match design {
        TaskDesign::Baseline => per_question,
        TaskDesign::SameTask | TaskDesign::SeparateTasks => per_question * n as u64,
    }
}

/// One elicited answer. `question` is `None` for the complex predicate,
/// otherwise the predicate index. `worker` is unique within the item.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VoteEvent {
    pub item_index: usize,
    pub question: Option<usize>,
    pub worker: u32,
    pub vote: bool,
}

/// Everything one trial produced, for callers that need more than scores.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub pool: ItemPool,
    pub decisions: Vec<bool>,
    pub votes: Vec<VoteEvent>,
}

enum DesignModels {
    Baseline(WorkerAccuracyModel),
    SameTask { model: WorkerAccuracyModel, fresh: bool },
    SeparateTasks(Vec<WorkerAccuracyModel>),
}

impl DesignModels {
    fn build(config: &SimulationConfig, design: TaskDesign) -> Result<Self, WorkerError> {
        let cp = &config.complex_predicate;
        let mus = cp.accuracy_means();
        Ok(match design {
            TaskDesign::Baseline => {
                let mean = baseline_mean(&mus, cp.penalty)?;
                DesignModels::Baseline(WorkerAccuracyModel::new(mean, cp.pooled_accuracy_var())?)
            }
            TaskDesign::SameTask => DesignModels::SameTask {
                model: WorkerAccuracyModel::new(same_task_mean(&mus)?, cp.pooled_accuracy_var())?,
                fresh: config.same_task_fresh_draws,
            },
            TaskDesign::SeparateTasks => DesignModels::SeparateTasks(
                cp.predicates
                    .iter()
                    .map(|p| WorkerAccuracyModel::new(p.accuracy_mean, p.accuracy_var))
                    .collect::<Result<_, _>>()?,
            ),
        })
    }
}

fn ensure_valid(config: &SimulationConfig) -> Result<(), EngineError> {
    let report = validate_config(config);
    if report.is_valid() {
        Ok(())
    } else {
        Err(EngineError::Invalid(report))
    }
}

/// Item pool for `trial`; identical across designs.
pub fn trial_pool(config: &SimulationConfig, trial: u32) -> Result<ItemPool, EngineError> {
    let mut rng = item_stream(config.seed, trial);
    let cp = &config.complex_predicate;
    Ok(match &config.generation_mode {
        GenerationMode::Selectivity => selectivity_pool(cp, config.item_count, &mut rng, config.seed)?,
        GenerationMode::ClassDistribution(dist) => {
            class_distribution_pool(cp, dist, config.item_count, &mut rng, config.seed)?
        }
    })
}

fn simulate<F: FnMut(VoteEvent)>(
    config: &SimulationConfig,
    design: TaskDesign,
    trial: u32,
    pool: &ItemPool,
    mut on_vote: F,
) -> Result<Vec<bool>, EngineError> {
    let models = DesignModels::build(config, design)?;
    let mut rng: SimRng = vote_stream(config.seed, design, trial);
    let b = config.budget_b as usize;
    let n = pool.n;
    let tie = config.tie_rule;
    let mut votes: Vec<Vec<bool>> = vec![Vec::with_capacity(b); n.max(1)];
    let mut verdicts = vec![false; n];

    let mut decisions = Vec::with_capacity(pool.items.len());
    for (item_index, item) in pool.items.iter().enumerate() {
        votes.iter_mut().for_each(Vec::clear);
        let decision = match &models {
            DesignModels::Baseline(model) => {
                let truth = item.in_label();
                for k in 0..b {
                    let vote = cast_vote(truth, model.sample(&mut rng), &mut rng);
                    votes[0].push(vote);
                    on_vote(VoteEvent {
                        item_index,
                        question: None,
                        worker: k as u32,
                        vote,
                    });
                }
                majority_vote(&votes[0], tie).expect("budget is at least one vote")
            }
            DesignModels::SameTask { model, fresh } => {
                for k in 0..b {
                    let mut accuracy = model.sample(&mut rng);
                    for (j, &bit) in item.bits.iter().enumerate() {
                        if *fresh && j > 0 {
                            accuracy = model.sample(&mut rng);
                        }
                        let vote = cast_vote(bit, accuracy, &mut rng);
                        votes[j].push(vote);
                        on_vote(VoteEvent {
                            item_index,
                            question: Some(j),
                            worker: k as u32,
                            vote,
                        });
                    }
                }
                aggregate_predicates(&votes, &mut verdicts, tie)
            }
            DesignModels::SeparateTasks(models) => {
                for (j, (&bit, model)) in item.bits.iter().zip(models).enumerate() {
                    for k in 0..b {
                        let vote = cast_vote(bit, model.sample(&mut rng), &mut rng);
                        votes[j].push(vote);
                        on_vote(VoteEvent {
                            item_index,
                            question: Some(j),
                            worker: (j * b + k) as u32,
                            vote,
                        });
                    }
                }
                aggregate_predicates(&votes, &mut verdicts, tie)
            }
        };
        decisions.push(decision);
    }
    Ok(decisions)
}

fn aggregate_predicates(votes: &[Vec<bool>], verdicts: &mut [bool], tie: crate::model::TieRule) -> bool {
    for (v, set) in verdicts.iter_mut().zip(votes) {
        *v = majority_vote(set, tie).expect("budget is at least one vote");
    }
    conjunction(verdicts).expect("at least one predicate")
}

fn score(config: &SimulationConfig, design: TaskDesign, trial: u32, pool: &ItemPool, decisions: &[bool]) -> ConditionResult {
    let counts = ConfusionCounts::from_pairs(decisions.iter().zip(&pool.items).map(|(&d, i)| (d, i.in_label())));
    let f_scores = config
        .beta_weights
        .iter()
        .map(|&beta| FScore {
            beta,
            score: match f_beta(&counts, beta) {
                Ok(s) => Some(s),
                Err(MetricsError::NoPositives) => None,
                Err(e) => unreachable!("validated beta: {e}"),
            },
        })
        .collect();
    ConditionResult {
        design,
        params: ParamPoint::of(config),
        trial,
        counts,
        precision: counts.precision(),
        recall: counts.recall(),
        f_scores,
        cost_labels: expected_cost(design, pool.items.len(), pool.n, config.budget_b),
    }
}

fn run_validated(config: &SimulationConfig, design: TaskDesign, trial: u32) -> Result<ConditionResult, EngineError> {
    let pool = trial_pool(config, trial)?;
    let mut cost = 0u64;
    let decisions = simulate(config, design, trial, &pool, |_| cost += 1)?;
    let result = score(config, design, trial, &pool, &decisions);
    debug_assert_eq!(cost, result.cost_labels);
    Ok(result)
}

/// Run trial `trial` of `design`, seeded from `config.seed`.
pub fn run_condition(config: &SimulationConfig, design: TaskDesign, trial: u32) -> Result<ConditionResult, EngineError> {
    ensure_valid(config)?;
    run_validated(config, design, trial)
}

/// Like [`run_condition`] but keeps the pool, decisions, and every vote.
pub fn run_trial_detailed(
    config: &SimulationConfig,
    design: TaskDesign,
    trial: u32,
) -> Result<(ConditionResult, TrialOutcome), EngineError> {
    ensure_valid(config)?;
    let pool = trial_pool(config, trial)?;
    let mut votes = Vec::new();
    let decisions = simulate(config, design, trial, &pool, |e| votes.push(e))?;
    let result = score(config, design, trial, &pool, &decisions);
    Ok((result, TrialOutcome { pool, decisions, votes }))
}

/// All trials of all `designs`, ordered by design (as given) then trial.
///
/// Trials run on the current rayon pool; the output does not depend on the
/// number of threads.
pub fn run_experiment(config: &SimulationConfig, designs: &[TaskDesign]) -> Result<Vec<ConditionResult>, EngineError> {
    ensure_valid(config)?;
    let jobs: Vec<(TaskDesign, u32)> = designs
        .iter()
        .flat_map(|&d| (0..config.trials).map(move |t| (d, t)))
        .collect();
    jobs.par_iter()
        .map(|&(d, t)| run_validated(config, d, t))
        .collect()
}

/// A grid value: one number for every predicate or one per predicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridValue {
    Shared(f64),
    PerPredicate(Vec<f64>),
}

/// Parameter lists whose Cartesian product is swept. Absent lists keep the
/// base configuration's value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    #[serde(default)]
    pub n: Option<Vec<usize>>,
    #[serde(default)]
    pub selectivity: Option<Vec<GridValue>>,
    #[serde(default)]
    pub mu: Option<Vec<GridValue>>,
    #[serde(default)]
    pub sigma2: Option<Vec<GridValue>>,
    #[serde(default)]
    pub budget: Option<Vec<u32>>,
    #[serde(default)]
    pub gamma: Option<Vec<f64>>,
    #[serde(default)]
    pub beta: Option<Vec<f64>>,
}

fn axis<T: Clone>(name: &str, values: &Option<Vec<T>>) -> Result<Vec<Option<T>>, EngineError> {
    match values {
        None => Ok(vec![None]),
        Some(v) if v.is_empty() => Err(EngineError::Grid(format!("'{name}' list is empty"))),
        Some(v) => Ok(v.iter().cloned().map(Some).collect()),
    }
}

fn resolve(name: &str, value: Option<&GridValue>, base: &[f64], n: usize) -> Result<Vec<f64>, EngineError> {
    match value {
        Some(GridValue::Shared(x)) => Ok(vec![*x; n]),
        Some(GridValue::PerPredicate(v)) if v.len() == n => Ok(v.clone()),
        Some(GridValue::PerPredicate(v)) => Err(EngineError::Grid(format!(
            "'{name}' has {} per-predicate values but n = {n}",
            v.len()
        ))),
        None if base.len() == n => Ok(base.to_vec()),
        None if base.windows(2).all(|w| w[0] == w[1]) => Ok(vec![base[0]; n]),
        None => Err(EngineError::Grid(format!(
            "cannot extend per-predicate base '{name}' values to n = {n}; give '{name}' in the grid"
        ))),
    }
}

impl SweepGrid {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn cardinality(&self) -> usize {
        fn len<T>(v: &Option<Vec<T>>) -> usize {
            v.as_ref().map_or(1, Vec::len)
        }
        len(&self.n)
            * len(&self.selectivity)
            * len(&self.mu)
            * len(&self.sigma2)
            * len(&self.budget)
            * len(&self.gamma)
            * len(&self.beta)
    }

    /// Expand into one configuration per Cartesian point, `n` outermost and
    /// `beta` innermost.
    pub fn points(&self, base: &SimulationConfig) -> Result<Vec<SimulationConfig>, EngineError> {
        let base_cp = &base.complex_predicate;
        let mut out = Vec::with_capacity(self.cardinality());
        for n in axis("n", &self.n)? {
            let n = n.unwrap_or(base_cp.n());
            if n == 0 {
                return Err(EngineError::Grid("n must be at least 1".into()));
            }
            for s in axis("selectivity", &self.selectivity)? {
                for mu in axis("mu", &self.mu)? {
                    for var in axis("sigma2", &self.sigma2)? {
                        for b in axis("budget", &self.budget)? {
                            for gamma in axis("gamma", &self.gamma)? {
                                for beta in axis("beta", &self.beta)? {
                                    let sel = resolve("selectivity", s.as_ref(), &base_cp.selectivities(), n)?;
                                    let mus = resolve("mu", mu.as_ref(), &base_cp.accuracy_means(), n)?;
                                    let vars = resolve("sigma2", var.as_ref(), &base_cp.accuracy_vars(), n)?;
                                    let predicates = (0..n)
                                        .map(|j| {
                                            let id = if n == base_cp.n() {
                                                base_cp.predicates[j].id.clone()
                                            } else {
                                                format!("p{}", j + 1)
                                            };
                                            PredicateSpec::new(id, sel[j], mus[j], vars[j])
                                        })
                                        .collect();
                                    let mut cfg = base.clone();
                                    cfg.complex_predicate = ComplexPredicateSpec {
                                        predicates,
                                        penalty: gamma.unwrap_or(base_cp.penalty),
                                    };
                                    if let Some(b) = b {
                                        cfg.budget_b = b;
                                    }
                                    if let Some(beta) = beta {
                                        cfg.beta_weights = vec![beta];
                                    }
                                    out.push(cfg);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// One [`run_experiment`] per grid point, concatenated in grid order.
///
/// Every point reuses the base seed, so points that share `n` and
/// selectivities classify the same item pools.
pub fn sweep(grid: &SweepGrid, base: &SimulationConfig, designs: &[TaskDesign]) -> Result<Vec<ConditionResult>, EngineError> {
    let points = grid.points(base)?;
    let mut all = Vec::new();
    for (i, point) in points.iter().enumerate() {
        let report = validate_config(point);
        if !report.is_valid() {
            return Err(EngineError::Grid(format!("grid point {i} is invalid:\n{report}")));
        }
        all.extend(run_experiment(point, designs)?);
    }
    Ok(all)
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Write one row per beta per result under [`RESULTS_HEADER`].
///
/// Undefined precision, recall, or F scores are written as empty fields.
pub fn write_results_csv<W: Write>(writer: W, results: &[ConditionResult]) -> Result<(), EngineError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(RESULTS_HEADER.split(','))?;
    for r in results {
        let p = &r.params;
        let sigma2 = if p.sigma2.windows(2).all(|w| w[0] == w[1]) {
            p.sigma2[0].to_string()
        } else {
            join(&p.sigma2)
        };
        for f in &r.f_scores {
            w.write_record([
                r.design.as_str().to_string(),
                p.n.to_string(),
                join(&p.selectivities),
                join(&p.mu_list),
                sigma2.clone(),
                p.budget.to_string(),
                p.gamma.to_string(),
                r.trial.to_string(),
                opt(r.precision),
                opt(r.recall),
                f.beta.to_string(),
                opt(f.score),
                r.cost_labels.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Mean and standard error of one design's F scores over trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreSummary {
    pub design: TaskDesign,
    pub params: ParamPoint,
    pub beta: f64,
    pub mean: f64,
    pub std_err: f64,
    /// Trials with a defined score.
    pub trials: usize,
    pub undefined: usize,
}

/// Summaries per `(parameter point, design, beta)`, in first-seen order.
pub fn summarize(results: &[ConditionResult]) -> Vec<ScoreSummary> {
    let mut groups: Vec<(&ParamPoint, TaskDesign, f64, Vec<f64>, usize)> = Vec::new();
    for r in results {
        for f in &r.f_scores {
            let idx = match groups
                .iter()
                .rposition(|g| g.1 == r.design && g.2 == f.beta && g.0 == &r.params)
            {
                Some(i) => i,
                None => {
                    groups.push((&r.params, r.design, f.beta, Vec::new(), 0));
                    groups.len() - 1
                }
            };
            let slot = &mut groups[idx];
            match f.score {
                Some(s) => slot.3.push(s),
                None => slot.4 += 1,
            }
        }
    }
    groups
        .into_iter()
        .map(|(params, design, beta, scores, undefined)| {
            let k = scores.len() as f64;
            let mean = scores.iter().sum::<f64>() / k;
            let var = if scores.len() > 1 {
                scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (k - 1.0)
            } else {
                0.0
            };
            ScoreSummary {
                design,
                params: params.clone(),
                beta,
                mean,
                std_err: (var / k).sqrt(),
                trials: scores.len(),
                undefined,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TieRule;

    pub(crate) fn config(n: usize, s: f64, mu: f64, var: f64, b: u32, trials: u32) -> SimulationConfig {
        SimulationConfig {
            complex_predicate: ComplexPredicateSpec {
                predicates: (0..n)
                    .map(|j| PredicateSpec::new(format!("p{}", j + 1), s, mu, var))
                    .collect(),
                penalty: 0.0,
            },
            item_count: 200,
            generation_mode: GenerationMode::Selectivity,
            budget_b: b,
            beta_weights: vec![1.0],
            trials,
            seed: 42,
            tie_rule: TieRule::Out,
            same_task_fresh_draws: false,
        }
    }

    #[test]
    fn perfect_workers_classify_perfectly() {
        let c = config(2, 0.5, 1.0 - 1e-9, 1e-12, 3, 5);
        for design in TaskDesign::ALL {
            for r in run_experiment(&c, &[design]).unwrap() {
                assert_eq!(r.precision, Some(1.0), "{design}");
                assert_eq!(r.recall, Some(1.0), "{design}");
            }
        }
    }

    #[test]
    fn cost_accounting() {
        let mut c = config(3, 0.5, 0.7, 0.04, 5, 2);
        c.item_count = 37;
        for d in TaskDesign::ALL {
            let (r, outcome) = run_trial_detailed(&c, d, 0).unwrap();
            assert_eq!(r.cost_labels, outcome.votes.len() as u64);
            assert_eq!(r.cost_labels, expected_cost(d, 37, 3, 5));
        }
        assert_eq!(expected_cost(TaskDesign::Baseline, 37, 3, 5), 37 * 5);
        assert_eq!(expected_cost(TaskDesign::SameTask, 37, 3, 5), 37 * 3 * 5);
        assert_eq!(expected_cost(TaskDesign::SeparateTasks, 37, 3, 5), 37 * 3 * 5);
    }

    #[test]
    fn experiment_cardinality_and_order() {
        let c = config(2, 0.5, 0.7, 0.04, 3, 10);
        let r = run_experiment(&c, &TaskDesign::ALL).unwrap();
        assert_eq!(r.len(), 30);
        for (i, res) in r.iter().enumerate() {
            assert_eq!(res.design, TaskDesign::ALL[i / 10]);
            assert_eq!(res.trial, (i % 10) as u32);
        }
    }

    #[test]
    fn determinism_and_seed_sensitivity() {
        let c = config(2, 0.5, 0.7, 0.04, 3, 10);
        let a = run_experiment(&c, &TaskDesign::ALL).unwrap();
        let b = run_experiment(&c, &TaskDesign::ALL).unwrap();
        assert_eq!(a, b);
        let mut c2 = c.clone();
        c2.seed = 43;
        let d = run_experiment(&c2, &TaskDesign::ALL).unwrap();
        assert_ne!(
            a.iter().map(|r| r.f_score(1.0)).collect::<Vec<_>>(),
            d.iter().map(|r| r.f_score(1.0)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn thread_count_does_not_matter() {
        let c = config(2, 0.4, 0.7, 0.04, 3, 16);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| run_experiment(&c, &TaskDesign::ALL)).unwrap();
        let b = four.install(|| run_experiment(&c, &TaskDesign::ALL)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn trial_stream_independent_of_trial_count() {
        let c = config(2, 0.5, 0.7, 0.04, 3, 3);
        let mut longer = c.clone();
        longer.trials = 8;
        let a = run_experiment(&c, &[TaskDesign::SameTask]).unwrap();
        let b = run_experiment(&longer, &[TaskDesign::SameTask]).unwrap();
        assert_eq!(a[..], b[..3]);
        assert_eq!(run_condition(&c, TaskDesign::SameTask, 2).unwrap(), a[2]);
    }

    #[test]
    fn designs_share_item_pools() {
        let c = config(2, 0.5, 0.7, 0.04, 3, 1);
        let (_, a) = run_trial_detailed(&c, TaskDesign::Baseline, 0).unwrap();
        let (_, b) = run_trial_detailed(&c, TaskDesign::SeparateTasks, 0).unwrap();
        assert_eq!(a.pool, b.pool);
    }

    #[test]
    fn invalid_config_rejected() {
        let mut c = config(2, 0.5, 0.7, 0.04, 3, 1);
        c.complex_predicate.penalty = 1.5;
        assert!(matches!(run_experiment(&c, &TaskDesign::ALL), Err(EngineError::Invalid(_))));
        assert!(matches!(run_condition(&c, TaskDesign::Baseline, 0), Err(EngineError::Invalid(_))));
    }

    #[test]
    fn fresh_draw_flag_changes_same_task_only() {
        let c = config(2, 0.5, 0.7, 0.04, 3, 2);
        let mut f = c.clone();
        f.same_task_fresh_draws = true;
        assert_eq!(
            run_condition(&c, TaskDesign::SeparateTasks, 0).unwrap(),
            run_condition(&f, TaskDesign::SeparateTasks, 0).unwrap()
        );
        let (_, a) = run_trial_detailed(&c, TaskDesign::SameTask, 0).unwrap();
        let (_, b) = run_trial_detailed(&f, TaskDesign::SameTask, 0).unwrap();
        assert_ne!(a.votes, b.votes);
    }

    #[test]
    fn grid_expansion() {
        let base = config(2, 0.5, 0.7, 0.04, 3, 1);
        let g = SweepGrid::from_json(r#"{"mu": [0.6, 0.9], "budget": [3, 9]}"#).unwrap();
        assert_eq!(g.cardinality(), 4);
        let pts = g.points(&base).unwrap();
        assert_eq!(pts.len(), 4);
        assert_eq!(pts[1].budget_b, 9);
        assert_eq!(pts[2].complex_predicate.accuracy_means(), vec![0.9, 0.9]);

        let g = SweepGrid::from_json(r#"{"n": [2, 4], "selectivity": [[0.3, 0.7]]}"#).unwrap();
        assert!(matches!(g.points(&base), Err(EngineError::Grid(_))));

        let g = SweepGrid::from_json(r#"{"n": [1, 4], "beta": [0.1, 1, 10]}"#).unwrap();
        let pts = g.points(&base).unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[5].complex_predicate.n(), 4);
        assert_eq!(pts[5].beta_weights, vec![10.0]);

        assert!(matches!(
            SweepGrid::from_json(r#"{"mu": []}"#).unwrap().points(&base),
            Err(EngineError::Grid(_))
        ));
        assert!(SweepGrid::from_json(r#"{"mew": [0.5]}"#).is_err());
    }

    #[test]
    fn sweep_rows_are_tagged() {
        let base = config(2, 0.5, 0.7, 0.04, 3, 2);
        let g = SweepGrid::from_json(r#"{"mu": [0.6, 0.9], "budget": [3, 9]}"#).unwrap();
        let rows = sweep(&g, &base, &TaskDesign::ALL).unwrap();
        assert_eq!(rows.len(), 4 * 3 * 2);
        assert_eq!(rows[0].params.mu_list, vec![0.6, 0.6]);
        assert_eq!(rows[6].params.budget, 9);
        assert_eq!(rows[23].params.mu_list, vec![0.9, 0.9]);
    }

    #[test]
    fn csv_layout() {
        let mut c = config(2, 0.5, 0.7, 0.04, 3, 2);
        c.beta_weights = vec![0.1, 1.0, 10.0];
        let r = run_experiment(&c, &TaskDesign::ALL).unwrap();
        let mut buf = Vec::new();
        write_results_csv(&mut buf, &r).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(RESULTS_HEADER));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first[0], "baseline");
        assert_eq!(first[2], "0.5;0.5");
        assert_eq!(first[3], "0.7;0.7");
        assert_eq!(first[4], "0.04");
        assert_eq!(first[10], "0.1");
        assert_eq!(text.lines().count(), 1 + 3 * 2 * 3);
    }

    #[test]
    fn summary_statistics() {
        let c = config(1, 0.5, 0.8, 0.01, 3, 20);
        let r = run_experiment(&c, &TaskDesign::ALL).unwrap();
        let s = summarize(&r);
        assert_eq!(s.len(), 3);
        for sum in &s {
            assert_eq!(sum.trials + sum.undefined, 20);
            assert!(sum.mean > 0.5 && sum.mean <= 1.0);
            assert!(sum.std_err >= 0.0);
        }
    }
}

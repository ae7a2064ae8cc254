//! Domain types shared by the simulator and the analysis pipeline.
//!
//! Everything here is plain value data. Configurations deserialize from JSON
//! with unknown fields rejected, and [`validate_config`] reports every
//! violated bound at once instead of stopping at the first one.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Worker-accuracy variance used when a predicate does not specify one.
pub const DEFAULT_ACCURACY_VAR: f64 = 0.04;

fn default_accuracy_var() -> f64 {
    DEFAULT_ACCURACY_VAR
}

fn default_beta_weights() -> Vec<f64> {
    vec![1.0]
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("mean {0} is outside the open interval (0, 1)")]
    DomainError(f64),
    #[error("variance {variance} is infeasible for mean {mean}: must lie in (0, {bound})")]
    InfeasibleVariance { mean: f64, variance: f64, bound: f64 },
}

/// A simple predicate `p_j`: how often items satisfy it and how accurately
/// workers answer it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredicateSpec {
    pub id: String,
    /// Probability that an item satisfies the predicate (bit = 1).
    pub selectivity: f64,
    pub accuracy_mean: f64,
    #[serde(default = "default_accuracy_var")]
    pub accuracy_var: f64,
}

impl PredicateSpec {
    pub fn new(id: impl Into<String>, selectivity: f64, accuracy_mean: f64, accuracy_var: f64) -> Self {
        Self {
            id: id.into(),
            selectivity,
            accuracy_mean,
            accuracy_var,
        }
    }
}

/// Conjunction `P = p_1 ∧ … ∧ p_n` plus the difficulty penalty applied when
/// `P` is asked as a single question.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexPredicateSpec {
    pub predicates: Vec<PredicateSpec>,
    #[serde(default)]
    pub penalty: f64,
}

impl ComplexPredicateSpec {
    pub fn n(&self) -> usize {
        self.predicates.len()
    }

    pub fn selectivities(&self) -> Vec<f64> {
        self.predicates.iter().map(|p| p.selectivity).collect()
    }

    pub fn accuracy_means(&self) -> Vec<f64> {
        self.predicates.iter().map(|p| p.accuracy_mean).collect()
    }

    pub fn accuracy_vars(&self) -> Vec<f64> {
        self.predicates.iter().map(|p| p.accuracy_var).collect()
    }

    /// Pooled variance used for the designs that draw from a single Beta
    /// (baseline and same-task).
    pub fn pooled_accuracy_var(&self) -> f64 {
        let vars = self.accuracy_vars();
        vars.iter().sum::<f64>() / vars.len() as f64
    }
}

/// Ground truth for one item: one bit per simple predicate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ItemTruth {
    pub item_id: u32,
    pub bits: Vec<bool>,
}

impl ItemTruth {
    /// IN iff every predicate is satisfied.
    pub fn in_label(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskDesign {
    /// The complex predicate asked as one question.
    Baseline,
    /// All simple questions answered by the same worker in one task.
    SameTask,
    /// Each simple question answered by distinct workers in its own task.
    SeparateTasks,
}

impl TaskDesign {
    pub const ALL: [TaskDesign; 3] = [TaskDesign::Baseline, TaskDesign::SameTask, TaskDesign::SeparateTasks];

    pub fn as_str(self) -> &'static str {
        match self {
            TaskDesign::Baseline => "baseline",
            TaskDesign::SameTask => "same_task",
            TaskDesign::SeparateTasks => "separate_tasks",
        }
    }

    pub(crate) fn lane(self) -> u64 {
        match self {
            TaskDesign::Baseline => 1,
            TaskDesign::SameTask => 2,
            TaskDesign::SeparateTasks => 3,
        }
    }
}

impl fmt::Display for TaskDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How OUT items are spread over the exclusion bit-patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionSplit {
    /// Equal counts per pattern; the remainder goes to the first patterns in
    /// the canonical pattern order (see `datagen::exclusion_patterns`).
    #[default]
    Equal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDistributionSpec {
    pub in_fraction: f64,
    #[serde(default)]
    pub exclusion_split: ExclusionSplit,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenerationMode {
    /// Each bit drawn independently with `P(bit_j = 1) = s_j`.
    #[default]
    Selectivity,
    /// Fixed IN fraction, OUT items split equally over exclusion patterns.
    ClassDistribution(ClassDistributionSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TieRule {
    #[default]
    #[serde(rename = "OUT", alias = "out")]
    Out,
    #[serde(rename = "IN", alias = "in")]
    In,
}

impl TieRule {
    pub fn label(self) -> bool {
        matches!(self, TieRule::In)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub complex_predicate: ComplexPredicateSpec,
    pub item_count: usize,
    #[serde(default)]
    pub generation_mode: GenerationMode,
    /// Votes per question instance.
    pub budget_b: u32,
    #[serde(default = "default_beta_weights")]
    pub beta_weights: Vec<f64>,
    pub trials: u32,
    pub seed: u64,
    #[serde(default)]
    pub tie_rule: TieRule,
    /// Same-task workers draw a fresh accuracy per question instead of
    /// reusing one draw for all n questions.
    #[serde(default)]
    pub same_task_fresh_draws: bool,
}

impl SimulationConfig {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Convert Beta mean and variance into shape parameters `(alpha, beta)`.
///
/// Uses the moment identity `alpha + beta = mean(1 - mean)/variance - 1`.
pub fn beta_params_from_mean_var(mean: f64, variance: f64) -> Result<(f64, f64), ModelError> {
    if !(mean > 0.0 && mean < 1.0) {
        return Err(ModelError::DomainError(mean));
    }
    let bound = mean * (1.0 - mean);
    if !(variance > 0.0 && variance < bound) {
        return Err(ModelError::InfeasibleVariance { mean, variance, bound });
    }
    let concentration = bound / variance - 1.0;
    Ok((mean * concentration, (1.0 - mean) * concentration))
}

/// A single violated bound, tagged with the dotted path of the field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            field: field.into(),
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn validate_predicate(p: &PredicateSpec, path: &str, report: &mut ValidationReport) {
    if p.id.trim().is_empty() {
        report.push(format!("{path}.id"), "predicate id must be non-empty");
    }
    if !(0.0..=1.0).contains(&p.selectivity) {
        report.push(
            format!("{path}.selectivity"),
            format!("selectivity {} must lie in [0, 1]", p.selectivity),
        );
    }
    let mean_ok = p.accuracy_mean > 0.0 && p.accuracy_mean < 1.0;
    if !mean_ok {
        report.push(
            format!("{path}.accuracy_mean"),
            format!("accuracy mean {} must lie in (0, 1)", p.accuracy_mean),
        );
    }
    if mean_ok {
        let bound = p.accuracy_mean * (1.0 - p.accuracy_mean);
        if !(p.accuracy_var > 0.0 && p.accuracy_var < bound) {
            report.push(
                format!("{path}.accuracy_var"),
                format!(
                    "accuracy variance {} must lie in (0, mean*(1-mean) = {bound}) for a feasible Beta",
                    p.accuracy_var
                ),
            );
        }
    } else if p.accuracy_var.is_nan() || p.accuracy_var <= 0.0 {
        report.push(
            format!("{path}.accuracy_var"),
            format!("accuracy variance {} must be positive", p.accuracy_var),
        );
    }
}

pub fn validate_complex_predicate(spec: &ComplexPredicateSpec, path: &str, report: &mut ValidationReport) {
    if spec.predicates.is_empty() {
        report.push(format!("{path}.predicates"), "at least one predicate is required");
    }
    let mut seen = HashSet::new();
    for (i, p) in spec.predicates.iter().enumerate() {
        validate_predicate(p, &format!("{path}.predicates[{i}]"), report);
        if !seen.insert(p.id.as_str()) {
            report.push(
                format!("{path}.predicates[{i}].id"),
                format!("predicate ids must be unique; '{}' repeats", p.id),
            );
        }
    }
    if !(0.0..=1.0).contains(&spec.penalty) {
        report.push(
            format!("{path}.penalty"),
            format!("penalty gamma {} must lie in [0, 1]", spec.penalty),
        );
    }
}

pub fn validate_class_distribution(dist: &ClassDistributionSpec, path: &str, report: &mut ValidationReport) {
    if !(dist.in_fraction > 0.0 && dist.in_fraction < 1.0) {
        report.push(
            format!("{path}.in_fraction"),
            format!("IN fraction {} must lie in (0, 1)", dist.in_fraction),
        );
    }
}

/// Collect every violated bound in `config`. An empty report means valid.
pub fn validate_config(config: &SimulationConfig) -> ValidationReport {
    let mut report = ValidationReport::default();
    validate_complex_predicate(&config.complex_predicate, "complex_predicate", &mut report);
    if config.item_count < 1 {
        report.push("item_count", "item count must be at least 1");
    }
    if let GenerationMode::ClassDistribution(dist) = &config.generation_mode {
        validate_class_distribution(dist, "generation_mode.class_distribution", &mut report);
    }
    if config.budget_b < 1 {
        report.push("budget_b", "budget must be at least 1 vote per question");
    }
    if config.beta_weights.is_empty() {
        report.push("beta_weights", "at least one beta weight is required");
    }
    for (i, b) in config.beta_weights.iter().enumerate() {
        if !(b.is_finite() && *b > 0.0) {
            report.push(format!("beta_weights[{i}]"), format!("beta {b} must be positive and finite"));
        }
    }
    if config.trials < 1 {
        report.push("trials", "at least one trial is required");
    }
    report
}

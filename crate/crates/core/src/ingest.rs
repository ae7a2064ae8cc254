//! Judgment-log ingestion and the per-condition crowd analyses.
//!
//! Canonical judgment schema, one row per answer:
//!
//! ```text
//! worker_id,item_id,condition,predicate_id,answer,decision_time_s
//! ```
//!
//! `condition` is one of `baseline`, `p1_p2`, `p1`, `p2`. Baseline rows use
//! the predicate id `complex`; simple-predicate rows use the truth file's
//! column names `p_1` and `p_2`. Ground truth uses the item-pool schema
//! `item_id,p_1,...,p_n,in_label`. Released datasets in other layouts should
//! be mapped into these schemas before analysis.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::aggregation::{conjunction, majority_vote};
use crate::engine::TrialOutcome;
use crate::metrics::{confusion, f_beta, MetricsError};
use crate::model::{TaskDesign, TieRule};
use crate::stats::{
    benjamini_hochberg, dunn_posthoc, kruskal_wallis, GroupedSamples, StatsError, TestResult,
};

pub const COMPLEX_PREDICATE_ID: &str = "complex";
pub const JUDGMENT_HEADER: [&str; 6] = [
    "worker_id",
    "item_id",
    "condition",
    "predicate_id",
    "answer",
    "decision_time_s",
];
/// FDR level used for Dunn comparisons in analysis reports.
pub const DEFAULT_FDR: f64 = 0.05;

/// Truth-file column name of the `j`-th simple predicate (1-based).
pub fn predicate_column(j: usize) -> String {
    format!("p_{j}")
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("line {line}: unknown condition '{value}'")]
    UnknownCondition { line: u64, value: String },
    #[error("line {line}: answer '{value}' is not 0 or 1")]
    NonBinaryAnswer { line: u64, value: String },
    #[error("{mode}: missing votes for items {items:?}")]
    MissingVotes { mode: ConditionMode, items: Vec<String> },
    #[error("no ground truth for items {0:?}")]
    MissingTruth(Vec<String>),
    #[error("{0}: no judged items")]
    NoItems(ConditionMode),
    #[error("no record carries a decision time")]
    NoTimes,
    #[error("{0} needs ground truth for at least {1} predicates")]
    TooFewPredicates(ConditionMode, usize),
    #[error("simulated judgments for {0} need exactly two predicates")]
    UnsupportedDesign(TaskDesign),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

impl IngestError {
    /// Whether the failure is an I/O problem rather than bad data.
    pub fn is_io(&self) -> bool {
        match self {
            IngestError::Io { .. } => true,
            IngestError::Csv(e) => matches!(e.kind(), csv::ErrorKind::Io(_)),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Condition {
    #[serde(rename = "baseline")]
    Baseline,
    #[serde(rename = "p1_p2")]
    P1P2,
    #[serde(rename = "p1")]
    P1,
    #[serde(rename = "p2")]
    P2,
}

impl Condition {
    pub fn as_str(self) -> &'static str {
        match self {
            Condition::Baseline => "baseline",
            Condition::P1P2 => "p1_p2",
            Condition::P1 => "p1",
            Condition::P2 => "p2",
        }
    }

    fn allows(self, predicate_id: &str) -> bool {
        match self {
            Condition::Baseline => predicate_id == COMPLEX_PREDICATE_ID,
            Condition::P1 => predicate_id == "p_1",
            Condition::P2 => predicate_id == "p_2",
            Condition::P1P2 => predicate_id == "p_1" || predicate_id == "p_2",
        }
    }
}

impl FromStr for Condition {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "baseline" => Ok(Condition::Baseline),
            "p1_p2" => Ok(Condition::P1P2),
            "p1" => Ok(Condition::P1),
            "p2" => Ok(Condition::P2),
            _ => Err(()),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How a classification is derived from the logged conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ConditionMode {
    /// Majority over complex-question votes.
    #[serde(rename = "baseline")]
    Baseline,
    /// Conjunction of `p_1` and `p_2` majorities from the same-task condition.
    #[serde(rename = "p1_p2")]
    P1P2,
    /// Conjunction of the separate `p1` and `p2` condition verdicts.
    #[serde(rename = "p1_and_p2")]
    P1AndP2,
    /// `p_1` alone, scored against its own bit.
    #[serde(rename = "p1")]
    P1,
    /// `p_2` alone, scored against its own bit.
    #[serde(rename = "p2")]
    P2,
}

impl ConditionMode {
    pub const ALL: [ConditionMode; 5] = [
        ConditionMode::Baseline,
        ConditionMode::P1P2,
        ConditionMode::P1AndP2,
        ConditionMode::P1,
        ConditionMode::P2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionMode::Baseline => "baseline",
            ConditionMode::P1P2 => "p1_p2",
            ConditionMode::P1AndP2 => "p1_and_p2",
            ConditionMode::P1 => "p1",
            ConditionMode::P2 => "p2",
        }
    }

    fn conditions(self) -> &'static [Condition] {
        match self {
            ConditionMode::Baseline => &[Condition::Baseline],
            ConditionMode::P1P2 => &[Condition::P1P2],
            ConditionMode::P1AndP2 => &[Condition::P1, Condition::P2],
            ConditionMode::P1 => &[Condition::P1],
            ConditionMode::P2 => &[Condition::P2],
        }
    }

    /// `(condition, predicate id)` vote sets needed per item.
    fn required(self) -> &'static [(Condition, &'static str)] {
        match self {
            ConditionMode::Baseline => &[(Condition::Baseline, COMPLEX_PREDICATE_ID)],
            ConditionMode::P1P2 => &[(Condition::P1P2, "p_1"), (Condition::P1P2, "p_2")],
            ConditionMode::P1AndP2 => &[(Condition::P1, "p_1"), (Condition::P2, "p_2")],
            ConditionMode::P1 => &[(Condition::P1, "p_1")],
            ConditionMode::P2 => &[(Condition::P2, "p_2")],
        }
    }
}

impl fmt::Display for ConditionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JudgmentRecord {
    pub worker_id: String,
    pub item_id: String,
    pub condition: Condition,
    pub predicate_id: String,
    pub answer: bool,
    pub decision_time_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroundTruthRecord {
    pub item_id: String,
    pub bits: Vec<bool>,
    pub in_label: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    pub predicate_ids: Vec<String>,
    pub records: BTreeMap<String, GroundTruthRecord>,
}

impl GroundTruth {
    /// Truth value a judgment on `predicate_id` should be compared with.
    fn label(&self, item_id: &str, predicate_id: &str) -> Option<bool> {
        let rec = self.records.get(item_id)?;
        if predicate_id == COMPLEX_PREDICATE_ID {
            return Some(rec.in_label);
        }
        let j = self.predicate_ids.iter().position(|p| p == predicate_id)?;
        rec.bits.get(j).copied()
    }

    fn mode_label(&self, item_id: &str, mode: ConditionMode) -> Option<bool> {
        match mode {
            ConditionMode::P1 => self.label(item_id, "p_1"),
            ConditionMode::P2 => self.label(item_id, "p_2"),
            _ => self.label(item_id, COMPLEX_PREDICATE_ID),
        }
    }
}

fn open(path: &Path) -> Result<File, IngestError> {
    File::open(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input)
}

fn parse_binary(value: &str) -> Option<bool> {
    match value {
        "0" => Some(false),
        "1" => Some(true),
        _ => None,
    }
}

pub fn parse_judgments(path: impl AsRef<Path>) -> Result<Vec<JudgmentRecord>, IngestError> {
    parse_judgments_from(open(path.as_ref())?)
}

pub fn parse_judgments_from<R: Read>(input: R) -> Result<Vec<JudgmentRecord>, IngestError> {
    let mut rdr = reader(input);
    let header = rdr.headers()?.clone();
    if header.iter().ne(JUDGMENT_HEADER) {
        return Err(IngestError::MalformedRow {
            line: 1,
            reason: format!("expected header '{}'", JUDGMENT_HEADER.join(",")),
        });
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != JUDGMENT_HEADER.len() {
            return Err(IngestError::MalformedRow {
                line,
                reason: format!("expected {} fields, found {}", JUDGMENT_HEADER.len(), row.len()),
            });
        }
        let field = |i: usize| row.get(i).unwrap_or_default();
        let condition = Condition::from_str(field(2)).map_err(|_| IngestError::UnknownCondition {
            line,
            value: field(2).to_string(),
        })?;
        let answer = parse_binary(field(4)).ok_or_else(|| IngestError::NonBinaryAnswer {
            line,
            value: field(4).to_string(),
        })?;
        for (i, name) in [(0, "worker_id"), (1, "item_id"), (3, "predicate_id")] {
            if field(i).is_empty() {
                return Err(IngestError::MalformedRow {
                    line,
                    reason: format!("{name} is empty"),
                });
            }
        }
        let predicate_id = field(3).to_string();
        if !condition.allows(&predicate_id) {
            return Err(IngestError::MalformedRow {
                line,
                reason: format!("predicate '{predicate_id}' does not belong to condition '{condition}'"),
            });
        }
        let decision_time_s = match field(5) {
            "" => None,
            t => match t.parse::<f64>() {
                Ok(v) if v.is_finite() && v >= 0.0 => Some(v),
                _ => {
                    return Err(IngestError::MalformedRow {
                        line,
                        reason: format!("decision time '{t}' is not a non-negative number"),
                    })
                }
            },
        };
        out.push(JudgmentRecord {
            worker_id: field(0).to_string(),
            item_id: field(1).to_string(),
            condition,
            predicate_id,
            answer,
            decision_time_s,
        });
    }
    Ok(out)
}

pub fn parse_truth(path: impl AsRef<Path>) -> Result<GroundTruth, IngestError> {
    parse_truth_from(open(path.as_ref())?)
}

pub fn parse_truth_from<R: Read>(input: R) -> Result<GroundTruth, IngestError> {
    let mut rdr = reader(input);
    let header = rdr.headers()?.clone();
    let cols: Vec<&str> = header.iter().collect();
    let well_formed = cols.len() >= 3
        && cols[0] == "item_id"
        && cols[cols.len() - 1] == "in_label"
        && cols[1..cols.len() - 1]
            .iter()
            .enumerate()
            .all(|(j, c)| *c == predicate_column(j + 1));
    if !well_formed {
        return Err(IngestError::MalformedRow {
            line: 1,
            reason: "expected header 'item_id,p_1,...,p_n,in_label'".into(),
        });
    }
    let predicate_ids: Vec<String> = cols[1..cols.len() - 1].iter().map(|s| s.to_string()).collect();
    let mut records = BTreeMap::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != cols.len() {
            return Err(IngestError::MalformedRow {
                line,
                reason: format!("expected {} fields, found {}", cols.len(), row.len()),
            });
        }
        let mut labels = Vec::with_capacity(row.len() - 1);
        for v in row.iter().skip(1) {
            labels.push(parse_binary(v).ok_or_else(|| IngestError::NonBinaryAnswer {
                line,
                value: v.to_string(),
            })?);
        }
        let in_label = labels.pop().expect("header has in_label");
        if in_label != labels.iter().all(|&b| b) {
            return Err(IngestError::MalformedRow {
                line,
                reason: "in_label is not the conjunction of the predicate labels".into(),
            });
        }
        let item_id = row[0].to_string();
        if records.contains_key(&item_id) {
            return Err(IngestError::MalformedRow {
                line,
                reason: format!("duplicate item '{item_id}'"),
            });
        }
        records.insert(
            item_id.clone(),
            GroundTruthRecord {
                item_id,
                bits: labels,
                in_label,
            },
        );
    }
    Ok(GroundTruth { predicate_ids, records })
}

pub fn write_judgments_csv<W: Write>(writer: W, records: &[JudgmentRecord]) -> Result<(), IngestError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(JUDGMENT_HEADER)?;
    for r in records {
        w.write_record([
            r.worker_id.as_str(),
            r.item_id.as_str(),
            r.condition.as_str(),
            r.predicate_id.as_str(),
            if r.answer { "1" } else { "0" },
            &r.decision_time_s.map(|t| t.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(|source| IngestError::Io {
        path: "<judgments>".into(),
        source,
    })?;
    Ok(())
}

type VoteIndex<'a> = BTreeMap<(&'a str, Condition, &'a str), Vec<bool>>;

fn index_votes(judgments: &[JudgmentRecord]) -> VoteIndex<'_> {
    let mut idx: VoteIndex<'_> = BTreeMap::new();
    for j in judgments {
        idx.entry((j.item_id.as_str(), j.condition, j.predicate_id.as_str()))
            .or_default()
            .push(j.answer);
    }
    idx
}

/// Per-item decisions under `mode`, keyed by item id.
pub fn condition_decisions(
    judgments: &[JudgmentRecord],
    mode: ConditionMode,
    tie_rule: TieRule,
) -> Result<BTreeMap<String, bool>, IngestError> {
    let idx = index_votes(judgments);
    let items: BTreeSet<&str> = judgments
        .iter()
        .filter(|j| mode.conditions().contains(&j.condition))
        .map(|j| j.item_id.as_str())
        .collect();
    if items.is_empty() {
        return Err(IngestError::NoItems(mode));
    }
    let mut missing = Vec::new();
    let mut decisions = BTreeMap::new();
    for item in items {
        let mut verdicts = Vec::with_capacity(2);
        for &(cond, pred) in mode.required() {
            match idx.get(&(item, cond, pred)) {
                Some(votes) => verdicts.push(majority_vote(votes, tie_rule).expect("non-empty vote set")),
                None => {
                    missing.push(item.to_string());
                    break;
                }
            }
        }
        if verdicts.len() == mode.required().len() {
            decisions.insert(item.to_string(), conjunction(&verdicts).expect("non-empty"));
        }
    }
    if !missing.is_empty() {
        return Err(IngestError::MissingVotes { mode, items: missing });
    }
    Ok(decisions)
}

fn mode_truths(
    decisions: &BTreeMap<String, bool>,
    truth: &GroundTruth,
    mode: ConditionMode,
) -> Result<BTreeMap<String, bool>, IngestError> {
    let needed = match mode {
        ConditionMode::Baseline => 0,
        ConditionMode::P1 => 1,
        _ => 2,
    };
    if truth.predicate_ids.len() < needed {
        return Err(IngestError::TooFewPredicates(mode, needed));
    }
    let mut missing = Vec::new();
    let mut out = BTreeMap::new();
    for item in decisions.keys() {
        match truth.mode_label(item, mode) {
            Some(t) => {
                out.insert(item.clone(), t);
            }
            None => missing.push(item.clone()),
        }
    }
    if !missing.is_empty() {
        return Err(IngestError::MissingTruth(missing));
    }
    Ok(out)
}

/// F-beta of a condition mode against ground truth.
pub fn condition_f_beta(
    judgments: &[JudgmentRecord],
    truth: &GroundTruth,
    mode: ConditionMode,
    beta: f64,
) -> Result<f64, IngestError> {
    let decisions = condition_decisions(judgments, mode, TieRule::Out)?;
    let truths = mode_truths(&decisions, truth, mode)?;
    Ok(f_beta(&confusion(&decisions, &truths)?, beta)?)
}

pub fn condition_f1(judgments: &[JudgmentRecord], truth: &GroundTruth, mode: ConditionMode) -> Result<f64, IngestError> {
    condition_f_beta(judgments, truth, mode, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorkerAccuracy {
    pub worker_id: String,
    pub condition: Condition,
    pub answers: usize,
    pub correct: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorkerAccuracyStats {
    pub workers: Vec<WorkerAccuracy>,
    pub median_by_condition: BTreeMap<Condition, f64>,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len().is_multiple_of(2) {
        (values[mid - 1] + values[mid]) / 2.0
    } else {
        values[mid]
    }
}

/// Fraction of each worker's answers matching the relevant truth, per
/// condition, with per-condition medians.
pub fn worker_accuracy_stats(judgments: &[JudgmentRecord], truth: &GroundTruth) -> Result<WorkerAccuracyStats, IngestError> {
    let mut tally: BTreeMap<(Condition, &str), (usize, usize)> = BTreeMap::new();
    let mut missing = BTreeSet::new();
    for j in judgments {
        match truth.label(&j.item_id, &j.predicate_id) {
            Some(t) => {
                let e = tally.entry((j.condition, j.worker_id.as_str())).or_default();
                e.0 += 1;
                e.1 += usize::from(t == j.answer);
            }
            None => {
                missing.insert(j.item_id.clone());
            }
        }
    }
    if !missing.is_empty() {
        return Err(IngestError::MissingTruth(missing.into_iter().collect()));
    }
    let workers: Vec<WorkerAccuracy> = tally
        .into_iter()
        .map(|((condition, worker), (answers, correct))| WorkerAccuracy {
            worker_id: worker.to_string(),
            condition,
            answers,
            correct,
            accuracy: correct as f64 / answers as f64,
        })
        .collect();
    let mut by_condition: BTreeMap<Condition, Vec<f64>> = BTreeMap::new();
    for w in &workers {
        by_condition.entry(w.condition).or_default().push(w.accuracy);
    }
    let median_by_condition = by_condition
        .into_iter()
        .map(|(c, mut v)| (c, median(&mut v)))
        .collect();
    Ok(WorkerAccuracyStats {
        workers,
        median_by_condition,
    })
}

/// Median decision time per condition over records that carry one.
pub fn decision_time_summary(judgments: &[JudgmentRecord]) -> Result<BTreeMap<Condition, f64>, IngestError> {
    let mut times: BTreeMap<Condition, Vec<f64>> = BTreeMap::new();
    for j in judgments {
        if let Some(t) = j.decision_time_s {
            times.entry(j.condition).or_default().push(t);
        }
    }
    if times.is_empty() {
        return Err(IngestError::NoTimes);
    }
    Ok(times.into_iter().map(|(c, mut v)| (c, median(&mut v))).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DunnComparison {
    pub first: String,
    pub second: String,
    pub z: f64,
    pub p_value: f64,
    pub adjusted_p: f64,
    pub rejected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccuracyTests {
    pub kruskal_wallis: TestResult,
    pub fdr: f64,
    pub dunn: Vec<DunnComparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub f1: BTreeMap<ConditionMode, f64>,
    pub median_worker_accuracy: BTreeMap<Condition, f64>,
    pub median_decision_time_s: Option<BTreeMap<Condition, f64>>,
    /// Worker accuracies compared across conditions; absent with fewer than
    /// two conditions or three workers.
    pub worker_accuracy_tests: Option<AccuracyTests>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Full analysis over every condition present in the log.
pub fn analyze(judgments: &[JudgmentRecord], truth: &GroundTruth) -> Result<AnalysisReport, IngestError> {
    let present: BTreeSet<Condition> = judgments.iter().map(|j| j.condition).collect();
    let mut f1 = BTreeMap::new();
    for mode in ConditionMode::ALL {
        if mode.conditions().iter().all(|c| present.contains(c)) {
            f1.insert(mode, condition_f1(judgments, truth, mode)?);
        }
    }
    let accuracy = worker_accuracy_stats(judgments, truth)?;
    let times = match decision_time_summary(judgments) {
        Ok(t) => Some(t),
        Err(IngestError::NoTimes) => None,
        Err(e) => return Err(e),
    };

    let mut groups: BTreeMap<Condition, Vec<f64>> = BTreeMap::new();
    for w in &accuracy.workers {
        groups.entry(w.condition).or_default().push(w.accuracy);
    }
    let total: usize = groups.values().map(Vec::len).sum();
    let worker_accuracy_tests = if groups.len() >= 2 && total >= 3 {
        let samples = GroupedSamples::new(
            groups
                .into_iter()
                .map(|(c, v)| (c.as_str().to_string(), v))
                .collect(),
        )?;
        let kw = kruskal_wallis(&samples)?;
        let pairs = dunn_posthoc(&samples)?;
        let raw: Vec<f64> = pairs.iter().map(|p| p.p_value).collect();
        let adjusted = benjamini_hochberg(&raw, DEFAULT_FDR)?;
        Some(AccuracyTests {
            kruskal_wallis: kw,
            fdr: DEFAULT_FDR,
            dunn: pairs
                .into_iter()
                .zip(adjusted)
                .map(|(p, a)| DunnComparison {
                    first: p.first,
                    second: p.second,
                    z: p.z,
                    p_value: p.p_value,
                    adjusted_p: a.adjusted_p,
                    rejected: a.rejected,
                })
                .collect(),
        })
    } else {
        None
    };

    Ok(AnalysisReport {
        f1,
        median_worker_accuracy: accuracy.median_by_condition,
        median_decision_time_s: times,
        worker_accuracy_tests,
    })
}

/// Read both files and run [`analyze`].
pub fn analyze_files(judgments: impl AsRef<Path>, truth: impl AsRef<Path>) -> Result<AnalysisReport, IngestError> {
    let judgments = parse_judgments(judgments)?;
    let truth = parse_truth(truth)?;
    analyze(&judgments, &truth)
}

/// Condition a simulated design's votes are logged under. Same-task maps to
/// `p1_p2`; separate-tasks splits into `p1` and `p2`.
fn logged_condition(design: TaskDesign, question: Option<usize>) -> Condition {
    match (design, question) {
        (TaskDesign::Baseline, _) => Condition::Baseline,
        (TaskDesign::SameTask, _) => Condition::P1P2,
        (TaskDesign::SeparateTasks, Some(0)) => Condition::P1,
        (TaskDesign::SeparateTasks, _) => Condition::P2,
    }
}

/// The mode that reproduces a simulated design's decisions.
pub fn mode_for_design(design: TaskDesign) -> ConditionMode {
    match design {
        TaskDesign::Baseline => ConditionMode::Baseline,
        TaskDesign::SameTask => ConditionMode::P1P2,
        TaskDesign::SeparateTasks => ConditionMode::P1AndP2,
    }
}

/// Convert a simulated trial into judgment records in the canonical schema.
///
/// Baseline logs any `n`; the simple-predicate designs require `n = 2`.
pub fn judgments_from_outcome(design: TaskDesign, outcome: &TrialOutcome) -> Result<Vec<JudgmentRecord>, IngestError> {
    if design != TaskDesign::Baseline && outcome.pool.n != 2 {
        return Err(IngestError::UnsupportedDesign(design));
    }
    Ok(outcome
        .votes
        .iter()
        .map(|e| {
            let item = &outcome.pool.items[e.item_index];
            JudgmentRecord {
                worker_id: format!("{}-{}-{}", design.as_str(), item.item_id, e.worker),
                item_id: item.item_id.to_string(),
                condition: logged_condition(design, e.question),
                predicate_id: e
                    .question
                    .map_or_else(|| COMPLEX_PREDICATE_ID.to_string(), |j| predicate_column(j + 1)),
                answer: e.vote,
                decision_time_s: None,
            }
        })
        .collect())
}

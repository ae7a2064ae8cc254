//! Vote aggregation: majority voting per question, conjunction across
//! predicates, and crowd/machine hybrid composition.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ComplexPredicateSpec, TaskDesign, TieRule};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AggregationError {
    #[error("cannot take a majority over zero votes")]
    EmptyVotes,
    #[error("cannot take a conjunction over zero verdicts")]
    EmptyVector,
    #[error("missing vote set for question '{0}'")]
    MissingVoteSet(Question),
    #[error("missing {origin:?} verdict for predicate '{predicate}'")]
    MissingVerdict { predicate: String, origin: Source },
    #[error("predicate '{0}' has no source assigned")]
    UnassignedPredicate(String),
    #[error("source assigned to unknown predicate '{0}'")]
    UnknownPredicate(String),
}

/// What a vote set answers: the complex predicate or one simple predicate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Question {
    Complex,
    Predicate(String),
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Question::Complex => f.write_str("complex"),
            Question::Predicate(id) => f.write_str(id),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteSet {
    pub item_id: String,
    pub question: Question,
    pub votes: Vec<bool>,
}

/// Strict majority; an exact tie resolves to `tie_rule`.
pub fn majority_vote(votes: &[bool], tie_rule: TieRule) -> Result<bool, AggregationError> {
    if votes.is_empty() {
        return Err(AggregationError::EmptyVotes);
    }
    let ones = votes.iter().filter(|&&v| v).count();
    let zeros = votes.len() - ones;
    Ok(match ones.cmp(&zeros) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => tie_rule.label(),
    })
}

pub fn conjunction(verdicts: &[bool]) -> Result<bool, AggregationError> {
    if verdicts.is_empty() {
        return Err(AggregationError::EmptyVector);
    }
    Ok(verdicts.iter().all(|&v| v))
}

/// Decide one item under `design`.
///
/// Baseline reads only the complex-question votes. Same-task and
/// separate-tasks aggregate identically (conjunction of per-predicate
/// majorities); they differ only in how the votes were produced.
pub fn classify_item(
    design: TaskDesign,
    predicate_ids: &[&str],
    per_question_votes: &BTreeMap<Question, VoteSet>,
    tie_rule: TieRule,
) -> Result<bool, AggregationError> {
    let lookup = |q: Question| {
        per_question_votes
            .get(&q)
            .ok_or(AggregationError::MissingVoteSet(q))
    };
    match design {
        TaskDesign::Baseline => majority_vote(&lookup(Question::Complex)?.votes, tie_rule),
        TaskDesign::SameTask | TaskDesign::SeparateTasks => {
            let verdicts = predicate_ids
                .iter()
                .map(|id| majority_vote(&lookup(Question::Predicate(id.to_string()))?.votes, tie_rule))
                .collect::<Result<Vec<_>, _>>()?;
            conjunction(&verdicts)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Crowd,
    Machine,
}

/// Which source answers each predicate of `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceAssignment {
    sources: BTreeMap<String, Source>,
}

impl SourceAssignment {
    /// Checks that every predicate of `spec` gets exactly one source and no
    /// unknown predicate is named.
    pub fn new(spec: &ComplexPredicateSpec, sources: BTreeMap<String, Source>) -> Result<Self, AggregationError> {
        for p in &spec.predicates {
            if !sources.contains_key(&p.id) {
                return Err(AggregationError::UnassignedPredicate(p.id.clone()));
            }
        }
        if let Some(extra) = sources.keys().find(|k| !spec.predicates.iter().any(|p| &p.id == *k)) {
            return Err(AggregationError::UnknownPredicate(extra.clone()));
        }
        Ok(Self { sources })
    }

    /// Crowd answers `first`, machine answers `second`.
    pub fn crowd_ml(first: &str, second: &str) -> Self {
        Self {
            sources: BTreeMap::from([(first.to_string(), Source::Crowd), (second.to_string(), Source::Machine)]),
        }
    }

    /// Machine answers `first`, crowd answers `second`.
    pub fn ml_crowd(first: &str, second: &str) -> Self {
        Self {
            sources: BTreeMap::from([(first.to_string(), Source::Machine), (second.to_string(), Source::Crowd)]),
        }
    }

    pub fn source(&self, predicate: &str) -> Option<Source> {
        self.sources.get(predicate).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Source)> {
        self.sources.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// Take each predicate's verdict from its assigned source, then conjoin.
pub fn compose_hybrid(
    assignment: &SourceAssignment,
    crowd_verdicts: &BTreeMap<String, bool>,
    machine_verdicts: &BTreeMap<String, bool>,
) -> Result<bool, AggregationError> {
    let verdicts = assignment
        .iter()
        .map(|(predicate, source)| {
            let map = match source {
                Source::Crowd => crowd_verdicts,
                Source::Machine => machine_verdicts,
            };
            map.get(predicate).copied().ok_or_else(|| AggregationError::MissingVerdict {
                predicate: predicate.to_string(),
                origin: source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    conjunction(&verdicts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PredicateSpec;
    use proptest::prelude::*;

    fn vs(q: Question, votes: &[u8]) -> (Question, VoteSet) {
        (
            q.clone(),
            VoteSet {
                item_id: "i".into(),
                question: q,
                votes: votes.iter().map(|&v| v == 1).collect(),
            },
        )
    }

    fn p(id: &str) -> Question {
        Question::Predicate(id.into())
    }

    #[test]
    fn majority_examples() {
        assert_eq!(majority_vote(&[true, true, false], TieRule::Out), Ok(true));
        assert_eq!(majority_vote(&[false, false, false], TieRule::Out), Ok(false));
        assert_eq!(majority_vote(&[true, false], TieRule::Out), Ok(false));
        assert_eq!(majority_vote(&[true, false], TieRule::In), Ok(true));
        assert_eq!(majority_vote(&[], TieRule::Out), Err(AggregationError::EmptyVotes));
    }

    #[test]
    fn conjunction_examples() {
        assert_eq!(conjunction(&[true, true]), Ok(true));
        assert_eq!(conjunction(&[true, false]), Ok(false));
        assert_eq!(conjunction(&[true, true, true, false]), Ok(false));
        assert_eq!(conjunction(&[]), Err(AggregationError::EmptyVector));
    }

    #[test]
    fn conjunction_monotone_exhaustive() {
        for n in 1..=4usize {
            for pattern in 0..(1u32 << n) {
                let v: Vec<bool> = (0..n).map(|j| pattern >> j & 1 == 1).collect();
                let before = conjunction(&v).unwrap();
                for j in 0..n {
                    if v[j] {
                        let mut w = v.clone();
                        w[j] = false;
                        assert!(!(!before && conjunction(&w).unwrap()));
                        assert!(!conjunction(&w).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        let ids = ["p1", "p2"];
        let base = BTreeMap::from([vs(Question::Complex, &[1, 1, 0])]);
        assert_eq!(classify_item(TaskDesign::Baseline, &ids, &base, TieRule::Out), Ok(true));

        let sep = BTreeMap::from([vs(p("p1"), &[1, 1, 1]), vs(p("p2"), &[0, 0, 1])]);
        assert_eq!(classify_item(TaskDesign::SeparateTasks, &ids, &sep, TieRule::Out), Ok(false));

        let same = BTreeMap::from([vs(p("p1"), &[1, 1, 0]), vs(p("p2"), &[1, 0, 1])]);
        assert_eq!(classify_item(TaskDesign::SameTask, &ids, &same, TieRule::Out), Ok(true));
    }

    #[test]
    fn classify_missing_sets() {
        let ids = ["p1", "p2"];
        let only_p1 = BTreeMap::from([vs(p("p1"), &[1])]);
        assert_eq!(
            classify_item(TaskDesign::SameTask, &ids, &only_p1, TieRule::Out),
            Err(AggregationError::MissingVoteSet(p("p2")))
        );
        assert_eq!(
            classify_item(TaskDesign::Baseline, &ids, &only_p1, TieRule::Out),
            Err(AggregationError::MissingVoteSet(Question::Complex))
        );
    }

    #[test]
    fn hybrid_examples() {
        let crowd_ml = SourceAssignment::crowd_ml("p1", "p2");
        let ml_crowd = SourceAssignment::ml_crowd("p1", "p2");
        let crowd = BTreeMap::from([("p1".to_string(), true), ("p2".to_string(), true)]);
        let machine_no = BTreeMap::from([("p1".to_string(), true), ("p2".to_string(), false)]);
        let machine_yes = BTreeMap::from([("p1".to_string(), false), ("p2".to_string(), true)]);
        assert_eq!(compose_hybrid(&crowd_ml, &crowd, &machine_no), Ok(false));
        assert_eq!(compose_hybrid(&crowd_ml, &crowd, &machine_yes), Ok(true));
        for a in [false, true] {
            for b in [false, true] {
                let same = BTreeMap::from([("p1".to_string(), a), ("p2".to_string(), b)]);
                assert_eq!(
                    compose_hybrid(&crowd_ml, &same, &same),
                    compose_hybrid(&ml_crowd, &same, &same)
                );
            }
        }
        let partial = BTreeMap::from([("p1".to_string(), true)]);
        assert_eq!(
            compose_hybrid(&crowd_ml, &crowd, &partial),
            Err(AggregationError::MissingVerdict {
                predicate: "p2".into(),
                origin: Source::Machine
            })
        );
    }

    #[test]
    fn assignment_must_cover_predicates() {
        let spec = ComplexPredicateSpec {
            predicates: vec![PredicateSpec::new("p1", 0.5, 0.7, 0.04), PredicateSpec::new("p2", 0.5, 0.7, 0.04)],
            penalty: 0.0,
        };
        let partial = BTreeMap::from([("p1".to_string(), Source::Crowd)]);
        assert_eq!(
            SourceAssignment::new(&spec, partial),
            Err(AggregationError::UnassignedPredicate("p2".into()))
        );
        let extra = BTreeMap::from([
            ("p1".to_string(), Source::Crowd),
            ("p2".to_string(), Source::Machine),
            ("p3".to_string(), Source::Machine),
        ]);
        assert_eq!(SourceAssignment::new(&spec, extra), Err(AggregationError::UnknownPredicate("p3".into())));
        let full = BTreeMap::from([("p1".to_string(), Source::Crowd), ("p2".to_string(), Source::Machine)]);
        assert_eq!(SourceAssignment::new(&spec, full).unwrap(), SourceAssignment::crowd_ml("p1", "p2"));
    }

    proptest! {
        #[test]
        fn majority_permutation_invariant(votes in proptest::collection::vec(any::<bool>(), 1..40), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut shuffled = votes.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            for tie in [TieRule::Out, TieRule::In] {
                prop_assert_eq!(majority_vote(&votes, tie), majority_vote(&shuffled, tie));
            }
        }

        #[test]
        fn duplicate_majority_is_stable(votes in proptest::collection::vec(any::<bool>(), 1..40)) {
            let m = majority_vote(&votes, TieRule::Out).unwrap();
            let mut more = votes.clone();
            more.push(m);
            prop_assert_eq!(majority_vote(&more, TieRule::Out).unwrap(), m);
        }

        #[test]
        fn same_and_separate_aggregate_identically(
            a in proptest::collection::vec(any::<bool>(), 1..8),
            b in proptest::collection::vec(any::<bool>(), 1..8),
        ) {
            let ids = ["x", "y"];
            let sets = BTreeMap::from([
                (p("x"), VoteSet { item_id: "i".into(), question: p("x"), votes: a }),
                (p("y"), VoteSet { item_id: "i".into(), question: p("y"), votes: b }),
            ]);
            prop_assert_eq!(
                classify_item(TaskDesign::SameTask, &ids, &sets, TieRule::Out),
                classify_item(TaskDesign::SeparateTasks, &ids, &sets, TieRule::Out)
            );
        }
    }
}

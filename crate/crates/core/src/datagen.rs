//! Synthetic item pools with ground-truth predicate bits.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::model::{
    validate_class_distribution, validate_complex_predicate, ClassDistributionSpec, ComplexPredicateSpec,
    GenerationMode, ItemTruth, ValidationReport,
};
use crate::stream::SimRng;

#[derive(Debug, Error)]
pub enum DatagenError {
    #[error("invalid specification:\n{0}")]
    InvalidSpec(ValidationReport),
    #[error("cannot generate an empty item pool")]
    DegenerateCount,
    #[error("item pool is empty")]
    EmptyPool,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub mode: GenerationMode,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ItemPool {
    pub items: Vec<ItemTruth>,
    pub n: usize,
    pub provenance: Provenance,
}

impl ItemPool {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn in_count(&self) -> usize {
        self.items.iter().filter(|i| i.in_label()).count()
    }

    /// Write `item_id,p_1,...,p_n,in_label` rows.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), DatagenError> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["item_id".to_string()];
        header.extend((1..=self.n).map(|j| format!("p_{j}")));
        header.push("in_label".into());
        w.write_record(&header)?;
        for item in &self.items {
            let mut row = vec![item.item_id.to_string()];
            row.extend(item.bits.iter().map(|&b| u8::from(b).to_string()));
            row.push(u8::from(item.in_label()).to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn check_spec(spec: &ComplexPredicateSpec) -> Result<(), DatagenError> {
    let mut report = ValidationReport::default();
    validate_complex_predicate(spec, "complex_predicate", &mut report);
    if report.is_valid() {
        Ok(())
    } else {
        Err(DatagenError::InvalidSpec(report))
    }
}

/// The `2^n - 1` exclusion patterns in canonical order.
///
/// Patterns are read with `p_1` as the most significant bit and listed from
/// the largest binary value down, so for `n = 2` the order is `10, 01, 00`.
pub fn exclusion_patterns(n: usize) -> Vec<Vec<bool>> {
    let all_in = (1u64 << n) - 1;
    (0..all_in)
        .rev()
        .map(|v| (0..n).map(|j| v >> (n - 1 - j) & 1 == 1).collect())
        .collect()
}

pub fn generate_items_selectivity(
    spec: &ComplexPredicateSpec,
    count: usize,
    rng_seed: u64,
) -> Result<ItemPool, DatagenError> {
    check_spec(spec)?;
    let mut rng = crate::stream::item_stream(rng_seed, 0);
    selectivity_pool(spec, count, &mut rng, rng_seed)
}

pub(crate) fn selectivity_pool(
    spec: &ComplexPredicateSpec,
    count: usize,
    rng: &mut SimRng,
    seed: u64,
) -> Result<ItemPool, DatagenError> {
    if count == 0 {
        return Err(DatagenError::DegenerateCount);
    }
    let items = (0..count as u32)
        .map(|item_id| ItemTruth {
            item_id,
            bits: spec
                .predicates
                .iter()
                .map(|p| rng.random::<f64>() < p.selectivity)
                .collect(),
        })
        .collect();
    Ok(ItemPool {
        items,
        n: spec.n(),
        provenance: Provenance {
            mode: GenerationMode::Selectivity,
            seed,
        },
    })
}

pub fn generate_items_class_distribution(
    spec: &ComplexPredicateSpec,
    dist: &ClassDistributionSpec,
    count: usize,
    rng_seed: u64,
) -> Result<ItemPool, DatagenError> {
    check_spec(spec)?;
    let mut report = ValidationReport::default();
    validate_class_distribution(dist, "class_distribution", &mut report);
    if !report.is_valid() {
        return Err(DatagenError::InvalidSpec(report));
    }
    let mut rng = crate::stream::item_stream(rng_seed, 0);
    class_distribution_pool(spec, dist, count, &mut rng, rng_seed)
}

pub(crate) fn class_distribution_pool(
    spec: &ComplexPredicateSpec,
    dist: &ClassDistributionSpec,
    count: usize,
    rng: &mut SimRng,
    seed: u64,
) -> Result<ItemPool, DatagenError> {
    if count == 0 {
        return Err(DatagenError::DegenerateCount);
    }
    let n = spec.n();
    let in_count = ((count as f64) * dist.in_fraction).round() as usize;
    let in_count = in_count.min(count);
    let out_count = count - in_count;

    let patterns = exclusion_patterns(n);
    let per = out_count / patterns.len();
    let extra = out_count % patterns.len();

    let mut bits: Vec<Vec<bool>> = Vec::with_capacity(count);
    bits.extend(std::iter::repeat_n(vec![true; n], in_count));
    for (k, pattern) in patterns.iter().enumerate() {
        let c = per + usize::from(k < extra);
        bits.extend(std::iter::repeat_n(pattern.clone(), c));
    }
    bits.shuffle(rng);

    let items = bits
        .into_iter()
        .enumerate()
        .map(|(i, bits)| ItemTruth {
            item_id: i as u32,
            bits,
        })
        .collect();
    Ok(ItemPool {
        items,
        n,
        provenance: Provenance {
            mode: GenerationMode::ClassDistribution(dist.clone()),
            seed,
        },
    })
}

/// Fraction of items with bit `j` set, for each predicate.
pub fn empirical_selectivity(pool: &ItemPool) -> Result<Vec<f64>, DatagenError> {
    if pool.items.is_empty() {
        return Err(DatagenError::EmptyPool);
    }
    let mut ones = vec![0usize; pool.n];
    for item in &pool.items {
        for (j, &b) in item.bits.iter().enumerate() {
            ones[j] += usize::from(b);
        }
    }
    let total = pool.items.len() as f64;
    Ok(ones.into_iter().map(|c| c as f64 / total).collect())
}

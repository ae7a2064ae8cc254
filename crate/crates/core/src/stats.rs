//! Rank-based tests: Kruskal-Wallis H, Dunn's pairwise z-tests, and
//! Benjamini-Hochberg step-up adjustment, plus the special functions they
//! need (log-gamma, regularized incomplete gamma, normal tail).

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("at least two groups are required, got {0}")]
    TooFewGroups(usize),
    #[error("group '{0}' is empty")]
    EmptyGroup(String),
    #[error("at least three observations are required, got {0}")]
    TooFewObservations(usize),
    #[error("group '{0}' contains a non-finite observation")]
    NonFinite(String),
    #[error("{what} = {value} is out of range")]
    DomainError { what: &'static str, value: f64 },
}

const EPS: f64 = 1e-15;
const MAX_ITER: usize = 10_000;
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

fn gamma_prefactor(a: f64, x: f64) -> f64 {
    (-x + a * x.ln() - ln_gamma(a)).exp()
}

fn lower_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * gamma_prefactor(a, x)
}

fn upper_continued_fraction(a: f64, x: f64) -> f64 {
    // modified Lentz
    let tiny = f64::MIN_POSITIVE / EPS;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    gamma_prefactor(a, x) * h
}

/// Regularized upper incomplete gamma `Q(a, x) = Γ(a, x) / Γ(a)`.
///
/// Series for `x < a + 1`, continued fraction otherwise.
pub fn regularized_gamma_q(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        (1.0 - lower_series(a, x)).clamp(0.0, 1.0)
    } else {
        upper_continued_fraction(a, x).clamp(0.0, 1.0)
    }
}

/// Regularized lower incomplete gamma `P(a, x) = 1 - Q(a, x)`.
pub fn regularized_gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        lower_series(a, x).clamp(0.0, 1.0)
    } else {
        (1.0 - upper_continued_fraction(a, x)).clamp(0.0, 1.0)
    }
}

/// Upper tail of the chi-squared distribution with `df` degrees of freedom.
pub fn chi_squared_sf(x: f64, df: u32) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    regularized_gamma_q(f64::from(df) / 2.0, x / 2.0)
}

/// Standard normal upper tail `1 - Φ(z)`.
pub fn normal_sf(z: f64) -> f64 {
    if z < 0.0 {
        return 1.0 - normal_sf(-z);
    }
    // Φ(-z) = Q(1/2, z²/2) / 2
    0.5 * regularized_gamma_q(0.5, 0.5 * z * z)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupedSamples {
    groups: Vec<(String, Vec<f64>)>,
}

impl GroupedSamples {
    pub fn new(groups: Vec<(String, Vec<f64>)>) -> Result<Self, StatsError> {
        if groups.len() < 2 {
            return Err(StatsError::TooFewGroups(groups.len()));
        }
        for (label, obs) in &groups {
            if obs.is_empty() {
                return Err(StatsError::EmptyGroup(label.clone()));
            }
            if obs.iter().any(|x| !x.is_finite()) {
                return Err(StatsError::NonFinite(label.clone()));
            }
        }
        Ok(Self { groups })
    }

    pub fn groups(&self) -> &[(String, Vec<f64>)] {
        &self.groups
    }

    pub fn total(&self) -> usize {
        self.groups.iter().map(|(_, g)| g.len()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestResult {
    pub statistic: f64,
    pub degrees_of_freedom: u32,
    pub p_value: f64,
}

/// Mid-ranks of the pooled sample, grouped as the input, plus `Σ(t³ − t)`
/// over tie blocks.
struct Ranked {
    ranks: Vec<Vec<f64>>,
    tie_sum: f64,
    n: f64,
}

fn rank_pooled(samples: &GroupedSamples) -> Ranked {
    let mut pooled: Vec<(f64, usize, usize)> = samples
        .groups
        .iter()
        .enumerate()
        .flat_map(|(g, (_, obs))| obs.iter().enumerate().map(move |(i, &x)| (x, g, i)))
        .collect();
    pooled.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut ranks: Vec<Vec<f64>> = samples.groups.iter().map(|(_, g)| vec![0.0; g.len()]).collect();
    let mut tie_sum = 0.0;
    let mut start = 0;
    while start < pooled.len() {
        let mut end = start + 1;
        while end < pooled.len() && pooled[end].0 == pooled[start].0 {
            end += 1;
        }
        let t = (end - start) as f64;
        let mid = (start + end + 1) as f64 / 2.0;
        for &(_, g, i) in &pooled[start..end] {
            ranks[g][i] = mid;
        }
        tie_sum += t * t * t - t;
        start = end;
    }
    Ranked {
        ranks,
        tie_sum,
        n: pooled.len() as f64,
    }
}

fn check_size(samples: &GroupedSamples) -> Result<(), StatsError> {
    let total = samples.total();
    if total < 3 {
        return Err(StatsError::TooFewObservations(total));
    }
    Ok(())
}

/// Kruskal-Wallis H with tie correction; p from the chi-squared tail with
/// `k − 1` degrees of freedom.
pub fn kruskal_wallis(samples: &GroupedSamples) -> Result<TestResult, StatsError> {
    check_size(samples)?;
    let ranked = rank_pooled(samples);
    let n = ranked.n;
    let df = (samples.groups.len() - 1) as u32;
    let correction = 1.0 - ranked.tie_sum / (n * n * n - n);
    if correction <= 0.0 {
        return Ok(TestResult {
            statistic: 0.0,
            degrees_of_freedom: df,
            p_value: 1.0,
        });
    }
    let sum_sq: f64 = ranked
        .ranks
        .iter()
        .map(|r| {
            let s: f64 = r.iter().sum();
            s * s / r.len() as f64
        })
        .sum();
    let h = ((12.0 / (n * (n + 1.0))) * sum_sq - 3.0 * (n + 1.0)) / correction;
    let h = h.max(0.0);
    Ok(TestResult {
        statistic: h,
        degrees_of_freedom: df,
        p_value: chi_squared_sf(h, df),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DunnOptions {
    /// Subtract `Σ(t³ − t) / (12(N − 1))` from the rank variance.
    pub tie_correction: bool,
}

impl Default for DunnOptions {
    fn default() -> Self {
        Self { tie_correction: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseComparison {
    pub first: String,
    pub second: String,
    pub z: f64,
    /// Two-sided, unadjusted.
    pub p_value: f64,
}

pub fn dunn_posthoc(samples: &GroupedSamples) -> Result<Vec<PairwiseComparison>, StatsError> {
    dunn_posthoc_with(samples, DunnOptions::default())
}

/// Dunn's z for every pair `(i, j)`, `i < j`, in group order.
pub fn dunn_posthoc_with(samples: &GroupedSamples, opts: DunnOptions) -> Result<Vec<PairwiseComparison>, StatsError> {
    check_size(samples)?;
    let ranked = rank_pooled(samples);
    let n = ranked.n;
    let tie_term = if opts.tie_correction {
        ranked.tie_sum / (12.0 * (n - 1.0))
    } else {
        0.0
    };
    let variance = n * (n + 1.0) / 12.0 - tie_term;
    let mean_ranks: Vec<f64> = ranked
        .ranks
        .iter()
        .map(|r| r.iter().sum::<f64>() / r.len() as f64)
        .collect();

    let k = samples.groups.len();
    let mut out = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in (i + 1)..k {
            let ni = ranked.ranks[i].len() as f64;
            let nj = ranked.ranks[j].len() as f64;
            let se = (variance * (1.0 / ni + 1.0 / nj)).sqrt();
            let diff = mean_ranks[i] - mean_ranks[j];
            let z = if se > 0.0 && diff != 0.0 { diff / se } else { 0.0 };
            out.push(PairwiseComparison {
                first: samples.groups[i].0.clone(),
                second: samples.groups[j].0.clone(),
                z,
                p_value: (2.0 * normal_sf(z.abs())).min(1.0),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BhOutcome {
    pub adjusted_p: f64,
    pub rejected: bool,
}

/// Benjamini-Hochberg step-up procedure. Output is in input order.
pub fn benjamini_hochberg(p_values: &[f64], q: f64) -> Result<Vec<BhOutcome>, StatsError> {
    if !(q > 0.0 && q < 1.0) {
        return Err(StatsError::DomainError { what: "q", value: q });
    }
    if let Some(&bad) = p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(StatsError::DomainError { what: "p", value: bad });
    }
    let m = p_values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p_values[a].total_cmp(&p_values[b]));

    let mut adjusted = vec![0.0; m];
    let mut running = 1.0f64;
    for (pos, &idx) in order.iter().enumerate().rev() {
        let scaled = p_values[idx] * m as f64 / (pos + 1) as f64;
        running = running.min(scaled);
        adjusted[idx] = running.min(1.0);
    }
    Ok(adjusted
        .into_iter()
        .map(|adjusted_p| BhOutcome {
            adjusted_p,
            rejected: adjusted_p <= q,
        })
        .collect())
}

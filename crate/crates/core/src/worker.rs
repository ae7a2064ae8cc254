//! Worker accuracy sampling and the symmetric-noise vote model.
//!
//! The accuracy penalty for the complex question lives entirely in
//! [`baseline_mean`]: linear shrinkage of the mean accuracy toward chance.
//! Only the endpoints are pinned down (no penalty leaves the mean unchanged,
//! full penalty gives 0.5); the interpolation in between is a modelling
//! choice and can be swapped here without touching the engine.

use rand::Rng;
use rand_distr::{Beta, Distribution};
use thiserror::Error;

use crate::model::{beta_params_from_mean_var, ModelError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WorkerError {
    #[error("no accuracy means supplied")]
    EmptyVector,
    #[error("{what} = {value} is out of range")]
    DomainError { what: &'static str, value: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Question an accuracy draw applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorkerScope {
    Complex,
    /// One accuracy shared across all simple questions of a same-task worker.
    SameTask,
    Predicate(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledWorker {
    pub worker_id: u32,
    pub accuracy: f64,
    pub scope: WorkerScope,
}

/// Beta(mean, variance) accuracy distribution.
#[derive(Debug, Clone, Copy)]
pub struct WorkerAccuracyModel {
    pub mean: f64,
    pub variance: f64,
    dist: Beta<f64>,
}

impl WorkerAccuracyModel {
    pub fn new(mean: f64, variance: f64) -> Result<Self, WorkerError> {
        let (a, b) = beta_params_from_mean_var(mean, variance)?;
        Ok(Self {
            mean,
            variance,
            dist: beta_dist(a, b)?,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.dist.sample(rng).clamp(0.0, 1.0)
    }
}

fn beta_dist(alpha: f64, beta: f64) -> Result<Beta<f64>, WorkerError> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(WorkerError::DomainError { what: "alpha", value: alpha });
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(WorkerError::DomainError { what: "beta", value: beta });
    }
    Beta::new(alpha, beta).map_err(|_| WorkerError::DomainError { what: "alpha", value: alpha })
}

fn check_means(mus: &[f64]) -> Result<(), WorkerError> {
    if mus.is_empty() {
        return Err(WorkerError::EmptyVector);
    }
    match mus.iter().find(|m| !(**m > 0.0 && **m < 1.0)) {
        Some(&value) => Err(WorkerError::DomainError { what: "mu", value }),
        None => Ok(()),
    }
}

/// Mean accuracy `μ_s = (1/n) Σ μ_j` used by the same-task design.
pub fn same_task_mean(mus: &[f64]) -> Result<f64, WorkerError> {
    check_means(mus)?;
    Ok(mus.iter().sum::<f64>() / mus.len() as f64)
}

/// Baseline accuracy `μ_b = μ̄ − γ(μ̄ − 0.5)`.
pub fn baseline_mean(mus: &[f64], gamma: f64) -> Result<f64, WorkerError> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(WorkerError::DomainError { what: "gamma", value: gamma });
    }
    let mean = same_task_mean(mus)?;
    Ok(mean - gamma * (mean - 0.5))
}

/// One accuracy draw from Beta(alpha, beta).
pub fn sample_worker<R: Rng + ?Sized>(alpha: f64, beta: f64, rng: &mut R) -> Result<f64, WorkerError> {
    Ok(beta_dist(alpha, beta)?.sample(rng).clamp(0.0, 1.0))
}

/// A vote that matches `truth` with probability `accuracy`.
///
/// Consumes exactly one uniform draw, and the correctness decision does not
/// depend on `truth`, so the noise is class-symmetric.
pub fn cast_vote<R: Rng + ?Sized>(truth: bool, accuracy: f64, rng: &mut R) -> bool {
    let correct = rng.random::<f64>() < accuracy;
    if correct {
        truth
    } else {
        !truth
    }
}

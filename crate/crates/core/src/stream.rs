//! Deterministic RNG stream derivation.
//!
//! Every trial owns independent ChaCha8 streams keyed by the root seed. The
//! root seed fixes the ChaCha key (via `seed_from_u64`), and the 64-bit
//! stream id packs `(trial << 8) | lane`:
//!
//! * lane 0: item-pool generation for the trial (shared by all designs),
//! * lane 1..=3: worker sampling and voting for `TaskDesign::{Baseline,
//!   SameTask, SeparateTasks}`.
//!
//! A stream depends on nothing but `(root_seed, trial, lane)`, so trials can
//! run in any order or in parallel without changing results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::TaskDesign;

pub type SimRng = ChaCha8Rng;

const ITEM_LANE: u64 = 0;

fn derive(root_seed: u64, trial: u32, lane: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(root_seed);
    rng.set_stream((u64::from(trial) << 8) | lane);
    rng
}

/// Stream used to generate the item pool of `trial`.
pub fn item_stream(root_seed: u64, trial: u32) -> SimRng {
    derive(root_seed, trial, ITEM_LANE)
}

/// Stream used to sample workers and votes for `design` in `trial`.
pub fn vote_stream(root_seed: u64, design: TaskDesign, trial: u32) -> SimRng {
    derive(root_seed, trial, design.lane())
}

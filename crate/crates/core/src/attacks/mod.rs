//! Key-recovery attacks built on square-code dimensions.

pub mod bbcrs;
pub mod bl;
pub mod filtration;
pub mod wieschebrink;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use bbcrs::{attack_bbcrs, relation_rank_check, BbcrsCrack};
pub use bl::{attack_bl, BlCrack};
pub use filtration::{attack_filtration, recover_grs, SubcodeChain};
pub use wieschebrink::{attack_wieschebrink, WieschebrinkCrack};

/// Knobs shared by the randomized attacks.
#[derive(Clone, Debug)]
pub struct AttackOptions {
    /// Overrides the attack's default search budget.
    pub trial_cap: Option<u64>,
    /// Worker threads for independent dimension readings; 1 runs inline.
    pub jobs: usize,
}

impl Default for AttackOptions {
    fn default() -> Self {
        AttackOptions { trial_cap: None, jobs: 1 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseTiming {
    pub name: String,
    pub seconds: f64,
}

/// Trial counts and wall-clock per phase, for reports and benchmarks.
#[derive(Clone, Debug, Default, Serialize)]
pub struct AttackStats {
    pub trials: u64,
    pub phases: Vec<PhaseTiming>,
}

impl AttackStats {
    pub(crate) fn phase(&mut self, name: &str, start: Instant) {
        self.phases.push(PhaseTiming { name: name.to_string(), seconds: start.elapsed().as_secs_f64() });
    }

    pub fn total_seconds(&self) -> f64 {
        self.phases.iter().map(|p| p.seconds).sum()
    }
}

/// Maps `f` over `items`, on a dedicated pool of `jobs` threads when
/// `jobs > 1`. Output order matches input order either way.
pub(crate) fn par_map<T, U, F>(jobs: usize, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    if jobs <= 1 {
        return items.iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

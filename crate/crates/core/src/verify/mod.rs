//! Desk-scale verification: exhaustive and sampled sweeps over small prime fields, a
//! registry of lemma checks, and the subspace enumerator the sweeps rely on.
//!
//! Every failing case is reported with enough data to replay it on its own, and all
//! output is independent of the number of worker threads.

mod fp;
pub mod lemmas;
pub mod report;
pub mod subspaces;
pub mod theorems;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use lemmas::{lemma_names, verify_lemma_suite, DetSuite, LemmaSuiteConfig};
pub use report::{parse_counterexamples, Counterexample, Replay, Section, VerificationReport};
pub use subspaces::{enumerate_subspace_constraints, gaussian_binomial, RrefMatrix, SubspaceConstraints};
pub use theorems::{
    alt_row_sum_space, annihilates_det, check_z_condition, nonzero_det_witness, verify_characterization,
    verify_codim_bound, verify_z_condition, RowRelation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Sampled => "sampled",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Mode::Exhaustive),
            "sampled" => Ok(Mode::Sampled),
            other => Err(Error::Unsupported(format!("unknown mode {other:?}"))),
        }
    }
}

/// Knobs shared by every sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub mode: Mode,
    /// Upper bound on determinant evaluations for exhaustive work.
    pub budget: u128,
    /// Random cases in sampled mode.
    pub samples: u64,
    pub seed: u64,
    pub jobs: usize,
}

pub const DEFAULT_BUDGET: u128 = 1 << 27;
pub const DEFAULT_SAMPLES: u64 = 100_000;

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { mode: Mode::Exhaustive, budget: DEFAULT_BUDGET, samples: DEFAULT_SAMPLES, seed: 0, jobs: 1 }
    }
}

/// Runs `f` on a dedicated pool of `jobs` threads.
pub(crate) fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool").install(f)
}

/// Independent stream per case, so results do not depend on scheduling.
pub(crate) fn case_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Re-runs one counterexample; true when the recorded failure reproduces.
pub fn replay(c: &Counterexample) -> Result<bool> {
    match &c.replay {
        Replay::Lemma { lemma, seed, case } => lemmas::replay_case(lemma, *seed, *case, &DetSuite::default()),
        other => theorems::replay(other),
    }
}

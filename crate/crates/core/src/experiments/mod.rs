//! Seeded ensemble experiments. Each experiment returns a typed report that
//! renders to CSV, JSON and, where it makes sense, an SVG chart.

mod banding_exp;
mod config;
mod distributions;
mod kgrowth;
mod levels;
mod stats;
pub mod svg;
mod worked_example;

pub use banding_exp::{exp_banding, BandingReport};
pub use config::{
    ExperimentConfig, OutputFormat, DEFAULT_ENSEMBLE, DEFAULT_SCALE_TARGET, DEFAULT_T_GRID,
};
pub use distributions::{
    exp_distributions, exp_payoff, run_single_ensemble, DistributionReport, DistributionRow,
    EnsembleRuns, InstanceOutcome, PayoffReport, PayoffRow, MAX_REPORTED_RANK,
};
pub use kgrowth::{exp_kgrowth, KGrowthReport, KGrowthRow};
pub use levels::{exp_energy_levels, LevelsConfig, LevelsReport};
pub use stats::{linear_fit, summarize, EnsembleSummary, LinearFit};
pub use worked_example::{
    exp_worked_example, worked_basis, WorkedExampleReport, TARGET_PROBABILITY,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Independent generator for ensemble member `index` in dimension `dim`.
/// Streams never overlap, so results do not depend on scheduling.
pub fn instance_rng(seed: u64, dim: usize, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((dim as u64) << 32) | index as u64);
    rng
}

/// Runs `f` on a rayon pool with `jobs` workers, or the global pool.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(Error::InvalidConfig("jobs must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidConfig(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// A CSV table with a fixed header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

/// Formats a float so the same value always prints the same way.
pub(crate) fn fmt_f(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v}")
    }
}

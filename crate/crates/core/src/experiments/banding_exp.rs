use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::{fmt_f, instance_rng, summarize, with_jobs, EnsembleSummary, Table};
use crate::banding::{band_diagonalise, band_profile, BandProfile};
use crate::error::{Error, Result};
use crate::lattice::{hnf, random_lattice, LatticeMode};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandingReport {
    pub dim: usize,
    pub ensemble: usize,
    pub profile: BandProfile,
    pub volume_factor: EnsembleSummary,
    /// Histogram of the number of row doublings per instance.
    pub scalings: BTreeMap<u32, usize>,
    pub eliminations: usize,
    /// Fraction of eliminated rows that combined at most three rows below.
    pub short_extent_fraction: f64,
    /// Instances without doublings whose output generates the input lattice.
    pub preserved: usize,
    pub unscaled: usize,
    pub max_bandwidth: usize,
}

impl BandingReport {
    pub fn profile_table(&self) -> Table {
        let mut t = Table::new(&["offset", "mean_relative_entry"]);
        for (d, v) in &self.profile.mean_abs_entry_by_offset {
            t.push(vec![d.to_string(), fmt_f(*v)]);
        }
        t
    }

    pub fn summary_table(&self) -> Table {
        let mut t = Table::new(&[
            "dim",
            "ensemble",
            "volume_factor_mean",
            "volume_factor_stderr",
            "short_extent_fraction",
            "unscaled",
            "preserved",
            "max_bandwidth",
        ]);
        t.push(vec![
            self.dim.to_string(),
            self.ensemble.to_string(),
            fmt_f(self.volume_factor.mean),
            fmt_f(self.volume_factor.stderr),
            fmt_f(self.short_extent_fraction),
            self.unscaled.to_string(),
            self.preserved.to_string(),
            self.max_bandwidth.to_string(),
        ]);
        t
    }

    pub fn chart(&self) -> super::svg::Chart {
        use super::svg::{Chart, Series};
        let mut c = Chart::new(
            "Relative entry size by diagonal offset",
            "offset",
            "mean |entry| / mean |diag|",
        );
        let pts = self
            .profile
            .mean_abs_entry_by_offset
            .iter()
            .map(|(&d, &v)| (d as f64, v))
            .collect();
        c.series.push(Series::new(format!("N={}", self.dim), pts));
        c
    }
}

/// Band-diagonalises `ensemble` lattices and aggregates shape and volume.
pub fn exp_banding(
    dim: usize,
    ensemble: usize,
    seed: u64,
    mode: &LatticeMode,
    j_max: usize,
    jobs: Option<usize>,
) -> Result<BandingReport> {
    const MAX_DIM: usize = 60;
    if dim > MAX_DIM {
        return Err(Error::DimensionCap { dim, cap: MAX_DIM });
    }
    if ensemble == 0 {
        return Err(Error::InvalidConfig("ensemble must be at least 1".into()));
    }
    let results = with_jobs(jobs, || {
        (0..ensemble)
            .into_par_iter()
            .map(|i| {
                let mut rng = instance_rng(seed, dim, i);
                let h = hnf(random_lattice(dim, mode, &mut rng)?.problem_basis())?;
                let banded = band_diagonalise(&h, j_max)?;
                let preserved = banded.scalings == 0 && hnf(&banded.basis)? == h;
                Ok((banded, preserved))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let mut scalings = BTreeMap::new();
    let (mut eliminations, mut short, mut preserved, mut unscaled) = (0, 0, 0, 0);
    for (b, p) in &results {
        *scalings.entry(b.scalings).or_insert(0) += 1;
        eliminations += b.eliminations.len();
        short += b.eliminations.iter().filter(|e| e.extent <= 3).count();
        unscaled += usize::from(b.scalings == 0);
        preserved += usize::from(*p);
    }
    let factors: Vec<f64> = results
        .iter()
        .map(|(b, _)| b.volume_factor.to_f64().unwrap_or(f64::INFINITY))
        .collect();
    let banded: Vec<_> = results.iter().map(|(b, _)| b.clone()).collect();
    Ok(BandingReport {
        dim,
        ensemble,
        profile: band_profile(&banded)?,
        volume_factor: summarize(&factors),
        scalings,
        eliminations,
        short_extent_fraction: if eliminations == 0 {
            1.0
        } else {
            short as f64 / eliminations as f64
        },
        preserved,
        unscaled,
        max_bandwidth: banded.iter().map(|b| b.bandwidth).max().unwrap_or(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::banding::DEFAULT_J_MAX;

    #[test]
    fn identities_stay_diagonal() {
        let r = exp_banding(6, 3, 1, &LatticeMode::Identity, DEFAULT_J_MAX, None).unwrap();
        for (&d, &v) in &r.profile.mean_abs_entry_by_offset {
            assert_eq!(v, if d == 0 { 1.0 } else { 0.0 });
        }
        assert_eq!(r.volume_factor.mean, 1.0);
        assert_eq!(r.preserved, 3);
    }

    #[test]
    fn small_prime_det_ensemble() {
        let r = exp_banding(
            8,
            6,
            2,
            &LatticeMode::prime_det_hnf(),
            DEFAULT_J_MAX,
            Some(1),
        )
        .unwrap();
        assert_eq!(r.scalings.values().sum::<usize>(), 6);
        assert_eq!(r.preserved, r.unscaled);
        assert!(r.volume_factor.min >= 1.0);
        assert!(r.max_bandwidth <= DEFAULT_J_MAX + 8);
        assert_eq!(r.profile_table().rows.len(), 8);
        assert!(exp_banding(61, 1, 0, &LatticeMode::Identity, 4, None).is_err());
    }
}

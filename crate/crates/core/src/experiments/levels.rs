use serde::{Deserialize, Serialize};

use super::{fmt_f, Table};
use crate::error::{Error, Result};
use crate::evolution::{
    energy_gaps, evolve, initial_ground_state, rank_classes, EvolveOptions, DEFAULT_SNAPSHOTS,
};
use crate::fock::{FockBasis, OffsetConfig};
use crate::hamiltonian::{augment_basis, build_sweep, SpectrumScale, SweepHamiltonian};
use crate::lattice::Basis;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelsConfig {
    pub m: u32,
    pub total_time: f64,
    /// Levels and classes tracked.
    pub levels: usize,
    pub steps: Option<usize>,
    pub snapshots: usize,
    pub reservoir: bool,
    /// Defaults to `m(N+1)` with a reservoir and `Nm + 1` without.
    pub particles: Option<u32>,
    pub scale: SpectrumScale,
}

impl LevelsConfig {
    pub fn new(m: u32, total_time: f64) -> Self {
        LevelsConfig {
            m,
            total_time,
            levels: 3,
            steps: None,
            snapshots: DEFAULT_SNAPSHOTS,
            reservoir: false,
            particles: None,
            scale: SpectrumScale::default(),
        }
    }
}

/// Class probabilities and instantaneous spectrum along one sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelsReport {
    pub dim: usize,
    pub particles: u32,
    pub scale_factor: f64,
    /// Squared norm of each tracked class, lowest first.
    pub class_norms: Vec<i128>,
    pub times: Vec<f64>,
    /// `[snapshot][class]`.
    pub class_probabilities: Vec<Vec<f64>>,
    /// `[snapshot][level]`, ascending eigenvalues of `H(t)`.
    pub energies: Vec<Vec<f64>>,
    /// `E_i − E_0` per snapshot.
    pub gaps: Vec<Vec<f64>>,
    pub final_probabilities: Vec<f64>,
    pub norm_drift: f64,
}

impl LevelsReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["t", "level", "class_probability", "energy", "delta_e"]);
        for (s, &time) in self.times.iter().enumerate() {
            for k in 0..self.energies[s].len() {
                let p = self.class_probabilities[s]
                    .get(k)
                    .copied()
                    .unwrap_or(f64::NAN);
                t.push(vec![
                    fmt_f(time),
                    k.to_string(),
                    fmt_f(p),
                    fmt_f(self.energies[s][k]),
                    fmt_f(self.gaps[s][k]),
                ]);
            }
        }
        t
    }

    pub fn chart(&self) -> super::svg::Chart {
        use super::svg::{Chart, Series};
        let mut c = Chart::new("Class probability and gap along the sweep", "t", "value");
        for k in 0..self.class_norms.len() {
            let pts = self
                .times
                .iter()
                .zip(&self.class_probabilities)
                .map(|(&t, p)| (t, p[k]))
                .collect();
            c.series.push(Series::new(format!("P(class {k})"), pts));
        }
        if let Some(n) = self.gaps.first().map(Vec::len) {
            for k in 1..n {
                let pts = self
                    .times
                    .iter()
                    .zip(&self.gaps)
                    .map(|(&t, g)| (t, g[k]))
                    .collect();
                c.series.push(Series::new(format!("dE{k}"), pts).dashed());
            }
        }
        c
    }
}

pub(crate) fn levels_sweep(
    b: &Basis,
    cfg: &LevelsConfig,
) -> Result<(FockBasis, SweepHamiltonian, Basis, OffsetConfig)> {
    let n = b.dim();
    let (bp, off) = if cfg.reservoir {
        (augment_basis(b)?, OffsetConfig::new(cfg.m, n, true))
    } else {
        b.require_full_rank()?;
        (b.clone(), OffsetConfig::new(cfg.m, n, false))
    };
    let k = cfg.particles.unwrap_or(if cfg.reservoir {
        cfg.m * (n as u32 + 1)
    } else {
        n as u32 * cfg.m + 1
    });
    let (basis, sweep) = build_sweep(&bp, &off, k, cfg.total_time, cfg.scale)?;
    Ok((basis, sweep, bp, off))
}

/// Tracks the lowest `cfg.levels` classes and eigenvalues through a sweep.
pub fn exp_energy_levels(b: &Basis, cfg: &LevelsConfig) -> Result<LevelsReport> {
    if cfg.levels == 0 || cfg.snapshots < 2 {
        return Err(Error::InvalidConfig(
            "levels needs at least one level and two snapshots".into(),
        ));
    }
    let (basis, sweep, bp, off) = levels_sweep(b, cfg)?;
    let k = cfg.levels.min(basis.len());
    let opts = EvolveOptions {
        steps: cfg.steps,
        snapshots: cfg.snapshots,
        spectrum_levels: k,
        ..EvolveOptions::default()
    };
    let res = evolve(&sweep, &initial_ground_state(&basis), &opts)?;
    let zeros = vec![0.0; basis.len()];
    let table = rank_classes(&basis, &bp, &off, &zeros)?;
    let class_of = table.class_of_states(basis.len());
    let tracked = k.min(table.classes.len());
    let trajectory = res.trajectory.expect("snapshots requested");
    let spectrum = res.spectrum_track.expect("levels requested");
    let class_probabilities = trajectory
        .iter()
        .map(|s| {
            let mut p = vec![0.0; tracked];
            for (state, v) in s.values.iter().enumerate() {
                if class_of[state] < tracked {
                    p[class_of[state]] += v;
                }
            }
            p
        })
        .collect();
    Ok(LevelsReport {
        dim: basis.len(),
        particles: basis.particles(),
        scale_factor: sweep.hp.scale_factor,
        class_norms: table
            .classes
            .iter()
            .take(tracked)
            .map(|c| c.norm_sq)
            .collect(),
        times: trajectory.iter().map(|s| s.t).collect(),
        class_probabilities,
        gaps: spectrum.iter().map(|s| energy_gaps(&s.values)).collect(),
        energies: spectrum.into_iter().map(|s| s.values).collect(),
        final_probabilities: res.final_probabilities,
        norm_drift: res.norm_drift,
    })
}

//! Multi-run and single-run sweeps that search for short lattice vectors.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{evolve, initial_ground_state, rank_classes, EvolveOptions, RankClassTable};
use crate::fock::OffsetConfig;
use crate::hamiltonian::{augment_basis, build_sweep, certified_energy, SpectrumScale};
use crate::lattice::{default_delta, lll_reduce, svp_enumerate, Basis, DEFAULT_ORACLE_CAP};

/// Version tag written into every serialised report.
pub const SCHEMA_VERSION: u32 = 1;

/// Sweep length used when correctness matters more than speed.
pub const ADIABATIC_T: f64 = 100.0;

/// How the offset `m` is chosen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum OffsetMode {
    /// `{2: 3, 3: 4, 4: 4}`, linear with `α = 1` elsewhere.
    DefaultTable,
    /// `max(3, ⌈αN⌉)`.
    Linear {
        alpha: f64,
    },
    /// `‖x_min‖_∞` from exhaustive enumeration.
    Oracle,
    Fixed {
        m: u32,
    },
}

pub fn estimate_offset(n: usize, mode: &OffsetMode, basis: Option<&Basis>) -> Result<u32> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "offset estimate needs N >= 2, got {n}"
        )));
    }
    let linear = |alpha: f64| -> Result<u32> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("alpha {alpha}")));
        }
        Ok(3u32.max((alpha * n as f64).ceil() as u32))
    };
    match mode {
        OffsetMode::DefaultTable => match n {
            2 => Ok(3),
            3 | 4 => Ok(4),
            _ => linear(1.0),
        },
        OffsetMode::Linear { alpha } => linear(*alpha),
        OffsetMode::Fixed { m } => Ok(*m),
        OffsetMode::Oracle => {
            let b = basis
                .ok_or_else(|| Error::InvalidArgument("oracle offset needs a basis".into()))?;
            if b.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: b.dim(),
                });
            }
            let r = svp_enumerate(b)?;
            r.inf_norm_xmin
                .to_u32()
                .ok_or_else(|| Error::Overflow(format!("offset {}", r.inf_norm_xmin)))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunParameters {
    pub m: u32,
    pub total_time: f64,
    /// `None` uses the evolution default.
    pub steps: Option<usize>,
    pub scale: SpectrumScale,
    /// Single-run particle count; `None` means `m(N+1)`.
    pub particles: Option<u32>,
    /// Multi-run iteration count; `None` means `m` (at least one).
    pub runs: Option<usize>,
    pub seed: u64,
}

impl RunParameters {
    pub fn new(m: u32, total_time: f64) -> Self {
        RunParameters {
            m,
            total_time,
            steps: None,
            scale: SpectrumScale::default(),
            particles: None,
            runs: None,
            seed: 0,
        }
    }

    fn evolve_options(&self) -> EvolveOptions {
        EvolveOptions {
            steps: self.steps,
            ..EvolveOptions::default()
        }
    }
}

/// Outcome of one fixed-`K` sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub particles: u32,
    pub occupancies: Vec<u32>,
    pub coefficients: Vec<i128>,
    pub vector: Vec<i128>,
    pub norm_sq: i128,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiRunReport {
    pub schema_version: u32,
    pub m: u32,
    pub per_run: Vec<Candidate>,
    pub best: Candidate,
    pub runs_executed: usize,
    pub max_norm_drift: f64,
}

fn to_i128(v: &BigInt) -> Result<i128> {
    v.to_i128().ok_or_else(|| Error::Overflow(v.to_string()))
}

fn lattice_vector(b: &Basis, x: &[i128]) -> Result<Vec<i128>> {
    let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
    b.combine(&xb)?.iter().map(to_i128).collect()
}

/// Evolves `K_i = Nm + i` particles on `N` sites for `i = 1..=c` and keeps the
/// most probable Fock state of each run.
pub fn multi_run(b: &Basis, params: &RunParameters) -> Result<MultiRunReport> {
    b.require_full_rank()?;
    let n = b.dim();
    let c = params.runs.unwrap_or(params.m as usize).max(1);
    let cfg = OffsetConfig::new(params.m, n, false);
    let base = n as u32 * params.m;
    let outcomes: Vec<Result<(Candidate, f64)>> = (1..=c as u32)
        .into_par_iter()
        .map(|i| {
            let k = base + i;
            let (basis, sweep) = build_sweep(b, &cfg, k, params.total_time, params.scale)?;
            let res = evolve(
                &sweep,
                &initial_ground_state(&basis),
                &params.evolve_options(),
            )?;
            let (r, p) = res.final_probabilities.iter().copied().enumerate().fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, p)| if p > acc.1 { (i, p) } else { acc },
            );
            let occ = basis.occupancies(r).to_vec();
            let coefficients: Vec<i128> = occ
                .iter()
                .map(|&v| i128::from(v) - i128::from(params.m))
                .collect();
            let vector = lattice_vector(b, &coefficients)?;
            let norm_sq = to_i128(&certified_energy(b, &occ, &cfg)?)?;
            debug_assert_eq!(norm_sq, sweep.hp.exact_energies[r]);
            Ok((
                Candidate {
                    particles: k,
                    occupancies: occ,
                    coefficients,
                    vector,
                    norm_sq,
                    probability: p,
                },
                res.norm_drift,
            ))
        })
        .collect();
    let mut per_run = Vec::with_capacity(c);
    let mut drift = 0.0f64;
    for o in outcomes {
        let (cand, d) = o?;
        drift = drift.max(d);
        per_run.push(cand);
    }
    let best = per_run
        .iter()
        .min_by_key(|c| c.norm_sq)
        .cloned()
        .expect("at least one run");
    Ok(MultiRunReport {
        schema_version: SCHEMA_VERSION,
        m: params.m,
        runs_executed: per_run.len(),
        per_run,
        best,
        max_norm_drift: drift,
    })
}

/// Reference length for approximation factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaReference {
    /// Exact `λ₁²` from enumeration.
    Oracle,
    /// Shortest row of an LLL-reduced basis; `γ` may then be below one.
    LllBest,
}

/// Exact `λ₁²` when `N` is within the oracle cap, otherwise the squared
/// length of the shortest LLL row.
pub fn reference_norm(b: &Basis) -> Result<(i128, GammaReference)> {
    if b.dim() <= DEFAULT_ORACLE_CAP {
        Ok((
            to_i128(&svp_enumerate(b)?.lambda1_sq)?,
            GammaReference::Oracle,
        ))
    } else {
        let red = lll_reduce(b, &default_delta())?;
        let best = red.row_norms_sq().into_iter().min().expect("nonempty");
        Ok((to_i128(&best)?, GammaReference::LllBest))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingleRunReport {
    pub schema_version: u32,
    pub n: usize,
    pub m: u32,
    pub particles: u32,
    pub dim: usize,
    pub table: RankClassTable,
    pub p_rank0: f64,
    pub p_rank1: f64,
    pub p_rank2: f64,
    /// Total probability of every class with squared norm equal to the
    /// reference norm.
    pub p_lambda1: f64,
    pub reference_norm_sq: i128,
    pub reference: GammaReference,
    /// `γ` of the most probable nonzero class.
    pub gamma: Option<f64>,
    pub norm_drift: f64,
}

/// One sweep over `N` lattice sites plus a reservoir with `K_S` particles.
pub fn single_run(b: &Basis, params: &RunParameters) -> Result<SingleRunReport> {
    let n = b.dim();
    let bp = augment_basis(b)?;
    let cfg = OffsetConfig::new(params.m, n, true);
    let k_s = params.particles.unwrap_or(params.m * (n as u32 + 1));
    let (basis, sweep) = build_sweep(&bp, &cfg, k_s, params.total_time, params.scale)?;
    let res = evolve(
        &sweep,
        &initial_ground_state(&basis),
        &params.evolve_options(),
    )?;
    let table = rank_classes(&basis, &bp, &cfg, &res.final_probabilities)?;
    let (reference_norm_sq, reference) = reference_norm(b)?;
    let mut report = SingleRunReport {
        schema_version: SCHEMA_VERSION,
        n,
        m: params.m,
        particles: k_s,
        dim: basis.len(),
        p_rank0: table.probability(0),
        p_rank1: table.probability(1),
        p_rank2: table.probability(2),
        p_lambda1: table.shell_probability(reference_norm_sq),
        table,
        reference_norm_sq,
        reference,
        gamma: None,
        norm_drift: res.norm_drift,
    };
    report.gamma = extract_candidates(&report, 1).first().and_then(|c| c.gamma);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtractedCandidate {
    pub vectors: Vec<Vec<i128>>,
    pub norm_sq: i128,
    pub probability: f64,
    pub gamma: Option<f64>,
}

/// Nonzero classes with positive probability, most probable first.
pub fn extract_candidates(report: &SingleRunReport, top_k: usize) -> Vec<ExtractedCandidate> {
    let mut classes: Vec<_> = report
        .table
        .classes
        .iter()
        .filter(|c| c.norm_sq > 0 && c.probability > 0.0)
        .collect();
    classes.sort_by(|a, b| {
        b.probability
            .total_cmp(&a.probability)
            .then(a.rank.cmp(&b.rank))
    });
    classes
        .into_iter()
        .take(top_k)
        .map(|c| ExtractedCandidate {
            vectors: c.vectors.clone(),
            norm_sq: c.norm_sq,
            probability: c.probability,
            gamma: (report.reference_norm_sq > 0)
                .then(|| (c.norm_sq as f64 / report.reference_norm_sq as f64).sqrt()),
        })
        .collect()
}

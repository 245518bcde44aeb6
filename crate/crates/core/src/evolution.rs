//! Time propagation under a sweep, measurement, and grouping of Fock states
//! into classes of lattice vectors.

use std::collections::BTreeMap;
use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::{lowest_eigenvalues, SymmetricOperator};
use crate::error::{Error, Result};
use crate::fock::{FockBasis, OffsetConfig};
use crate::hamiltonian::{coefficient_rows, SweepHamiltonian};
use crate::lattice::Basis;

/// Allowed deviation of `‖ψ‖` from one.
pub const NORM_TOLERANCE: f64 = 1e-6;
/// Number of trajectory points when snapshots are requested without a count.
pub const DEFAULT_SNAPSHOTS: usize = 200;

/// Complex amplitudes over a Fock basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Fails unless the vector has unit norm within [`NORM_TOLERANCE`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let s = StateVector { amplitudes };
        let n = s.norm();
        if (n - 1.0).abs() > NORM_TOLERANCE || !n.is_finite() {
            return Err(Error::NotNormalised(n));
        }
        Ok(s)
    }

    pub fn basis_state(dim: usize, r: usize) -> Self {
        let mut a = vec![Complex64::new(0.0, 0.0); dim];
        a[r] = Complex64::new(1.0, 0.0);
        StateVector { amplitudes: a }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(Complex64::norm_sqr)
            .sum::<f64>()
            .sqrt()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        let ov: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        ov.norm_sqr()
    }
}

/// Single-particle ground mode of an open chain of `m` sites.
pub fn chain_ground_mode(m: usize) -> Vec<f64> {
    let l = (m + 1) as f64;
    let c = (2.0 / l).sqrt();
    (0..m)
        .map(|i| c * (std::f64::consts::PI * (i + 1) as f64 / l).sin())
        .collect()
}

/// Ground energy of `k` bosons hopping on an open chain of `m` sites.
pub fn condensate_energy(k: u32, m: usize) -> f64 {
    -2.0 * f64::from(k) * (std::f64::consts::PI / (m + 1) as f64).cos()
}

/// Ground state of the tunnelling matrix: every particle in the lowest chain
/// mode, with amplitude `√(K!/Πn_i!) Π φ_i^{n_i}`.
pub fn initial_ground_state(basis: &FockBasis) -> StateVector {
    let k = basis.particles() as usize;
    let mut ln_fact = vec![0.0f64; k + 1];
    for i in 1..=k {
        ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
    }
    let ln_phi: Vec<f64> = chain_ground_mode(basis.sites())
        .iter()
        .map(|p| p.ln())
        .collect();
    let amplitudes = basis
        .iter()
        .map(|occ| {
            let mut log = 0.5 * ln_fact[k];
            for (&n, lp) in occ.iter().zip(&ln_phi) {
                if n == 0 {
                    continue;
                }
                log -= 0.5 * ln_fact[n as usize];
                log += f64::from(n) * lp;
            }
            Complex64::new(log.exp(), 0.0)
        })
        .collect();
    StateVector { amplitudes }
}

pub fn measure_probabilities(psi: &StateVector) -> Vec<f64> {
    psi.amplitudes.iter().map(Complex64::norm_sqr).collect()
}

/// `H(t)` frozen at fixed weights, as a real operator.
pub struct WeightedSweep<'a> {
    pub sweep: &'a SweepHamiltonian,
    pub f: f64,
    pub g: f64,
}

impl SymmetricOperator for WeightedSweep<'_> {
    fn dim(&self) -> usize {
        self.sweep.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.sweep.h0.apply(x, y);
        for ((yr, xr), e) in y.iter_mut().zip(x).zip(&self.sweep.hp.scaled_energies) {
            *yr = self.f * *yr + self.g * e * xr;
        }
    }

    fn to_dense(&self) -> DMatrix<f64> {
        self.sweep.dense_weighted(self.f, self.g)
    }
}

/// The `k` lowest eigenvalues of `H(t)`, ascending.
pub fn instantaneous_spectrum(sweep: &SweepHamiltonian, t: f64, k: usize) -> Result<Vec<f64>> {
    let (f, g) = sweep.weights(t)?;
    lowest_eigenvalues(&WeightedSweep { sweep, f, g }, k)
}

/// `E_i - E_0` for ascending levels.
pub fn energy_gaps(levels: &[f64]) -> Vec<f64> {
    levels.iter().map(|e| e - levels[0]).collect()
}

/// Steps used when none are given: `max(10⁴, ⌈500 T⌉)`.
pub fn default_steps(total_time: f64) -> usize {
    10_000usize.max((500.0 * total_time).ceil() as usize)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolveOptions {
    /// Integration steps; `None` selects [`default_steps`].
    pub steps: Option<usize>,
    /// Number of trajectory points, including both ends. Zero disables.
    pub snapshots: usize,
    /// Track this many lowest eigenvalues at every snapshot. Zero disables.
    pub spectrum_levels: usize,
    pub norm_tolerance: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            steps: None,
            snapshots: 0,
            spectrum_levels: 0,
            norm_tolerance: NORM_TOLERANCE,
        }
    }
}

impl EvolveOptions {
    pub fn with_steps(steps: usize) -> Self {
        EvolveOptions {
            steps: Some(steps),
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionResult {
    pub final_state: StateVector,
    pub final_probabilities: Vec<f64>,
    pub norm_drift: f64,
    pub steps: usize,
    pub trajectory: Option<Vec<Snapshot>>,
    pub spectrum_track: Option<Vec<Snapshot>>,
}

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// `ψ ← exp(-iτ(f H₀ + g H_P)) ψ` by a truncated Taylor series, split into
/// substeps of norm at most one half.
fn expm_action(
    sweep: &SweepHamiltonian,
    f: f64,
    g: f64,
    tau: f64,
    psi: &mut [Complex64],
    term: &mut Vec<Complex64>,
    next: &mut Vec<Complex64>,
) {
    let bound = tau.abs() * sweep.norm_bound(f, g);
    let sub = (bound / 0.5).ceil().max(1.0) as usize;
    let dt = tau / sub as f64;
    let minus_i_dt = Complex64::new(0.0, -dt);
    for _ in 0..sub {
        term.copy_from_slice(psi);
        for k in 1..=40 {
            sweep.apply_weighted(f, g, term, next);
            let c = minus_i_dt / k as f64;
            let mut size = 0.0;
            for ((t, n), p) in term.iter_mut().zip(next.iter()).zip(psi.iter_mut()) {
                *t = n * c;
                *p += *t;
                size += t.norm_sqr();
            }
            if size < 1e-34 {
                break;
            }
        }
    }
}

/// Integrates `i dψ/dt = H(t) ψ` over `[0, T]` with the fourth-order
/// commutator-free Magnus scheme, two exponentials per step.
pub fn evolve(
    sweep: &SweepHamiltonian,
    psi0: &StateVector,
    opts: &EvolveOptions,
) -> Result<EvolutionResult> {
    if psi0.len() != sweep.dim() {
        return Err(Error::DimensionMismatch {
            expected: sweep.dim(),
            got: psi0.len(),
        });
    }
    let n0 = psi0.norm();
    if (n0 - 1.0).abs() > opts.norm_tolerance {
        return Err(Error::NotNormalised(n0));
    }
    let steps = opts
        .steps
        .unwrap_or_else(|| default_steps(sweep.total_time));
    if steps == 0 {
        return Err(Error::InvalidArgument(
            "at least one step is required".into(),
        ));
    }
    let total = sweep.total_time;
    let h = total / steps as f64;
    let (c1, c2) = (0.5 - SQRT3 / 6.0, 0.5 + SQRT3 / 6.0);
    let (a1, a2) = ((3.0 - 2.0 * SQRT3) / 12.0, (3.0 + 2.0 * SQRT3) / 12.0);

    let snap_at: Vec<usize> = match opts.snapshots {
        0 => Vec::new(),
        1 => vec![steps],
        s => (0..s)
            .map(|j| (j * steps + (s - 1) / 2) / (s - 1))
            .collect(),
    };
    let mut trajectory = (opts.snapshots > 0).then(Vec::new);
    let mut spectrum = (opts.snapshots > 0 && opts.spectrum_levels > 0).then(Vec::new);

    let d = sweep.dim();
    let mut psi = psi0.amplitudes.clone();
    let mut term = vec![Complex64::default(); d];
    let mut next = vec![Complex64::default(); d];
    let mut snap_idx = 0;
    let mut record = |step: usize, psi: &[Complex64]| -> Result<()> {
        while snap_idx < snap_at.len() && snap_at[snap_idx] == step {
            let t = (step as f64 * h).min(total);
            if let Some(tr) = trajectory.as_mut() {
                tr.push(Snapshot {
                    t,
                    values: psi.iter().map(Complex64::norm_sqr).collect(),
                });
            }
            if let Some(sp) = spectrum.as_mut() {
                sp.push(Snapshot {
                    t,
                    values: instantaneous_spectrum(sweep, t, opts.spectrum_levels)?,
                });
            }
            snap_idx += 1;
        }
        Ok(())
    };
    record(0, &psi)?;
    for n in 0..steps {
        let t = n as f64 * h;
        let (f1, g1) = sweep.schedule.weights(t + c1 * h, total);
        let (f2, g2) = sweep.schedule.weights(t + c2 * h, total);
        expm_action(
            sweep,
            a2 * f1 + a1 * f2,
            a2 * g1 + a1 * g2,
            h,
            &mut psi,
            &mut term,
            &mut next,
        );
        expm_action(
            sweep,
            a1 * f1 + a2 * f2,
            a1 * g1 + a2 * g2,
            h,
            &mut psi,
            &mut term,
            &mut next,
        );
        record(n + 1, &psi)?;
    }

    let final_state = StateVector { amplitudes: psi };
    let drift = (final_state.norm() - 1.0).abs();
    if !(drift < opts.norm_tolerance) {
        return Err(Error::NormDrift {
            drift,
            tolerance: opts.norm_tolerance,
        });
    }
    Ok(EvolutionResult {
        final_probabilities: measure_probabilities(&final_state),
        final_state,
        norm_drift: drift,
        steps,
        trajectory,
        spectrum_track: spectrum,
    })
}

/// Writes snapshots as `t,index_or_rank,value` rows.
pub fn write_snapshots_csv<W: Write>(snaps: &[Snapshot], out: &mut W) -> Result<()> {
    writeln!(out, "t,index_or_rank,value")?;
    for s in snaps {
        for (i, v) in s.values.iter().enumerate() {
            writeln!(out, "{},{},{}", s.t, i, v)?;
        }
    }
    Ok(())
}

/// Fock states that encode the same lattice vector up to sign.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankClass {
    pub rank: usize,
    pub norm_sq: i128,
    /// The encoded lattice vectors, `v` and `-v`, sorted.
    pub vectors: Vec<Vec<i128>>,
    /// Coefficient vectors of the members, sorted.
    pub coefficients: Vec<Vec<i128>>,
    pub members: Vec<usize>,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankClassTable {
    pub classes: Vec<RankClass>,
}

impl RankClassTable {
    pub fn probability(&self, rank: usize) -> f64 {
        self.classes.get(rank).map_or(0.0, |c| c.probability)
    }

    pub fn has_zero_class(&self) -> bool {
        self.classes.first().is_some_and(|c| c.norm_sq == 0)
    }

    /// Total probability of nonzero vectors with squared norm `norm_sq`.
    pub fn shell_probability(&self, norm_sq: i128) -> f64 {
        self.classes
            .iter()
            .filter(|c| c.norm_sq == norm_sq)
            .map(|c| c.probability)
            .sum()
    }

    /// Smallest nonzero squared norm present.
    pub fn shortest_nonzero(&self) -> Option<i128> {
        self.classes.iter().map(|c| c.norm_sq).find(|&n| n > 0)
    }

    /// Class index of each Fock state.
    pub fn class_of_states(&self, dim: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; dim];
        for c in &self.classes {
            for &m in &c.members {
                out[m] = c.rank;
            }
        }
        out
    }
}

/// Groups Fock states by the lattice vector `±v` they encode. Classes are
/// ordered by squared norm, then by the lexicographically smaller of `v` and
/// `-v`.
pub fn rank_classes(
    basis: &FockBasis,
    b_prime: &Basis,
    cfg: &OffsetConfig,
    probabilities: &[f64],
) -> Result<RankClassTable> {
    if probabilities.len() != basis.len() {
        return Err(Error::DimensionMismatch {
            expected: basis.len(),
            got: probabilities.len(),
        });
    }
    if basis.sites() != cfg.total_sites() || b_prime.nrows() != cfg.total_sites() {
        return Err(Error::DimensionMismatch {
            expected: cfg.total_sites(),
            got: basis.sites(),
        });
    }
    let rows: Vec<Vec<i128>> = b_prime.rows()[..cfg.n_lattice_sites]
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| i128::try_from(v).map_err(|_| Error::Overflow(format!("basis entry {v}"))))
                .collect()
        })
        .collect::<Result<_>>()?;
    let ncols = b_prime.ncols();

    type Key = (i128, Vec<i128>);
    let mut groups: BTreeMap<Key, (Vec<usize>, f64)> = BTreeMap::new();
    for (r, x) in coefficient_rows(basis, cfg).into_iter().enumerate() {
        let mut v = vec![0i128; ncols];
        for (xi, row) in x.iter().zip(&rows) {
            if *xi != 0 {
                for (vj, bj) in v.iter_mut().zip(row) {
                    *vj += xi * bj;
                }
            }
        }
        let norm: i128 = v.iter().map(|c| c * c).sum();
        let neg: Vec<i128> = v.iter().map(|c| -c).collect();
        let canon = v.min(neg);
        let e = groups
            .entry((norm, canon))
            .or_insert_with(|| (Vec::new(), 0.0));
        e.0.push(r);
        e.1 += probabilities[r];
    }

    let all_x = coefficient_rows(basis, cfg);
    let classes = groups
        .into_iter()
        .enumerate()
        .map(|(rank, ((norm_sq, canon), (members, probability)))| {
            let neg: Vec<i128> = canon.iter().map(|c| -c).collect();
            let mut vectors = vec![canon];
            if neg != vectors[0] {
                vectors.push(neg);
            }
            vectors.sort();
            let mut coefficients: Vec<Vec<i128>> =
                members.iter().map(|&m| all_x[m].clone()).collect();
            coefficients.sort();
            coefficients.dedup();
            RankClass {
                rank,
                norm_sq,
                vectors,
                coefficients,
                members,
                probability,
            }
        })
        .collect();
    Ok(RankClassTable { classes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::dense_eigenpairs;
    use crate::hamiltonian::{build_problem_diagonal, build_tunnelling, SpectrumScale};

    fn worked_sweep(t: f64) -> (FockBasis, SweepHamiltonian) {
        let basis = FockBasis::new(2, 2).unwrap();
        let b = Basis::from_i64(&[[1, 2], [0, -2]]).unwrap();
        let cfg = OffsetConfig::new(0, 2, false);
        let h0 = build_tunnelling(&basis);
        let hp = build_problem_diagonal(&basis, &b, &cfg, SpectrumScale::default()).unwrap();
        let sweep = SweepHamiltonian::new(h0, hp, t).unwrap();
        (basis, sweep)
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    // Classical RK4 on the dense matrix, independent of the Magnus stepper.
    fn rk4_reference(sweep: &SweepHamiltonian, psi0: &StateVector, steps: usize) -> Vec<f64> {
        let d = sweep.dim();
        let h = sweep.total_time / steps as f64;
        let deriv = |t: f64, y: &[Complex64]| -> Vec<Complex64> {
            let m = sweep.dense_at(t.min(sweep.total_time)).unwrap();
            (0..d)
                .map(|r| {
                    (0..d).map(|c| y[c] * m[(r, c)]).sum::<Complex64>() * Complex64::new(0.0, -1.0)
                })
                .collect()
        };
        let axpy = |y: &[Complex64], k: &[Complex64], a: f64| -> Vec<Complex64> {
            y.iter().zip(k).map(|(u, v)| u + v * a).collect()
        };
        let mut y = psi0.amplitudes().to_vec();
        for n in 0..steps {
            let t = n as f64 * h;
            let k1 = deriv(t, &y);
            let k2 = deriv(t + h / 2.0, &axpy(&y, &k1, h / 2.0));
            let k3 = deriv(t + h / 2.0, &axpy(&y, &k2, h / 2.0));
            let k4 = deriv(t + h, &axpy(&y, &k3, h));
            for i in 0..d {
                y[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
            }
        }
        y.iter().map(Complex64::norm_sqr).collect()
    }

    #[test]
    fn ground_state_examples() {
        let psi = initial_ground_state(&FockBasis::new(2, 2).unwrap());
        let s = 2f64.sqrt();
        let want = [0.5, s / 2.0, 0.5];
        for (a, w) in psi.amplitudes().iter().zip(want) {
            assert!((a.re - w).abs() < 1e-15 && a.im == 0.0);
        }
        assert!(close(
            &measure_probabilities(&psi),
            &[0.25, 0.5, 0.25],
            1e-15
        ));
        let psi = initial_ground_state(&FockBasis::new(1, 2).unwrap());
        assert!(close(&measure_probabilities(&psi), &[0.5, 0.5], 1e-15));
        let psi = initial_ground_state(&FockBasis::new(7, 1).unwrap());
        assert_eq!(psi.amplitudes(), &[Complex64::new(1.0, 0.0)]);
    }

    #[test]
    fn ground_state_matches_dense() {
        for (k, m) in [(3, 3), (5, 4), (9, 3), (2, 6)] {
            let basis = FockBasis::new(k, m).unwrap();
            let psi = initial_ground_state(&basis);
            assert!((psi.norm() - 1.0).abs() < 1e-13);
            let (vals, vecs) = dense_eigenpairs(&build_tunnelling(&basis).to_dense()).unwrap();
            assert!((vals[0] - condensate_energy(k, m)).abs() < 1e-10);
            let g = StateVector {
                amplitudes: vecs
                    .column(0)
                    .iter()
                    .map(|&v| Complex64::new(v, 0.0))
                    .collect(),
            };
            assert!(psi.fidelity(&g) > 1.0 - 1e-12);
        }
    }

    #[test]
    fn measurement_examples() {
        let p = measure_probabilities(&StateVector::basis_state(4, 2));
        assert_eq!(p, vec![0.0, 0.0, 1.0, 0.0]);
        let u = StateVector::new(vec![Complex64::new(0.5, 0.0); 4]).unwrap();
        assert_eq!(measure_probabilities(&u), vec![0.25; 4]);
        assert!(matches!(
            StateVector::new(vec![Complex64::new(1.0, 0.0); 2]),
            Err(Error::NotNormalised(_))
        ));
    }

    #[test]
    fn spectrum_examples() {
        let (_, sweep) = worked_sweep(2.0);
        assert!(close(
            &instantaneous_spectrum(&sweep, 0.0, 3).unwrap(),
            &[-2.0, 0.0, 2.0],
            1e-12
        ));
        let end = instantaneous_spectrum(&sweep, 2.0, 3).unwrap();
        assert!(close(&end, &[1.0, 16.0, 20.0], 1e-12));
        assert!(close(&energy_gaps(&end), &[0.0, 15.0, 19.0], 1e-12));
        assert!(instantaneous_spectrum(&sweep, 3.0, 1).is_err());
    }

    #[test]
    fn tiny_sweep_leaves_state_alone() {
        let (basis, sweep) = worked_sweep(1e-6);
        let psi = initial_ground_state(&basis);
        let r = evolve(&sweep, &psi, &EvolveOptions::with_steps(1)).unwrap();
        assert!(close(&r.final_probabilities, &[0.25, 0.5, 0.25], 1e-4));
    }

    #[test]
    fn worked_example_reaches_ground_state() {
        let (basis, sweep) = worked_sweep(2.0);
        let psi = initial_ground_state(&basis);
        let opts = EvolveOptions {
            snapshots: DEFAULT_SNAPSHOTS,
            spectrum_levels: 3,
            ..EvolveOptions::default()
        };
        let r = evolve(&sweep, &psi, &opts).unwrap();
        let want = rk4_reference(&sweep, &psi, 200_000);
        assert!(
            close(&r.final_probabilities, &want, 1e-9),
            "{:?} vs {want:?}",
            r.final_probabilities
        );
        let best = (0..3).max_by(|&a, &b| want[a].total_cmp(&want[b])).unwrap();
        assert_eq!(best, 1);
        assert!(r.norm_drift < 1e-6);
        let tr = r.trajectory.unwrap();
        assert_eq!(tr.len(), DEFAULT_SNAPSHOTS);
        assert_eq!(tr[0].t, 0.0);
        assert_eq!(tr.last().unwrap().t, 2.0);
        assert_eq!(tr.last().unwrap().values, r.final_probabilities);
        assert_eq!(r.spectrum_track.unwrap().len(), DEFAULT_SNAPSHOTS);
    }

    #[test]
    fn stationary_when_problem_equals_tunnelling() {
        let basis = FockBasis::new(3, 3).unwrap();
        let h0 = build_tunnelling(&basis);
        let d = basis.len();
        let hp = crate::hamiltonian::ProblemDiagonal {
            exact_energies: vec![0; d],
            scaled_energies: vec![0.0; d],
            scale_factor: 1.0,
            constant_shift: 0,
        };
        let sweep = SweepHamiltonian::with_schedule(
            h0,
            hp,
            3.0,
            crate::hamiltonian::Schedule::Custom(std::sync::Arc::new(|_, _| (1.0, 0.0))),
        )
        .unwrap();
        let psi = initial_ground_state(&basis);
        let p0 = measure_probabilities(&psi);
        let opts = EvolveOptions {
            steps: Some(2000),
            snapshots: 5,
            ..EvolveOptions::default()
        };
        let r = evolve(&sweep, &psi, &opts).unwrap();
        for s in r.trajectory.unwrap() {
            assert!(close(&s.values, &p0, 1e-10));
        }
    }

    #[test]
    fn halving_steps_converges() {
        let (basis, sweep) = worked_sweep(2.0);
        let psi = initial_ground_state(&basis);
        let a = evolve(&sweep, &psi, &EvolveOptions::with_steps(400)).unwrap();
        let b = evolve(&sweep, &psi, &EvolveOptions::with_steps(800)).unwrap();
        assert!(close(&a.final_probabilities, &b.final_probabilities, 1e-8));
    }

    #[test]
    fn rank_classes_worked_example() {
        let basis = FockBasis::new(2, 2).unwrap();
        let b = Basis::from_i64(&[[1, 2], [0, -2]]).unwrap();
        let cfg = OffsetConfig::new(0, 2, false);
        let t = rank_classes(&basis, &b, &cfg, &[0.1, 0.7, 0.2]).unwrap();
        let norms: Vec<i128> = t.classes.iter().map(|c| c.norm_sq).collect();
        assert_eq!(norms, vec![1, 16, 20]);
        assert_eq!(t.classes[0].vectors, vec![vec![-1, 0], vec![1, 0]]);
        assert_eq!(t.classes[1].vectors, vec![vec![0, -4], vec![0, 4]]);
        assert_eq!(t.classes[2].vectors, vec![vec![-2, -4], vec![2, 4]]);
        assert_eq!(t.probability(0), 0.7);
        assert!(!t.has_zero_class());
    }

    #[test]
    fn rank_classes_single_run_zero_class() {
        let b = crate::hamiltonian::augment_basis(&Basis::from_i64(&[[1, 2], [0, -2]]).unwrap())
            .unwrap();
        let cfg = OffsetConfig::new(1, 2, true);
        let basis = FockBasis::new(3, 3).unwrap();
        let p = vec![1.0 / basis.len() as f64; basis.len()];
        let t = rank_classes(&basis, &b, &cfg, &p).unwrap();
        assert!(t.has_zero_class());
        let zero = &t.classes[0];
        assert!(zero.members.contains(&basis.rank_of(&[1, 1, 1]).unwrap()));
        assert_eq!(t.classes[1].norm_sq, 1);
        for c in &t.classes {
            let s: f64 = c.members.iter().map(|&m| p[m]).sum();
            assert!((s - c.probability).abs() < 1e-15);
        }
        assert!(t.classes.windows(2).all(|w| w[0].norm_sq <= w[1].norm_sq));
        let total: f64 = t.classes.iter().map(|c| c.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn snapshot_csv_layout() {
        let snaps = vec![Snapshot {
            t: 0.5,
            values: vec![0.25, 0.75],
        }];
        let mut buf = Vec::new();
        write_snapshots_csv(&snaps, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "t,index_or_rank,value\n0.5,0,0.25\n0.5,1,0.75\n"
        );
    }
}

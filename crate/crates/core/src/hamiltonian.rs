//! Tunnelling matrix `H₀`, the diagonal problem Hamiltonian and the sweep
//! `H(t) = f(t) H₀ + g(t) H_P`.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{occupancies_to_coeff, FockBasis, OffsetConfig};
use crate::lattice::{gram, Basis, GramMatrix};

/// Appends the zero row that plays the part of the particle reservoir.
pub fn augment_basis(b: &Basis) -> Result<Basis> {
    b.require_full_rank()?;
    let mut rows = b.rows().to_vec();
    rows.push(vec![BigInt::from(0); b.ncols()]);
    Basis::new(rows)
}

/// Nearest-neighbour hopping on an open chain, in compressed-row form.
#[derive(Clone, Debug, PartialEq)]
pub struct TunnellingMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

pub fn build_tunnelling(basis: &FockBasis) -> TunnellingMatrix {
    let d = basis.len();
    let m = basis.sites();
    let mut row_ptr = Vec::with_capacity(d + 1);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    let mut scratch = vec![0u32; m];
    let mut entries: Vec<(usize, f64)> = Vec::with_capacity(2 * m);
    row_ptr.push(0);
    for r in 0..d {
        let occ = basis.occupancies(r);
        entries.clear();
        for i in 0..m.saturating_sub(1) {
            let (a, b) = (occ[i], occ[i + 1]);
            if a > 0 {
                scratch.copy_from_slice(occ);
                scratch[i] -= 1;
                scratch[i + 1] += 1;
                let amp = -(f64::from(a) * f64::from(b + 1)).sqrt();
                entries.push((basis.rank_unchecked(&scratch), amp));
            }
            if b > 0 {
                scratch.copy_from_slice(occ);
                scratch[i] += 1;
                scratch[i + 1] -= 1;
                let amp = -(f64::from(b) * f64::from(a + 1)).sqrt();
                entries.push((basis.rank_unchecked(&scratch), amp));
            }
        }
        entries.sort_by_key(|e| e.0);
        for &(c, v) in &entries {
            cols.push(c);
            vals.push(v);
        }
        row_ptr.push(cols.len());
    }
    TunnellingMatrix {
        dim: d,
        row_ptr,
        cols,
        vals,
    }
}

impl TunnellingMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()]
            .iter()
            .copied()
            .zip(self.vals[span].iter().copied())
    }

    pub fn max_row_nnz(&self) -> usize {
        self.row_ptr
            .windows(2)
            .map(|w| w[1] - w[0])
            .max()
            .unwrap_or(0)
    }

    /// Largest absolute row sum, an upper bound on the spectral radius.
    pub fn inf_norm(&self) -> f64 {
        (0..self.dim)
            .map(|r| self.row(r).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn entry(&self, r: usize, c: usize) -> f64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[span.clone()].binary_search(&c) {
            Ok(k) => self.vals[span.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|r| self.row(r).all(|(c, v)| self.entry(c, r) == v))
    }

    /// `y = H₀ x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (r, yr) in y.iter_mut().enumerate() {
            *yr = self.row(r).map(|(c, v)| v * x[c]).sum();
        }
    }

    /// `y = H₀ x` for complex vectors.
    pub fn apply_complex(&self, x: &[Complex64], y: &mut [Complex64]) {
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, v) in self.row(r) {
                acc += x[c] * v;
            }
            *yr = acc;
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                m[(r, c)] = v;
            }
        }
        m
    }
}

/// How exact energies are turned into Hamiltonian entries.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumScale {
    /// Rescale so the largest energy equals the given value.
    TargetMax(f64),
    /// Multiply by a fixed factor.
    Factor(f64),
}

pub const DEFAULT_TARGET_MAX: f64 = 20.0;

impl Default for SpectrumScale {
    fn default() -> Self {
        SpectrumScale::TargetMax(DEFAULT_TARGET_MAX)
    }
}

/// Diagonal of `H_P`: the squared norm of the lattice vector each Fock
/// state encodes, plus its rescaled copy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemDiagonal {
    pub exact_energies: Vec<i128>,
    pub scaled_energies: Vec<f64>,
    pub scale_factor: f64,
    /// `m² Σ G′_ij`, already contained in every exact energy.
    pub constant_shift: i128,
}

impl ProblemDiagonal {
    pub fn dim(&self) -> usize {
        self.exact_energies.len()
    }
}

/// `Σ_ij G_ij x_i x_j` for small integer coefficients.
pub(crate) fn quad_form(g: &[Vec<i128>], x: &[i128]) -> i128 {
    let mut acc = 0i128;
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        let row: i128 = g[i].iter().zip(x).map(|(a, b)| a * b).sum();
        acc += xi * row;
    }
    acc
}

fn check_sites(basis: &FockBasis, b_prime: &Basis, cfg: &OffsetConfig) -> Result<()> {
    if basis.sites() != b_prime.nrows() {
        return Err(Error::DimensionMismatch {
            expected: b_prime.nrows(),
            got: basis.sites(),
        });
    }
    if cfg.total_sites() != basis.sites() {
        return Err(Error::DimensionMismatch {
            expected: cfg.total_sites(),
            got: basis.sites(),
        });
    }
    Ok(())
}

/// Coefficients of every Fock state as `i128`, in basis order.
pub(crate) fn coefficient_rows(basis: &FockBasis, cfg: &OffsetConfig) -> Vec<Vec<i128>> {
    let m = i128::from(cfg.m);
    basis
        .iter()
        .map(|occ| {
            occ[..cfg.n_lattice_sites]
                .iter()
                .map(|&n| i128::from(n) - m)
                .collect()
        })
        .collect()
}

pub fn build_problem_diagonal(
    basis: &FockBasis,
    b_prime: &Basis,
    cfg: &OffsetConfig,
    scale: SpectrumScale,
) -> Result<ProblemDiagonal> {
    check_sites(basis, b_prime, cfg)?;
    let g = gram(b_prime).to_i128()?;
    let lattice_g: Vec<Vec<i128>> = g[..cfg.n_lattice_sites]
        .iter()
        .map(|r| r[..cfg.n_lattice_sites].to_vec())
        .collect();
    let exact: Vec<i128> = coefficient_rows(basis, cfg)
        .iter()
        .map(|x| quad_form(&lattice_g, x))
        .collect();
    let m = i128::from(cfg.m);
    let constant_shift = m * m * g.iter().flatten().sum::<i128>();
    let (scaled, factor) = match scale {
        SpectrumScale::TargetMax(target) => match scale_spectrum(&exact, target) {
            Ok(v) => v,
            Err(Error::ZeroSpectrum) => (vec![0.0; exact.len()], 1.0),
            Err(e) => return Err(e),
        },
        SpectrumScale::Factor(f) => {
            if !(f > 0.0 && f.is_finite()) {
                return Err(Error::InvalidArgument(format!("scale factor {f}")));
            }
            (exact.iter().map(|&e| e as f64 * f).collect(), f)
        }
    };
    Ok(ProblemDiagonal {
        exact_energies: exact,
        scaled_energies: scaled,
        scale_factor: factor,
        constant_shift,
    })
}

/// Rescales energies so the largest equals `target_max`.
pub fn scale_spectrum(energies: &[i128], target_max: f64) -> Result<(Vec<f64>, f64)> {
    if !(target_max > 0.0 && target_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "target maximum {target_max}"
        )));
    }
    let max = energies.iter().copied().max().ok_or(Error::EmptyInput)?;
    if max <= 0 {
        return Err(Error::ZeroSpectrum);
    }
    let factor = target_max / max as f64;
    Ok((
        energies.iter().map(|&e| e as f64 * factor).collect(),
        factor,
    ))
}

/// Interaction constants `v_ij`, onsite energies `μ_i` and constant with
/// `Σ_i v_ii n_i(n_i-1) + Σ_{i≠j} v_ij n_i n_j + Σ_i μ_i n_i + c = ‖(n-m)·B‖²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhysicalDecomposition {
    pub v: Vec<Vec<i128>>,
    pub mu: Vec<i128>,
    pub constant: i128,
}

impl PhysicalDecomposition {
    pub fn energy(&self, occ: &[u32]) -> i128 {
        let n: Vec<i128> = occ.iter().map(|&v| i128::from(v)).collect();
        let mut e = self.constant;
        for i in 0..n.len() {
            e += self.v[i][i] * n[i] * (n[i] - 1) + self.mu[i] * n[i];
            for j in 0..n.len() {
                if i != j {
                    e += self.v[i][j] * n[i] * n[j];
                }
            }
        }
        e
    }
}

pub fn physical_decomposition(g: &GramMatrix, cfg: &OffsetConfig) -> Result<PhysicalDecomposition> {
    if !g.is_symmetric() {
        return Err(Error::Asymmetric);
    }
    let g = g.to_i128()?;
    let m = i128::from(cfg.m);
    let mu = g
        .iter()
        .enumerate()
        .map(|(i, r)| r[i] - 2 * m * r.iter().sum::<i128>())
        .collect();
    let constant = m * m * g.iter().flatten().sum::<i128>();
    Ok(PhysicalDecomposition { v: g, mu, constant })
}

type ScheduleFn = dyn Fn(f64, f64) -> (f64, f64) + Send + Sync;

/// Weights `(f(t), g(t))` of the two Hamiltonian terms.
#[derive(Clone, Default)]
pub enum Schedule {
    /// `f = 1 - t/T`, `g = t/T`.
    #[default]
    Linear,
    /// Called as `weights(t, T)`.
    Custom(Arc<ScheduleFn>),
}

impl fmt::Debug for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Linear => write!(f, "Linear"),
            Schedule::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl Schedule {
    pub fn weights(&self, t: f64, total: f64) -> (f64, f64) {
        match self {
            Schedule::Linear => {
                let s = t / total;
                (1.0 - s, s)
            }
            Schedule::Custom(w) => w(t, total),
        }
    }
}

/// The interpolating Hamiltonian of one sweep.
#[derive(Clone, Debug)]
pub struct SweepHamiltonian {
    pub h0: TunnellingMatrix,
    pub hp: ProblemDiagonal,
    pub total_time: f64,
    pub schedule: Schedule,
}

impl SweepHamiltonian {
    pub fn new(h0: TunnellingMatrix, hp: ProblemDiagonal, total_time: f64) -> Result<Self> {
        Self::with_schedule(h0, hp, total_time, Schedule::Linear)
    }

    pub fn with_schedule(
        h0: TunnellingMatrix,
        hp: ProblemDiagonal,
        total_time: f64,
        schedule: Schedule,
    ) -> Result<Self> {
        if h0.dim() != hp.dim() {
            return Err(Error::DimensionMismatch {
                expected: h0.dim(),
                got: hp.dim(),
            });
        }
        if !(total_time > 0.0 && total_time.is_finite()) {
            return Err(Error::InvalidArgument(format!("sweep length {total_time}")));
        }
        Ok(SweepHamiltonian {
            h0,
            hp,
            total_time,
            schedule,
        })
    }

    pub fn dim(&self) -> usize {
        self.h0.dim()
    }

    pub fn weights(&self, t: f64) -> Result<(f64, f64)> {
        if !(0.0..=self.total_time).contains(&t) {
            return Err(Error::TimeOutOfRange {
                t,
                total: self.total_time,
            });
        }
        Ok(self.schedule.weights(t, self.total_time))
    }

    /// `y = H(t) x`.
    pub fn sweep_at(&self, t: f64, x: &[Complex64], y: &mut [Complex64]) -> Result<()> {
        let (f, g) = self.weights(t)?;
        self.apply_weighted(f, g, x, y);
        Ok(())
    }

    /// `y = (f H₀ + g H_P) x`.
    pub fn apply_weighted(&self, f: f64, g: f64, x: &[Complex64], y: &mut [Complex64]) {
        let diag = &self.hp.scaled_energies;
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = x[r] * (g * diag[r]);
            if f != 0.0 {
                for (c, v) in self.h0.row(r) {
                    acc += x[c] * (f * v);
                }
            }
            *yr = acc;
        }
    }

    /// Upper bound on `‖f H₀ + g H_P‖₂`.
    pub fn norm_bound(&self, f: f64, g: f64) -> f64 {
        let dmax = self
            .hp
            .scaled_energies
            .iter()
            .fold(0.0f64, |a, &v| a.max(v.abs()));
        f.abs() * self.h0.inf_norm() + g.abs() * dmax
    }

    pub fn dense_at(&self, t: f64) -> Result<DMatrix<f64>> {
        let (f, g) = self.weights(t)?;
        Ok(self.dense_weighted(f, g))
    }

    pub fn dense_weighted(&self, f: f64, g: f64) -> DMatrix<f64> {
        let mut m = self.h0.to_dense() * f;
        for (r, e) in self.hp.scaled_energies.iter().enumerate() {
            m[(r, r)] += g * e;
        }
        m
    }

    /// Nonzero entries of `H(t)` as `row col value` lines.
    pub fn write_coo<W: Write>(&self, t: f64, out: &mut W) -> Result<()> {
        let (f, g) = self.weights(t)?;
        for r in 0..self.dim() {
            let d = g * self.hp.scaled_energies[r];
            let mut wrote_diag = false;
            for (c, v) in self.h0.row(r) {
                if c > r && !wrote_diag {
                    if d != 0.0 {
                        writeln!(out, "{r} {r} {d}")?;
                    }
                    wrote_diag = true;
                }
                if f != 0.0 {
                    writeln!(out, "{r} {c} {}", f * v)?;
                }
            }
            if !wrote_diag && d != 0.0 {
                writeln!(out, "{r} {r} {d}")?;
            }
        }
        Ok(())
    }
}

/// Fock basis, tunnelling matrix and problem diagonal for one lattice run.
pub fn build_sweep(
    b_prime: &Basis,
    cfg: &OffsetConfig,
    particles: u32,
    total_time: f64,
    scale: SpectrumScale,
) -> Result<(FockBasis, SweepHamiltonian)> {
    let basis = FockBasis::new(particles, cfg.total_sites())?;
    let h0 = build_tunnelling(&basis);
    let hp = build_problem_diagonal(&basis, b_prime, cfg, scale)?;
    Ok((basis, SweepHamiltonian::new(h0, hp, total_time)?))
}

/// Exact energy of one occupancy vector, recomputed through big integers.
pub fn certified_energy(b_prime: &Basis, occ: &[u32], cfg: &OffsetConfig) -> Result<BigInt> {
    let x = occupancies_to_coeff(occ, cfg)?;
    let lattice = Basis::new(b_prime.rows()[..cfg.n_lattice_sites].to_vec())?;
    let v = lattice.combine(&x)?;
    Ok(v.iter().map(|c| c * c).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockBasis;
    use proptest::prelude::*;

    fn worked() -> Basis {
        Basis::from_i64(&[[1, 2], [0, -2]]).unwrap()
    }

    #[test]
    fn augment_examples() {
        let a = augment_basis(&worked()).unwrap();
        assert_eq!(a, Basis::from_i64(&[[1, 2], [0, -2], [0, 0]]).unwrap());
        let g = gram(&a);
        assert!(g.entries()[2].iter().all(|v| *v == BigInt::from(0)));
        let a = augment_basis(&Basis::identity(2)).unwrap();
        assert_eq!((a.nrows(), a.ncols()), (3, 2));
        assert!(augment_basis(&Basis::from_i64(&[[1, 1], [2, 2]]).unwrap()).is_err());
    }

    #[test]
    fn tunnelling_examples() {
        let h = build_tunnelling(&FockBasis::new(2, 2).unwrap());
        let s = 2f64.sqrt();
        let want = DMatrix::from_row_slice(3, 3, &[0.0, -s, 0.0, -s, 0.0, -s, 0.0, -s, 0.0]);
        assert!((h.to_dense() - want).abs().max() < 1e-15);
        let h = build_tunnelling(&FockBasis::new(1, 2).unwrap());
        assert_eq!(
            h.to_dense(),
            DMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0])
        );
        for (k, m) in [(4, 3), (3, 5), (6, 4)] {
            let h = build_tunnelling(&FockBasis::new(k, m).unwrap());
            assert!(h.is_symmetric());
            assert!(h.max_row_nnz() <= 2 * (m - 1));
            assert!(h.vals.iter().all(|&v| v < 0.0));
        }
    }

    #[test]
    fn problem_diagonal_worked_example() {
        let basis = FockBasis::new(2, 2).unwrap();
        let cfg = OffsetConfig::new(0, 2, false);
        let hp = build_problem_diagonal(&basis, &worked(), &cfg, SpectrumScale::default()).unwrap();
        assert_eq!(hp.exact_energies, vec![20, 1, 16]);
        assert_eq!(hp.scale_factor, 1.0);
        assert_eq!(hp.scaled_energies, vec![20.0, 1.0, 16.0]);
        assert_eq!(hp.constant_shift, 0);
    }

    #[test]
    fn problem_diagonal_zero_and_offset() {
        let zero = Basis::from_i64(&[[0, 0]]).unwrap();
        let basis = FockBasis::new(3, 1).unwrap();
        let hp = build_problem_diagonal(
            &basis,
            &zero,
            &OffsetConfig::new(0, 1, false),
            SpectrumScale::default(),
        )
        .unwrap();
        assert_eq!(hp.exact_energies, vec![0]);

        let bp = augment_basis(&worked()).unwrap();
        let cfg = OffsetConfig::new(2, 2, true);
        let basis = FockBasis::new(6, 3).unwrap();
        let hp = build_problem_diagonal(&basis, &bp, &cfg, SpectrumScale::default()).unwrap();
        let r = basis.rank_of(&[2, 2, 2]).unwrap();
        assert_eq!(hp.exact_energies[r], 0);
        assert_eq!(hp.constant_shift, 4);
        for (r, occ) in basis.iter().enumerate() {
            assert_eq!(
                BigInt::from(hp.exact_energies[r]),
                certified_energy(&bp, occ, &cfg).unwrap()
            );
        }
    }

    #[test]
    fn scaling_examples() {
        let (s, f) = scale_spectrum(&[20, 1, 16], 20.0).unwrap();
        assert_eq!((s, f), (vec![20.0, 1.0, 16.0], 1.0));
        let (s, f) = scale_spectrum(&[40, 2, 32], 20.0).unwrap();
        assert_eq!((s, f), (vec![20.0, 1.0, 16.0], 0.5));
        assert!(matches!(
            scale_spectrum(&[0, 0], 20.0),
            Err(Error::ZeroSpectrum)
        ));
    }

    #[test]
    fn decomposition_examples() {
        let g = gram(&worked());
        let d = physical_decomposition(&g, &OffsetConfig::new(0, 2, false)).unwrap();
        assert_eq!(d.mu, vec![5, 4]);
        assert_eq!(d.constant, 0);
        let z = GramMatrix::from_entries(vec![vec![BigInt::from(0); 2]; 2]).unwrap();
        let d = physical_decomposition(&z, &OffsetConfig::new(3, 2, false)).unwrap();
        assert!(d.mu.iter().all(|&v| v == 0) && d.constant == 0);
        let asym = GramMatrix::from_entries(vec![
            vec![BigInt::from(1), BigInt::from(2)],
            vec![BigInt::from(3), BigInt::from(1)],
        ])
        .unwrap();
        assert!(matches!(
            physical_decomposition(&asym, &OffsetConfig::new(0, 2, false)),
            Err(Error::Asymmetric)
        ));
    }

    #[test]
    fn sweep_endpoints_and_midpoint() {
        let basis = FockBasis::new(2, 2).unwrap();
        let cfg = OffsetConfig::new(0, 2, false);
        let h0 = build_tunnelling(&basis);
        let hp = build_problem_diagonal(&basis, &worked(), &cfg, SpectrumScale::default()).unwrap();
        let sweep = SweepHamiltonian::new(h0.clone(), hp, 2.0).unwrap();
        assert_eq!(sweep.dense_at(0.0).unwrap(), h0.to_dense());
        assert_eq!(
            sweep.dense_at(2.0).unwrap(),
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![20.0, 1.0, 16.0]))
        );
        let s = 2f64.sqrt() / 2.0;
        let want = DMatrix::from_row_slice(3, 3, &[10.0, -s, 0.0, -s, 0.5, -s, 0.0, -s, 8.0]);
        assert!((sweep.dense_at(1.0).unwrap() - want).abs().max() < 1e-15);
        assert!(matches!(
            sweep.dense_at(2.5),
            Err(Error::TimeOutOfRange { .. })
        ));

        let x: Vec<Complex64> = (0..3).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let mut y = vec![Complex64::default(); 3];
        sweep.sweep_at(1.0, &x, &mut y).unwrap();
        let d = sweep.dense_at(1.0).unwrap();
        for r in 0..3 {
            let want: Complex64 = (0..3).map(|c| x[c] * d[(r, c)]).sum();
            assert!((y[r] - want).norm() < 1e-14);
        }

        let mut buf = Vec::new();
        sweep.write_coo(1.0, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 7);
        assert!(text.starts_with("0 0 10\n"));
    }

    proptest! {
        #[test]
        fn decomposition_matches_diagonal(
            rows in proptest::collection::vec(proptest::collection::vec(-6i64..7, 2), 2),
            m in 0u32..3,
            k in 0u32..7,
        ) {
            let b = Basis::from_i64(&rows).unwrap();
            prop_assume!(b.is_full_rank());
            let bp = augment_basis(&b).unwrap();
            let cfg = OffsetConfig::new(m, 2, true);
            let basis = FockBasis::new(k, 3).unwrap();
            let hp = build_problem_diagonal(&basis, &bp, &cfg, SpectrumScale::default()).unwrap();
            let dec = physical_decomposition(&gram(&bp), &cfg).unwrap();
            for (r, occ) in basis.iter().enumerate() {
                prop_assert_eq!(dec.energy(occ), hp.exact_energies[r]);
            }
        }

        #[test]
        fn offset_expansion(g in proptest::collection::vec(-9i128..10, 9), n in proptest::collection::vec(0i128..8, 3), m in 0i128..5) {
            let g: Vec<Vec<i128>> = (0..3).map(|i| (0..3).map(|j| g[3 * i.min(j) + i.max(j)]).collect()).collect();
            let shifted: Vec<i128> = n.iter().map(|v| v + m).collect();
            let s: Vec<i128> = g.iter().map(|r| r.iter().sum()).collect();
            let lin: i128 = n.iter().zip(&s).map(|(a, b)| a * b).sum();
            let total: i128 = g.iter().flatten().sum();
            prop_assert_eq!(quad_form(&g, &shifted), quad_form(&g, &n) + 2 * m * lin + m * m * total);
        }

        #[test]
        fn scaling_preserves_argmin(e in proptest::collection::vec(0i128..1000, 1..20), target in 0.1f64..100.0) {
            prop_assume!(e.iter().any(|&v| v > 0));
            let (s, _) = scale_spectrum(&e, target).unwrap();
            let am = |v: &[f64]| v.iter().enumerate().fold(0, |b, (i, x)| if *x < v[b] { i } else { b });
            let ei: Vec<f64> = e.iter().map(|&v| v as f64).collect();
            prop_assert_eq!(am(&s), am(&ei));
        }
    }
}

//! Occupation-number bases for `K` bosons on `M` sites.
//!
//! States are listed in strictly lexicographically descending order, so the
//! first state is `(K, 0, …, 0)` and the last is `(0, …, 0, K)`. Ranks are
//! computed combinatorially and never through a hash map.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::CoefficientVector;

/// Default limit on the number of states a [`FockBasis`] may enumerate.
pub const DEFAULT_STATE_CAP: usize = 2_000_000;

/// Binomial coefficient `C(n, k)` exactly.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Number of ways to place `k` bosons on `m` sites, `(k+m-1)! / (k! (m-1)!)`.
pub fn dimension(k: u64, m: u64) -> BigUint {
    assert!(m >= 1, "at least one site is required");
    binomial(k + m - 1, m - 1)
}

/// Size of the single-run space: up to `k_s` particles on `n` lattice sites
/// plus a reservoir, `(k_s+n)! / (k_s! n!)`.
pub fn dimension_single_run(k_s: u64, n: u64) -> BigUint {
    assert!(n >= 1, "at least one lattice site is required");
    binomial(k_s + n, n)
}

/// `log₂` of a big unsigned integer, accurate to double precision.
pub fn log2_big(v: &BigUint) -> f64 {
    assert!(!v.is_zero(), "log of zero");
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("below f64 range").log2();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().expect("64 bits");
    top.log2() + shift as f64
}

/// Occupation numbers of one basis state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FockState {
    occupancies: Vec<u32>,
}

impl FockState {
    pub fn new(occupancies: Vec<u32>) -> Self {
        FockState { occupancies }
    }

    pub fn occupancies(&self) -> &[u32] {
        &self.occupancies
    }

    pub fn sites(&self) -> usize {
        self.occupancies.len()
    }

    pub fn total(&self) -> u64 {
        self.occupancies.iter().map(|&n| u64::from(n)).sum()
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, n) in self.occupancies.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

/// All states of `K` particles on `M` sites, stored contiguously.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockBasis {
    sites: usize,
    particles: u32,
    states: Vec<u32>,
    // counts[k][s] = number of ways to put k particles on s sites
    counts: Vec<Vec<u64>>,
}

impl FockBasis {
    pub fn new(particles: u32, sites: usize) -> Result<Self> {
        Self::with_cap(particles, sites, DEFAULT_STATE_CAP)
    }

    pub fn with_cap(particles: u32, sites: usize, cap: usize) -> Result<Self> {
        if sites == 0 {
            return Err(Error::InvalidArgument(
                "a Fock basis needs at least one site".into(),
            ));
        }
        let d = dimension(u64::from(particles), sites as u64);
        if d > BigUint::from(cap) {
            return Err(Error::HilbertCap {
                dim: d.to_string(),
                cap,
            });
        }
        let len = d.to_usize().expect("below cap");

        let k = particles as usize;
        let mut counts = vec![vec![0u64; sites + 1]; k + 1];
        for row in counts.iter_mut() {
            row[1] = 1;
        }
        for s in 2..=sites {
            let mut acc = 0u64;
            for kk in 0..=k {
                acc += counts[kk][s - 1];
                counts[kk][s] = acc;
            }
        }

        let mut states = Vec::with_capacity(len * sites);
        let mut cur = vec![0u32; sites];
        cur[0] = particles;
        // rightmost occupied site
        let mut last = 0;
        loop {
            states.extend_from_slice(&cur);
            // Rightmost movable particle steps one site right; everything
            // behind it collapses onto the next site.
            let i = if last + 1 < sites && cur[last] > 0 {
                last
            } else {
                match (0..sites - 1).rev().find(|&i| cur[i] > 0) {
                    Some(i) => i,
                    None => break,
                }
            };
            let tail = if last > i {
                std::mem::take(&mut cur[last])
            } else {
                0
            };
            cur[i] -= 1;
            cur[i + 1] = tail + 1;
            last = i + 1;
        }
        debug_assert_eq!(states.len(), len * sites);
        Ok(FockBasis {
            sites,
            particles,
            states,
            counts,
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn particles(&self) -> u32 {
        self.particles
    }

    /// Number of states `D`.
    pub fn len(&self) -> usize {
        self.states.len() / self.sites
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Occupancies of state `r` as a slice.
    pub fn occupancies(&self, r: usize) -> &[u32] {
        &self.states[r * self.sites..(r + 1) * self.sites]
    }

    pub fn unrank(&self, r: usize) -> Result<FockState> {
        if r >= self.len() {
            return Err(Error::InvalidArgument(format!(
                "rank {r} out of range for {} states",
                self.len()
            )));
        }
        Ok(FockState::new(self.occupancies(r).to_vec()))
    }

    pub fn rank(&self, state: &FockState) -> Result<usize> {
        self.rank_of(state.occupancies())
    }

    /// Index of an occupancy vector in `O(M)`.
    pub fn rank_of(&self, occ: &[u32]) -> Result<usize> {
        if occ.len() != self.sites {
            return Err(Error::DimensionMismatch {
                expected: self.sites,
                got: occ.len(),
            });
        }
        let total: u64 = occ.iter().map(|&n| u64::from(n)).sum();
        if total != u64::from(self.particles) {
            return Err(Error::InvalidArgument(format!(
                "state holds {total} particles, basis holds {}",
                self.particles
            )));
        }
        Ok(self.rank_unchecked(occ))
    }

    pub(crate) fn rank_unchecked(&self, occ: &[u32]) -> usize {
        let mut remaining = self.particles as usize;
        let mut r = 0u64;
        for (i, &n) in occ.iter().enumerate().take(self.sites - 1) {
            let n = n as usize;
            if n < remaining {
                // States with a larger entry here: every split of the
                // leftover particles over this and later sites.
                r += self.counts[remaining - n - 1][self.sites - i];
            }
            remaining -= n;
        }
        r as usize
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.states.chunks_exact(self.sites)
    }
}

/// Offset `m` and optional reservoir site that map occupancies to
/// coefficients via `x_i = n_i - m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OffsetConfig {
    pub m: u32,
    pub n_lattice_sites: usize,
    pub has_reservoir: bool,
}

impl OffsetConfig {
    pub fn new(m: u32, n_lattice_sites: usize, has_reservoir: bool) -> Self {
        OffsetConfig {
            m,
            n_lattice_sites,
            has_reservoir,
        }
    }

    /// `N + 1` with a reservoir, `N` otherwise.
    pub fn total_sites(&self) -> usize {
        self.n_lattice_sites + usize::from(self.has_reservoir)
    }
}

pub fn fock_to_coeff(state: &FockState, cfg: &OffsetConfig) -> Result<CoefficientVector> {
    occupancies_to_coeff(state.occupancies(), cfg)
}

pub fn occupancies_to_coeff(occ: &[u32], cfg: &OffsetConfig) -> Result<CoefficientVector> {
    if occ.len() != cfg.total_sites() {
        return Err(Error::DimensionMismatch {
            expected: cfg.total_sites(),
            got: occ.len(),
        });
    }
    Ok(occ[..cfg.n_lattice_sites]
        .iter()
        .map(|&n| BigInt::from(i64::from(n) - i64::from(cfg.m)))
        .collect())
}

/// Exact and Stirling-bounded single-run space sizes for `K_S = cN² + cN`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub n: u64,
    pub c: u64,
    pub exact_log2_d: f64,
    pub stirling_bound_log2: f64,
}

impl ScalingReport {
    pub fn holds(&self) -> bool {
        self.exact_log2_d <= self.stirling_bound_log2
    }
}

pub fn qubit_bound(n: u64, c: u64) -> Result<ScalingReport> {
    if n < 2 || c < 1 {
        return Err(Error::InvalidArgument(format!(
            "qubit bound needs N >= 2 and c >= 1, got N={n}, c={c}"
        )));
    }
    let k_s = c
        .checked_mul(n)
        .and_then(|cn| cn.checked_mul(n + 1))
        .ok_or_else(|| Error::Overflow(format!("c*N*(N+1) for N={n}, c={c}")))?;
    let exact = log2_big(&dimension_single_run(k_s, n));
    let nf = n as f64;
    let base = std::f64::consts::E * (c * n + c + 1) as f64;
    let bound = nf * base.log2() - 0.5 * (2.0 * std::f64::consts::PI * nf).log2();
    Ok(ScalingReport {
        n,
        c,
        exact_log2_d: exact,
        stirling_bound_log2: bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    // Brute-force count by recursion over the first site.
    fn count(k: u64, m: u64) -> u64 {
        if m == 1 {
            return 1;
        }
        (0..=k).map(|j| count(k - j, m - 1)).sum()
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dimension(9, 3), big(55));
        assert_eq!(dimension(16, 4), big(969));
        assert_eq!(dimension(2, 2), big(3));
        assert_eq!(dimension(0, 7), big(1));
        assert_eq!(dimension_single_run(9, 2), big(55));
        assert_eq!(dimension_single_run(20, 4), big(10626));
        assert_eq!(dimension_single_run(0, 5), big(1));
    }

    #[test]
    fn hockey_stick() {
        for n in 1..=6u64 {
            for k in 0..=12u64 {
                let sum: BigUint = (0..=k).map(|j| dimension(j, n)).sum();
                assert_eq!(dimension_single_run(k, n), sum);
                assert_eq!(dimension(k, n), big(count(k, n)));
            }
        }
    }

    #[test]
    fn enumeration_order() {
        let b = FockBasis::new(2, 2).unwrap();
        let got: Vec<Vec<u32>> = b.iter().map(<[u32]>::to_vec).collect();
        assert_eq!(got, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        let b = FockBasis::new(1, 3).unwrap();
        let got: Vec<Vec<u32>> = b.iter().map(<[u32]>::to_vec).collect();
        assert_eq!(got, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let b = FockBasis::new(9, 3).unwrap();
        assert_eq!(b.len(), 55);
        for r in 0..55 {
            assert_eq!(b.rank(&b.unrank(r).unwrap()).unwrap(), r);
        }
        for w in b.iter().collect::<Vec<_>>().windows(2) {
            assert!(w[0] > w[1]);
        }
    }

    #[test]
    fn enumeration_cap_and_errors() {
        assert!(matches!(
            FockBasis::with_cap(16, 4, 968),
            Err(Error::HilbertCap { cap: 968, .. })
        ));
        let b = FockBasis::new(3, 2).unwrap();
        assert!(b.rank(&FockState::new(vec![1, 1])).is_err());
        assert!(b.rank(&FockState::new(vec![1, 1, 1])).is_err());
        assert!(b.unrank(4).is_err());
        assert_eq!(FockBasis::new(5, 1).unwrap().len(), 1);
    }

    #[test]
    fn coefficient_mapping() {
        let x = fock_to_coeff(
            &FockState::new(vec![3, 1, 2]),
            &OffsetConfig::new(0, 3, false),
        )
        .unwrap();
        assert_eq!(x, vec![BigInt::from(3), BigInt::from(1), BigInt::from(2)]);
        let x = fock_to_coeff(
            &FockState::new(vec![0, 3, 5, 2]),
            &OffsetConfig::new(3, 3, true),
        )
        .unwrap();
        assert_eq!(x, vec![BigInt::from(-3), BigInt::from(0), BigInt::from(2)]);
        let x = fock_to_coeff(
            &FockState::new(vec![4, 4, 9]),
            &OffsetConfig::new(4, 2, true),
        )
        .unwrap();
        assert!(x.iter().all(Zero::is_zero));
        assert!(
            fock_to_coeff(&FockState::new(vec![1, 1]), &OffsetConfig::new(0, 2, true)).is_err()
        );
        assert_eq!(FockState::new(vec![0, 3, 5]).to_string(), "(0,3,5)");
    }

    #[test]
    fn qubit_bound_examples() {
        let r = qubit_bound(2, 1).unwrap();
        assert!((r.exact_log2_d - 28f64.log2()).abs() < 1e-12);
        assert!(r.holds());
        assert!(qubit_bound(45, 1).unwrap().holds());
        assert!(qubit_bound(1, 1).is_err());
        let ratios: Vec<f64> = (5..=100u64)
            .map(|n| {
                qubit_bound(n, 1).unwrap().stirling_bound_log2 / (n as f64 * (n as f64).log2())
            })
            .collect();
        assert!(ratios.iter().all(|&q| q < 8.0));
    }

    #[test]
    fn log2_of_large_values() {
        let v = BigUint::one() << 3000u32;
        assert!((log2_big(&v) - 3000.0).abs() < 1e-9);
        let v = (BigUint::one() << 2000u32) * 3u32;
        assert!((log2_big(&v) - (2000.0 + 3f64.log2())).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn rank_unrank_roundtrip(k in 0u32..10, m in 1usize..6, pick in 0usize..10_000) {
            let b = FockBasis::new(k, m).unwrap();
            let r = pick % b.len();
            let s = b.unrank(r).unwrap();
            prop_assert_eq!(s.total(), u64::from(k));
            prop_assert_eq!(b.rank(&s).unwrap(), r);
        }

        #[test]
        fn hop_to_reservoir_lowers_coefficient_sum(occ in proptest::collection::vec(1u32..6, 3), res in 0u32..5, m in 0u32..4) {
            let cfg = OffsetConfig::new(m, 3, true);
            let mut a = occ.clone();
            a.push(res);
            let mut b = a.clone();
            b[0] -= 1;
            b[3] += 1;
            let sa: BigInt = occupancies_to_coeff(&a, &cfg).unwrap().into_iter().sum();
            let sb: BigInt = occupancies_to_coeff(&b, &cfg).unwrap().into_iter().sum();
            prop_assert_eq!(sa - sb, BigInt::one());
        }
    }
}

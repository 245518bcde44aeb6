//! Seedable generators for lattice instances.
//!
//! None of these reproduce a published generator exactly; they are documented
//! substitutes chosen to produce the same kind of instance.

use num_bigint::BigInt;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::basis::{scramble, Basis, UnimodularMatrix};
use super::lll::{default_delta, lll_reduce};
use crate::error::{Error, Result};

/// Product of `num_ops` elementary operations `row_i += ±row_j` (`i != j`).
pub fn random_unimodular<R: Rng + ?Sized>(
    n: usize,
    num_ops: usize,
    rng: &mut R,
) -> UnimodularMatrix {
    let mut m = Basis::identity(n).into_rows();
    if n >= 2 {
        for _ in 0..num_ops {
            let i = rng.random_range(0..n);
            let mut j = rng.random_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let plus = rng.random_bool(0.5);
            let src = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(&src) {
                if plus {
                    *x += y;
                } else {
                    *x -= y;
                }
            }
        }
    }
    UnimodularMatrix::new_unchecked(Basis::new(m).expect("square"))
}

/// Full-rank basis with entries drawn uniformly from `[lo, hi]`; singular
/// draws are rejected.
pub fn random_uniform_basis<R: Rng + ?Sized>(n: usize, lo: i64, hi: i64, rng: &mut R) -> Basis {
    loop {
        let rows = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| BigInt::from(rng.random_range(lo..=hi)))
                    .collect()
            })
            .collect();
        let b = Basis::new(rows).expect("rectangular");
        if b.is_full_rank() {
            return b;
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Uniform prime in `[lo, hi]` by rejection.
pub fn random_prime<R: Rng + ?Sized>(lo: u64, hi: u64, rng: &mut R) -> u64 {
    loop {
        let c = rng.random_range(lo..=hi);
        if is_prime(c) {
            return c;
        }
    }
}

/// HNF basis of a prime-determinant lattice: identity except for the last
/// column, which holds uniform residues above the prime pivot `p`.
pub fn random_prime_det_hnf<R: Rng + ?Sized>(
    n: usize,
    prime_lo: u64,
    prime_hi: u64,
    rng: &mut R,
) -> Basis {
    let p = random_prime(prime_lo, prime_hi, rng);
    let mut rows = Basis::identity(n).into_rows();
    for (i, row) in rows.iter_mut().enumerate() {
        if i + 1 < n {
            row[n - 1] = BigInt::from(rng.random_range(0..p));
        } else {
            row[n - 1] = BigInt::from(p);
        }
    }
    Basis::new(rows).expect("square")
}

/// Parameters of the good/bad basis generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodBadParams {
    /// Entries of the seed basis are uniform in `[-entry_range, entry_range]`.
    pub entry_range: i64,
    /// Elementary operations in the scrambling unimodular matrix.
    pub num_ops: usize,
}

impl GoodBadParams {
    /// Defaults per dimension. `num_ops` was tuned so the ensemble mean row
    /// growth sits near 12 in two dimensions and near 10 in three and four.
    pub fn for_dim(n: usize) -> Self {
        let num_ops = match n {
            0..=2 => 16,
            3 => 19,
            4 => 24,
            _ => 6 * n,
        };
        GoodBadParams {
            entry_range: 3,
            num_ops,
        }
    }
}

/// A short, nearly orthogonal basis and a scrambled basis of the same lattice.
#[derive(Clone, Debug)]
pub struct GoodBadPair {
    pub good: Basis,
    pub bad: Basis,
    pub unimodular: UnimodularMatrix,
    /// Ratio of mean row lengths, bad over good.
    pub growth: f64,
}

pub fn random_good_bad_pair<R: Rng + ?Sized>(
    n: usize,
    params: &GoodBadParams,
    rng: &mut R,
) -> GoodBadPair {
    let seed = random_uniform_basis(n, -params.entry_range, params.entry_range, rng);
    let good = lll_reduce(&seed, &default_delta()).expect("full rank");
    let unimodular = random_unimodular(n, params.num_ops, rng);
    let bad = scramble(&good, &unimodular).expect("dimensions match");
    let growth = bad.mean_row_length() / good.mean_row_length();
    GoodBadPair {
        good,
        bad,
        unimodular,
        growth,
    }
}

/// Instance family for [`random_lattice`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum LatticeMode {
    UniformEntries { lo: i64, hi: i64 },
    PrimeDetHnf { prime_lo: u64, prime_hi: u64 },
    GoodBadPair(GoodBadParams),
    Identity,
}

impl LatticeMode {
    pub fn uniform() -> Self {
        LatticeMode::UniformEntries { lo: -10, hi: 10 }
    }

    pub fn prime_det_hnf() -> Self {
        LatticeMode::PrimeDetHnf {
            prime_lo: 1 << 16,
            prime_hi: 1 << 20,
        }
    }
}

#[derive(Clone, Debug)]
pub enum RandomLattice {
    Single(Basis),
    Pair(GoodBadPair),
}

impl RandomLattice {
    /// The basis handed to solvers: the scrambled one for pairs.
    pub fn problem_basis(&self) -> &Basis {
        match self {
            RandomLattice::Single(b) => b,
            RandomLattice::Pair(p) => &p.bad,
        }
    }
}

pub fn random_lattice<R: Rng + ?Sized>(
    n: usize,
    mode: &LatticeMode,
    rng: &mut R,
) -> Result<RandomLattice> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "random lattices need N >= 2, got {n}"
        )));
    }
    Ok(match mode {
        LatticeMode::UniformEntries { lo, hi } => {
            if lo > hi || (*lo == 0 && *hi == 0) {
                return Err(Error::InvalidArgument("empty entry range".into()));
            }
            RandomLattice::Single(random_uniform_basis(n, *lo, *hi, rng))
        }
        LatticeMode::PrimeDetHnf { prime_lo, prime_hi } => {
            if prime_hi < prime_lo || *prime_hi < 2 {
                return Err(Error::InvalidArgument("empty prime range".into()));
            }
            RandomLattice::Single(random_prime_det_hnf(n, *prime_lo, *prime_hi, rng))
        }
        LatticeMode::GoodBadPair(p) => RandomLattice::Pair(random_good_bad_pair(n, p, rng)),
        LatticeMode::Identity => RandomLattice::Single(Basis::identity(n)),
    })
}

/// Whether `v` is one of `±1`.
#[cfg(test)]
fn is_unit(v: &BigInt) -> bool {
    use num_traits::One;
    v.is_one() || (-v).is_one()
}

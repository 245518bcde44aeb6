use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::basis::{Basis, CoefficientVector};
use super::lll::{default_delta, gram_schmidt, lll_reduce_with_transform};
use crate::error::{Error, Result};

/// Largest dimension the exhaustive oracle accepts by default.
pub const DEFAULT_ORACLE_CAP: usize = 10;

/// Exact shortest-vector data of a lattice, with coefficient vectors expressed
/// in the basis that was passed in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SvpResult {
    /// `λ₁²`.
    pub lambda1_sq: BigInt,
    /// Every `x` with `‖x·B‖² = λ₁²`, sorted; closed under negation.
    pub minimizers: Vec<CoefficientVector>,
    /// Smallest `‖x‖_∞` over the minimizers, i.e. the least offset that makes
    /// some shortest vector representable.
    pub inf_norm_xmin: BigInt,
    /// `|Σ x_i|` of the canonical minimizer.
    pub coeff_sum_abs: BigInt,
}

impl SvpResult {
    /// Lexicographically smallest minimizer whose leading nonzero coordinate
    /// is positive.
    pub fn canonical(&self) -> &CoefficientVector {
        self.minimizers
            .iter()
            .find(|x| {
                x.iter()
                    .find(|v| !v.is_zero())
                    .is_some_and(|v| v.is_positive())
            })
            .expect("minimizers are closed under negation")
    }
}

pub fn svp_enumerate(b: &Basis) -> Result<SvpResult> {
    svp_enumerate_with_cap(b, DEFAULT_ORACLE_CAP)
}

/// Exhaustive enumeration of all lattice vectors no longer than the current
/// best, on the LLL-reduced basis with exact Gram-Schmidt bounds per level.
pub fn svp_enumerate_with_cap(b: &Basis, cap: usize) -> Result<SvpResult> {
    let n = b.nrows();
    if n > cap {
        return Err(Error::DimensionCap { dim: n, cap });
    }
    b.require_full_rank()?;
    let (reduced, u) = lll_reduce_with_transform(b, &default_delta())?;
    let gs = gram_schmidt(&reduced)?;

    let radius = reduced
        .row_norms_sq()
        .into_iter()
        .min()
        .map(BigRational::from_integer)
        .expect("nonempty basis");

    let mut search = Search {
        mu: &gs.mu,
        norms: &gs.norms_sq,
        radius,
        found: Vec::new(),
        y: vec![BigInt::zero(); n],
    };
    search.descend(n - 1, BigRational::zero());

    let best = search.radius.to_integer();
    let mut minimizers: Vec<CoefficientVector> = search
        .found
        .into_iter()
        .filter(|(_, norm)| *norm == best)
        .map(|(y, _)| u.as_matrix().combine(&y))
        .collect::<Result<_>>()?;
    minimizers.sort();
    minimizers.dedup();

    let inf_norm_xmin = minimizers
        .iter()
        .map(|x| x.iter().map(Signed::abs).max().unwrap_or_default())
        .min()
        .expect("at least one minimizer");
    let mut res = SvpResult {
        lambda1_sq: best,
        minimizers,
        inf_norm_xmin,
        coeff_sum_abs: BigInt::zero(),
    };
    res.coeff_sum_abs = res.canonical().iter().sum::<BigInt>().abs();
    Ok(res)
}

struct Search<'a> {
    mu: &'a [Vec<BigRational>],
    norms: &'a [BigRational],
    radius: BigRational,
    found: Vec<(Vec<BigInt>, BigInt)>,
    y: Vec<BigInt>,
}

impl Search<'_> {
    fn descend(&mut self, k: usize, partial: BigRational) {
        let n = self.y.len();
        let mut center = BigRational::zero();
        for i in k + 1..n {
            center -= &self.mu[i][k] * BigRational::from_integer(self.y[i].clone());
        }
        let rem = (&self.radius - &partial) / &self.norms[k];
        if rem.is_negative() {
            return;
        }
        let c = center.to_f64().expect("finite center");
        let s = rem.to_f64().expect("finite bound").sqrt();
        let lo = (c - s).floor() as i64 - 1;
        let hi = (c + s).ceil() as i64 + 1;
        for v in lo..=hi {
            let vi = BigInt::from(v);
            let d = BigRational::from_integer(vi.clone()) - &center;
            let total = &partial + &d * &d * &self.norms[k];
            // The radius may have shrunk inside an earlier branch.
            if total > self.radius {
                continue;
            }
            self.y[k] = vi;
            if k == 0 {
                if self.y.iter().all(Zero::is_zero) {
                    continue;
                }
                let norm = total.to_integer();
                if total < self.radius {
                    self.radius = total.clone();
                }
                self.found.push((self.y.clone(), norm));
            } else {
                self.descend(k - 1, total);
            }
        }
        self.y[k] = BigInt::zero();
    }
}

/// Exact `x` with `x · B = v`, or [`Error::NotInLattice`].
pub fn coeff_of_vector(b: &Basis, v: &[BigInt]) -> Result<CoefficientVector> {
    let n = b.nrows();
    if !b.is_square() {
        return Err(Error::NotSquare {
            rows: n,
            cols: b.ncols(),
        });
    }
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v.len(),
        });
    }
    // Solve Bᵀ xᵀ = vᵀ by Gaussian elimination over the rationals.
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n)
                .map(|j| BigRational::from_integer(b.entry(j, i).clone()))
                .collect();
            row.push(BigRational::from_integer(v[i].clone()));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(Error::Singular)?;
        a.swap(col, p);
        let piv = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &piv;
        }
        let prow = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                *x -= &f * y;
            }
        }
    }
    a.into_iter()
        .map(|row| {
            let x = &row[n];
            if x.is_integer() {
                Ok(x.to_integer())
            } else {
                Err(Error::NotInLattice)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(rows: &[&[i64]]) -> Basis {
        Basis::from_i64(rows).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn oracle_identity() {
        let r = svp_enumerate(&Basis::identity(2)).unwrap();
        assert_eq!(r.lambda1_sq, BigInt::from(1));
        assert_eq!(
            r.minimizers,
            vec![ints(&[-1, 0]), ints(&[0, -1]), ints(&[0, 1]), ints(&[1, 0])]
        );
        assert_eq!(r.canonical(), &ints(&[0, 1]));
    }

    #[test]
    fn oracle_worked_example() {
        let r = svp_enumerate(&b(&[&[1, 2], &[0, -2]])).unwrap();
        assert_eq!(r.lambda1_sq, BigInt::from(1));
        assert_eq!(r.minimizers, vec![ints(&[-1, -1]), ints(&[1, 1])]);
        assert_eq!(r.inf_norm_xmin, BigInt::from(1));
        assert_eq!(r.coeff_sum_abs, BigInt::from(2));
    }

    #[test]
    fn oracle_hexagonal_like() {
        let r = svp_enumerate(&b(&[&[2, 1], &[1, 2]])).unwrap();
        assert_eq!(r.lambda1_sq, BigInt::from(2));
        assert_eq!(r.minimizers, vec![ints(&[-1, 1]), ints(&[1, -1])]);
    }

    #[test]
    fn oracle_cap() {
        assert!(matches!(
            svp_enumerate_with_cap(&Basis::identity(4), 3),
            Err(Error::DimensionCap { dim: 4, cap: 3 })
        ));
    }

    #[test]
    fn coeff_of_vector_examples() {
        assert_eq!(
            coeff_of_vector(&Basis::identity(2), &ints(&[3, -1])).unwrap(),
            ints(&[3, -1])
        );
        let bb = b(&[&[1, 2], &[0, -2]]);
        assert_eq!(coeff_of_vector(&bb, &ints(&[1, 0])).unwrap(), ints(&[1, 1]));
        assert!(matches!(
            coeff_of_vector(&bb, &ints(&[1, 1])),
            Err(Error::NotInLattice)
        ));
    }
}

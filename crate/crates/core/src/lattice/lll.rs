use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::basis::{dot, Basis, UnimodularMatrix};
use crate::error::{Error, Result};

/// Exact Gram-Schmidt data of a row basis.
#[derive(Clone, Debug, PartialEq)]
pub struct GramSchmidtData {
    /// Orthogonalised rows `b*_i`.
    pub ortho_rows: Vec<Vec<BigRational>>,
    /// `mu[i][j] = <b_i, b*_j> / <b*_j, b*_j>` for `j < i`, ones on the diagonal,
    /// zeros above.
    pub mu: Vec<Vec<BigRational>>,
    /// `‖b*_i‖²`.
    pub norms_sq: Vec<BigRational>,
}

fn rat(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

fn rdot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gram_schmidt(b: &Basis) -> Result<GramSchmidtData> {
    let n = b.nrows();
    let mut ortho: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut norms: Vec<BigRational> = Vec::with_capacity(n);
    for i in 0..n {
        let bi: Vec<BigRational> = b.row(i).iter().map(rat).collect();
        let mut v = bi.clone();
        for j in 0..i {
            let m = rdot(&bi, &ortho[j]) / &norms[j];
            for (vk, ok) in v.iter_mut().zip(&ortho[j]) {
                *vk -= &m * ok;
            }
            mu[i][j] = m;
        }
        mu[i][i] = BigRational::one();
        let nv = rdot(&v, &v);
        if nv.is_zero() {
            return Err(Error::Singular);
        }
        norms.push(nv);
        ortho.push(v);
    }
    Ok(GramSchmidtData {
        ortho_rows: ortho,
        mu,
        norms_sq: norms,
    })
}

/// The usual choice of Lovász parameter, 3/4.
pub fn default_delta() -> BigRational {
    BigRational::new(3.into(), 4.into())
}

fn check_delta(delta: &BigRational) -> Result<()> {
    let quarter = BigRational::new(1.into(), 4.into());
    if delta <= &quarter || delta > &BigRational::one() {
        return Err(Error::InvalidDelta(delta.to_string()));
    }
    Ok(())
}

pub fn lll_reduce(b: &Basis, delta: &BigRational) -> Result<Basis> {
    lll_reduce_with_transform(b, delta).map(|(r, _)| r)
}

/// LLL reduction in exact rational arithmetic. Returns the reduced basis `R`
/// and the unimodular `U` with `R = U · B`.
pub fn lll_reduce_with_transform(
    b: &Basis,
    delta: &BigRational,
) -> Result<(Basis, UnimodularMatrix)> {
    check_delta(delta)?;
    let n = b.nrows();
    let mut rows: Vec<Vec<BigInt>> = b.rows().to_vec();
    let mut u: Vec<Vec<BigInt>> = Basis::identity(n).into_rows();
    if n == 1 {
        if rows[0].iter().all(Zero::is_zero) {
            return Err(Error::Singular);
        }
        return Ok((Basis::new(rows)?, UnimodularMatrix::identity(1)));
    }

    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut bn: Vec<BigRational> = vec![BigRational::zero(); n];
    let half = BigRational::new(1.into(), 2.into());

    // Gram-Schmidt data for row k from inner products, given rows < k.
    let compute_row = |k: usize,
                       rows: &[Vec<BigInt>],
                       mu: &mut Vec<Vec<BigRational>>,
                       bn: &mut Vec<BigRational>|
     -> Result<()> {
        for j in 0..k {
            let mut s = rat(&dot(&rows[k], &rows[j]));
            for i in 0..j {
                s -= &mu[j][i] * &mu[k][i] * &bn[i];
            }
            mu[k][j] = s / &bn[j];
        }
        let mut s = rat(&dot(&rows[k], &rows[k]));
        for j in 0..k {
            s -= &mu[k][j] * &mu[k][j] * &bn[j];
        }
        if s.is_zero() {
            return Err(Error::Singular);
        }
        bn[k] = s;
        Ok(())
    };

    fn size_reduce(
        k: usize,
        l: usize,
        rows: &mut [Vec<BigInt>],
        u: &mut [Vec<BigInt>],
        mu: &mut [Vec<BigRational>],
        half: &BigRational,
    ) {
        if mu[k][l].abs() <= *half {
            return;
        }
        let q = (&mu[k][l] + half).floor().to_integer();
        let (lo, hi) = rows.split_at_mut(k);
        for (x, y) in hi[0].iter_mut().zip(&lo[l]) {
            *x -= &q * y;
        }
        let (lo, hi) = u.split_at_mut(k);
        for (x, y) in hi[0].iter_mut().zip(&lo[l]) {
            *x -= &q * y;
        }
        let qr = BigRational::from_integer(q);
        let (lo, hi) = mu.split_at_mut(k);
        hi[0][l] -= &qr;
        for i in 0..l {
            hi[0][i] -= &qr * &lo[l][i];
        }
    }

    compute_row(0, &rows, &mut mu, &mut bn)?;
    let mut k = 1;
    let mut kmax = 0;
    while k < n {
        if k > kmax {
            kmax = k;
            compute_row(k, &rows, &mut mu, &mut bn)?;
        }
        size_reduce(k, k - 1, &mut rows, &mut u, &mut mu, &half);
        let lhs = &bn[k];
        let rhs = (delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bn[k - 1];
        if *lhs < rhs {
            rows.swap(k, k - 1);
            u.swap(k, k - 1);
            for j in 0..k - 1 {
                let t = mu[k][j].clone();
                mu[k][j] = mu[k - 1][j].clone();
                mu[k - 1][j] = t;
            }
            let m = mu[k][k - 1].clone();
            let big_b = &bn[k] + &m * &m * &bn[k - 1];
            mu[k][k - 1] = &m * &bn[k - 1] / &big_b;
            let new_bk = &bn[k - 1] * &bn[k] / &big_b;
            bn[k] = new_bk;
            bn[k - 1] = big_b;
            for i in k + 1..=kmax {
                let t = mu[i][k].clone();
                mu[i][k] = &mu[i][k - 1] - &m * &t;
                mu[i][k - 1] = t + &mu[k][k - 1] * &mu[i][k];
            }
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                size_reduce(k, l, &mut rows, &mut u, &mut mu, &half);
            }
            k += 1;
        }
    }
    Ok((
        Basis::new(rows)?,
        UnimodularMatrix::new_unchecked(Basis::new(u)?),
    ))
}

/// Size reduction and the Lovász condition, checked on freshly computed
/// Gram-Schmidt data.
pub fn is_lll_reduced(b: &Basis, delta: &BigRational) -> Result<bool> {
    let gs = gram_schmidt(b)?;
    let half = BigRational::new(1.into(), 2.into());
    let n = b.nrows();
    for i in 0..n {
        for j in 0..i {
            if gs.mu[i][j].abs() > half {
                return Ok(false);
            }
        }
    }
    for k in 1..n {
        let m = &gs.mu[k][k - 1];
        if delta * &gs.norms_sq[k - 1] > &gs.norms_sq[k] + m * m * &gs.norms_sq[k - 1] {
            return Ok(false);
        }
    }
    Ok(true)
}

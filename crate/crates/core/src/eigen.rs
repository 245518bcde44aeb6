//! Lowest eigenvalues of real symmetric operators.
//!
//! Small problems are densified and handed to nalgebra; larger ones use
//! Lanczos with full reorthogonalisation.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Largest dimension solved densely by [`lowest_eigenvalues`].
pub const DENSE_LIMIT: usize = 2000;

/// A real symmetric matrix known through its action.
pub trait SymmetricOperator {
    fn dim(&self) -> usize;
    /// `y = A x`.
    fn apply(&self, x: &[f64], y: &mut [f64]);
    fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        let mut col = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            self.apply(&e, &mut col);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = *v;
            }
            e[j] = 0.0;
        }
        m
    }
}

impl SymmetricOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let v = self * DVector::from_column_slice(x);
        y.copy_from_slice(v.as_slice());
    }

    fn to_dense(&self) -> DMatrix<f64> {
        self.clone()
    }
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    let scale = m.amax().max(1.0);
    if (m - m.transpose()).amax() > 1e-12 * scale {
        return Err(Error::Asymmetric);
    }
    Ok(())
}

/// All eigenvalues ascending.
pub fn dense_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    check_symmetric(m)?;
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Eigenpairs sorted by eigenvalue; the `i`-th column of the matrix is the
/// eigenvector of the `i`-th value.
pub fn dense_eigenpairs(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    check_symmetric(m)?;
    let se = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), m.nrows(), |r, c| se.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// `k` smallest eigenvalues, ascending.
pub fn lowest_eigenvalues<A: SymmetricOperator + ?Sized>(op: &A, k: usize) -> Result<Vec<f64>> {
    let n = op.dim();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let k = k.min(n);
    if n <= DENSE_LIMIT {
        let mut ev = dense_eigenvalues(&op.to_dense())?;
        ev.truncate(k);
        return Ok(ev);
    }
    lanczos_lowest(op, k, 1e-10)
}

/// Eigenvalues of a symmetric tridiagonal matrix below index `k`, by Sturm
/// sequence bisection. `off[i]` couples rows `i` and `i + 1`.
pub fn tridiagonal_lowest(diag: &[f64], off: &[f64], k: usize) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n.max(1));
    let count_below = |x: f64| -> usize {
        let mut c = 0;
        let mut q = 1.0f64;
        for i in 0..n {
            let b2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
            q = diag[i] - x - if i == 0 { 0.0 } else { b2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (1.0 + x.abs());
            }
            if q < 0.0 {
                c += 1;
            }
        }
        c
    };
    let mut radius = 0.0f64;
    for i in 0..n {
        let l = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let r = if i + 1 < n { off[i].abs() } else { 0.0 };
        radius = radius.max(diag[i].abs() + l + r);
    }
    (0..k.min(n))
        .map(|j| {
            let (mut lo, mut hi) = (-radius - 1.0, radius + 1.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if count_below(mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Lanczos with full reorthogonalisation. The Krylov space grows until the
/// `k` lowest Ritz values have residual below `tol` (relative to the
/// operator scale) or the whole space is spanned.
pub fn lanczos_lowest<A: SymmetricOperator + ?Sized>(
    op: &A,
    k: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    let n = op.dim();
    let k = k.min(n);
    let max_iter = n.min(600.max(4 * k + 100));

    // A fixed, dense start vector so results are reproducible.
    let mut q: Vec<f64> = (0..n)
        .map(|i| 1.0 + ((i * 7919) % 101) as f64 / 101.0)
        .collect();
    let norm = q.iter().map(|v| v * v).sum::<f64>().sqrt();
    q.iter_mut().for_each(|v| *v /= norm);

    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut scale = 0.0f64;
    loop {
        op.apply(&q, &mut w);
        let a: f64 = w.iter().zip(&q).map(|(x, y)| x * y).sum();
        basis.push(q.clone());
        alpha.push(a);
        for _ in 0..2 {
            for v in &basis {
                let c: f64 = w.iter().zip(v).map(|(x, y)| x * y).sum();
                w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        scale = scale.max(a.abs() + b);
        let m = alpha.len();
        let exhausted = b <= tol * scale.max(1.0) || m == max_iter;
        if exhausted || (m >= k && m % 10 == 0) {
            let t = DMatrix::from_fn(m, m, |i, j| {
                if i == j {
                    alpha[i]
                } else if i.abs_diff(j) == 1 {
                    beta[i.min(j)]
                } else {
                    0.0
                }
            });
            let (vals, vecs) = dense_eigenpairs(&t)?;
            let kk = k.min(m);
            let converged = (0..kk).all(|i| (b * vecs[(m - 1, i)]).abs() <= tol * scale.max(1.0));
            if exhausted || converged {
                return Ok(vals[..kk].to_vec());
            }
        }
        beta.push(b);
        q = w.iter().map(|v| v / b).collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Chain(usize);

    impl SymmetricOperator for Chain {
        fn dim(&self) -> usize {
            self.0
        }
        fn apply(&self, x: &[f64], y: &mut [f64]) {
            for i in 0..self.0 {
                let mut v = 0.0;
                if i > 0 {
                    v -= x[i - 1];
                }
                if i + 1 < self.0 {
                    v -= x[i + 1];
                }
                y[i] = v;
            }
        }
    }

    fn chain_levels(n: usize) -> Vec<f64> {
        (1..=n)
            .map(|j| -2.0 * (std::f64::consts::PI * j as f64 / (n + 1) as f64).cos())
            .collect()
    }

    #[test]
    fn dense_small_examples() {
        let s = 2f64.sqrt();
        let h0 = DMatrix::from_row_slice(3, 3, &[0.0, -s, 0.0, -s, 0.0, -s, 0.0, -s, 0.0]);
        let ev = lowest_eigenvalues(&h0, 3).unwrap();
        for (a, b) in ev.iter().zip([-2.0, 0.0, 2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![20.0, 1.0, 16.0]));
        assert_eq!(lowest_eigenvalues(&d, 2).unwrap(), vec![1.0, 16.0]);
        let asym = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 0.0]);
        assert!(matches!(dense_eigenvalues(&asym), Err(Error::Asymmetric)));
    }

    #[test]
    fn eigenpairs_are_sorted_and_orthonormal() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0]);
        let (vals, vecs) = dense_eigenpairs(&m).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let gram = vecs.transpose() * &vecs;
        assert!((gram - DMatrix::identity(3, 3)).amax() < 1e-12);
        for i in 0..3 {
            let v = vecs.column(i);
            assert!((&m * v - v * vals[i]).amax() < 1e-12);
        }
    }

    struct Graded(usize);

    impl SymmetricOperator for Graded {
        fn dim(&self) -> usize {
            self.0
        }
        fn apply(&self, x: &[f64], y: &mut [f64]) {
            for i in 0..self.0 {
                let mut v = i as f64 * x[i];
                if i > 0 {
                    v -= 0.3 * x[i - 1];
                }
                if i + 1 < self.0 {
                    v -= 0.3 * x[i + 1];
                }
                y[i] = v;
            }
        }
    }

    #[test]
    fn lanczos_matches_bisection() {
        let n = 2500;
        let ev = lowest_eigenvalues(&Graded(n), 4).unwrap();
        let diag: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let want = tridiagonal_lowest(&diag, &vec![-0.3; n - 1], 4);
        for i in 0..4 {
            assert!((ev[i] - want[i]).abs() < 1e-8, "{} vs {}", ev[i], want[i]);
        }
        let ev = lanczos_lowest(&Chain(40), 40, 1e-12).unwrap();
        for (a, b) in ev.iter().zip(chain_levels(40)) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn bisection_matches_chain_spectrum() {
        let n = 50;
        let ev = tridiagonal_lowest(&vec![0.0; n], &vec![-1.0; n - 1], 5);
        for (a, b) in ev.iter().zip(chain_levels(n)) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(tridiagonal_lowest(&[3.0], &[], 1), vec![3.0]);
    }
}

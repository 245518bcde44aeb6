use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::basis::Basis;
use crate::error::{Error, Result};

/// Row-style Hermite normal form: upper triangular, positive pivots, entries
/// above each pivot in `[0, pivot)`.
///
/// Works modulo `|det B|`: the lattice contains `det·e_j` for every `j`, so
/// entries may be reduced by it and a virtual row `det·e_col` may join the
/// elimination of each column. This keeps intermediate entries bounded.
pub fn hnf(b: &Basis) -> Result<Basis> {
    let det = b.determinant()?.abs();
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let n = b.nrows();
    let modulus = det;

    let mut work: Vec<Vec<BigInt>> = b
        .rows()
        .iter()
        .map(|r| r.iter().map(|v| v.mod_floor(&modulus)).collect())
        .collect();
    let mut out: Vec<Vec<BigInt>> = Vec::with_capacity(n);

    for col in 0..n {
        let mut virt = vec![BigInt::zero(); n];
        virt[col] = modulus.clone();
        work.push(virt);

        let pivot_idx = loop {
            let idx = work
                .iter()
                .enumerate()
                .filter(|(_, r)| !r[col].is_zero())
                .min_by(|(_, a), (_, b)| a[col].abs().cmp(&b[col].abs()))
                .map(|(i, _)| i)
                .expect("virtual row keeps the column nonzero");
            let pivot = work[idx].clone();
            let mut clean = true;
            for (i, r) in work.iter_mut().enumerate() {
                if i == idx || r[col].is_zero() {
                    continue;
                }
                let q = r[col].div_floor(&pivot[col]);
                for j in col..n {
                    r[j] -= &q * &pivot[j];
                    if j > col {
                        r[j] = r[j].mod_floor(&modulus);
                    }
                }
                if !r[col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break idx;
            }
        };

        let mut pivot = work.swap_remove(pivot_idx);
        if pivot[col].is_negative() {
            for v in pivot.iter_mut() {
                *v = -&*v;
            }
        }
        for v in pivot.iter_mut().skip(col + 1) {
            *v = v.mod_floor(&modulus);
        }
        out.push(pivot);
        work.retain(|r| r.iter().any(|v| !v.is_zero()));
    }

    for col in 0..n {
        let (above, rest) = out.split_at_mut(col);
        let p = &rest[0];
        for r in above.iter_mut() {
            let q = r[col].div_floor(&p[col]);
            if q.is_zero() {
                continue;
            }
            for j in col..n {
                r[j] -= &q * &p[j];
            }
        }
    }
    Basis::new(out)
}

/// Checks the defining conditions of the Hermite normal form.
pub fn is_hnf(b: &Basis) -> bool {
    if !b.is_square() || !b.is_upper_triangular() {
        return false;
    }
    let n = b.nrows();
    (0..n).all(|i| {
        let p = b.entry(i, i);
        p.is_positive() && (0..i).all(|r| !b.entry(r, i).is_negative() && b.entry(r, i) < p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::basis::{scramble, UnimodularMatrix};

    fn b(rows: &[&[i64]]) -> Basis {
        Basis::from_i64(rows).unwrap()
    }

    #[test]
    fn hnf_examples() {
        assert_eq!(
            hnf(&b(&[&[1, 2], &[0, -2]])).unwrap(),
            b(&[&[1, 0], &[0, 2]])
        );
        assert_eq!(hnf(&Basis::identity(5)).unwrap(), Basis::identity(5));
        assert_eq!(hnf(&b(&[&[0, 1], &[1, 0]])).unwrap(), Basis::identity(2));
    }

    #[test]
    fn hnf_rejects_singular() {
        assert!(matches!(hnf(&b(&[&[1, 2], &[2, 4]])), Err(Error::Singular)));
    }

    #[test]
    fn hnf_known_three_by_three() {
        // Lattice generated by (2,0,0),(1,3,0),(0,1,5) plus a scramble.
        let base = b(&[&[2, 0, 0], &[1, 3, 0], &[0, 1, 5]]);
        let u = UnimodularMatrix::new(b(&[&[1, 1, 0], &[0, 1, 1], &[1, 1, 1]])).unwrap();
        let h1 = hnf(&base).unwrap();
        let h2 = hnf(&scramble(&base, &u).unwrap()).unwrap();
        assert_eq!(h1, h2);
        assert!(is_hnf(&h1));
        assert_eq!(h1.determinant().unwrap(), BigInt::from(30));
        assert_eq!(hnf(&h1).unwrap(), h1);
    }
}

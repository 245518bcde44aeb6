//! Band-diagonalisation of HNF bases.
//!
//! Far entries of each dense column are cancelled with lattice-preserving row
//! operations `b_i ← b_i − δ Σ u_k b_{i+k}`, where `δ Σ u_k x_{i+k} = x_i` comes
//! from Bezout coefficients of the next few entries of the column. When the
//! target is odd and every candidate below it is even, the row is doubled
//! first; this leaves a sublattice and is tracked in `volume_factor`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{is_hnf, Basis};

/// Default number of rows below a target that may be combined.
pub const DEFAULT_J_MAX: usize = 4;

/// `(g, s, t)` with `s·a + t·b = g = gcd(a, b) ≥ 0` and `|s|` minimal.
fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if b.is_zero() {
        return (a.abs(), a.signum(), BigInt::zero());
    }
    if a.is_zero() {
        return (b.abs(), BigInt::zero(), b.signum());
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    while !r1.is_zero() {
        let q = r0.div_floor(&r1);
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s2);
    }
    let (g, mut s) = if r0.is_negative() {
        (-r0, -s0)
    } else {
        (r0, s0)
    };
    // Shift s into (-h, h] with h = |b/g| / 2.
    let period = (b / &g).abs();
    s = s.mod_floor(&period);
    if &s * 2 > period {
        s -= &period;
    }
    let t = (&g - &s * a) / b;
    (g, s, t)
}

/// Bezout combination: `delta · Σ coeffs_i · targets_i = goal`.
///
/// Coefficients come from folding the extended Euclidean algorithm over the
/// targets, each step normalised to the minimal-magnitude solution.
pub fn bezout_combo(targets: &[BigInt], goal: &BigInt) -> Result<(BigInt, Vec<BigInt>)> {
    let (first, rest) = targets.split_first().ok_or(Error::EmptyInput)?;
    let mut g = first.abs();
    let mut coeffs = vec![if first.is_zero() {
        BigInt::zero()
    } else {
        first.signum()
    }];
    for t in rest {
        let (g2, s, u) = ext_gcd(&g, t);
        for c in coeffs.iter_mut() {
            *c *= &s;
        }
        coeffs.push(u);
        g = g2;
    }
    if g.is_zero() {
        if goal.is_zero() {
            return Ok((BigInt::zero(), coeffs));
        }
        return Err(Error::NotDivisible {
            gcd: g.to_string(),
            goal: goal.to_string(),
        });
    }
    if !goal.is_multiple_of(&g) {
        return Err(Error::NotDivisible {
            gcd: g.to_string(),
            goal: goal.to_string(),
        });
    }
    Ok((goal / g, coeffs))
}

fn gcd_all(xs: &[BigInt]) -> BigInt {
    xs.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// What happened to one row of one dense column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowElimination {
    pub row: usize,
    pub column: usize,
    /// Number of rows below that were combined (the band extent of the row).
    pub extent: usize,
    pub doubled: bool,
    /// More than `j_max` rows were needed.
    pub extended: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BandedBasis {
    pub basis: Basis,
    /// Largest `(rightmost nonzero column) − (row index)` over all rows.
    pub bandwidth: usize,
    /// `|det out| / |det in|`, always `2^scalings`.
    pub volume_factor: BigInt,
    pub scalings: u32,
    pub eliminations: Vec<RowElimination>,
}

pub fn bandwidth(b: &Basis) -> usize {
    b.rows()
        .iter()
        .enumerate()
        .filter_map(|(i, r)| {
            r.iter()
                .rposition(|v| !v.is_zero())
                .map(|j| j.saturating_sub(i))
        })
        .max()
        .unwrap_or(0)
}

pub fn band_diagonalise(h: &Basis, j_max: usize) -> Result<BandedBasis> {
    if !is_hnf(h) {
        return Err(Error::NotHnf);
    }
    let n = h.nrows();
    let mut a = h.rows().to_vec();
    let mut scalings = 0u32;
    let mut eliminations = Vec::new();

    let dense: Vec<usize> = (0..n).filter(|&c| !h.entry(c, c).is_one()).collect();
    for &c in &dense {
        for i in 0..c.saturating_sub(1) {
            if a[i][c].is_zero() {
                continue;
            }
            // Only rows strictly between i and c may be used; reaching the
            // pivot row would not shorten the band.
            let reach = c - i - 1;
            let find = |a: &[Vec<BigInt>], lo: usize, hi: usize| -> Option<usize> {
                (lo..=hi).find(|&j| {
                    let col: Vec<BigInt> = (1..=j).map(|k| a[i + k][c].clone()).collect();
                    let g = gcd_all(&col);
                    !g.is_zero() && a[i][c].is_multiple_of(&g)
                })
            };
            let limit = j_max.min(reach);
            let mut doubled = false;
            let mut extended = false;
            let mut chosen = if limit >= 1 { find(&a, 1, limit) } else { None };
            if chosen.is_none() && reach > j_max && j_max >= 1 {
                let below: Vec<BigInt> = (1..=j_max).map(|k| a[i + k][c].clone()).collect();
                let g = gcd_all(&below);
                if a[i][c].is_odd() && !g.is_zero() && g.is_even() {
                    for v in a[i].iter_mut() {
                        *v *= 2;
                    }
                    scalings += 1;
                    doubled = true;
                    chosen = find(&a, 1, j_max);
                }
                if chosen.is_none() {
                    chosen = find(&a, j_max + 1, reach);
                    extended = chosen.is_some();
                }
            }
            let Some(j) = chosen else {
                if doubled {
                    eliminations.push(RowElimination {
                        row: i,
                        column: c,
                        extent: 0,
                        doubled,
                        extended,
                    });
                }
                continue;
            };
            let targets: Vec<BigInt> = (1..=j).map(|k| a[i + k][c].clone()).collect();
            let (delta, coeffs) = bezout_combo(&targets, &a[i][c])?;
            for (k, u) in coeffs.iter().enumerate() {
                let f = &delta * u;
                if f.is_zero() {
                    continue;
                }
                let src = a[i + 1 + k].clone();
                for (x, y) in a[i].iter_mut().zip(&src) {
                    *x -= &f * y;
                }
            }
            debug_assert!(a[i][c].is_zero());
            eliminations.push(RowElimination {
                row: i,
                column: c,
                extent: j,
                doubled,
                extended,
            });
        }
    }
    let basis = Basis::new(a)?;
    Ok(BandedBasis {
        bandwidth: bandwidth(&basis),
        basis,
        volume_factor: BigInt::one() << scalings,
        scalings,
        eliminations,
    })
}

/// Mean magnitude of entries on each upper diagonal, relative to the mean
/// diagonal magnitude of the same basis, averaged over an ensemble.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandProfile {
    pub mean_abs_entry_by_offset: BTreeMap<usize, f64>,
}

pub fn band_profile(ensemble: &[BandedBasis]) -> Result<BandProfile> {
    let first = ensemble.first().ok_or(Error::EmptyInput)?;
    let n = first.basis.nrows();
    let mut sums = vec![0.0f64; n];
    for bb in ensemble {
        let b = &bb.basis;
        if b.nrows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.nrows(),
            });
        }
        let mag = |i: usize, j: usize| b.entry(i, j).abs().to_f64().unwrap_or(f64::MAX);
        let diag = (0..n).map(|i| mag(i, i)).sum::<f64>() / n as f64;
        for (d, s) in sums.iter_mut().enumerate() {
            let m = (0..n - d).map(|i| mag(i, i + d)).sum::<f64>() / (n - d) as f64;
            *s += m / diag;
        }
    }
    let k = ensemble.len() as f64;
    Ok(BandProfile {
        mean_abs_entry_by_offset: sums.into_iter().map(|s| s / k).enumerate().collect(),
    })
}

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Integer combination of basis rows, `v = x · B`.
pub type CoefficientVector = Vec<BigInt>;

/// Row basis of an integer lattice. Row `i` is the basis vector `b_i`.
///
/// Most operations expect a square, full-rank basis. Rectangular bases are
/// allowed so that the reservoir-augmented basis (an extra zero row) can be
/// represented with the same type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Basis {
    rows: Vec<Vec<BigInt>>,
}

impl Basis {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let ncols = rows.first().map(Vec::len).ok_or(Error::EmptyInput)?;
        if ncols == 0 {
            return Err(Error::EmptyInput);
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch {
                expected: ncols,
                got: bad.len(),
            });
        }
        Ok(Basis { rows })
    }

    /// Square basis with a nonzero determinant.
    pub fn full_rank(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let b = Self::new(rows)?;
        b.require_full_rank()?;
        Ok(b)
    }

    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Basis { rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows[0].len()
    }

    /// Lattice dimension `N` (number of rows).
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.rows[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn into_rows(self) -> Vec<Vec<BigInt>> {
        self.rows
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.nrows(),
                cols: self.ncols(),
            });
        }
        Ok(bareiss_det(self.rows.clone()))
    }

    pub fn is_full_rank(&self) -> bool {
        self.determinant().map(|d| !d.is_zero()).unwrap_or(false)
    }

    pub fn require_full_rank(&self) -> Result<()> {
        if self.determinant()?.is_zero() {
            return Err(Error::Singular);
        }
        Ok(())
    }

    /// `x · B`.
    pub fn combine(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.nrows(),
                got: x.len(),
            });
        }
        let mut v = vec![BigInt::zero(); self.ncols()];
        for (xi, row) in x.iter().zip(&self.rows) {
            if xi.is_zero() {
                continue;
            }
            for (vj, bij) in v.iter_mut().zip(row) {
                *vj += xi * bij;
            }
        }
        Ok(v)
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Basis) -> Result<Basis> {
        if self.ncols() != other.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.ncols(),
                got: other.nrows(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| other.combine(r))
            .collect::<Result<Vec<_>>>()?;
        Basis::new(rows)
    }

    pub fn transpose(&self) -> Basis {
        let rows = (0..self.ncols())
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        Basis { rows }
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().take(i.min(r.len())).all(Zero::is_zero))
    }

    pub fn row_norms_sq(&self) -> Vec<BigInt> {
        self.rows.iter().map(|r| dot(r, r)).collect()
    }

    /// Mean Euclidean row length, used to report how much a scramble grew a basis.
    pub fn mean_row_length(&self) -> f64 {
        let total: f64 = self
            .row_norms_sq()
            .iter()
            .map(|n| n.to_f64().unwrap_or(f64::INFINITY).sqrt())
            .sum();
        total / self.nrows() as f64
    }

    /// Rows as `i64`, if every entry fits.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    /// Largest absolute entry.
    pub fn max_abs_entry(&self) -> BigInt {
        self.rows
            .iter()
            .flatten()
            .map(|v| v.abs())
            .max()
            .unwrap_or_default()
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, v) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num.div_floor(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Integer matrix with determinant ±1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularMatrix(Basis);

impl UnimodularMatrix {
    pub fn new(m: Basis) -> Result<Self> {
        if !m.determinant()?.abs().is_one() {
            return Err(Error::InvalidArgument(
                "matrix is not unimodular".to_string(),
            ));
        }
        Ok(UnimodularMatrix(m))
    }

    pub(crate) fn new_unchecked(m: Basis) -> Self {
        UnimodularMatrix(m)
    }

    pub fn identity(n: usize) -> Self {
        UnimodularMatrix(Basis::identity(n))
    }

    pub fn as_matrix(&self) -> &Basis {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }
}

/// `U · B`: same lattice, different basis.
pub fn scramble(b: &Basis, u: &UnimodularMatrix) -> Result<Basis> {
    u.as_matrix().mul(b)
}

/// Lattice vector together with its squared norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeVector {
    pub coords: Vec<BigInt>,
    pub norm_sq: BigInt,
}

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        let norm_sq = dot(&coords, &coords);
        LatticeVector { coords, norm_sq }
    }
}

/// Gram matrix `G = B Bᵀ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    entries: Vec<Vec<BigInt>>,
}

impl GramMatrix {
    pub fn from_entries(entries: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if let Some(r) = entries.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: r.len(),
            });
        }
        Ok(GramMatrix { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    /// `Σ_ij G_ij x_i x_j`, which equals `‖x · B‖²`.
    pub fn norm_sq(&self, x: &[BigInt]) -> Result<BigInt> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let mut acc = BigInt::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let row: BigInt = self.entries[i].iter().zip(x).map(|(g, xj)| g * xj).sum();
            acc += xi * row;
        }
        Ok(acc)
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Sylvester's criterion on exact leading principal minors.
    pub fn is_positive_definite(&self) -> bool {
        (1..=self.dim()).all(|k| {
            let minor = self.entries[..k].iter().map(|r| r[..k].to_vec()).collect();
            bareiss_det(minor).is_positive()
        })
    }

    /// Entries as `i128`, failing if any does not fit.
    pub fn to_i128(&self) -> Result<Vec<Vec<i128>>> {
        self.entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| {
                        v.to_i128()
                            .ok_or_else(|| Error::Overflow(format!("Gram entry {v}")))
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn gram(b: &Basis) -> GramMatrix {
    let entries = b
        .rows()
        .iter()
        .map(|ri| b.rows().iter().map(|rj| dot(ri, rj)).collect())
        .collect();
    GramMatrix { entries }
}

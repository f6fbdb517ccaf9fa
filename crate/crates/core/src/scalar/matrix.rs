use std::fmt;
use std::ops::Index;

use super::{GaussianRational, Rational, ScalarError};

/// Dense row-major matrix over ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussianRational>,
}

/// Dense vector over ℚ(i), indexed by quantum state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CVector(Vec<GaussianRational>);

impl CMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<GaussianRational>) -> Result<Self, ScalarError> {
        if entries.len() != rows * cols {
            return Err(ScalarError::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(CMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self, ScalarError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(ScalarError::DimensionMismatch {
                    expected: ncols,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(CMatrix { rows: nrows, cols: ncols, entries })
    }

    /// Builds a real matrix `scale · m` from integer rows.
    pub fn from_integer_rows(scale: Rational, rows: &[&[i64]]) -> Result<Self, ScalarError> {
        CMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| GaussianRational::real(&scale * &Rational::from(x))).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n * n)
            .map(|k| if k / n == k % n { GaussianRational::one() } else { GaussianRational::zero() })
            .collect();
        CMatrix { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &GaussianRational {
        &self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[GaussianRational] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[GaussianRational]> {
        self.entries.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn transpose(&self) -> CMatrix {
        let entries = (0..self.cols)
            .flat_map(|c| (0..self.rows).map(move |r| (r, c)))
            .map(|(r, c)| self.get(r, c).clone())
            .collect();
        CMatrix { rows: self.cols, cols: self.rows, entries }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let mut t = self.transpose();
        for e in &mut t.entries {
            *e = e.conj();
        }
        t
    }

    pub fn scale(&self, c: &GaussianRational) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn mul(&self, other: &CMatrix) -> Result<CMatrix, ScalarError> {
        if self.cols != other.rows {
            return Err(ScalarError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = GaussianRational::zero();
                for k in 0..self.cols {
                    acc = &acc + &(self.get(r, k) * other.get(k, c));
                }
                entries.push(acc);
            }
        }
        Ok(CMatrix { rows: self.rows, cols: other.cols, entries })
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector, ScalarError> {
        if self.cols != v.len() {
            return Err(ScalarError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(CVector(
            self.row_iter()
                .map(|row| {
                    row.iter()
                        .zip(v.iter())
                        .fold(GaussianRational::zero(), |acc, (a, x)| &acc + &(a * x))
                })
                .collect(),
        ))
    }

    /// True iff `m·m† = I` exactly. Non-square matrices are never unitary.
    pub fn is_unitary(&self) -> bool {
        self.is_square()
            && self
                .mul(&self.adjoint())
                .map(|p| p == CMatrix::identity(self.rows))
                .unwrap_or(false)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == CMatrix::identity(self.rows)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = GaussianRational;
    fn index(&self, (r, c): (usize, usize)) -> &GaussianRational {
        self.get(r, c)
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.row_iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl CVector {
    pub fn new(entries: Vec<GaussianRational>) -> Self {
        CVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        CVector(vec![GaussianRational::zero(); n])
    }

    /// Standard basis vector `e_k` of dimension `n`.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = CVector::zeros(n);
        v.0[k] = GaussianRational::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GaussianRational> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[GaussianRational] {
        &self.0
    }

    pub fn get(&self, k: usize) -> &GaussianRational {
        &self.0[k]
    }

    pub fn set(&mut self, k: usize, value: GaussianRational) {
        self.0[k] = value;
    }

    pub fn norm_sq(&self) -> Rational {
        self.0.iter().map(GaussianRational::norm_sq).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(GaussianRational::is_zero)
    }
}

impl Index<usize> for CVector {
    type Output = GaussianRational;
    fn index(&self, k: usize) -> &GaussianRational {
        &self.0[k]
    }
}

impl FromIterator<GaussianRational> for CVector {
    fn from_iter<I: IntoIterator<Item = GaussianRational>>(iter: I) -> Self {
        CVector(iter.into_iter().collect())
    }
}

impl fmt::Display for CVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", cells.join(" "))
    }
}

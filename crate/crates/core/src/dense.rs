//! Small dense quaternion matrices and their real counterparts.
//!
//! For `M = M₀ + M₁i + M₂j + M₃k` of shape m×n the real counterpart is the
//! 4m×4n block matrix
//!
//! ```text
//!        ⎡ M₀ −M₁ −M₂ −M₃ ⎤
//! ℛ(M) = ⎢ M₁  M₀ −M₃  M₂ ⎥
//!        ⎢ M₂  M₃  M₀ −M₁ ⎥
//!        ⎣ M₃ −M₂  M₁  M₀ ⎦
//! ```
//!
//! and its first block column `ℛ(M)_c` stacks `M₀, M₁, M₂, M₃`. Products map
//! to products (`ℛ(MN) = ℛ(M)ℛ(N)`, `ℛ(MN)_c = ℛ(M)ℛ(N)_c`) and the adjoint
//! maps to the transpose. These are used by tests and diagnostics only.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::quat::Quaternion;
use crate::vector::QVector;

/// Row-major dense quaternion matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct QDenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

/// Row-major dense real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl QDenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Quaternion::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Quaternion::ONE } else { Quaternion::ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Quaternion>) -> Result<Self, Error> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[QVector]) -> Result<Self, Error> {
        let rows = columns.first().map_or(0, QVector::len);
        for c in columns {
            if c.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: c.len() });
            }
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i]))
    }

    pub fn diagonal(d: &[Quaternion]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { d[i] } else { Quaternion::ZERO })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Quaternion) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> QVector {
        QVector::from_fn(self.rows, |i| self.get(i, j))
    }

    /// Leading `rows × cols` block.
    pub fn block(&self, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(i, j))
    }

    /// Conjugate transpose, `(M*)ᵢⱼ = conj(Mⱼᵢ)`.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn mul(&self, rhs: &QDenseMatrix) -> Result<QDenseMatrix, Error> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &QVector) -> Result<QVector, Error> {
        if self.cols != x.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: x.len() });
        }
        Ok(QVector::from_fn(self.rows, |i| (0..self.cols).map(|j| self.get(i, j) * x[j]).sum()))
    }

    pub fn sub(&self, rhs: &QDenseMatrix) -> Result<QDenseMatrix, Error> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, found: rhs.rows * rhs.cols });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        })
    }

    /// Multiplies every entry on the right by a quaternion scalar.
    pub fn mul_scalar_right(&self, s: Quaternion) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| a * s).collect() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        crate::vector::norm(&self.data)
    }

    /// Largest entry magnitude away from the main diagonal.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    m = m.max(self.get(i, j).abs());
                }
            }
        }
        m
    }

    /// The full 4m×4n real counterpart.
    pub fn real_counterpart(&self) -> RealMatrix {
        let (m, n) = (self.rows, self.cols);
        let mut out = RealMatrix::zeros(4 * m, 4 * n);
        for i in 0..m {
            for j in 0..n {
                let q = self.get(i, j);
                let (a, b, c, d) = (q.w, q.x, q.y, q.z);
                let blocks = [[a, -b, -c, -d], [b, a, -d, c], [c, d, a, -b], [d, -c, b, a]];
                for (br, row) in blocks.iter().enumerate() {
                    for (bc, &v) in row.iter().enumerate() {
                        out.set(br * m + i, bc * n + j, v);
                    }
                }
            }
        }
        out
    }

    /// The 4m×n first block column `[M₀; M₁; M₂; M₃]`.
    pub fn first_block_column(&self) -> RealMatrix {
        let (m, n) = (self.rows, self.cols);
        let mut out = RealMatrix::zeros(4 * m, n);
        for i in 0..m {
            for j in 0..n {
                for (c, v) in self.get(i, j).to_array().into_iter().enumerate() {
                    out.set(c * m + i, j, v);
                }
            }
        }
        out
    }

    /// Inverse of [`QDenseMatrix::first_block_column`].
    pub fn from_first_block_column(r: &RealMatrix) -> Result<Self, Error> {
        if r.rows() % 4 != 0 {
            return Err(Error::InvalidArgument("row count is not a multiple of 4"));
        }
        let m = r.rows() / 4;
        Ok(Self::from_fn(m, r.cols(), |i, j| {
            Quaternion::new(r.get(i, j), r.get(m + i, j), r.get(2 * m + i, j), r.get(3 * m + i, j))
        }))
    }

    /// Recovers `M` from `ℛ(M)` by reading its first block column.
    pub fn from_real_counterpart(r: &RealMatrix) -> Result<Self, Error> {
        if r.rows() % 4 != 0 || r.cols() % 4 != 0 {
            return Err(Error::InvalidArgument("real counterpart dimensions must be multiples of 4"));
        }
        let (m, n) = (r.rows() / 4, r.cols() / 4);
        Ok(Self::from_fn(m, n, |i, j| {
            Quaternion::new(r.get(i, j), r.get(m + i, j), r.get(2 * m + i, j), r.get(3 * m + i, j))
        }))
    }
}

/// First block column of a quaternion vector, `[x₀; x₁; x₂; x₃] ∈ ℝ⁴ⁿ`.
pub fn vector_first_block_column(x: &QVector) -> Vec<f64> {
    let n = x.len();
    let mut out = vec![0.0; 4 * n];
    for (i, q) in x.iter().enumerate() {
        for (c, v) in q.to_array().into_iter().enumerate() {
            out[c * n + i] = v;
        }
    }
    out
}

/// Inverse of [`vector_first_block_column`].
pub fn vector_from_first_block_column(r: &[f64]) -> Result<QVector, Error> {
    if r.len() % 4 != 0 {
        return Err(Error::InvalidArgument("length is not a multiple of 4"));
    }
    let n = r.len() / 4;
    Ok(QVector::from_fn(n, |i| Quaternion::new(r[i], r[n + i], r[2 * n + i], r[3 * n + i])))
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, Error> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, rhs: &RealMatrix) -> Result<RealMatrix, Error> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>, Error> {
        if self.cols != x.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: x.len() });
        }
        Ok((0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn max_abs_diff(&self, other: &RealMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| libm::fabs(a - b)).fold(0.0, f64::max)
    }
}

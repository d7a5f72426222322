//! Compressed sparse row storage for real and quaternion matrices.

use alloc::vec;
use alloc::vec::Vec;

use crate::dense::{QDenseMatrix, RealMatrix};
use crate::error::Error;
use crate::quat::Quaternion;

/// Sorts triplets by (row, col), sums duplicates and builds CSR arrays.
/// Explicit zeros are kept.
fn compress<T: Copy + core::ops::AddAssign>(
    rows: usize,
    cols: usize,
    mut entries: Vec<(usize, usize, T)>,
) -> Result<(Vec<usize>, Vec<usize>, Vec<T>), Error> {
    for &(r, c, _) in &entries {
        if r >= rows || c >= cols {
            return Err(Error::IndexOutOfRange { row: r, col: c, rows, cols });
        }
    }
    entries.sort_by_key(|&(r, c, _)| (r, c));
    let mut row_ptr = vec![0usize; rows + 1];
    let mut col_idx: Vec<usize> = Vec::with_capacity(entries.len());
    let mut vals: Vec<T> = Vec::with_capacity(entries.len());
    let mut last: Option<(usize, usize)> = None;
    for (r, c, v) in entries {
        if last == Some((r, c)) {
            *vals.last_mut().expect("duplicate follows an entry") += v;
            continue;
        }
        last = Some((r, c));
        row_ptr[r + 1] += 1;
        col_idx.push(c);
        vals.push(v);
    }
    for i in 0..rows {
        row_ptr[i + 1] += row_ptr[i];
    }
    Ok((row_ptr, col_idx, vals))
}

/// Real CSR matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(rows: usize, cols: usize, entries: Vec<(usize, usize, f64)>) -> Result<Self, Error> {
        let (row_ptr, col_idx, values) = compress(rows, cols, entries)?;
        Ok(Self { rows, cols, row_ptr, col_idx, values })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn from_dense(m: &RealMatrix) -> Self {
        let mut t = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if m.get(i, j) != 0.0 {
                    t.push((i, j, m.get(i, j)));
                }
            }
        }
        Self::from_triplets(m.rows(), m.cols(), t).expect("indices are in range")
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Stored entries of row `i` as `(col, value)`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn to_dense(&self) -> RealMatrix {
        let mut m = RealMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for (j, v) in self.row(i) {
                m.set(i, j, v);
            }
        }
        m
    }

    /// `y = A x` for quaternion `x`; real entries commute with quaternions.
    pub(crate) fn apply_quat(&self, x: &[Quaternion], y: &mut [Quaternion]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.rows) {
            let mut acc = Quaternion::ZERO;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += x[self.col_idx[k]] * self.values[k];
            }
            *yi = acc;
        }
    }

    /// `y = Aᵀ x` for quaternion `x`.
    pub(crate) fn apply_transpose_quat(&self, x: &[Quaternion], y: &mut [Quaternion]) {
        y.iter_mut().for_each(|v| *v = Quaternion::ZERO);
        for (i, &xi) in x.iter().enumerate().take(self.rows) {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                y[self.col_idx[k]] += xi * self.values[k];
            }
        }
    }
}

/// Quaternion CSR matrix. Values are kept as four parallel real arrays.
#[derive(Clone, Debug, PartialEq)]
pub struct QSparseMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    w: Vec<f64>,
    x: Vec<f64>,
    y: Vec<f64>,
    z: Vec<f64>,
}

impl QSparseMatrix {
    fn from_parts(rows: usize, cols: usize, row_ptr: Vec<usize>, col_idx: Vec<usize>, vals: Vec<Quaternion>) -> Self {
        Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            w: vals.iter().map(|q| q.w).collect(),
            x: vals.iter().map(|q| q.x).collect(),
            y: vals.iter().map(|q| q.y).collect(),
            z: vals.iter().map(|q| q.z).collect(),
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(rows: usize, cols: usize, entries: Vec<(usize, usize, Quaternion)>) -> Result<Self, Error> {
        let (row_ptr, col_idx, vals) = compress(rows, cols, entries)?;
        Ok(Self::from_parts(rows, cols, row_ptr, col_idx, vals))
    }

    pub fn from_diagonal(d: &[Quaternion]) -> Self {
        let n = d.len();
        Self::from_parts(n, n, (0..=n).collect(), (0..n).collect(), d.to_vec())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![Quaternion::ONE; n])
    }

    /// Keeps every nonzero entry of a dense matrix.
    pub fn from_dense(m: &QDenseMatrix) -> Self {
        let mut t = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m.get(i, j).is_zero() {
                    t.push((i, j, m.get(i, j)));
                }
            }
        }
        Self::from_triplets(m.rows(), m.cols(), t).expect("indices are in range")
    }

    /// `A₀·c` for a real sparse `A₀` and quaternion scalar `c`.
    pub fn from_real_scaled(a0: &CsrMatrix, c: Quaternion) -> Self {
        let vals = a0.values.iter().map(|&v| c * v).collect();
        Self::from_parts(a0.rows, a0.cols, a0.row_ptr.clone(), a0.col_idx.clone(), vals)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    #[inline]
    fn value(&self, k: usize) -> Quaternion {
        Quaternion::new(self.w[k], self.x[k], self.y[k], self.z[k])
    }

    /// Stored entries of row `i` as `(col, value)`, columns increasing.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Quaternion)> + '_ {
        (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (self.col_idx[k], self.value(k)))
    }

    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        self.row(i).find(|&(c, _)| c == j).map_or(Quaternion::ZERO, |(_, v)| v)
    }

    pub fn to_dense(&self) -> QDenseMatrix {
        let mut m = QDenseMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for (j, v) in self.row(i) {
                m.set(i, j, v);
            }
        }
        m
    }

    /// `y = A x`, `yᵢ = Σⱼ aᵢⱼ xⱼ`.
    pub(crate) fn apply_slice(&self, x: &[Quaternion], y: &mut [Quaternion]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.rows) {
            let (mut s0, mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0, 0.0);
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let (a0, a1, a2, a3) = (self.w[k], self.x[k], self.y[k], self.z[k]);
                let b = x[self.col_idx[k]];
                s0 += a0 * b.w - a1 * b.x - a2 * b.y - a3 * b.z;
                s1 += a0 * b.x + a1 * b.w + a2 * b.z - a3 * b.y;
                s2 += a0 * b.y - a1 * b.z + a2 * b.w + a3 * b.x;
                s3 += a0 * b.z + a1 * b.y - a2 * b.x + a3 * b.w;
            }
            *yi = Quaternion::new(s0, s1, s2, s3);
        }
    }

    /// `y = A* x`, `yⱼ = Σᵢ conj(aᵢⱼ) xᵢ`.
    pub(crate) fn apply_adjoint_slice(&self, x: &[Quaternion], y: &mut [Quaternion]) {
        y.iter_mut().for_each(|v| *v = Quaternion::ZERO);
        for (i, &xi) in x.iter().enumerate().take(self.rows) {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                y[self.col_idx[k]] += self.value(k).conj() * xi;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed_and_sorted() {
        let m = CsrMatrix::from_triplets(2, 2, vec![(1, 1, 2.0), (0, 1, 1.0), (1, 1, 3.0), (0, 0, 0.0)]).unwrap();
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.get(1, 1), 5.0);
        assert_eq!(m.row(0).map(|(c, _)| c).collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn out_of_range_is_rejected() {
        let err = QSparseMatrix::from_triplets(2, 2, vec![(2, 0, Quaternion::ONE)]).unwrap_err();
        assert_eq!(err, Error::IndexOutOfRange { row: 2, col: 0, rows: 2, cols: 2 });
    }

    #[test]
    fn dense_round_trip() {
        let d = QDenseMatrix::from_fn(3, 3, |i, j| {
            if (i + j) % 2 == 0 {
                Quaternion::new(i as f64, j as f64, 1.0, -1.0)
            } else {
                Quaternion::ZERO
            }
        });
        assert_eq!(QSparseMatrix::from_dense(&d).to_dense(), d);
    }
}

//! Square quaternion linear maps with forward and adjoint application.

use alloc::vec;
use alloc::vec::Vec;

use crate::dense::{QDenseMatrix, RealMatrix};
use crate::error::Error;
use crate::precond::Preconditioner;
use crate::quat::Quaternion;
use crate::sparse::{CsrMatrix, QSparseMatrix};
use crate::vector::{check_len, QVector};

/// A linear map `Qⁿ → Qᵐ` with `y = A x` under left action of the entries.
///
/// Implementors provide slice kernels; callers of the kernels guarantee the
/// slice lengths match [`shape`](QLinearOperator::shape).
pub trait QLinearOperator {
    /// `(rows, cols)`.
    fn shape(&self) -> (usize, usize);

    fn apply_to(&self, x: &[Quaternion], y: &mut [Quaternion]);

    fn apply_adjoint_to(&self, x: &[Quaternion], y: &mut [Quaternion]);

    fn apply(&self, x: &QVector) -> Result<QVector, Error> {
        let (m, n) = self.shape();
        check_len(n, x.len())?;
        let mut y = QVector::zeros(m);
        self.apply_to(x.as_slice(), y.as_mut_slice());
        Ok(y)
    }

    fn apply_adjoint(&self, x: &QVector) -> Result<QVector, Error> {
        let (m, n) = self.shape();
        check_len(m, x.len())?;
        let mut y = QVector::zeros(n);
        self.apply_adjoint_to(x.as_slice(), y.as_mut_slice());
        Ok(y)
    }
}

impl<T: QLinearOperator + ?Sized> QLinearOperator for &T {
    fn shape(&self) -> (usize, usize) {
        (**self).shape()
    }
    fn apply_to(&self, x: &[Quaternion], y: &mut [Quaternion]) {
        (**self).apply_to(x, y)
    }
    fn apply_adjoint_to(&self, x: &[Quaternion], y: &mut [Quaternion]) {
        (**self).apply_adjoint_to(x, y)
    }
}

impl QLinearOperator for QSparseMatrix {
    fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }
    fn apply_to(&self, x: &[Quaternion], y: &mut [Quaternion]) {
        self.apply_slice(x, y)
    }
    fn apply_adjoint_to(&self, x: &[Quaternion], y: &mut [Quaternion]) {
        self.apply_adjoint_slice(x, y)
    }
}

impl QLinearOperator for QDenseMatrix {
    fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }
    fn apply_to(&self, x: &[Quaternion], y: &mut [Quaternion]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = x.iter().enumerate().map(|(j, &xj)| self.get(i, j) * xj).sum();
        }
    }
    fn apply_adjoint_to(&self, x: &[Quaternion], y: &mut [Quaternion]) {
        for (j, yj) in y.iter_mut().enumerate() {
            *yj = x.iter().enumerate().map(|(i, &xi)| self.get(i, j).conj() * xi).sum();
        }
    }
}

/// The identity map on `Qⁿ`.
#[derive(Clone, Copy, Debug)]
pub struct Identity(pub usize);

impl QLinearOperator for Identity {
    fn shape(&self) -> (usize, usize) {
        (self.0, self.0)
    }
    fn apply_to(&self, x: &[Quaternion], y: &mut [Quaternion]) {
        y.copy_from_slice(x)
    }
    fn apply_adjoint_to(&self, x: &[Quaternion], y: &mut [Quaternion]) {
        y.copy_from_slice(x)
    }
}

/// `A = c₀A₀ + c₁A₀i + c₂A₀j + c₃A₀k = A₀·c` for a real sparse `A₀`.
#[derive(Clone, Debug)]
pub struct ChannelScaled {
    a0: CsrMatrix,
    coeff: Quaternion,
}

impl ChannelScaled {
    pub fn new(a0: CsrMatrix, coeff: Quaternion) -> Result<Self, Error> {
        if a0.rows() != a0.cols() {
            return Err(Error::NotSquare { rows: a0.rows(), cols: a0.cols() });
        }
        Ok(Self { a0, coeff })
    }

    pub fn base(&self) -> &CsrMatrix {
        &self.a0
    }

    pub fn coeff(&self) -> Quaternion {
        self.coeff
    }

    /// Explicit quaternion CSR assembly of the same operator.
    pub fn to_sparse(&self) -> QSparseMatrix {
        QSparseMatrix::from_real_scaled(&self.a0, self.coeff)
    }
}

impl QLinearOperator for ChannelScaled {
    fn shape(&self) -> (usize, usize) {
        (self.a0.rows(), self.a0.cols())
    }
    fn apply_to(&self, x: &[Quaternion], y: &mut [Quaternion]) {
        self.a0.apply_quat(x, y);
        let c = self.coeff;
        y.iter_mut().for_each(|v| *v = c * *v);
    }
    fn apply_adjoint_to(&self, x: &[Quaternion], y: &mut [Quaternion]) {
        self.a0.apply_transpose_quat(x, y);
        let c = self.coeff.conj();
        y.iter_mut().for_each(|v| *v = c * *v);
    }
}

/// `A = (B⁽¹⁾ ⊗ B⁽²⁾)·c` acting on column-stacked `n×n` quaternion images,
/// applied as `vec(B⁽²⁾ X B⁽¹⁾ᵀ)` without forming the Kronecker product.
#[derive(Clone, Debug)]
pub struct KronToeplitz {
    b1: RealMatrix,
    b2: RealMatrix,
    coeff: Quaternion,
}

impl KronToeplitz {
    pub fn new(b1: RealMatrix, b2: RealMatrix, coeff: Quaternion) -> Result<Self, Error> {
        for b in [&b1, &b2] {
            if b.rows() != b.cols() {
                return Err(Error::NotSquare { rows: b.rows(), cols: b.cols() });
            }
        }
        if b1.rows() != b2.rows() {
            return Err(Error::DimensionMismatch { expected: b1.rows(), found: b2.rows() });
        }
        Ok(Self { b1, b2, coeff })
    }

    /// Side length `n` of the image; the operator acts on `Qⁿ²`.
    pub fn side(&self) -> usize {
        self.b1.rows()
    }

    pub fn factors(&self) -> (&RealMatrix, &RealMatrix) {
        (&self.b1, &self.b2)
    }

    pub fn coeff(&self) -> Quaternion {
        self.coeff
    }

    /// Checked application to a vector whose length must be `n²`.
    pub fn apply_checked(&self, x: &QVector) -> Result<QVector, Error> {
        let n = self.side();
        if x.len() != n * n {
            return Err(Error::InvalidArgument("vector length must equal n² for the Kronecker operator"));
        }
        self.apply(x)
    }

    /// `Y = L X Rᵀ` on column-major `n×n` quaternion arrays, then `Y ← s·Y`.
    fn sandwich(left: &RealMatrix, right: &RealMatrix, s: Quaternion, x: &[Quaternion], y: &mut [Quaternion]) {
        let n = left.rows();
        // T = X Rᵀ: T[a, c] = Σ_b X[a, b] R[c, b]
        let mut t = vec![Quaternion::ZERO; n * n];
        for c in 0..n {
            for b in 0..n {
                let r = right.get(c, b);
                if r == 0.0 {
                    continue;
                }
                let (src, dst) = (&x[b * n..(b + 1) * n], &mut t[c * n..(c + 1) * n]);
                for (d, &v) in dst.iter_mut().zip(src) {
                    *d += v * r;
                }
            }
        }
        // Y[:, c] = L T[:, c]
        for c in 0..n {
            let col = &t[c * n..(c + 1) * n];
            for r in 0..n {
                let mut acc = Quaternion::ZERO;
                for (a, &v) in col.iter().enumerate() {
                    let l = left.get(r, a);
                    if l != 0.0 {
                        acc += v * l;
                    }
                }
                y[c * n + r] = s * acc;
            }
        }
    }
}

impl QLinearOperator for KronToeplitz {
    fn shape(&self) -> (usize, usize) {
        let n = self.side();
        (n * n, n * n)
    }
    fn apply_to(&self, x: &[Quaternion], y: &mut [Quaternion]) {
        Self::sandwich(&self.b2, &self.b1, self.coeff, x, y)
    }
    fn apply_adjoint_to(&self, x: &[Quaternion], y: &mut [Quaternion]) {
        Self::sandwich(&self.b2.transpose(), &self.b1.transpose(), self.coeff.conj(), x, y)
    }
}

/// Left-preconditioned operator `M⁻¹A`, with adjoint `A*M⁻*`.
pub struct PreconditionedOperator<'a, A: ?Sized, M: ?Sized> {
    a: &'a A,
    m: &'a M,
}

impl<'a, A: QLinearOperator + ?Sized, M: Preconditioner + ?Sized> PreconditionedOperator<'a, A, M> {
    pub fn new(a: &'a A, m: &'a M) -> Result<Self, Error> {
        let (r, c) = a.shape();
        if r != c {
            return Err(Error::NotSquare { rows: r, cols: c });
        }
        check_len(r, m.dim())?;
        Ok(Self { a, m })
    }
}

impl<A: QLinearOperator + ?Sized, M: Preconditioner + ?Sized> QLinearOperator for PreconditionedOperator<'_, A, M> {
    fn shape(&self) -> (usize, usize) {
        self.a.shape()
    }
    fn apply_to(&self, x: &[Quaternion], y: &mut [Quaternion]) {
        let mut t: Vec<Quaternion> = vec![Quaternion::ZERO; y.len()];
        self.a.apply_to(x, &mut t);
        self.m.apply_inverse_to(&t, y);
    }
    fn apply_adjoint_to(&self, x: &[Quaternion], y: &mut [Quaternion]) {
        let mut t: Vec<Quaternion> = vec![Quaternion::ZERO; x.len()];
        self.m.apply_inverse_adjoint_to(x, &mut t);
        self.a.apply_adjoint_to(&t, y);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diag_i_times_j_is_k() {
        let a = QSparseMatrix::from_diagonal(&[Quaternion::I]);
        let y = a.apply(&QVector::from_vec(vec![Quaternion::J])).unwrap();
        assert_eq!(y[0], Quaternion::K);
        let z = a.apply_adjoint(&QVector::from_vec(vec![Quaternion::K])).unwrap();
        assert_eq!(z[0], Quaternion::J);
    }

    #[test]
    fn channel_scaled_identity_first_entry() {
        let c = Quaternion::new(1.0, 2.0, -1.5, 0.5);
        let a = ChannelScaled::new(CsrMatrix::identity(3), c).unwrap();
        let mut e1 = QVector::zeros(3);
        e1[0] = Quaternion::ONE;
        assert_eq!(a.apply(&e1).unwrap()[0], c);
    }

    #[test]
    fn kron_identity_is_identity() {
        let k = KronToeplitz::new(RealMatrix::identity(3), RealMatrix::identity(3), Quaternion::ONE).unwrap();
        let x = QVector::from_fn(9, |i| Quaternion::new(i as f64, 1.0, -(i as f64), 0.5));
        assert_eq!(k.apply(&x).unwrap(), x);
        assert!(k.apply_checked(&QVector::zeros(8)).is_err());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = QSparseMatrix::identity(3);
        assert_eq!(a.apply(&QVector::zeros(2)), Err(Error::DimensionMismatch { expected: 3, found: 2 }));
    }
}

//! Left preconditioners, in particular SSOR `M = (D+L)D⁻¹(D+U)`.

use alloc::vec::Vec;

use crate::error::Error;
use crate::quat::Quaternion;
use crate::sparse::QSparseMatrix;
use crate::vector::{check_len, QVector};

/// Something whose inverse (and inverse adjoint) can be applied cheaply.
pub trait Preconditioner {
    fn dim(&self) -> usize;

    /// `z = M⁻¹ r`.
    fn apply_inverse_to(&self, r: &[Quaternion], z: &mut [Quaternion]);

    /// `z = M⁻* r`.
    fn apply_inverse_adjoint_to(&self, r: &[Quaternion], z: &mut [Quaternion]);

    fn apply_inverse(&self, r: &QVector) -> Result<QVector, Error> {
        check_len(self.dim(), r.len())?;
        let mut z = QVector::zeros(r.len());
        self.apply_inverse_to(r.as_slice(), z.as_mut_slice());
        Ok(z)
    }

    fn apply_inverse_adjoint(&self, r: &QVector) -> Result<QVector, Error> {
        check_len(self.dim(), r.len())?;
        let mut z = QVector::zeros(r.len());
        self.apply_inverse_adjoint_to(r.as_slice(), z.as_mut_slice());
        Ok(z)
    }
}

impl<T: Preconditioner + ?Sized> Preconditioner for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply_inverse_to(&self, r: &[Quaternion], z: &mut [Quaternion]) {
        (**self).apply_inverse_to(r, z)
    }
    fn apply_inverse_adjoint_to(&self, r: &[Quaternion], z: &mut [Quaternion]) {
        (**self).apply_inverse_adjoint_to(r, z)
    }
}

/// `M = I`.
#[derive(Clone, Copy, Debug)]
pub struct IdentityPreconditioner(pub usize);

impl Preconditioner for IdentityPreconditioner {
    fn dim(&self) -> usize {
        self.0
    }
    fn apply_inverse_to(&self, r: &[Quaternion], z: &mut [Quaternion]) {
        z.copy_from_slice(r)
    }
    fn apply_inverse_adjoint_to(&self, r: &[Quaternion], z: &mut [Quaternion]) {
        z.copy_from_slice(r)
    }
}

/// Symmetric Gauss–Seidel (SSOR with ω = 1) built from the splitting
/// `A = D + L + U`.
#[derive(Clone, Debug)]
pub struct SsorPreconditioner {
    a: QSparseMatrix,
    diag: Vec<Quaternion>,
    diag_inv: Vec<Quaternion>,
}

impl SsorPreconditioner {
    pub fn new(a: &QSparseMatrix) -> Result<Self, Error> {
        if a.rows() != a.cols() {
            return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let n = a.rows();
        let mut diag = Vec::with_capacity(n);
        let mut diag_inv = Vec::with_capacity(n);
        for i in 0..n {
            let d = a.get(i, i);
            let inv = d.inv().map_err(|_| Error::ZeroDiagonal { row: i })?;
            diag.push(d);
            diag_inv.push(inv);
        }
        Ok(Self { a: a.clone(), diag, diag_inv })
    }

    /// `y = M x` through the three factors.
    pub fn apply_forward(&self, x: &QVector) -> Result<QVector, Error> {
        let n = self.dim();
        check_len(n, x.len())?;
        // u = (D+U) x
        let u: Vec<Quaternion> = (0..n).map(|i| self.a.row(i).filter(|&(j, _)| j >= i).map(|(j, a)| a * x[j]).sum()).collect();
        // t = D⁻¹ u
        let t: Vec<Quaternion> = u.iter().zip(&self.diag_inv).map(|(&u, &d)| d * u).collect();
        // y = (D+L) t
        Ok((0..n).map(|i| self.a.row(i).filter(|&(j, _)| j <= i).map(|(j, a)| a * t[j]).sum()).collect())
    }
}

impl Preconditioner for SsorPreconditioner {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn apply_inverse_to(&self, r: &[Quaternion], z: &mut [Quaternion]) {
        let n = self.dim();
        // (D+L) y = r, stored in z
        for i in 0..n {
            let mut s = r[i];
            for (j, a) in self.a.row(i) {
                if j < i {
                    s -= a * z[j];
                }
            }
            z[i] = self.diag_inv[i] * s;
        }
        // t = D y
        for i in 0..n {
            z[i] = self.diag[i] * z[i];
        }
        // (D+U) z = t
        for i in (0..n).rev() {
            let mut s = z[i];
            for (j, a) in self.a.row(i) {
                if j > i {
                    s -= a * z[j];
                }
            }
            z[i] = self.diag_inv[i] * s;
        }
    }

    fn apply_inverse_adjoint_to(&self, r: &[Quaternion], z: &mut [Quaternion]) {
        // M⁻* = (D+L)⁻* D* (D+U)⁻*; the adjoint factors are solved column-wise.
        let n = self.dim();
        z.copy_from_slice(r);
        // (D+U)* u = r: lower triangular with entries conj(a_ji), j ≤ i
        for i in 0..n {
            let ui = self.diag_inv[i].conj() * z[i];
            z[i] = ui;
            for (k, a) in self.a.row(i) {
                if k > i {
                    z[k] -= a.conj() * ui;
                }
            }
        }
        for i in 0..n {
            z[i] = self.diag[i].conj() * z[i];
        }
        // (D+L)* z = t: upper triangular with entries conj(a_ji), j ≥ i
        for i in (0..n).rev() {
            let zi = self.diag_inv[i].conj() * z[i];
            z[i] = zi;
            for (k, a) in self.a.row(i) {
                if k < i {
                    z[k] -= a.conj() * zi;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn identity_matrix_gives_identity_preconditioner() {
        let m = SsorPreconditioner::new(&QSparseMatrix::identity(4)).unwrap();
        let r = QVector::from_fn(4, |i| Quaternion::new(1.0, i as f64, -2.0, 0.5));
        assert_eq!(m.apply_inverse(&r).unwrap(), r);
    }

    #[test]
    fn diagonal_matrix_divides_entrywise() {
        let d = [Quaternion::new(1.0, 1.0, 0.0, 0.0), Quaternion::J, Quaternion::real(2.0)];
        let m = SsorPreconditioner::new(&QSparseMatrix::from_diagonal(&d)).unwrap();
        let r = QVector::from_vec(vec![Quaternion::K, Quaternion::ONE, Quaternion::I]);
        let z = m.apply_inverse(&r).unwrap();
        for i in 0..3 {
            assert!(z[i].approx_eq(d[i].inv().unwrap() * r[i], 1e-15));
        }
    }

    #[test]
    fn missing_diagonal_names_the_row() {
        let a = QSparseMatrix::from_triplets(2, 2, vec![(0, 0, Quaternion::ONE), (1, 0, Quaternion::ONE)]).unwrap();
        assert_eq!(SsorPreconditioner::new(&a).unwrap_err(), Error::ZeroDiagonal { row: 1 });
    }
}

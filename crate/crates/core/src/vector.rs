//! Quaternion vectors of the right module `Qⁿ`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::Error;
use crate::quat::Quaternion;

/// A column vector of quaternions. Scalars multiply from the right.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct QVector(Vec<Quaternion>);

impl QVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![Quaternion::ZERO; n])
    }

    pub fn from_vec(entries: Vec<Quaternion>) -> Self {
        Self(entries)
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> Quaternion) -> Self {
        Self((0..n).map(f).collect())
    }

    /// Builds a vector from its four real component vectors `x₀ + x₁i + x₂j + x₃k`.
    pub fn from_components(c0: &[f64], c1: &[f64], c2: &[f64], c3: &[f64]) -> Result<Self, Error> {
        let n = c0.len();
        for c in [c1, c2, c3] {
            if c.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: c.len() });
            }
        }
        Ok(Self::from_fn(n, |i| Quaternion::new(c0[i], c1[i], c2[i], c3[i])))
    }

    /// Component `c` (0 = real, 1 = i, 2 = j, 3 = k) of every entry.
    pub fn component(&self, c: usize) -> Vec<f64> {
        self.0.iter().map(|q| q.to_array()[c]).collect()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[Quaternion] {
        &self.0
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [Quaternion] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<Quaternion> {
        self.0
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Quaternion> {
        self.0.iter()
    }

    /// `⟨self, y⟩ = Σ yᵢ* selfᵢ`.
    pub fn inner(&self, y: &QVector) -> Result<Quaternion, Error> {
        check_len(self.len(), y.len())?;
        Ok(inner(&self.0, &y.0))
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.0)
    }

    /// `self ← self + y·α`.
    pub fn axpy(&mut self, y: &QVector, alpha: Quaternion) -> Result<(), Error> {
        check_len(self.len(), y.len())?;
        axpy(&mut self.0, &y.0, alpha);
        Ok(())
    }

    /// `self·α`.
    pub fn mul_right(&self, alpha: Quaternion) -> QVector {
        Self(self.0.iter().map(|&v| v * alpha).collect())
    }

    /// `α·self`.
    pub fn mul_left(&self, alpha: Quaternion) -> QVector {
        Self(self.0.iter().map(|&v| alpha * v).collect())
    }

    pub fn scaled(&self, s: f64) -> QVector {
        Self(self.0.iter().map(|&v| v * s).collect())
    }

    pub fn sub(&self, y: &QVector) -> Result<QVector, Error> {
        check_len(self.len(), y.len())?;
        Ok(Self(self.0.iter().zip(&y.0).map(|(&a, &b)| a - b).collect()))
    }

    pub fn add(&self, y: &QVector) -> Result<QVector, Error> {
        check_len(self.len(), y.len())?;
        Ok(Self(self.0.iter().zip(&y.0).map(|(&a, &b)| a + b).collect()))
    }

    /// Largest entry-wise distance `maxᵢ |selfᵢ − yᵢ|`.
    pub fn max_abs_diff(&self, y: &QVector) -> f64 {
        self.0.iter().zip(&y.0).map(|(&a, &b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Relative distance `‖self − y‖ / ‖y‖` (absolute when `y = 0`).
    pub fn rel_diff(&self, y: &QVector) -> f64 {
        let d = norm(&self.0.iter().zip(&y.0).map(|(&a, &b)| a - b).collect::<Vec<_>>());
        let s = y.norm();
        if s == 0.0 {
            d
        } else {
            d / s
        }
    }
}

impl Index<usize> for QVector {
    type Output = Quaternion;
    #[inline]
    fn index(&self, i: usize) -> &Quaternion {
        &self.0[i]
    }
}

impl IndexMut<usize> for QVector {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut Quaternion {
        &mut self.0[i]
    }
}

impl From<Vec<Quaternion>> for QVector {
    fn from(v: Vec<Quaternion>) -> Self {
        Self(v)
    }
}

impl FromIterator<Quaternion> for QVector {
    fn from_iter<I: IntoIterator<Item = Quaternion>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<(), Error> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

// Slice kernels used on the solve path. Callers guarantee equal lengths.

#[inline]
pub(crate) fn inner(x: &[Quaternion], y: &[Quaternion]) -> Quaternion {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(&xi, &yi)| yi.conj_mul(xi)).sum()
}

#[inline]
pub(crate) fn norm_sqr(x: &[Quaternion]) -> f64 {
    x.iter().map(|q| q.norm_sqr()).sum()
}

/// Two-pass scaled norm, safe against overflow in the squares.
pub(crate) fn norm(x: &[Quaternion]) -> f64 {
    let scale = x
        .iter()
        .map(|q| libm::fabs(q.w).max(libm::fabs(q.x)).max(libm::fabs(q.y)).max(libm::fabs(q.z)))
        .fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let inv = 1.0 / scale;
    let s: f64 = x.iter().map(|q| q.scale(inv).norm_sqr()).sum();
    scale * libm::sqrt(s)
}

/// `y ← y + x·α`.
#[inline]
pub(crate) fn axpy(y: &mut [Quaternion], x: &[Quaternion], alpha: Quaternion) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += xi * alpha;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    #[test]
    fn inner_product_examples() {
        let i = QVector::from_vec(vec![Quaternion::I]);
        assert_eq!(i.inner(&i).unwrap(), Quaternion::ONE);

        let xj = QVector::from_vec(vec![Quaternion::J]);
        let yk = QVector::from_vec(vec![Quaternion::K]);
        assert_eq!(xj.inner(&yk).unwrap(), Quaternion::I);

        let x = QVector::from_vec(vec![q(1.0, 1.0, 0.0, 0.0), Quaternion::J]);
        let y = QVector::from_vec(vec![Quaternion::ONE, Quaternion::K]);
        assert_eq!(x.inner(&y).unwrap(), q(1.0, 2.0, 0.0, 0.0));
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let a = QVector::zeros(2);
        let b = QVector::zeros(3);
        assert_eq!(a.inner(&b), Err(Error::DimensionMismatch { expected: 2, found: 3 }));
    }

    #[test]
    fn norm_survives_large_entries() {
        let v = QVector::from_vec(vec![Quaternion::real(1e200), Quaternion::real(1e200)]);
        let n = v.norm();
        assert!((n / (1e200 * libm::sqrt(2.0)) - 1.0).abs() < 1e-15);
        assert_eq!(QVector::zeros(4).norm(), 0.0);
    }

    fn arb_vec(n: usize) -> impl Strategy<Value = QVector> {
        prop::collection::vec(prop::array::uniform4(-5.0f64..5.0), n)
            .prop_map(|v| v.into_iter().map(Quaternion::from_array).collect())
    }

    proptest! {
        #[test]
        fn inner_product_axioms(x in arb_vec(6), y in arb_vec(6), a in prop::array::uniform4(-3.0f64..3.0)) {
            let a = Quaternion::from_array(a);
            let xy = x.inner(&y).unwrap();
            let yx = y.inner(&x).unwrap();
            let tol = 1e-10 * (1.0 + x.norm() * y.norm() * (1.0 + a.abs()));
            prop_assert!(xy.approx_eq(yx.conj(), tol));
            prop_assert!(x.mul_right(a).inner(&y).unwrap().approx_eq(xy * a, tol));
            prop_assert!(xy.abs() <= x.norm() * y.norm() * (1.0 + 1e-12) + 1e-12);
            let xx = x.inner(&x).unwrap();
            prop_assert!((xx.w - x.norm_sqr()).abs() <= tol);
            prop_assert!(xx.x.abs() + xx.y.abs() + xx.z.abs() <= tol);
        }
    }
}

//! Quaternion scalars `q = w + x·i + y·j + z·k` in double precision.

use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::Error;

/// A real quaternion. Multiplication follows `i² = j² = k² = ijk = −1`
/// and is not commutative.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    #[inline]
    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    #[inline]
    pub const fn from_array(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    #[inline]
    pub const fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// `q* = w − x·i − y·j − z·k`.
    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    /// `|q|² = q*·q`.
    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// `|q|`, computed without intermediate overflow.
    #[inline]
    pub fn abs(self) -> f64 {
        libm::hypot(libm::hypot(self.w, self.x), libm::hypot(self.y, self.z))
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.w == 0.0 && self.x == 0.0 && self.y == 0.0 && self.z == 0.0
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// `q⁻¹ = q*/|q|²`; fails on the zero quaternion.
    pub fn inv(self) -> Result<Self, Error> {
        // Scale first so |q|² neither underflows nor overflows.
        let s = self.w.abs().max(self.x.abs()).max(self.y.abs()).max(self.z.abs());
        if s == 0.0 || !s.is_finite() {
            return Err(Error::ZeroInverse);
        }
        let q = self / s;
        Ok(q.conj() / (q.norm_sqr() * s))
    }

    /// `q⁻* = (q⁻¹)* = q/|q|²`.
    pub fn inv_conj(self) -> Result<Self, Error> {
        self.inv().map(Quaternion::conj)
    }

    /// Hamilton product `self · rhs`.
    #[inline]
    pub fn mul_q(self, rhs: Self) -> Self {
        let (a1, b1, c1, d1) = (self.w, self.x, self.y, self.z);
        let (a2, b2, c2, d2) = (rhs.w, rhs.x, rhs.y, rhs.z);
        Self::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }

    /// `self* · rhs`, the building block of the inner product.
    #[inline]
    pub fn conj_mul(self, rhs: Self) -> Self {
        self.conj().mul_q(rhs)
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Component-wise comparison with an absolute tolerance.
    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Self::real(w)
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, r: Self) -> Self {
        Self::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, r: Self) -> Self {
        Self::new(self.w - r.w, self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, r: Self) -> Self {
        self.mul_q(r)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q.scale(self)
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, r: Self) {
        *self = *self + r;
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, r: Self) {
        *self = *self - r;
    }
}

impl MulAssign<f64> for Quaternion {
    #[inline]
    fn mul_assign(&mut self, s: f64) {
        *self = self.scale(s);
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i{:+}j{:+}k", self.w, self.x, self.y, self.z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;

    /// 4×4 left-multiplication matrix of `a` acting on the column `[w x y z]ᵀ`,
    /// i.e. the real counterpart of a 1×1 quaternion matrix.
    fn left_matrix(a: Quaternion) -> [[f64; 4]; 4] {
        let (w, x, y, z) = (a.w, a.x, a.y, a.z);
        [[w, -x, -y, -z], [x, w, -z, y], [y, z, w, -x], [z, -y, x, w]]
    }

    #[test]
    fn unit_multiplication_table() {
        let m1 = -Quaternion::ONE;
        assert_eq!(I * I, m1);
        assert_eq!(J * J, m1);
        assert_eq!(K * K, m1);
        assert_eq!(I * J * K, m1);
        assert_eq!(I * J, K);
        assert_eq!(J * K, I);
        assert_eq!(K * I, J);
        assert_eq!(J * I, -K);
        assert_eq!(K * J, -I);
        assert_eq!(I * K, -J);
    }

    #[test]
    fn product_matches_matrix_oracle() {
        let a = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        let b = Quaternion::new(1.0, 0.0, 1.0, 0.0);
        let m = left_matrix(a);
        let bv = b.to_array();
        let mut out = [0.0; 4];
        for (r, row) in m.iter().enumerate() {
            out[r] = row.iter().zip(bv.iter()).map(|(p, q)| p * q).sum();
        }
        assert_eq!(Quaternion::from_array(out), Quaternion::new(1.0, 1.0, 1.0, 1.0));
        assert_eq!(a * b, Quaternion::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn inverse_examples() {
        let q = Quaternion::new(1.0, 1.0, 1.0, 1.0);
        assert_eq!(q.inv().unwrap(), Quaternion::new(0.25, -0.25, -0.25, -0.25));
        assert_eq!(Quaternion::real(2.0).inv().unwrap(), Quaternion::real(0.5));
        assert_eq!(I.inv().unwrap(), -I);
        assert_eq!(Quaternion::ZERO.inv(), Err(Error::ZeroInverse));
        assert_eq!(q.inv_conj().unwrap(), q / 4.0);
    }

    fn arb_quat() -> impl Strategy<Value = Quaternion> {
        prop::array::uniform4(-10.0f64..10.0).prop_map(Quaternion::from_array)
    }

    proptest! {
        #[test]
        fn associative_and_multiplicative_norm(a in arb_quat(), b in arb_quat(), c in arb_quat()) {
            let lhs = (a * b) * c;
            let rhs = a * (b * c);
            let scale = a.abs() * b.abs() * c.abs() + 1.0;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
            prop_assert!(((a * b).abs() - a.abs() * b.abs()).abs() <= 1e-12 * (a.abs() * b.abs() + 1.0));
        }

        #[test]
        fn inverse_is_two_sided(q in arb_quat()) {
            prop_assume!(q.abs() > 1e-3);
            let inv = q.inv().unwrap();
            prop_assert!((q * inv).approx_eq(Quaternion::ONE, 1e-12));
            prop_assert!((inv * q).approx_eq(Quaternion::ONE, 1e-12));
        }

        #[test]
        fn conjugate_reverses_products(a in arb_quat(), b in arb_quat()) {
            prop_assert!((a * b).conj().approx_eq(b.conj() * a.conj(), 1e-12 * (1.0 + a.abs() * b.abs())));
            let n = a.conj() * a;
            prop_assert!(n.x == 0.0 || n.x.abs() < 1e-12 * (1.0 + a.norm_sqr()));
            prop_assert!(n.w >= 0.0);
        }
    }
}

//! Generalized quaternion Givens rotations and the progressive QR updates of
//! the tridiagonal `H_{m+1,m}` and the lower bidiagonal `L_{m+1,m}`.

use alloc::vec::Vec;

use crate::error::Error;
use crate::quat::Quaternion;

/// Active 2×2 block `G = [g11 g12; g21 g22]` of a quaternion Givens rotation.
/// `G*` annihilates the second entry of `(α, ρ)ᵀ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QGivens {
    pub g11: Quaternion,
    pub g12: Quaternion,
    pub g21: Quaternion,
    pub g22: Quaternion,
}

impl QGivens {
    /// Builds the rotation for the pair `(alpha, rho)`, `rho ≥ 0`, and
    /// returns it with `t = ‖(α, ρ)‖`, the surviving entry.
    pub fn new(alpha: Quaternion, rho: f64) -> Result<(Self, f64), Error> {
        let t = libm::hypot(alpha.abs(), rho);
        if t == 0.0 || !t.is_finite() {
            return Err(Error::DegenerateRotation);
        }
        let g11 = alpha / t;
        let g21 = Quaternion::real(rho / t);
        let (a11, a21) = (g11.abs(), g21.abs());
        let (g12, g22) = if alpha.abs() <= rho {
            // a21 > 0 here since t > 0
            (Quaternion::real(a21), -((g21 / a21) * g11.conj()))
        } else {
            (-((g11 / a11) * g21.conj()), Quaternion::real(a11))
        };
        Ok((Self { g11, g12, g21, g22 }, t))
    }

    /// `G* [a; b] = [g11*a + g21*b; g12*a + g22*b]`.
    #[inline]
    pub fn apply_adjoint(&self, a: Quaternion, b: Quaternion) -> (Quaternion, Quaternion) {
        (
            self.g11.conj() * a + self.g21.conj() * b,
            self.g12.conj() * a + self.g22.conj() * b,
        )
    }

    /// `G [a; b]`.
    #[inline]
    pub fn apply(&self, a: Quaternion, b: Quaternion) -> (Quaternion, Quaternion) {
        (self.g11 * a + self.g12 * b, self.g21 * a + self.g22 * b)
    }

    /// `‖G*G − I₂‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        let c = [self.g11, self.g21];
        let d = [self.g12, self.g22];
        let dot = |u: &[Quaternion; 2], v: &[Quaternion; 2]| u[0].conj() * v[0] + u[1].conj() * v[1];
        let e11 = dot(&c, &c) - Quaternion::ONE;
        let e12 = dot(&c, &d);
        let e22 = dot(&d, &d) - Quaternion::ONE;
        libm::sqrt(e11.norm_sqr() + 2.0 * e12.norm_sqr() + e22.norm_sqr())
    }
}

/// Progressive QR of the tridiagonal `H_{m+1,m}` (diagonal `α`, superdiagonal
/// `τ`, subdiagonal `ρ`). Keeps only the last two rotations.
#[derive(Clone, Debug)]
pub struct UpperFactorR {
    prev1: Option<QGivens>,
    prev2: Option<QGivens>,
    gamma: Quaternion,
    /// `η⁽¹⁾, η⁽²⁾, η⁽³⁾` of each column, when recording.
    pub columns: Option<Vec<(f64, Quaternion, Quaternion)>>,
    /// Rotated right-hand side `γ₁ … γ_{m+1}`, when recording.
    pub gammas: Option<Vec<Quaternion>>,
    /// `|g12|` of each rotation, when recording.
    pub g12_abs: Option<Vec<f64>>,
    max_defect: f64,
    steps: usize,
}

/// Output of one column update.
#[derive(Clone, Copy, Debug)]
pub struct ColumnUpdate {
    pub eta1: f64,
    pub eta2: Quaternion,
    pub eta3: Quaternion,
    /// `γ_j` after the rotation, the step length in `x_j = x_{j−1} + d_j γ_j`.
    pub gamma: Quaternion,
    /// `γ_{j+1}`, whose magnitude is the quasi-residual norm.
    pub gamma_next: Quaternion,
    pub rotation: QGivens,
}

impl UpperFactorR {
    /// Starts with right-hand side `β e₁`.
    pub fn new(beta: f64) -> Self {
        Self { prev1: None, prev2: None, gamma: Quaternion::real(beta), columns: None, gammas: None, g12_abs: None, max_defect: 0.0, steps: 0 }
    }

    /// Like [`UpperFactorR::new`] but keeps every column, `γ` and `|g12|`.
    pub fn recording(beta: f64) -> Self {
        let mut f = Self::new(beta);
        f.columns = Some(Vec::new());
        f.gammas = Some(alloc::vec![Quaternion::real(beta)]);
        f.g12_abs = Some(Vec::new());
        f
    }

    /// Current `γ_{j+1}`.
    pub fn quasi_residual(&self) -> f64 {
        self.gamma.abs()
    }

    pub fn max_unitarity_defect(&self) -> f64 {
        self.max_defect
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Absorbs column `j` = `(τ_j, α_j, ρ_{j+1})` (`τ₁` is ignored).
    pub fn push_column(&mut self, tau: Quaternion, alpha: Quaternion, rho_next: f64) -> Result<ColumnUpdate, Error> {
        let (eta3, tau_bar) = match self.prev2 {
            Some(g) => g.apply_adjoint(Quaternion::ZERO, tau),
            None => (Quaternion::ZERO, if self.prev1.is_some() { tau } else { Quaternion::ZERO }),
        };
        let (eta2, alpha_hat) = match self.prev1 {
            Some(g) => g.apply_adjoint(tau_bar, alpha),
            None => (Quaternion::ZERO, alpha),
        };
        let (g, eta1) = QGivens::new(alpha_hat, rho_next)?;
        let (gamma, gamma_next) = g.apply_adjoint(self.gamma, Quaternion::ZERO);
        self.max_defect = self.max_defect.max(g.unitarity_defect());
        self.prev2 = self.prev1;
        self.prev1 = Some(g);
        self.gamma = gamma_next;
        self.steps += 1;
        if let Some(c) = self.columns.as_mut() {
            c.push((eta1, eta2, eta3));
        }
        if let Some(gs) = self.gammas.as_mut() {
            *gs.last_mut().expect("seeded with β") = gamma;
            gs.push(gamma_next);
        }
        if let Some(v) = self.g12_abs.as_mut() {
            v.push(g.g12.abs());
        }
        Ok(ColumnUpdate { eta1, eta2, eta3, gamma, gamma_next, rotation: g })
    }
}

/// Progressive QR of the lower bidiagonal `L_{m+1,m}` (diagonal `τ⁽¹⁾`,
/// subdiagonal `ρ`). Only the last rotation touches a new column.
#[derive(Clone, Debug)]
pub struct UpperFactorRbar {
    prev: Option<QGivens>,
    gamma: Quaternion,
    /// `κ⁽¹⁾, κ⁽²⁾` of each column (`κ⁽²⁾` couples to the previous column).
    pub columns: Option<Vec<(f64, Quaternion)>>,
    pub gammas: Option<Vec<Quaternion>>,
    pub g12_abs: Option<Vec<f64>>,
    max_defect: f64,
    steps: usize,
}

/// Output of one bidiagonal column update. `kappa2` sits above the new
/// diagonal, i.e. it is `κ⁽²⁾_{j−1}`.
#[derive(Clone, Copy, Debug)]
pub struct BidiagUpdate {
    pub kappa1: f64,
    pub kappa2: Quaternion,
    pub gamma: Quaternion,
    pub gamma_next: Quaternion,
    pub rotation: QGivens,
}

impl UpperFactorRbar {
    pub fn new(beta: f64) -> Self {
        Self { prev: None, gamma: Quaternion::real(beta), columns: None, gammas: None, g12_abs: None, max_defect: 0.0, steps: 0 }
    }

    pub fn recording(beta: f64) -> Self {
        let mut f = Self::new(beta);
        f.columns = Some(Vec::new());
        f.gammas = Some(alloc::vec![Quaternion::real(beta)]);
        f.g12_abs = Some(Vec::new());
        f
    }

    pub fn quasi_residual(&self) -> f64 {
        self.gamma.abs()
    }

    pub fn max_unitarity_defect(&self) -> f64 {
        self.max_defect
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Absorbs column `j` = `(τ⁽¹⁾_j, ρ_{j+1})`.
    pub fn push_column(&mut self, tau1: Quaternion, rho_next: f64) -> Result<BidiagUpdate, Error> {
        let (kappa2, tau_hat) = match self.prev {
            Some(g) => g.apply_adjoint(Quaternion::ZERO, tau1),
            None => (Quaternion::ZERO, tau1),
        };
        let (g, kappa1) = QGivens::new(tau_hat, rho_next)?;
        let (gamma, gamma_next) = g.apply_adjoint(self.gamma, Quaternion::ZERO);
        self.max_defect = self.max_defect.max(g.unitarity_defect());
        self.prev = Some(g);
        self.gamma = gamma_next;
        self.steps += 1;
        if let Some(c) = self.columns.as_mut() {
            c.push((kappa1, kappa2));
        }
        if let Some(gs) = self.gammas.as_mut() {
            *gs.last_mut().expect("seeded with β") = gamma;
            gs.push(gamma_next);
        }
        if let Some(v) = self.g12_abs.as_mut() {
            v.push(g.g12.abs());
        }
        Ok(BidiagUpdate { kappa1, kappa2, gamma, gamma_next, rotation: g })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_three_four_five() {
        let (g, t) = QGivens::new(Quaternion::real(3.0), 4.0).unwrap();
        assert_eq!(t, 5.0);
        assert!(g.g11.approx_eq(Quaternion::real(0.6), 1e-15));
        assert!(g.g21.approx_eq(Quaternion::real(0.8), 1e-15));
        assert!(g.g12.approx_eq(Quaternion::real(0.8), 1e-15));
        assert!(g.g22.approx_eq(Quaternion::real(-0.6), 1e-15));
        let (a, b) = g.apply_adjoint(Quaternion::real(3.0), Quaternion::real(4.0));
        assert!(a.approx_eq(Quaternion::real(5.0), 1e-14));
        assert!(b.approx_eq(Quaternion::ZERO, 1e-14));
    }

    #[test]
    fn imaginary_pivot() {
        let (g, t) = QGivens::new(Quaternion::I, 1.0).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!((t - core::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(g.g11.approx_eq(Quaternion::I * s, 1e-15));
        assert!(g.g12.approx_eq(Quaternion::real(s), 1e-15));
        assert!(g.g21.approx_eq(Quaternion::real(s), 1e-15));
        assert!(g.g22.approx_eq(Quaternion::I * s, 1e-15));
        assert!(g.unitarity_defect() < 1e-15);
        let (a, b) = g.apply_adjoint(Quaternion::I, Quaternion::ONE);
        assert!(a.approx_eq(Quaternion::real(core::f64::consts::SQRT_2), 1e-15));
        assert!(b.approx_eq(Quaternion::ZERO, 1e-15));
    }

    #[test]
    fn zero_rho_is_a_phase() {
        let alpha = Quaternion::new(0.0, 3.0, 0.0, 4.0);
        let (g, t) = QGivens::new(alpha, 0.0).unwrap();
        assert_eq!(t, 5.0);
        assert_eq!(g.g22, Quaternion::real(1.0));
        let (a, b) = g.apply_adjoint(alpha, Quaternion::ZERO);
        assert!(a.approx_eq(Quaternion::real(5.0), 1e-14));
        assert_eq!(b, Quaternion::ZERO);
    }

    #[test]
    fn zero_pair_is_degenerate() {
        assert_eq!(QGivens::new(Quaternion::ZERO, 0.0).unwrap_err(), Error::DegenerateRotation);
    }

    #[test]
    fn first_tridiagonal_step() {
        let mut r = UpperFactorR::new(1.0);
        let u = r.push_column(Quaternion::ZERO, Quaternion::real(3.0), 4.0).unwrap();
        assert_eq!(u.eta1, 5.0);
        assert!((u.gamma_next.abs() - 0.8).abs() < 1e-15);
        assert!((u.gamma.w - 0.6).abs() < 1e-15);
    }

    #[test]
    fn diagonal_h_has_zero_quasi_residual() {
        let mut r = UpperFactorR::new(2.0);
        r.push_column(Quaternion::ZERO, Quaternion::J, 0.0).unwrap();
        assert_eq!(r.quasi_residual(), 0.0);
        let mut rb = UpperFactorRbar::new(2.0);
        let u = rb.push_column(Quaternion::new(0.0, 0.0, -2.0, 0.0), 0.0).unwrap();
        assert_eq!(u.kappa1, 2.0);
        assert_eq!(rb.quasi_residual(), 0.0);
    }
}

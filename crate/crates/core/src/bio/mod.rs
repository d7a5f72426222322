//! Quaternion biconjugate orthonormalization processes.
//!
//! * [`LanczosBiorth`] — classical Lanczos biorthogonalization, `⟨vᵢ, wⱼ⟩ = δᵢⱼ`.
//! * [`ThreeTermBio`] — unit-norm bases with `⟨vᵢ, wⱼ⟩ = δᵢⱼ σⱼ`, producing the
//!   tridiagonal `H_{m+1,m}`.
//! * [`TwoTermBio`] — the coupled variant that also builds A-biorthogonal
//!   directions `pⱼ, qⱼ` and the bidiagonal factors `H = LU`.
//!
//! Each process keeps a sliding window of vectors. The `recording`
//! constructors additionally retain the full bases and coefficient streams.

mod factors;
mod lanczos;
mod three_term;
mod two_term;

pub use factors::{verify_factorization, BidiagFactors, FactorizationResiduals, TridiagFactors};
pub use lanczos::{LanczosBiorth, LanczosStep};
pub use three_term::{ThreeTermBio, ThreeTermStep};
pub use two_term::{TwoTermBio, TwoTermStep};

use crate::operator::QLinearOperator;
use crate::quat::Quaternion;

/// The pair `x ↦ Ax`, `x ↦ A*x` as seen by a process. Taking `&mut self`
/// lets callers observe or cache intermediate products.
pub trait KrylovOperator {
    fn dim(&self) -> usize;
    fn forward(&mut self, x: &[Quaternion], y: &mut [Quaternion]);
    fn adjoint(&mut self, x: &[Quaternion], y: &mut [Quaternion]);
}

/// Adapts any [`QLinearOperator`] to [`KrylovOperator`].
pub struct Plain<'a, A: ?Sized>(pub &'a A);

impl<A: QLinearOperator + ?Sized> KrylovOperator for Plain<'_, A> {
    fn dim(&self) -> usize {
        self.0.shape().0
    }
    fn forward(&mut self, x: &[Quaternion], y: &mut [Quaternion]) {
        self.0.apply_to(x, y)
    }
    fn adjoint(&mut self, x: &[Quaternion], y: &mut [Quaternion]) {
        self.0.apply_adjoint_to(x, y)
    }
}

/// Thresholds for breakdown detection and the restart budget.
///
/// A near-breakdown is flagged when `|σ| ≤ sigma_tol · max(1, max|σ| so far)`
/// or `|l| ≤ l_tol · max(1, max|l| so far)`. A lucky breakdown is declared
/// when `ρ_{j+1} ≤ lucky_tol · ‖A v_j‖`.
///
/// The default only reacts to exact zeros. On strongly nonnormal operators
/// `σ_j = ⟨v_j, w_j⟩` of unit vectors routinely decays to roundoff level while
/// `A V = V H` keeps holding and the quasi-residual keeps falling; restarting
/// there discards a working Krylov space. [`cautious`](Self::cautious)
/// restores a `√ε` threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BreakdownPolicy {
    pub sigma_tol: f64,
    pub l_tol: f64,
    pub lucky_tol: f64,
    pub max_restarts: usize,
}

impl Default for BreakdownPolicy {
    fn default() -> Self {
        Self { sigma_tol: 0.0, l_tol: 0.0, lucky_tol: 1e-12, max_restarts: 20 }
    }
}

impl BreakdownPolicy {
    /// Restarts as soon as `|σ|` or `|l|` drops below `√ε` (relative).
    pub fn cautious() -> Self {
        let s = libm::sqrt(f64::EPSILON);
        Self { sigma_tol: s, l_tol: s, ..Self::default() }
    }
}

/// Why a process cannot continue as is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BreakdownKind {
    /// `σ_{j+1} = ⟨v_{j+1}, w_{j+1}⟩` is (nearly) zero.
    Sigma,
    /// `l_j = ⟨A p_j, q_j⟩` is (nearly) zero.
    L,
    /// `w̄_{j+1} = 0` while `v̄_{j+1} ≠ 0`.
    AdjointInvariant,
}

/// Outcome of a single process step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepStatus {
    Continue,
    /// `v̄_{j+1} = 0`: the Krylov space is invariant.
    Lucky,
    NearBreakdown(BreakdownKind),
}

pub(crate) fn lucky(rho: f64, av_norm: f64, policy: &BreakdownPolicy) -> bool {
    rho == 0.0 || rho <= policy.lucky_tol * av_norm
}

use alloc::vec;
use alloc::vec::Vec;

use super::{lucky, BreakdownKind, BreakdownPolicy, KrylovOperator, Plain, StepStatus, TridiagFactors};
use crate::error::Error;
use crate::operator::QLinearOperator;
use crate::quat::Quaternion;
use crate::vector::{self, QVector};

/// Coefficients produced by one three-term step `j`.
#[derive(Clone, Copy, Debug)]
pub struct ThreeTermStep {
    pub j: usize,
    pub alpha: Quaternion,
    pub alpha_bar: Quaternion,
    /// `τ_j`, the superdiagonal entry above `α_j` (zero for `j = 1`).
    pub tau: Quaternion,
    pub rho_next: f64,
    pub eps_next: f64,
    pub sigma_next: Quaternion,
    pub tau_next: Quaternion,
    /// `‖A v_j‖`.
    pub av_norm: f64,
    pub status: StepStatus,
}

struct Record {
    v: Vec<QVector>,
    w: Vec<QVector>,
    factors: TridiagFactors,
}

/// Three-term biconjugate orthonormalization.
pub struct ThreeTermBio {
    v: Vec<Quaternion>,
    w: Vec<Quaternion>,
    v_prev: Vec<Quaternion>,
    w_prev: Vec<Quaternion>,
    av: Vec<Quaternion>,
    aw: Vec<Quaternion>,
    sigma: Quaternion,
    sigma_prev: Quaternion,
    rho: f64,
    tau: Quaternion,
    j: usize,
    sigma_max: f64,
    policy: BreakdownPolicy,
    restarts: usize,
    status: StepStatus,
    record: Option<Record>,
}

fn normalized(x: &QVector) -> Result<Vec<Quaternion>, Error> {
    let n = x.norm();
    if n == 0.0 || !n.is_finite() {
        return Err(Error::InvalidArgument("starting vectors must be nonzero and finite"));
    }
    Ok(x.iter().map(|&q| q / n).collect())
}

impl ThreeTermBio {
    /// Starts from `v₁ = v/‖v‖`, `w₁ = w/‖w‖`. A small `σ₁` is reported by
    /// [`status`](Self::status), not rejected.
    pub fn new(v1: &QVector, w1: &QVector, policy: BreakdownPolicy) -> Result<Self, Error> {
        vector::check_len(v1.len(), w1.len())?;
        let v = normalized(v1)?;
        let w = normalized(w1)?;
        let n = v.len();
        let mut s = Self {
            v,
            w,
            v_prev: vec![Quaternion::ZERO; n],
            w_prev: vec![Quaternion::ZERO; n],
            av: vec![Quaternion::ZERO; n],
            aw: vec![Quaternion::ZERO; n],
            sigma: Quaternion::ZERO,
            sigma_prev: Quaternion::ZERO,
            rho: 0.0,
            tau: Quaternion::ZERO,
            j: 1,
            sigma_max: 0.0,
            policy,
            restarts: 0,
            status: StepStatus::Continue,
            record: None,
        };
        s.reset_coefficients();
        Ok(s)
    }

    /// Like [`new`](Self::new) but retains bases and coefficients.
    pub fn recording(v1: &QVector, w1: &QVector, policy: BreakdownPolicy) -> Result<Self, Error> {
        let mut s = Self::new(v1, w1, policy)?;
        s.start_record();
        Ok(s)
    }

    fn start_record(&mut self) {
        self.record = Some(Record {
            v: vec![QVector::from_vec(self.v.clone())],
            w: vec![QVector::from_vec(self.w.clone())],
            factors: TridiagFactors { sigma: vec![self.sigma], ..TridiagFactors::default() },
        });
    }

    fn reset_coefficients(&mut self) {
        self.v_prev.iter_mut().for_each(|q| *q = Quaternion::ZERO);
        self.w_prev.iter_mut().for_each(|q| *q = Quaternion::ZERO);
        self.sigma = vector::inner(&self.v, &self.w);
        self.sigma_prev = Quaternion::ZERO;
        self.rho = 0.0;
        self.tau = Quaternion::ZERO;
        self.j = 1;
        self.sigma_max = self.sigma.abs();
        self.status = if self.sigma.abs() <= self.policy.sigma_tol * self.sigma_max.max(1.0) {
            StepStatus::NearBreakdown(BreakdownKind::Sigma)
        } else {
            StepStatus::Continue
        };
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// Index `j` of the current basis pair.
    pub fn index(&self) -> usize {
        self.j
    }

    pub fn status(&self) -> StepStatus {
        self.status
    }

    pub fn restarts(&self) -> usize {
        self.restarts
    }

    pub fn sigma(&self) -> Quaternion {
        self.sigma
    }

    pub fn v(&self) -> &[Quaternion] {
        &self.v
    }

    pub fn w(&self) -> &[Quaternion] {
        &self.w
    }

    /// `v_j` of the step just taken (the previous basis vector).
    pub fn v_prev(&self) -> &[Quaternion] {
        &self.v_prev
    }

    /// `A v_j` of the step just taken.
    pub fn av(&self) -> &[Quaternion] {
        &self.av
    }

    /// Recorded `v₁ … v_{m+1}` (empty unless recording).
    pub fn basis_v(&self) -> &[QVector] {
        self.record.as_ref().map_or(&[], |r| &r.v)
    }

    pub fn basis_w(&self) -> &[QVector] {
        self.record.as_ref().map_or(&[], |r| &r.w)
    }

    pub fn factors(&self) -> Option<&TridiagFactors> {
        self.record.as_ref().map(|r| &r.factors)
    }

    pub fn step<A: QLinearOperator + ?Sized>(&mut self, a: &A) -> Result<ThreeTermStep, Error> {
        self.step_with(&mut Plain(a))
    }

    pub fn step_with(&mut self, op: &mut dyn KrylovOperator) -> Result<ThreeTermStep, Error> {
        if self.status == StepStatus::Lucky {
            return Err(Error::InvalidArgument("process already reached an invariant subspace"));
        }
        vector::check_len(self.dim(), op.dim())?;
        let sigma_inv = self.sigma.inv()?;
        op.forward(&self.v, &mut self.av);
        op.adjoint(&self.w, &mut self.aw);
        let c = vector::inner(&self.av, &self.w);
        let alpha = sigma_inv * c;
        let alpha_bar = sigma_inv.conj() * c.conj();
        let w_coeff = if self.j > 1 {
            Quaternion::real(self.rho) * self.sigma_prev.inv_conj()? * self.sigma.conj()
        } else {
            Quaternion::ZERO
        };

        // v̄ = A v_j − v_j α_j − v_{j−1} τ_j, w̄ = A* w_j − w_j ᾱ_j − w_{j−1}(ρ_j σ_{j−1}⁻* σ_j*)
        let mut vbar: Vec<Quaternion> = self.av.clone();
        vector::axpy(&mut vbar, &self.v, -alpha);
        vector::axpy(&mut vbar, &self.v_prev, -self.tau);
        let mut wbar: Vec<Quaternion> = self.aw.clone();
        vector::axpy(&mut wbar, &self.w, -alpha_bar);
        vector::axpy(&mut wbar, &self.w_prev, -w_coeff);

        let rho_next = vector::norm(&vbar);
        let eps_next = vector::norm(&wbar);
        let av_norm = vector::norm(&self.av);
        let tau = self.tau;
        let j = self.j;

        let (status, sigma_next, tau_next, v_next, w_next);
        if lucky(rho_next, av_norm, &self.policy) {
            status = StepStatus::Lucky;
            sigma_next = Quaternion::ZERO;
            tau_next = Quaternion::ZERO;
            v_next = vec![Quaternion::ZERO; self.dim()];
            w_next = vec![Quaternion::ZERO; self.dim()];
        } else if eps_next == 0.0 || lucky(eps_next, vector::norm(&self.aw), &self.policy) {
            status = StepStatus::NearBreakdown(BreakdownKind::AdjointInvariant);
            sigma_next = Quaternion::ZERO;
            tau_next = Quaternion::ZERO;
            v_next = vbar.iter().map(|&q| q / rho_next).collect();
            w_next = vec![Quaternion::ZERO; self.dim()];
        } else {
            v_next = vbar.iter().map(|&q| q / rho_next).collect();
            w_next = wbar.iter().map(|&q| q / eps_next).collect();
            sigma_next = vector::inner(&v_next, &w_next);
            tau_next = sigma_inv * sigma_next * eps_next;
            self.sigma_max = self.sigma_max.max(sigma_next.abs());
            status = if sigma_next.abs() <= self.policy.sigma_tol * self.sigma_max.max(1.0) {
                StepStatus::NearBreakdown(BreakdownKind::Sigma)
            } else {
                StepStatus::Continue
            };
        }

        if let Some(r) = self.record.as_mut() {
            let f = &mut r.factors;
            f.alpha.push(alpha);
            f.alpha_bar.push(alpha_bar);
            f.tau.push(tau);
            f.rho.push(rho_next);
            f.eps.push(eps_next);
            f.sigma.push(sigma_next);
            r.v.push(QVector::from_vec(v_next.clone()));
            r.w.push(QVector::from_vec(w_next.clone()));
        }

        self.v_prev = core::mem::replace(&mut self.v, v_next);
        self.w_prev = core::mem::replace(&mut self.w, w_next);
        self.sigma_prev = self.sigma;
        self.sigma = sigma_next;
        self.rho = rho_next;
        self.tau = tau_next;
        self.j += 1;
        self.status = status;

        Ok(ThreeTermStep { j, alpha, alpha_bar, tau, rho_next, eps_next, sigma_next, tau_next, av_norm, status })
    }

    /// On a flagged near-breakdown, reseeds the process with the current
    /// `v, w` (renormalized) and resets the coefficient streams. Returns
    /// whether a restart happened.
    pub fn restart_if_needed(&mut self) -> Result<bool, Error> {
        if !matches!(self.status, StepStatus::NearBreakdown(_)) {
            return Ok(false);
        }
        if self.restarts >= self.policy.max_restarts {
            return Err(Error::RestartsExhausted { max: self.policy.max_restarts });
        }
        let v = normalized(&QVector::from_vec(self.v.clone()))?;
        let w = normalized(&QVector::from_vec(self.w.clone()))
            .map_err(|_| Error::RestartsExhausted { max: self.policy.max_restarts })?;
        self.v = v;
        self.w = w;
        self.restarts += 1;
        self.reset_coefficients();
        if self.record.is_some() {
            self.start_record();
        }
        if matches!(self.status, StepStatus::NearBreakdown(_)) && self.restarts >= self.policy.max_restarts {
            return Err(Error::RestartsExhausted { max: self.policy.max_restarts });
        }
        Ok(true)
    }
}

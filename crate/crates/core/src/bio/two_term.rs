use alloc::vec;
use alloc::vec::Vec;

use super::{lucky, BidiagFactors, BreakdownKind, BreakdownPolicy, KrylovOperator, Plain, StepStatus};
use crate::error::Error;
use crate::operator::QLinearOperator;
use crate::quat::Quaternion;
use crate::vector::{self, QVector};

/// Coefficients produced by one coupled two-term step `j`.
#[derive(Clone, Copy, Debug)]
pub struct TwoTermStep {
    pub j: usize,
    /// `l_j = ⟨A p_j, q_j⟩`.
    pub l: Quaternion,
    /// `τ⁽¹⁾_j = σ_j⁻¹ l_j`, diagonal of `L`.
    pub tau1: Quaternion,
    /// `μ_j = ε_j l_{j−1}⁻¹ σ_j`, superdiagonal of `U` (zero for `j = 1`).
    pub mu: Quaternion,
    pub rho_next: f64,
    pub eps_next: f64,
    pub sigma_next: Quaternion,
    /// `‖A p_j‖`.
    pub ap_norm: f64,
    pub status: StepStatus,
}

struct Record {
    v: Vec<QVector>,
    w: Vec<QVector>,
    p: Vec<QVector>,
    q: Vec<QVector>,
    factors: BidiagFactors,
}

/// Coupled two-term biconjugate orthonormalization.
pub struct TwoTermBio {
    v: Vec<Quaternion>,
    w: Vec<Quaternion>,
    p: Vec<Quaternion>,
    q: Vec<Quaternion>,
    ap: Vec<Quaternion>,
    aq: Vec<Quaternion>,
    sigma: Quaternion,
    rho: f64,
    eps: f64,
    l_prev: Quaternion,
    j: usize,
    sigma_max: f64,
    l_max: f64,
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

impl TwoTermBio {
    pub fn new(v1: &QVector, w1: &QVector, policy: BreakdownPolicy) -> Result<Self, Error> {
        vector::check_len(v1.len(), w1.len())?;
        let v = normalized(v1)?;
        let w = normalized(w1)?;
        let n = v.len();
        let mut s = Self {
            v,
            w,
            p: vec![Quaternion::ZERO; n],
            q: vec![Quaternion::ZERO; n],
            ap: vec![Quaternion::ZERO; n],
            aq: vec![Quaternion::ZERO; n],
            sigma: Quaternion::ZERO,
            rho: 0.0,
            eps: 1.0,
            l_prev: Quaternion::ZERO,
            j: 1,
            sigma_max: 0.0,
            l_max: 0.0,
            policy,
            restarts: 0,
            status: StepStatus::Continue,
            record: None,
        };
        s.reset_coefficients();
        Ok(s)
    }

    pub fn recording(v1: &QVector, w1: &QVector, policy: BreakdownPolicy) -> Result<Self, Error> {
        let mut s = Self::new(v1, w1, policy)?;
        s.start_record();
        Ok(s)
    }

    fn start_record(&mut self) {
        self.record = Some(Record {
            v: vec![QVector::from_vec(self.v.clone())],
            w: vec![QVector::from_vec(self.w.clone())],
            p: Vec::new(),
            q: Vec::new(),
            factors: BidiagFactors { sigma: vec![self.sigma], ..BidiagFactors::default() },
        });
    }

    fn reset_coefficients(&mut self) {
        self.p.iter_mut().for_each(|x| *x = Quaternion::ZERO);
        self.q.iter_mut().for_each(|x| *x = Quaternion::ZERO);
        self.sigma = vector::inner(&self.v, &self.w);
        self.rho = 0.0;
        // ε₁ is never consumed; any nonzero value will do.
        self.eps = 1.0;
        self.l_prev = Quaternion::ZERO;
        self.j = 1;
        self.sigma_max = self.sigma.abs();
        self.l_max = 0.0;
        self.status = if self.sigma.abs() <= self.policy.sigma_tol * self.sigma_max.max(1.0) {
            StepStatus::NearBreakdown(BreakdownKind::Sigma)
        } else {
            StepStatus::Continue
        };
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

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

    /// `p_j` of the step just taken.
    pub fn p(&self) -> &[Quaternion] {
        &self.p
    }

    /// `q_j` of the step just taken.
    pub fn q(&self) -> &[Quaternion] {
        &self.q
    }

    /// `A p_j` of the step just taken.
    pub fn ap(&self) -> &[Quaternion] {
        &self.ap
    }

    pub fn basis_v(&self) -> &[QVector] {
        self.record.as_ref().map_or(&[], |r| &r.v)
    }

    pub fn basis_w(&self) -> &[QVector] {
        self.record.as_ref().map_or(&[], |r| &r.w)
    }

    pub fn directions_p(&self) -> &[QVector] {
        self.record.as_ref().map_or(&[], |r| &r.p)
    }

    pub fn directions_q(&self) -> &[QVector] {
        self.record.as_ref().map_or(&[], |r| &r.q)
    }

    pub fn factors(&self) -> Option<&BidiagFactors> {
        self.record.as_ref().map(|r| &r.factors)
    }

    pub fn step<A: QLinearOperator + ?Sized>(&mut self, a: &A) -> Result<TwoTermStep, Error> {
        self.step_with(&mut Plain(a))
    }

    pub fn step_with(&mut self, op: &mut dyn KrylovOperator) -> Result<TwoTermStep, Error> {
        if self.status == StepStatus::Lucky {
            return Err(Error::InvalidArgument("process already reached an invariant subspace"));
        }
        vector::check_len(self.dim(), op.dim())?;
        let sigma_inv = self.sigma.inv()?;

        // p_j = v_j − p_{j−1} μ_j, q_j = w_j − q_{j−1} (ρ_j l_{j−1}⁻* σ_j*)
        let mu = if self.j > 1 {
            let l_inv = self.l_prev.inv()?;
            let mu = l_inv * self.sigma * self.eps;
            let nu = l_inv.conj() * self.sigma.conj() * self.rho;
            for ((p, q), (&v, &w)) in self.p.iter_mut().zip(self.q.iter_mut()).zip(self.v.iter().zip(&self.w)) {
                *p = v - *p * mu;
                *q = w - *q * nu;
            }
            mu
        } else {
            self.p.copy_from_slice(&self.v);
            self.q.copy_from_slice(&self.w);
            Quaternion::ZERO
        };

        op.forward(&self.p, &mut self.ap);
        let l = vector::inner(&self.ap, &self.q);
        let tau1 = sigma_inv * l;
        op.adjoint(&self.q, &mut self.aq);

        let mut vbar = self.ap.clone();
        vector::axpy(&mut vbar, &self.v, -tau1);
        let mut wbar = self.aq.clone();
        vector::axpy(&mut wbar, &self.w, -(sigma_inv.conj() * l.conj()));

        let rho_next = vector::norm(&vbar);
        let eps_next = vector::norm(&wbar);
        let ap_norm = vector::norm(&self.ap);
        self.l_max = self.l_max.max(l.abs());
        let l_small = l.abs() <= self.policy.l_tol * self.l_max.max(1.0);
        let j = self.j;

        let (status, sigma_next, v_next, w_next);
        if lucky(rho_next, ap_norm, &self.policy) {
            status = StepStatus::Lucky;
            sigma_next = Quaternion::ZERO;
            v_next = vec![Quaternion::ZERO; self.dim()];
            w_next = vec![Quaternion::ZERO; self.dim()];
        } else if eps_next == 0.0 || lucky(eps_next, vector::norm(&self.aq), &self.policy) {
            status = StepStatus::NearBreakdown(BreakdownKind::AdjointInvariant);
            sigma_next = Quaternion::ZERO;
            v_next = vbar.iter().map(|&x| x / rho_next).collect();
            w_next = vec![Quaternion::ZERO; self.dim()];
        } else {
            v_next = vbar.iter().map(|&x| x / rho_next).collect();
            w_next = wbar.iter().map(|&x| x / eps_next).collect();
            sigma_next = vector::inner(&v_next, &w_next);
            self.sigma_max = self.sigma_max.max(sigma_next.abs());
            status = if l_small {
                StepStatus::NearBreakdown(BreakdownKind::L)
            } else if sigma_next.abs() <= self.policy.sigma_tol * self.sigma_max.max(1.0) {
                StepStatus::NearBreakdown(BreakdownKind::Sigma)
            } else {
                StepStatus::Continue
            };
        }

        if let Some(r) = self.record.as_mut() {
            let f = &mut r.factors;
            f.l.push(l);
            f.tau1.push(tau1);
            f.mu.push(mu);
            f.rho.push(rho_next);
            f.eps.push(eps_next);
            f.sigma.push(sigma_next);
            r.p.push(QVector::from_vec(self.p.clone()));
            r.q.push(QVector::from_vec(self.q.clone()));
            r.v.push(QVector::from_vec(v_next.clone()));
            r.w.push(QVector::from_vec(w_next.clone()));
        }

        self.v = v_next;
        self.w = w_next;
        self.sigma = sigma_next;
        self.rho = rho_next;
        self.eps = eps_next;
        self.l_prev = l;
        self.j += 1;
        self.status = status;

        Ok(TwoTermStep { j, l, tau1, mu, rho_next, eps_next, sigma_next, ap_norm, status })
    }

    /// Same policy as [`ThreeTermBio::restart_if_needed`](super::ThreeTermBio::restart_if_needed).
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

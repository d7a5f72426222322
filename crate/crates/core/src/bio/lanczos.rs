use alloc::vec;
use alloc::vec::Vec;

use super::{lucky, BreakdownKind, BreakdownPolicy, KrylovOperator, Plain, StepStatus};
use crate::error::Error;
use crate::operator::QLinearOperator;
use crate::quat::Quaternion;
use crate::vector::{self, QVector};

/// Coefficients of one Lanczos step `j`.
#[derive(Clone, Copy, Debug)]
pub struct LanczosStep {
    pub j: usize,
    pub alpha: Quaternion,
    pub beta_next: Quaternion,
    /// `σ_{j+1} = |⟨v̄, w̄⟩|^{1/2}`, a nonnegative real.
    pub sigma_next: f64,
    pub status: StepStatus,
}

/// Quaternion Lanczos biorthogonalization with `⟨vᵢ, wⱼ⟩ = δᵢⱼ`.
pub struct LanczosBiorth {
    v: Vec<Quaternion>,
    w: Vec<Quaternion>,
    v_prev: Vec<Quaternion>,
    w_prev: Vec<Quaternion>,
    beta: Quaternion,
    sigma: f64,
    j: usize,
    policy: BreakdownPolicy,
    status: StepStatus,
    basis: Option<(Vec<QVector>, Vec<QVector>)>,
}

impl LanczosBiorth {
    /// Uses `v₁` as given and rescales `w₁` on the right so that `⟨v₁, w₁⟩ = 1`.
    pub fn new(v1: &QVector, w1: &QVector, policy: BreakdownPolicy) -> Result<Self, Error> {
        vector::check_len(v1.len(), w1.len())?;
        let d = v1.inner(w1)?;
        let s = d.inv_conj().map_err(|_| Error::InvalidArgument("starting vectors must satisfy <v1, w1> != 0"))?;
        let n = v1.len();
        Ok(Self {
            v: v1.as_slice().to_vec(),
            w: w1.iter().map(|&q| q * s).collect(),
            v_prev: vec![Quaternion::ZERO; n],
            w_prev: vec![Quaternion::ZERO; n],
            beta: Quaternion::ZERO,
            sigma: 0.0,
            j: 1,
            policy,
            status: StepStatus::Continue,
            basis: None,
        })
    }

    pub fn recording(v1: &QVector, w1: &QVector, policy: BreakdownPolicy) -> Result<Self, Error> {
        let mut s = Self::new(v1, w1, policy)?;
        s.basis = Some((vec![QVector::from_vec(s.v.clone())], vec![QVector::from_vec(s.w.clone())]));
        Ok(s)
    }

    pub fn status(&self) -> StepStatus {
        self.status
    }

    pub fn v(&self) -> &[Quaternion] {
        &self.v
    }

    pub fn w(&self) -> &[Quaternion] {
        &self.w
    }

    pub fn basis_v(&self) -> &[QVector] {
        self.basis.as_ref().map_or(&[], |b| &b.0)
    }

    pub fn basis_w(&self) -> &[QVector] {
        self.basis.as_ref().map_or(&[], |b| &b.1)
    }

    pub fn step<A: QLinearOperator + ?Sized>(&mut self, a: &A) -> Result<LanczosStep, Error> {
        self.step_with(&mut Plain(a))
    }

    pub fn step_with(&mut self, op: &mut dyn KrylovOperator) -> Result<LanczosStep, Error> {
        if self.status != StepStatus::Continue {
            return Err(Error::InvalidArgument("Lanczos process has stopped"));
        }
        let n = self.v.len();
        vector::check_len(n, op.dim())?;
        let mut av = vec![Quaternion::ZERO; n];
        let mut aw = vec![Quaternion::ZERO; n];
        op.forward(&self.v, &mut av);
        op.adjoint(&self.w, &mut aw);
        let alpha = vector::inner(&av, &self.w);
        let av_norm = vector::norm(&av);

        let mut vbar = av;
        vector::axpy(&mut vbar, &self.v, -alpha);
        vector::axpy(&mut vbar, &self.v_prev, -self.beta);
        let mut wbar = aw;
        vector::axpy(&mut wbar, &self.w, -alpha.conj());
        vector::axpy(&mut wbar, &self.w_prev, -Quaternion::real(self.sigma));

        let delta = vector::inner(&vbar, &wbar);
        let sigma_next = libm::sqrt(delta.abs());
        let j = self.j;
        if lucky(vector::norm(&vbar), av_norm, &self.policy) {
            self.status = StepStatus::Lucky;
            return Ok(LanczosStep { j, alpha, beta_next: Quaternion::ZERO, sigma_next: 0.0, status: self.status });
        }
        if sigma_next == 0.0 || sigma_next * sigma_next < self.policy.sigma_tol * vector::norm(&vbar) * vector::norm(&wbar) {
            self.status = StepStatus::NearBreakdown(BreakdownKind::Sigma);
            return Ok(LanczosStep { j, alpha, beta_next: Quaternion::ZERO, sigma_next, status: self.status });
        }
        let beta_next = delta / sigma_next;
        let s = beta_next.inv_conj()?;
        let w_next: Vec<Quaternion> = wbar.iter().map(|&q| q * s).collect();
        let v_next: Vec<Quaternion> = vbar.iter().map(|&q| q / sigma_next).collect();
        if let Some((bv, bw)) = self.basis.as_mut() {
            bv.push(QVector::from_vec(v_next.clone()));
            bw.push(QVector::from_vec(w_next.clone()));
        }
        self.v_prev = core::mem::replace(&mut self.v, v_next);
        self.w_prev = core::mem::replace(&mut self.w, w_next);
        self.beta = beta_next;
        self.sigma = sigma_next;
        self.j += 1;
        Ok(LanczosStep { j, alpha, beta_next, sigma_next, status: self.status })
    }
}

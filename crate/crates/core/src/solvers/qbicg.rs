use alloc::vec;
use alloc::vec::Vec;

use super::{IterationRecord, Monitor, SolveOptions, SolveReport, Termination};
use crate::error::Error;
use crate::operator::QLinearOperator;
use crate::quat::Quaternion;
use crate::vector::{self, QVector};

// Coefficient placement. With δ_j = ⟨r_j, r̃_j⟩ and c_j = ⟨A p_j, p̃_j⟩:
//   α_j = c_j⁻¹ δ_j          α̃_j = c_j⁻* δ_j*
//   β_j = δ_j⁻¹ δ_{j+1}      β̃_j = δ_j⁻* δ_{j+1}*
// The shadow coefficients are the conjugates of the reversed products, which
// is what ⟨r_i, r̃_j⟩ = 0 and ⟨A p_i, p̃_j⟩ = 0 (i ≠ j) require under a right
// module.

/// Outcome of one QBiCG step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QBiCGStatus {
    Continue,
    /// `⟨r_j, r̃_j⟩` or `⟨A p_j, p̃_j⟩` vanished (relative to `sigma_tol`);
    /// nothing was updated.
    Breakdown,
}

/// The raw biconjugate-gradient iteration, one step at a time.
pub struct QBiCG {
    x: Vec<Quaternion>,
    r: Vec<Quaternion>,
    rt: Vec<Quaternion>,
    p: Vec<Quaternion>,
    pt: Vec<Quaternion>,
    ap: Vec<Quaternion>,
    atp: Vec<Quaternion>,
    delta: Quaternion,
    tiny: f64,
}

impl QBiCG {
    /// Starts from `x₀` (zero if `None`) with shadow residual `r̃₀ = r₀`.
    pub fn new<A: QLinearOperator + ?Sized>(a: &A, b: &QVector, x0: Option<&QVector>, tiny: f64) -> Result<Self, Error> {
        let n = b.len();
        vector::check_len(a.shape().0, n)?;
        let x: Vec<Quaternion> = x0.map_or_else(|| vec![Quaternion::ZERO; n], |x| x.as_slice().to_vec());
        let mut r = vec![Quaternion::ZERO; n];
        residual(a, b, &x, &mut r);
        let delta = vector::inner(&r, &r);
        Ok(Self {
            x,
            rt: r.clone(),
            p: r.clone(),
            pt: r.clone(),
            r,
            ap: vec![Quaternion::ZERO; n],
            atp: vec![Quaternion::ZERO; n],
            delta,
            tiny,
        })
    }

    pub fn x(&self) -> &[Quaternion] {
        &self.x
    }
    pub fn r(&self) -> &[Quaternion] {
        &self.r
    }
    pub fn r_shadow(&self) -> &[Quaternion] {
        &self.rt
    }
    pub fn p(&self) -> &[Quaternion] {
        &self.p
    }
    pub fn p_shadow(&self) -> &[Quaternion] {
        &self.pt
    }

    /// `‖b − A x‖` without touching the recurrence.
    pub fn true_residual_norm<A: QLinearOperator + ?Sized>(&self, a: &A, b: &QVector, work: &mut [Quaternion]) -> f64 {
        residual(a, b, &self.x, work);
        vector::norm(work)
    }

    /// `x ← x + p α`, both residuals, then the new directions.
    pub fn step<A: QLinearOperator + ?Sized>(&mut self, a: &A) -> Result<QBiCGStatus, Error> {
        if self.delta.abs() <= self.tiny * vector::norm(&self.r) * vector::norm(&self.rt) {
            return Ok(QBiCGStatus::Breakdown);
        }
        a.apply_to(&self.p, &mut self.ap);
        a.apply_adjoint_to(&self.pt, &mut self.atp);
        let c = vector::inner(&self.ap, &self.pt);
        if c.abs() <= self.tiny * vector::norm(&self.ap) * vector::norm(&self.pt) {
            return Ok(QBiCGStatus::Breakdown);
        }
        let (Ok(c_inv), Ok(d_inv)) = (c.inv(), self.delta.inv()) else {
            return Ok(QBiCGStatus::Breakdown);
        };
        let alpha = c_inv * self.delta;
        let alpha_t = c_inv.conj() * self.delta.conj();
        vector::axpy(&mut self.x, &self.p, alpha);
        vector::axpy(&mut self.r, &self.ap, -alpha);
        vector::axpy(&mut self.rt, &self.atp, -alpha_t);
        self.turn(d_inv);
        Ok(QBiCGStatus::Continue)
    }

    fn turn(&mut self, d_inv: Quaternion) {
        let delta_next = vector::inner(&self.r, &self.rt);
        let beta = d_inv * delta_next;
        let beta_t = d_inv.conj() * delta_next.conj();
        for (pi, &ri) in self.p.iter_mut().zip(&self.r) {
            *pi = ri + *pi * beta;
        }
        for (pi, &ri) in self.pt.iter_mut().zip(&self.rt) {
            *pi = ri + *pi * beta_t;
        }
        self.delta = delta_next;
    }
}

fn residual<A: QLinearOperator + ?Sized>(a: &A, b: &QVector, x: &[Quaternion], r: &mut [Quaternion]) {
    a.apply_to(x, r);
    for (ri, &bi) in r.iter_mut().zip(b.iter()) {
        *ri = bi - *ri;
    }
}

pub(super) fn run(
    a: &dyn QLinearOperator,
    b: &QVector,
    x0: Option<&QVector>,
    opts: &SolveOptions,
    mut monitor: Option<Monitor<'_>>,
) -> Result<SolveReport, Error> {
    let mut it_state = QBiCG::new(a, b, x0, opts.policy.sigma_tol)?;
    let r0 = vector::norm(it_state.r());

    let mut report = SolveReport {
        x: QVector::zeros(0),
        iterations: 0,
        restarts: 0,
        termination: Termination::Converged,
        history: Vec::new(),
        true_final_rr: 0.0,
        preconditioned_final_rr: None,
        max_unitarity_defect: 0.0,
        iterates: Vec::new(),
        wall_time: None,
    };
    if r0 == 0.0 {
        report.x = QVector::from_vec(it_state.x);
        return Ok(report);
    }
    if !r0.is_finite() {
        return Err(Error::InvalidArgument("initial residual is not finite"));
    }

    let mut work = vec![Quaternion::ZERO; b.len()];
    let mut it = 0usize;
    let termination;
    loop {
        if it_state.step(a)? == QBiCGStatus::Breakdown {
            termination = Termination::Breakdown;
            break;
        }
        it += 1;

        // The recursive residual drives the running test; `b − A x` is
        // measured periodically and before accepting convergence.
        let mut rr = vector::norm(it_state.r()) / r0;
        if rr <= opts.tol || it % opts.recompute_every == 0 || !rr.is_finite() {
            rr = it_state.true_residual_norm(a, b, &mut work) / r0;
        }
        let rec = IterationRecord {
            iter: it,
            true_rr: rr,
            precond_rr: None,
            working_rr: rr,
            quasi_rr: None,
            g12_abs: None,
            cycle_step: it,
            cycle_start_rr: 1.0,
        };
        if let Some(m) = monitor.as_mut() {
            m(&rec);
        }
        if opts.record_history {
            report.history.push(rec);
        }
        if report.iterates.len() < opts.keep_iterates {
            report.iterates.push(QVector::from_vec(it_state.x.clone()));
        }
        if !rr.is_finite() {
            termination = Termination::Breakdown;
            break;
        }
        if rr <= opts.tol {
            termination = Termination::Converged;
            break;
        }
        if it >= opts.max_iter {
            termination = Termination::MaxIter;
            break;
        }
    }

    report.iterations = it;
    report.termination = termination;
    report.true_final_rr = it_state.true_residual_norm(a, b, &mut work) / r0;
    report.x = QVector::from_vec(it_state.x);
    Ok(report)
}

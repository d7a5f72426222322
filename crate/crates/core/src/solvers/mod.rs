//! QQMR solvers (three-term, coupled two-term, left-preconditioned) and the
//! QBiCG baseline.
//!
//! All solvers share [`SolveOptions`] and return a [`SolveReport`]. The
//! relative residual is `RR = ‖b − A x_j‖ / ‖b − A x₀‖`; with a
//! preconditioner the stopping test uses the preconditioned residual
//! `M⁻¹(b − A x_j)` and both values are reported.

mod qbicg;
mod qmr;

pub use qbicg::{QBiCG, QBiCGStatus};

use alloc::vec::Vec;
use core::time::Duration;

use crate::bio::BreakdownPolicy;
use crate::error::Error;
use crate::operator::QLinearOperator;
use crate::precond::Preconditioner;
use crate::vector::QVector;

/// Stopping and bookkeeping parameters.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Target relative residual.
    pub tol: f64,
    pub max_iter: usize,
    pub policy: BreakdownPolicy,
    pub record_history: bool,
    /// The residual is recomputed as `b − A x` every this many iterations.
    pub recompute_every: usize,
    /// Number of leading iterates `x₁, x₂, …` to keep in the report.
    pub keep_iterates: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol: 1e-7, max_iter: 5000, policy: BreakdownPolicy::default(), record_history: true, recompute_every: 50, keep_iterates: 0 }
    }
}

impl SolveOptions {
    fn validate(&self) -> Result<(), Error> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument("tol must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1"));
        }
        if self.recompute_every == 0 {
            return Err(Error::InvalidArgument("recompute_every must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    Converged,
    MaxIter,
    /// The process or the recurrence could not continue and no restart applies.
    Breakdown,
    RestartExhausted,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Converged => "converged",
            Self::MaxIter => "max_iter",
            Self::Breakdown => "breakdown",
            Self::RestartExhausted => "restart_exhausted",
        }
    }
}

/// One row of the convergence history.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    /// `‖b − A x_j‖ / ‖r₀‖`.
    pub true_rr: f64,
    /// `‖M⁻¹(b − A x_j)‖ / ‖M⁻¹ r₀‖`, when preconditioned.
    pub precond_rr: Option<f64>,
    /// The residual the stopping test sees (preconditioned if applicable).
    pub working_rr: f64,
    /// `|γ_{j+1}|` relative to the initial working residual norm.
    pub quasi_rr: Option<f64>,
    /// `|g12|` of the rotation built at this step.
    pub g12_abs: Option<f64>,
    /// Step index inside the current restart cycle, starting at 1.
    pub cycle_step: usize,
    /// Working residual at the start of the cycle, relative.
    pub cycle_start_rr: f64,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub x: QVector,
    pub iterations: usize,
    pub restarts: usize,
    pub termination: Termination,
    pub history: Vec<IterationRecord>,
    /// Recomputed `‖b − A x‖ / ‖r₀‖` at termination.
    pub true_final_rr: f64,
    pub preconditioned_final_rr: Option<f64>,
    /// Largest `‖G*G − I‖_F` over all rotations built.
    pub max_unitarity_defect: f64,
    /// Leading iterates, see [`SolveOptions::keep_iterates`].
    pub iterates: Vec<QVector>,
    /// Filled in by callers that time the solve.
    pub wall_time: Option<Duration>,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    /// The final relative residual the stopping test refers to.
    pub fn final_rr(&self) -> f64 {
        self.preconditioned_final_rr.unwrap_or(self.true_final_rr)
    }

    pub fn relative_residuals(&self) -> Vec<f64> {
        self.history.iter().map(|r| r.true_rr).collect()
    }

    pub fn quasi_residuals(&self) -> Vec<f64> {
        self.history.iter().filter_map(|r| r.quasi_rr).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    ThreeTerm,
    TwoTerm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Qqmr(Variant),
    QBiCG,
}

/// Per-iteration callback.
pub type Monitor<'a> = &'a mut dyn FnMut(&IterationRecord);

/// General entry point. `precond` is only honoured by the QQMR methods.
pub fn solve(
    method: Method,
    a: &dyn QLinearOperator,
    b: &QVector,
    x0: Option<&QVector>,
    precond: Option<&dyn Preconditioner>,
    opts: &SolveOptions,
    monitor: Option<Monitor<'_>>,
) -> Result<SolveReport, Error> {
    opts.validate()?;
    let (rows, cols) = a.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    crate::vector::check_len(rows, b.len())?;
    if let Some(x0) = x0 {
        crate::vector::check_len(rows, x0.len())?;
    }
    if let Some(m) = precond {
        crate::vector::check_len(rows, m.dim())?;
    }
    match method {
        Method::Qqmr(v) => qmr::run(v, a, b, x0, precond, opts, monitor),
        Method::QBiCG => {
            if precond.is_some() {
                return Err(Error::InvalidArgument("QBiCG is implemented without preconditioning"));
            }
            qbicg::run(a, b, x0, opts, monitor)
        }
    }
}

/// QQMR on three-term recurrences.
pub fn qqmr3_solve<A: QLinearOperator>(a: &A, b: &QVector, x0: Option<&QVector>, opts: &SolveOptions) -> Result<SolveReport, Error> {
    solve(Method::Qqmr(Variant::ThreeTerm), a, b, x0, None, opts, None)
}

/// QQMR on coupled two-term recurrences.
pub fn qqmr2_solve<A: QLinearOperator>(a: &A, b: &QVector, x0: Option<&QVector>, opts: &SolveOptions) -> Result<SolveReport, Error> {
    solve(Method::Qqmr(Variant::TwoTerm), a, b, x0, None, opts, None)
}

/// Left-preconditioned QQMR, run on `M⁻¹A x = M⁻¹b`.
pub fn pqqmr_solve<A: QLinearOperator, M: Preconditioner>(
    variant: Variant,
    a: &A,
    b: &QVector,
    x0: Option<&QVector>,
    m: &M,
    opts: &SolveOptions,
) -> Result<SolveReport, Error> {
    solve(Method::Qqmr(variant), a, b, x0, Some(m), opts, None)
}

pub fn qbicg_solve<A: QLinearOperator>(a: &A, b: &QVector, x0: Option<&QVector>, opts: &SolveOptions) -> Result<SolveReport, Error> {
    solve(Method::QBiCG, a, b, x0, None, opts, None)
}

/// Slack factor applied to the residual envelope.
pub const PROP41_SLACK: f64 = 1.1;

/// Checks `‖r_k‖ ≤ √(k+1)·|γ_{k+1}|` and
/// `‖r_k‖ ≤ √(k+1)·|g12⁽¹⁾ ⋯ g12⁽ᵏ⁾|·‖r_start‖` at every recorded step, with
/// `k` counted inside each restart cycle. Both sides are relative to the
/// initial residual. An absolute floor of a few ulps per step absorbs
/// roundoff once both sides reach machine precision.
pub fn check_prop41(report: &SolveReport) -> bool {
    let mut product = 1.0;
    for rec in &report.history {
        let (Some(quasi), Some(g12)) = (rec.quasi_rr, rec.g12_abs) else {
            return false;
        };
        if rec.cycle_step == 1 {
            product = 1.0;
        }
        product *= g12;
        let k = rec.cycle_step as f64;
        let root = libm::sqrt(k + 1.0);
        let floor = 64.0 * f64::EPSILON * (k + 1.0);
        if rec.working_rr > PROP41_SLACK * root * quasi + floor {
            return false;
        }
        if rec.working_rr > PROP41_SLACK * root * product * rec.cycle_start_rr + floor {
            return false;
        }
    }
    true
}

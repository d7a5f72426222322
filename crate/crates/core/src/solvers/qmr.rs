use alloc::vec;
use alloc::vec::Vec;

use super::{IterationRecord, Monitor, SolveOptions, SolveReport, Termination, Variant};
use crate::bio::{KrylovOperator, StepStatus, ThreeTermBio, TwoTermBio};
use crate::error::Error;
use crate::givens::{UpperFactorR, UpperFactorRbar};
use crate::operator::QLinearOperator;
use crate::precond::Preconditioner;
use crate::quat::Quaternion;
use crate::vector::{self, QVector};

/// `M⁻¹A` that keeps the unpreconditioned product `A x` of the last forward
/// application, so the true residual can be carried along without another
/// matrix-vector product.
struct Tracked<'a> {
    a: &'a dyn QLinearOperator,
    m: Option<&'a dyn Preconditioner>,
    raw: Vec<Quaternion>,
    tmp: Vec<Quaternion>,
}

impl KrylovOperator for Tracked<'_> {
    fn dim(&self) -> usize {
        self.raw.len()
    }
    fn forward(&mut self, x: &[Quaternion], y: &mut [Quaternion]) {
        self.a.apply_to(x, &mut self.raw);
        match self.m {
            Some(m) => m.apply_inverse_to(&self.raw, y),
            None => y.copy_from_slice(&self.raw),
        }
    }
    fn adjoint(&mut self, x: &[Quaternion], y: &mut [Quaternion]) {
        match self.m {
            Some(m) => {
                m.apply_inverse_adjoint_to(x, &mut self.tmp);
                self.a.apply_adjoint_to(&self.tmp, y);
            }
            None => self.a.apply_adjoint_to(x, y),
        }
    }
}

enum Process {
    Three(ThreeTermBio, UpperFactorR),
    Two(TwoTermBio, UpperFactorRbar),
}

/// Search directions `d_{j−1}, d_{j−2}` with their images under `M⁻¹A`
/// and under `A`.
struct Directions {
    d: [Vec<Quaternion>; 2],
    ad: [Vec<Quaternion>; 2],
    adr: [Vec<Quaternion>; 2],
}

impl Directions {
    fn new(n: usize) -> Self {
        let z = || vec![Quaternion::ZERO; n];
        Self { d: [z(), z()], ad: [z(), z()], adr: [z(), z()] }
    }

    fn clear(&mut self) {
        for v in self.d.iter_mut().chain(self.ad.iter_mut()).chain(self.adr.iter_mut()) {
            v.iter_mut().for_each(|q| *q = Quaternion::ZERO);
        }
    }

    /// `d_j = (s − d_{j−1} c1 − d_{j−2} c2) / η`, written into slot 1 and
    /// then swapped into slot 0.
    fn advance(&mut self, src: [&[Quaternion]; 3], c1: Quaternion, c2: Quaternion, eta: f64) {
        let inv = 1.0 / eta;
        for (k, s) in src.iter().enumerate() {
            let [d0, d1] = match k {
                0 => &mut self.d,
                1 => &mut self.ad,
                _ => &mut self.adr,
            };
            for ((new, &old), &s) in d1.iter_mut().zip(d0.iter()).zip(s.iter()) {
                *new = (s - old * c1 - *new * c2) * inv;
            }
            core::mem::swap(d0, d1);
        }
    }
}

struct State<'a> {
    a: &'a dyn QLinearOperator,
    m: Option<&'a dyn Preconditioner>,
    b: &'a QVector,
    x: Vec<Quaternion>,
    r_true: Vec<Quaternion>,
    r_work: Vec<Quaternion>,
    r0_true: f64,
    beta0: f64,
}

impl State<'_> {
    /// Recomputes `r = b − A x` and `M⁻¹ r`.
    fn recompute(&mut self) {
        self.a.apply_to(&self.x, &mut self.r_true);
        for (r, &b) in self.r_true.iter_mut().zip(self.b.iter()) {
            *r = b - *r;
        }
        match self.m {
            Some(m) => m.apply_inverse_to(&self.r_true, &mut self.r_work),
            None => self.r_work.copy_from_slice(&self.r_true),
        }
    }

    fn true_rr(&self) -> f64 {
        vector::norm(&self.r_true) / self.r0_true
    }

    fn working_rr(&self) -> f64 {
        vector::norm(&self.r_work) / self.beta0
    }
}

fn start_process(variant: Variant, r: &[Quaternion], opts: &SolveOptions) -> Result<(Process, f64), Error> {
    let beta = vector::norm(r);
    let v1 = QVector::from_vec(r.to_vec());
    let p = match variant {
        Variant::ThreeTerm => Process::Three(ThreeTermBio::new(&v1, &v1, opts.policy)?, UpperFactorR::new(beta)),
        Variant::TwoTerm => Process::Two(TwoTermBio::new(&v1, &v1, opts.policy)?, UpperFactorRbar::new(beta)),
    };
    Ok((p, beta))
}

pub(super) fn run(
    variant: Variant,
    a: &dyn QLinearOperator,
    b: &QVector,
    x0: Option<&QVector>,
    precond: Option<&dyn Preconditioner>,
    opts: &SolveOptions,
    mut monitor: Option<Monitor<'_>>,
) -> Result<SolveReport, Error> {
    let n = b.len();
    let mut st = State {
        a,
        m: precond,
        b,
        x: x0.map_or_else(|| vec![Quaternion::ZERO; n], |x| x.as_slice().to_vec()),
        r_true: vec![Quaternion::ZERO; n],
        r_work: vec![Quaternion::ZERO; n],
        r0_true: 1.0,
        beta0: 1.0,
    };
    st.recompute();
    st.r0_true = vector::norm(&st.r_true);
    st.beta0 = vector::norm(&st.r_work);
    let preconditioned = precond.is_some();

    let mut report = SolveReport {
        x: QVector::zeros(0),
        iterations: 0,
        restarts: 0,
        termination: Termination::Converged,
        history: Vec::new(),
        true_final_rr: 0.0,
        preconditioned_final_rr: preconditioned.then_some(0.0),
        max_unitarity_defect: 0.0,
        iterates: Vec::new(),
        wall_time: None,
    };
    if st.r0_true == 0.0 || st.beta0 == 0.0 {
        report.x = QVector::from_vec(st.x);
        return Ok(report);
    }
    if !st.beta0.is_finite() {
        return Err(Error::InvalidArgument("initial residual is not finite"));
    }

    let mut op = Tracked { a, m: precond, raw: vec![Quaternion::ZERO; n], tmp: vec![Quaternion::ZERO; n] };
    let (mut process, mut cycle_beta) = start_process(variant, &st.r_work, opts)?;
    let mut dirs = Directions::new(n);
    let mut cycle_step = 0usize;
    let mut it = 0usize;
    let termination;

    loop {
        it += 1;
        cycle_step += 1;

        // One process step, then fold the new column into the QR factors.
        let (gamma, gamma_next, g12, status, defect) = match &mut process {
            Process::Three(bio, r) => {
                let s = match bio.step_with(&mut op) {
                    Ok(s) => s,
                    Err(Error::ZeroInverse) => {
                        termination = Termination::Breakdown;
                        break;
                    }
                    Err(e) => return Err(e),
                };
                let Ok(u) = r.push_column(s.tau, s.alpha, s.rho_next) else {
                    termination = Termination::Breakdown;
                    break;
                };
                dirs.advance([bio.v_prev(), bio.av(), &op.raw], u.eta2, u.eta3, u.eta1);
                (u.gamma, u.gamma_next, u.rotation.g12.abs(), s.status, r.max_unitarity_defect())
            }
            Process::Two(bio, r) => {
                let s = match bio.step_with(&mut op) {
                    Ok(s) => s,
                    Err(Error::ZeroInverse) => {
                        termination = Termination::Breakdown;
                        break;
                    }
                    Err(e) => return Err(e),
                };
                let Ok(u) = r.push_column(s.tau1, s.rho_next) else {
                    termination = Termination::Breakdown;
                    break;
                };
                dirs.advance([bio.p(), bio.ap(), &op.raw], u.kappa2, Quaternion::ZERO, u.kappa1);
                (u.gamma, u.gamma_next, u.rotation.g12.abs(), s.status, r.max_unitarity_defect())
            }
        };
        report.max_unitarity_defect = report.max_unitarity_defect.max(defect);

        vector::axpy(&mut st.x, &dirs.d[0], gamma);
        vector::axpy(&mut st.r_work, &dirs.ad[0], -gamma);
        if preconditioned {
            vector::axpy(&mut st.r_true, &dirs.adr[0], -gamma);
        } else {
            st.r_true.copy_from_slice(&st.r_work);
        }

        let mut working = st.working_rr();
        let refresh = working <= opts.tol || status != StepStatus::Continue || it % opts.recompute_every == 0 || !working.is_finite();
        if refresh {
            st.recompute();
            working = st.working_rr();
        }
        let rec = IterationRecord {
            iter: it,
            true_rr: st.true_rr(),
            precond_rr: preconditioned.then_some(working),
            working_rr: working,
            quasi_rr: Some(gamma_next.abs() / st.beta0),
            g12_abs: Some(g12),
            cycle_step,
            cycle_start_rr: cycle_beta / st.beta0,
        };
        if let Some(m) = monitor.as_mut() {
            m(&rec);
        }
        if opts.record_history {
            report.history.push(rec);
        }
        if report.iterates.len() < opts.keep_iterates {
            report.iterates.push(QVector::from_vec(st.x.clone()));
        }

        if !working.is_finite() {
            termination = Termination::Breakdown;
            break;
        }
        if working <= opts.tol {
            termination = Termination::Converged;
            break;
        }
        if it >= opts.max_iter {
            termination = Termination::MaxIter;
            break;
        }
        if status != StepStatus::Continue {
            // Restart the process from the current residual.
            report.restarts += 1;
            if report.restarts > opts.policy.max_restarts {
                termination = Termination::RestartExhausted;
                break;
            }
            let (p, beta) = start_process(variant, &st.r_work, opts)?;
            process = p;
            cycle_beta = beta;
            dirs.clear();
            cycle_step = 0;
        }
    }

    st.recompute();
    report.iterations = it;
    report.termination = termination;
    report.true_final_rr = st.true_rr();
    if preconditioned {
        report.preconditioned_final_rr = Some(st.working_rr());
    }
    report.x = QVector::from_vec(st.x);
    Ok(report)
}

//! Builds the requested problem, runs each solver in turn and writes the
//! CSV artifacts.
//!
//! Files written to the output directory:
//!
//! * `history_<solver>.csv` — `iter,true_rr,quasi_rr,wall_ms`; `quasi_rr` is
//!   empty for QBiCG.
//! * `summary.csv` — `solver,IT,CPU,RR,true_RR,termination,restarts,seed`,
//!   where `CPU` is wall seconds and `RR` the residual the stopping test saw
//!   (preconditioned for `pqqmr*`).
//! * blur runs only: `metrics.csv` — `solver,PSNR,SSIM,CPU,RR` with a first
//!   `blurred` row, `blurred.ppm` and `restored_<solver>.ppm` (`.qimg` for
//!   four-channel inputs).
//! * `plot.gp` with `--gnuplot`.
//!
//! Floats are written as `{:.16e}`. Apart from `wall_ms` and `CPU`, output is
//! a pure function of the configuration.

use std::fs::File;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use qqmr_core::precond::{Preconditioner, SsorPreconditioner};
use qqmr_core::problems::{
    blur_single_operator, build_blur_multi, build_filter_system, chen_rk4, gen_example1_with, psnr, ssim, uniform_rhs, ChannelSet,
    ChenParams, ColorImage, Problem, ProblemOperator,
};
use qqmr_core::solvers::{solve, IterationRecord, Method, SolveOptions, SolveReport, Variant};
use qqmr_core::{QSparseMatrix, Quaternion};

use crate::cli::{BlurMode, ImageSource, ProblemSpec, RunConfig, SolverKind};
use crate::error::{AppError, Result};
use crate::{imageio, mtx};

/// A small color test image shipped with the binary.
pub const BUNDLED_IMAGE: &[u8] = include_bytes!("../assets/test32.ppm");

pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Clone, Debug)]
pub struct SolverRun {
    pub solver: SolverKind,
    pub report: SolveReport,
    pub wall_ms: Vec<f64>,
    pub quality: Option<(f64, f64)>,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub label: String,
    pub runs: Vec<SolverRun>,
    /// PSNR and SSIM of the blurred observation, blur runs only.
    pub blurred_quality: Option<(f64, f64)>,
}

struct Built {
    problem: Problem,
    image: Option<(usize, usize)>,
}

pub fn bundled_image() -> Result<ColorImage> {
    imageio::decode_image(BUNDLED_IMAGE, Path::new("<bundled test32.ppm>"))
}

fn build(spec: &ProblemSpec, seed: u64) -> Result<Built> {
    let problem = match spec {
        ProblemSpec::Identity { n } => Problem {
            operator: ProblemOperator::Sparse(QSparseMatrix::identity(*n)),
            rhs: uniform_rhs(*n, seed),
            truth: None,
            label: format!("identity n={n}"),
        },
        ProblemSpec::Mtx { path, coeffs } => {
            let a0 = mtx::read_matrix_market(path)?;
            if a0.rows() != a0.cols() {
                return Err(AppError::Config(format!("{}: matrix is {}x{}, need a square matrix", path.display(), a0.rows(), a0.cols())));
            }
            let [w, x, y, z] = *coeffs;
            gen_example1_with(a0, Quaternion::new(w, x, y, z), seed)?
        }
        ProblemSpec::Chen { t_end, h, p, q, noise } => {
            let traj = chen_rk4(*t_end, *h, [1.0; 3], ChenParams::default())?;
            build_filter_system(&traj, *p, *q, *noise, seed)?
        }
        ProblemSpec::Blur { image, mode, sigma, r, s } => {
            let img = match image {
                ImageSource::Bundled => bundled_image()?,
                ImageSource::File(p) => imageio::read_image(p)?,
            };
            let n = img.side();
            let op = match mode {
                BlurMode::Single => blur_single_operator(n, *sigma, *r, *s)?,
                BlurMode::Multi => build_blur_multi(n, *s)?,
            };
            let p = Problem::from_truth(ProblemOperator::Kron(op), img.to_qvector(), format!("blur {mode:?} n={n}"))?;
            return Ok(Built { problem: p, image: Some((n, img.channels())) });
        }
    };
    Ok(Built { problem, image: None })
}

fn channel_set(channels: usize) -> ChannelSet {
    if channels == 4 {
        ChannelSet::Full4
    } else {
        ChannelSet::Pure3
    }
}

fn run_one(kind: SolverKind, problem: &Problem, ssor: Option<&SsorPreconditioner>, opts: &SolveOptions, echo: bool) -> Result<(SolveReport, Vec<f64>)> {
    let method = match kind {
        SolverKind::QBiCG => Method::QBiCG,
        SolverKind::Qqmr3 | SolverKind::Pqqmr3 => Method::Qqmr(Variant::ThreeTerm),
        SolverKind::Qqmr2 | SolverKind::Pqqmr2 => Method::Qqmr(Variant::TwoTerm),
    };
    let precond = if kind.preconditioned() { ssor.map(|m| m as &dyn Preconditioner) } else { None };
    let mut wall_ms = Vec::new();
    let start = Instant::now();
    let mut monitor = |r: &IterationRecord| {
        let ms = start.elapsed().as_secs_f64() * 1e3;
        wall_ms.push(ms);
        if echo {
            let quasi = r.quasi_rr.map(fmt).unwrap_or_default();
            println!("{},{},{},{},{}", kind.name(), r.iter, fmt(r.true_rr), quasi, fmt(ms));
        }
    };
    let mut report = solve(method, &problem.operator, &problem.rhs, None, precond, opts, Some(&mut monitor))?;
    report.wall_time = Some(start.elapsed());
    Ok((report, wall_ms))
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| AppError::io(path, e))
}

fn write_history(path: &Path, run: &SolverRun) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["iter", "true_rr", "quasi_rr", "wall_ms"])?;
    for (r, ms) in run.report.history.iter().zip(&run.wall_ms) {
        w.write_record([r.iter.to_string(), fmt(r.true_rr), r.quasi_rr.map(fmt).unwrap_or_default(), fmt(*ms)])?;
    }
    w.flush().map_err(|e| AppError::io(path, e))
}

fn cpu_seconds(r: &SolveReport) -> f64 {
    r.wall_time.map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

fn write_summary(path: &Path, runs: &[SolverRun], seed: u64) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["solver", "IT", "CPU", "RR", "true_RR", "termination", "restarts", "seed"])?;
    for run in runs {
        let r = &run.report;
        w.write_record([
            run.solver.name().to_string(),
            r.iterations.to_string(),
            fmt(cpu_seconds(r)),
            fmt(r.final_rr()),
            fmt(r.true_final_rr),
            r.termination.as_str().to_string(),
            r.restarts.to_string(),
            seed.to_string(),
        ])?;
    }
    w.flush().map_err(|e| AppError::io(path, e))
}

fn write_metrics(path: &Path, outcome: &RunOutcome) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["solver", "PSNR", "SSIM", "CPU", "RR"])?;
    if let Some((p, s)) = outcome.blurred_quality {
        w.write_record(["blurred".to_string(), fmt(p), fmt(s), String::new(), String::new()])?;
    }
    for run in &outcome.runs {
        if let Some((p, s)) = run.quality {
            w.write_record([run.solver.name().to_string(), fmt(p), fmt(s), fmt(cpu_seconds(&run.report)), fmt(run.report.final_rr())])?;
        }
    }
    w.flush().map_err(|e| AppError::io(path, e))
}

fn write_gnuplot(path: &Path, runs: &[SolverRun]) -> Result<()> {
    let mut s = String::from("set logscale y\nset xlabel 'iteration'\nset ylabel 'relative residual'\nset datafile separator ','\nset key top right\nplot ");
    let series: Vec<String> = runs
        .iter()
        .map(|r| format!("'history_{0}.csv' skip 1 using 1:2 with lines title '{0}'", r.solver.name()))
        .collect();
    s.push_str(&series.join(", \\\n     "));
    s.push('\n');
    create(path)?.write_all(s.as_bytes()).map_err(|e| AppError::io(path, e))
}

/// Runs the configured experiment and writes all artifacts.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    let built = build(&cfg.problem, cfg.seed)?;
    let problem = &built.problem;
    std::fs::create_dir_all(&cfg.out).map_err(|e| AppError::io(&cfg.out, e))?;

    let ssor = if cfg.solvers.iter().any(|s| s.preconditioned()) {
        Some(SsorPreconditioner::new(&problem.operator.to_sparse())?)
    } else {
        None
    };
    let opts = SolveOptions { tol: cfg.tol, max_iter: cfg.max_iter, ..SolveOptions::default() };
    if cfg.history {
        println!("solver,iter,true_rr,quasi_rr,wall_ms");
    }

    let mut outcome = RunOutcome { label: problem.label.clone(), runs: Vec::new(), blurred_quality: None };
    let image = built.image.zip(problem.truth.as_ref());
    if let Some(((n, channels), truth)) = image {
        let set = channel_set(channels);
        outcome.blurred_quality = Some((psnr(truth, &problem.rhs, 255.0, set)?, ssim(truth, &problem.rhs, 255.0, set)?));
        let blurred = ColorImage::from_qvector(&problem.rhs, n, channels)?;
        imageio::write_image(cfg.out.join(image_name("blurred", channels)), &blurred)?;
    }

    for &kind in &cfg.solvers {
        let (report, wall_ms) = run_one(kind, problem, ssor.as_ref(), &opts, cfg.history)?;
        let mut run = SolverRun { solver: kind, report, wall_ms, quality: None };
        if let Some(((n, channels), truth)) = image {
            let set = channel_set(channels);
            let x = &run.report.x;
            run.quality = Some((psnr(truth, x, 255.0, set)?, ssim(truth, x, 255.0, set)?));
            let restored = ColorImage::from_qvector(x, n, channels)?;
            imageio::write_image(cfg.out.join(image_name(&format!("restored_{}", kind.name()), channels)), &restored)?;
        }
        write_history(&cfg.out.join(format!("history_{}.csv", kind.name())), &run)?;
        outcome.runs.push(run);
    }

    write_summary(&cfg.out.join("summary.csv"), &outcome.runs, cfg.seed)?;
    if image.is_some() {
        write_metrics(&cfg.out.join("metrics.csv"), &outcome)?;
    }
    if cfg.gnuplot {
        write_gnuplot(&cfg.out.join("plot.gp"), &outcome.runs)?;
    }
    Ok(outcome)
}

fn image_name(stem: &str, channels: usize) -> String {
    if channels == 4 {
        format!("{stem}.qimg")
    } else {
        format!("{stem}.ppm")
    }
}

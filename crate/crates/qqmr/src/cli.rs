//! Command line flags and their translation into a [`RunConfig`].

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, ValueEnum};

use crate::error::{AppError, Result};

pub const DEFAULT_SEED: u64 = 20240229;

#[derive(Parser, Debug)]
#[command(name = "qqmr", version, about = "Quaternion QMR / BiCG experiment driver")]
pub struct Args {
    #[arg(long, value_enum, default_value_t = ProblemKind::Identity)]
    pub problem: ProblemKind,
    /// Matrix Market file with the real matrix A0 (for `--problem mtx`).
    #[arg(long)]
    pub mtx: Option<PathBuf>,
    /// Quaternion scaling c0,c1,c2,c3 so that A = A0·(c0 + c1 i + c2 j + c3 k).
    #[arg(long, default_value = "1,2,-1.5,0.5", allow_hyphen_values = true)]
    pub coeffs: String,
    /// T,h,p,q,noise for the Chen-attractor filter problem.
    #[arg(long, default_value = "10,0.001,50,50,0.05")]
    pub chen: String,
    /// img,mode,sigma,r,s; img may be `bundled`, mode is `single` or `multi`.
    #[arg(long, default_value = "bundled,single,1,10,7")]
    pub blur: String,
    /// Side of the identity problem.
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    /// Comma separated subset of qbicg,qqmr3,qqmr2,pqqmr3,pqqmr2.
    #[arg(long, default_value = "qbicg,qqmr3,qqmr2,pqqmr3,pqqmr2")]
    pub solvers: String,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    #[arg(long, default_value_t = 5000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Echo every history row to stdout as it is produced.
    #[arg(long)]
    pub history: bool,
    /// Also write a gnuplot script `plot.gp` for the histories.
    #[arg(long)]
    pub gnuplot: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProblemKind {
    Identity,
    Mtx,
    Chen,
    Blur,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverKind {
    QBiCG,
    Qqmr3,
    Qqmr2,
    Pqqmr3,
    Pqqmr2,
}

impl SolverKind {
    pub const ALL: [SolverKind; 5] = [Self::QBiCG, Self::Qqmr3, Self::Qqmr2, Self::Pqqmr3, Self::Pqqmr2];

    pub fn name(self) -> &'static str {
        match self {
            Self::QBiCG => "qbicg",
            Self::Qqmr3 => "qqmr3",
            Self::Qqmr2 => "qqmr2",
            Self::Pqqmr3 => "pqqmr3",
            Self::Pqqmr2 => "pqqmr2",
        }
    }

    pub fn preconditioned(self) -> bool {
        matches!(self, Self::Pqqmr3 | Self::Pqqmr2)
    }
}

impl FromStr for SolverKind {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| AppError::Config(format!("unknown solver `{s}` (expected one of qbicg, qqmr3, qqmr2, pqqmr3, pqqmr2)")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlurMode {
    Single,
    Multi,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ImageSource {
    Bundled,
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProblemSpec {
    Identity { n: usize },
    Mtx { path: PathBuf, coeffs: [f64; 4] },
    Chen { t_end: f64, h: f64, p: usize, q: usize, noise: f64 },
    Blur { image: ImageSource, mode: BlurMode, sigma: f64, r: usize, s: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub solvers: Vec<SolverKind>,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub history: bool,
    pub gnuplot: bool,
}

fn fields<'a>(flag: &str, raw: &'a str, count: usize) -> Result<Vec<&'a str>> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    if parts.len() != count {
        return Err(AppError::Config(format!("--{flag} expects {count} comma separated values, got `{raw}`")));
    }
    Ok(parts)
}

fn num<T: FromStr>(flag: &str, s: &str) -> Result<T> {
    s.parse().map_err(|_| AppError::Config(format!("--{flag}: cannot parse `{s}`")))
}

impl TryFrom<Args> for RunConfig {
    type Error = AppError;

    fn try_from(a: Args) -> Result<Self> {
        if a.mtx.is_some() && a.problem != ProblemKind::Mtx {
            return Err(AppError::Config("--mtx is only used with --problem mtx".into()));
        }
        let problem = match a.problem {
            ProblemKind::Identity => {
                if a.n == 0 {
                    return Err(AppError::Config("--n must be at least 1".into()));
                }
                ProblemSpec::Identity { n: a.n }
            }
            ProblemKind::Mtx => {
                let path = a.mtx.ok_or_else(|| AppError::Config("--problem mtx requires --mtx <file>".into()))?;
                let f = fields("coeffs", &a.coeffs, 4)?;
                let mut coeffs = [0.0; 4];
                for (c, s) in coeffs.iter_mut().zip(f) {
                    *c = num("coeffs", s)?;
                }
                ProblemSpec::Mtx { path, coeffs }
            }
            ProblemKind::Chen => {
                let f = fields("chen", &a.chen, 5)?;
                let (t_end, h, p, q, noise) =
                    (num("chen", f[0])?, num("chen", f[1])?, num("chen", f[2])?, num("chen", f[3])?, num("chen", f[4])?);
                if p != q {
                    return Err(AppError::Config(format!("--chen: the solvers need a square system, so p ({p}) must equal q ({q})")));
                }
                if !(h > 0.0 && t_end >= h) || !(noise >= 0.0) {
                    return Err(AppError::Config("--chen: need h > 0, T >= h and noise >= 0".into()));
                }
                ProblemSpec::Chen { t_end, h, p, q, noise }
            }
            ProblemKind::Blur => {
                let f = fields("blur", &a.blur, 5)?;
                let image = if f[0] == "bundled" { ImageSource::Bundled } else { ImageSource::File(f[0].into()) };
                let mode = match f[1] {
                    "single" => BlurMode::Single,
                    "multi" => BlurMode::Multi,
                    m => return Err(AppError::Config(format!("--blur: mode must be single or multi, got `{m}`"))),
                };
                let (sigma, r, s) = (num("blur", f[2])?, num("blur", f[3])?, num("blur", f[4])?);
                if !(sigma > 0.0) || s == 0 {
                    return Err(AppError::Config("--blur: need sigma > 0 and s >= 1".into()));
                }
                ProblemSpec::Blur { image, mode, sigma, r, s }
            }
        };
        let mut solvers = Vec::new();
        for s in a.solvers.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let k: SolverKind = s.parse()?;
            if !solvers.contains(&k) {
                solvers.push(k);
            }
        }
        if solvers.is_empty() {
            return Err(AppError::Config("--solvers must name at least one solver".into()));
        }
        if !(a.tol > 0.0) {
            return Err(AppError::Config("--tol must be positive".into()));
        }
        if a.max_iter == 0 {
            return Err(AppError::Config("--max-iter must be at least 1".into()));
        }
        Ok(Self { problem, solvers, tol: a.tol, max_iter: a.max_iter, seed: a.seed, out: a.out, history: a.history, gnuplot: a.gnuplot })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> Result<RunConfig> {
        let mut v = vec!["qqmr"];
        v.extend_from_slice(args);
        RunConfig::try_from(Args::try_parse_from(v).unwrap())
    }

    #[test]
    fn defaults() {
        let c = cfg(&[]).unwrap();
        assert_eq!(c.problem, ProblemSpec::Identity { n: 16 });
        assert_eq!(c.solvers, SolverKind::ALL);
        assert_eq!((c.tol, c.max_iter, c.seed), (1e-7, 5000, DEFAULT_SEED));
    }

    #[test]
    fn parses_problem_specs() {
        let c = cfg(&["--problem", "mtx", "--mtx", "a.mtx", "--coeffs", "-1,0,2.5,0"]).unwrap();
        assert_eq!(c.problem, ProblemSpec::Mtx { path: "a.mtx".into(), coeffs: [-1.0, 0.0, 2.5, 0.0] });
        let c = cfg(&["--problem", "chen", "--chen", "2,0.01,10,10,0", "--solvers", "qqmr2,qbicg,qqmr2"]).unwrap();
        assert_eq!(c.problem, ProblemSpec::Chen { t_end: 2.0, h: 0.01, p: 10, q: 10, noise: 0.0 });
        assert_eq!(c.solvers, [SolverKind::Qqmr2, SolverKind::QBiCG]);
        let c = cfg(&["--problem", "blur", "--blur", "x.ppm,multi,1,10,3"]).unwrap();
        assert_eq!(c.problem, ProblemSpec::Blur { image: ImageSource::File("x.ppm".into()), mode: BlurMode::Multi, sigma: 1.0, r: 10, s: 3 });
    }

    #[test]
    fn config_errors() {
        for args in [
            &["--problem", "mtx"][..],
            &["--problem", "chen", "--chen", "1,0.01,3,4,0"],
            &["--problem", "chen", "--chen", "1,0.01,3"],
            &["--problem", "blur", "--blur", "bundled,wide,1,10,7"],
            &["--solvers", "gmres"],
            &["--solvers", ""],
            &["--tol", "0"],
            &["--max-iter", "0"],
            &["--mtx", "a.mtx"],
        ] {
            assert!(matches!(cfg(args), Err(AppError::Config(_))), "{args:?}");
        }
    }
}

//! Constructors for the three experiment families and their quality metrics.
//!
//! * Matrix Market systems with channel-scaled operators ([`gen_example1`]).
//! * Signal filtering on a Chen-attractor trajectory ([`chen_rk4`],
//!   [`build_filter_system`]).
//! * Color image deblurring with Kronecker–Toeplitz blurs ([`build_blur_single`],
//!   [`build_blur_multi`], [`psnr`], [`ssim`]).

mod blur;
mod chen;
mod example1;
mod filter;
mod image;
mod metrics;

pub use blur::{blur_single_operator, box_toeplitz, build_blur_multi, build_blur_single, gaussian_toeplitz, BLUR_MULTI_COEFF};
pub use chen::{chen_derivative, chen_rk4, ChenParams, Trajectory};
pub use example1::{gen_example1, gen_example1_with, uniform_rhs, EXAMPLE1_COEFF};
pub use filter::build_filter_system;
pub use image::ColorImage;
pub use metrics::{psnr, ssim, ChannelSet};

use alloc::string::String;

use crate::error::Error;
use crate::operator::{ChannelScaled, KronToeplitz, QLinearOperator};
use crate::quat::Quaternion;
use crate::sparse::QSparseMatrix;
use crate::vector::QVector;

/// Operators produced by the problem constructors.
#[derive(Clone, Debug)]
pub enum ProblemOperator {
    Sparse(QSparseMatrix),
    Channel(ChannelScaled),
    Kron(KronToeplitz),
}

impl ProblemOperator {
    /// Explicit quaternion CSR assembly, e.g. for building an SSOR
    /// preconditioner. Kronecker operators are assembled entry by entry and
    /// can be large.
    pub fn to_sparse(&self) -> QSparseMatrix {
        match self {
            Self::Sparse(a) => a.clone(),
            Self::Channel(a) => a.to_sparse(),
            Self::Kron(k) => {
                let (b1, b2) = k.factors();
                let n = k.side();
                let c = k.coeff();
                let mut t = alloc::vec::Vec::new();
                // (B1 ⊗ B2)[(c1·n + r1), (c2·n + r2)] = B1[c1, c2] · B2[r1, r2]
                for c1 in 0..n {
                    for c2 in 0..n {
                        let u = b1.get(c1, c2);
                        if u == 0.0 {
                            continue;
                        }
                        for r1 in 0..n {
                            for r2 in 0..n {
                                let v = b2.get(r1, r2);
                                if v != 0.0 {
                                    t.push((c1 * n + r1, c2 * n + r2, c * (u * v)));
                                }
                            }
                        }
                    }
                }
                QSparseMatrix::from_triplets(n * n, n * n, t).expect("indices are in range")
            }
        }
    }
}

impl QLinearOperator for ProblemOperator {
    fn shape(&self) -> (usize, usize) {
        match self {
            Self::Sparse(a) => a.shape(),
            Self::Channel(a) => a.shape(),
            Self::Kron(a) => a.shape(),
        }
    }
    fn apply_to(&self, x: &[Quaternion], y: &mut [Quaternion]) {
        match self {
            Self::Sparse(a) => a.apply_to(x, y),
            Self::Channel(a) => a.apply_to(x, y),
            Self::Kron(a) => a.apply_to(x, y),
        }
    }
    fn apply_adjoint_to(&self, x: &[Quaternion], y: &mut [Quaternion]) {
        match self {
            Self::Sparse(a) => a.apply_adjoint_to(x, y),
            Self::Channel(a) => a.apply_adjoint_to(x, y),
            Self::Kron(a) => a.apply_adjoint_to(x, y),
        }
    }
}

/// A linear system `A x = b`, optionally with the exact solution.
#[derive(Clone, Debug)]
pub struct Problem {
    pub operator: ProblemOperator,
    pub rhs: QVector,
    pub truth: Option<QVector>,
    pub label: String,
}

impl Problem {
    /// Builds `b = A x̂` from a ground truth.
    pub fn from_truth(operator: ProblemOperator, truth: QVector, label: impl Into<String>) -> Result<Self, Error> {
        let rhs = operator.apply(&truth)?;
        Ok(Self { operator, rhs, truth: Some(truth), label: label.into() })
    }

    pub fn dim(&self) -> usize {
        self.rhs.len()
    }
}

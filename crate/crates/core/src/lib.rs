//! Structure-preserving quaternion Krylov solvers.
//!
//! Everything here works directly on the four real components of each
//! quaternion, so no 4n×4n real counterpart is ever formed on the solve path.
//! Scalars act on vectors from the right (`v·α`) throughout.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, timing and the
//! command line driver live in the companion `qqmr` crate.
//!
//! ```
//! use qqmr_core::{QVector, Quaternion, QSparseMatrix, solvers::{qqmr2_solve, SolveOptions}};
//!
//! let a = QSparseMatrix::from_diagonal(&[Quaternion::new(2.0, 0.0, 1.0, 0.0); 3]);
//! let b = QVector::from_vec(vec![Quaternion::ONE; 3]);
//! let report = qqmr2_solve(&a, &b, None, &SolveOptions::default()).unwrap();
//! assert!(report.converged());
//! ```

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bio;
pub mod dense;
mod error;
pub mod givens;
pub mod operator;
pub mod precond;
pub mod problems;
mod quat;
pub mod solvers;
pub mod sparse;
mod vector;

pub use dense::{QDenseMatrix, RealMatrix};
pub use error::Error;
pub use operator::QLinearOperator;
pub use quat::Quaternion;
pub use sparse::{CsrMatrix, QSparseMatrix};
pub use vector::QVector;

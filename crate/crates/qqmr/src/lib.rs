//! File formats, experiment driver and command line front end for the
//! quaternion Krylov solvers in `qqmr-core`.

pub mod cli;
pub mod driver;
pub mod error;
pub mod imageio;
pub mod mtx;

pub use cli::{Args, RunConfig};
pub use driver::{run, RunOutcome};
pub use error::{AppError, Result};

use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Problem, ProblemOperator, Trajectory};
use crate::error::Error;
use crate::quat::Quaternion;
use crate::sparse::QSparseMatrix;
use crate::vector::QVector;

/// Filter-design system `X w = y` on a trajectory.
///
/// The target is `y(s) = x_s i + y_s j + z_s k` (trajectory channels at sample
/// `s`), the input is `x(s) = y(s−1) + n(s)` with `n(s)` uniform in
/// `[−noise_amp, noise_amp]` on all four components. With `t = p + 1`,
/// `X[i][j] = x(t + i − j)` is `(q+1)×(p+1)` and `b = [y(t) … y(t+q)]`.
pub fn build_filter_system(traj: &Trajectory, p: usize, q: usize, noise_amp: f64, seed: u64) -> Result<Problem, Error> {
    let needed = p + q + 2;
    if traj.len() < needed {
        return Err(Error::TrajectoryTooShort { needed, available: traj.len() });
    }
    if !(noise_amp >= 0.0) {
        return Err(Error::InvalidArgument("noise amplitude must be nonnegative"));
    }
    let target = |s: usize| {
        let [a, b, c] = traj.states[s];
        Quaternion::new(0.0, a, b, c)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut noise = || {
        if noise_amp == 0.0 {
            0.0
        } else {
            rng.gen_range(-noise_amp..=noise_amp)
        }
    };
    // input[s] for s = 1 ..= p + q + 1
    let input: Vec<Quaternion> = (0..needed)
        .map(|s| if s == 0 { Quaternion::ZERO } else { target(s - 1) + Quaternion::new(noise(), noise(), noise(), noise()) })
        .collect();
    let t = p + 1;
    let mut entries = Vec::with_capacity((p + 1) * (q + 1));
    for i in 0..=q {
        for j in 0..=p {
            entries.push((i, j, input[t + i - j]));
        }
    }
    let x = QSparseMatrix::from_triplets(q + 1, p + 1, entries)?;
    let rhs = QVector::from_fn(q + 1, |i| target(t + i));
    Ok(Problem { operator: ProblemOperator::Sparse(x), rhs, truth: None, label: "filter".into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{chen_rk4, ChenParams};

    fn traj() -> Trajectory {
        chen_rk4(0.2, 1e-3, [1.0; 3], ChenParams::default()).unwrap()
    }

    #[test]
    fn toeplitz_structure_and_size() {
        let p = build_filter_system(&traj(), 50, 50, 0.1, 3).unwrap();
        let ProblemOperator::Sparse(x) = &p.operator else { panic!("sparse expected") };
        assert_eq!((x.rows(), x.cols()), (51, 51));
        for i in 0..50 {
            for j in 0..50 {
                assert_eq!(x.get(i, j), x.get(i + 1, j + 1));
            }
        }
    }

    #[test]
    fn scalar_case_without_noise() {
        let tr = traj();
        let p = build_filter_system(&tr, 0, 0, 0.0, 0).unwrap();
        let ProblemOperator::Sparse(x) = &p.operator else { panic!("sparse expected") };
        let [a, b, c] = tr.states[0];
        assert_eq!(x.get(0, 0), Quaternion::new(0.0, a, b, c));
        let [a, b, c] = tr.states[1];
        assert_eq!(p.rhs[0], Quaternion::new(0.0, a, b, c));
    }

    #[test]
    fn too_short_is_rejected() {
        let tr = chen_rk4(0.01, 1e-3, [1.0; 3], ChenParams::default()).unwrap();
        assert_eq!(
            build_filter_system(&tr, 10, 10, 0.0, 0).unwrap_err(),
            Error::TrajectoryTooShort { needed: 22, available: 11 }
        );
    }
}

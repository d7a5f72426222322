use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Problem, ProblemOperator};
use crate::error::Error;
use crate::operator::ChannelScaled;
use crate::quat::Quaternion;
use crate::sparse::CsrMatrix;
use crate::vector::QVector;

/// `A = A₀ + 2A₀i − 1.5A₀j + 0.5A₀k`.
pub const EXAMPLE1_COEFF: Quaternion = Quaternion::new(1.0, 2.0, -1.5, 0.5);

/// A right-hand side whose four components are drawn uniformly from `[0, 1)`,
/// entry by entry in `w, x, y, z` order, from a ChaCha8 stream.
pub fn uniform_rhs(n: usize, seed: u64) -> QVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    QVector::from_fn(n, |_| Quaternion::new(rng.gen(), rng.gen(), rng.gen(), rng.gen()))
}

/// Channel-scaled system with the default coefficients and a seeded random `b`.
pub fn gen_example1(a0: CsrMatrix, seed: u64) -> Result<Problem, Error> {
    gen_example1_with(a0, EXAMPLE1_COEFF, seed)
}

pub fn gen_example1_with(a0: CsrMatrix, coeff: Quaternion, seed: u64) -> Result<Problem, Error> {
    let n = a0.rows();
    let op = ChannelScaled::new(a0, coeff)?;
    Ok(Problem { operator: ProblemOperator::Channel(op), rhs: uniform_rhs(n, seed), truth: None, label: "example1".into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::QLinearOperator;

    #[test]
    fn identity_base_gives_constant_diagonal() {
        let p = gen_example1(CsrMatrix::identity(4), 1).unwrap();
        let mut e = QVector::zeros(4);
        e[2] = Quaternion::ONE;
        let y = p.operator.apply(&e).unwrap();
        assert_eq!(y[2], EXAMPLE1_COEFF);
        assert!((y[2].abs() - libm::sqrt(7.5)).abs() < 1e-15);
    }

    #[test]
    fn rhs_is_deterministic_and_in_unit_range() {
        let a = uniform_rhs(50, 42);
        assert_eq!(a, uniform_rhs(50, 42));
        assert_ne!(a, uniform_rhs(50, 43));
        for q in a.iter() {
            for c in q.to_array() {
                assert!((0.0..1.0).contains(&c));
            }
        }
    }
}

use crate::dense::RealMatrix;
use crate::error::Error;
use crate::operator::KronToeplitz;
use crate::quat::Quaternion;

/// Channel coefficient `1 + i − j − k` of the multi-channel blur.
pub const BLUR_MULTI_COEFF: Quaternion = Quaternion::new(1.0, 1.0, -1.0, -1.0);

/// Banded Gaussian Toeplitz matrix,
/// `Bᵢⱼ = exp(−(i−j)²/(2σ²)) / (σ√(2π))` for `|i−j| ≤ r`.
pub fn gaussian_toeplitz(n: usize, sigma: f64, r: usize) -> Result<RealMatrix, Error> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidArgument("sigma must be positive"));
    }
    let c = 1.0 / (sigma * libm::sqrt(2.0 * core::f64::consts::PI));
    Ok(RealMatrix::from_fn(n, n, |i, j| {
        let d = i.abs_diff(j);
        if d <= r {
            c * libm::exp(-((d * d) as f64) / (2.0 * sigma * sigma))
        } else {
            0.0
        }
    }))
}

/// Box Toeplitz matrix with `2s − 1` nonzero diagonals of value `1/(2s−1)`,
/// i.e. `|i−j| < s`, so interior rows sum to one.
pub fn box_toeplitz(n: usize, s: usize) -> Result<RealMatrix, Error> {
    if s == 0 {
        return Err(Error::InvalidArgument("box half-width must be at least 1"));
    }
    let v = 1.0 / (2 * s - 1) as f64;
    Ok(RealMatrix::from_fn(n, n, |i, j| if i.abs_diff(j) < s { v } else { 0.0 }))
}

/// `(B⁽¹⁾, B⁽²⁾)` = (Gaussian, box) for the single-channel blur.
pub fn build_blur_single(n: usize, sigma: f64, r: usize, s: usize) -> Result<(RealMatrix, RealMatrix), Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("image side must be at least 1"));
    }
    Ok((gaussian_toeplitz(n, sigma, r)?, box_toeplitz(n, s)?))
}

/// `A = B⁽¹⁾ ⊗ B⁽²⁾`, acting identically on every channel.
pub fn blur_single_operator(n: usize, sigma: f64, r: usize, s: usize) -> Result<KronToeplitz, Error> {
    let (b1, b2) = build_blur_single(n, sigma, r, s)?;
    KronToeplitz::new(b1, b2, Quaternion::ONE)
}

/// `A = (B⁽²⁾ ⊗ B⁽²⁾)(1 + i − j − k)` with the box blur of half-width `s`.
pub fn build_blur_multi(n: usize, s: usize) -> Result<KronToeplitz, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("image side must be at least 1"));
    }
    let b = box_toeplitz(n, s)?;
    KronToeplitz::new(b.clone(), b, BLUR_MULTI_COEFF)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_rows_sum_to_one() {
        let b = box_toeplitz(20, 7).unwrap();
        let sum: f64 = (0..20).map(|j| b.get(10, j)).sum();
        assert!((sum - 1.0).abs() < 1e-14);
        assert_eq!(box_toeplitz(5, 1).unwrap(), RealMatrix::identity(5));
    }

    #[test]
    fn gaussian_diagonal_and_band() {
        let g = gaussian_toeplitz(30, 1.0, 10).unwrap();
        assert!((g.get(4, 4) - 0.398_942_280_401_432_7).abs() < 1e-15);
        assert!(g.get(0, 10) > 0.0);
        assert_eq!(g.get(0, 11), 0.0);
    }

    #[test]
    fn multi_coefficient_has_magnitude_two() {
        assert_eq!(BLUR_MULTI_COEFF.abs(), 2.0);
    }
}

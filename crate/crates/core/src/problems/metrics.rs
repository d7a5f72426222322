use crate::error::Error;
use crate::vector::QVector;

/// Which quaternion components carry image data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelSet {
    /// `i, j, k` (RGB); the real part is ignored.
    Pure3,
    /// All four components.
    Full4,
}

impl ChannelSet {
    fn range(self) -> core::ops::Range<usize> {
        match self {
            Self::Pure3 => 1..4,
            Self::Full4 => 0..4,
        }
    }

    pub fn count(self) -> usize {
        self.range().len()
    }
}

fn samples<'a>(v: &'a QVector, set: ChannelSet) -> impl Iterator<Item = f64> + 'a {
    v.iter().flat_map(move |q| {
        let a = q.to_array();
        set.range().map(move |c| a[c])
    })
}

/// `10 log₁₀(c·N·d² / ‖x̂ − x‖²)` with `c` channels and `N` pixels.
/// Identical inputs give `+∞`.
pub fn psnr(truth: &QVector, restored: &QVector, d: f64, set: ChannelSet) -> Result<f64, Error> {
    crate::vector::check_len(truth.len(), restored.len())?;
    let err: f64 = samples(truth, set).zip(samples(restored, set)).map(|(a, b)| (a - b) * (a - b)).sum();
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    let peak = (set.count() * truth.len()) as f64 * d * d;
    Ok(10.0 * libm::log10(peak / err))
}

/// Global SSIM over the selected components of both images, with
/// `c₁ = (0.01L)²`, `c₂ = (0.03L)²` and population statistics.
pub fn ssim(truth: &QVector, restored: &QVector, l: f64, set: ChannelSet) -> Result<f64, Error> {
    crate::vector::check_len(truth.len(), restored.len())?;
    let count = (set.count() * truth.len()) as f64;
    if count == 0.0 {
        return Err(Error::InvalidArgument("SSIM of empty images"));
    }
    let mu_a = samples(truth, set).sum::<f64>() / count;
    let mu_b = samples(restored, set).sum::<f64>() / count;
    let (mut var_a, mut var_b, mut cov) = (0.0, 0.0, 0.0);
    for (a, b) in samples(truth, set).zip(samples(restored, set)) {
        let (da, db) = (a - mu_a, b - mu_b);
        var_a += da * da;
        var_b += db * db;
        cov += da * db;
    }
    var_a /= count;
    var_b /= count;
    cov /= count;
    let c1 = (0.01 * l) * (0.01 * l);
    let c2 = (0.03 * l) * (0.03 * l);
    Ok((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2) / ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::Quaternion;

    fn pure(v: f64, n: usize) -> QVector {
        QVector::from_fn(n, |_| Quaternion::new(0.0, v, v, v))
    }

    #[test]
    fn psnr_values() {
        let n = 16;
        let white = pure(255.0, n);
        let black = pure(0.0, n);
        assert_eq!(psnr(&white, &white, 255.0, ChannelSet::Pure3).unwrap(), f64::INFINITY);
        assert!(psnr(&white, &black, 255.0, ChannelSet::Pure3).unwrap().abs() < 1e-12);
        let a = psnr(&white, &pure(200.0, n), 255.0, ChannelSet::Pure3).unwrap();
        let b = psnr(&white, &pure(227.5, n), 255.0, ChannelSet::Pure3).unwrap();
        assert!((b - a - 10.0 * libm::log10(4.0)).abs() < 1e-12);
    }

    #[test]
    fn ssim_values() {
        let x = QVector::from_fn(8, |i| Quaternion::new(0.0, i as f64 - 3.5, 3.5 - i as f64, 0.0));
        assert!((ssim(&x, &x, 255.0, ChannelSet::Pure3).unwrap() - 1.0).abs() < 1e-12);
        let neg = x.scaled(-1.0);
        assert!(ssim(&x, &neg, 1.0, ChannelSet::Pure3).unwrap() < 0.0);

        let c1 = (0.01f64 * 255.0).powi(2);
        let c2 = (0.03f64 * 255.0).powi(2);
        let s = ssim(&pure(0.0, 4), &pure(255.0, 4), 255.0, ChannelSet::Pure3).unwrap();
        let expected = c1 * c2 / ((255.0f64 * 255.0 + c1) * c2);
        assert!((s - expected).abs() < 1e-15);
    }
}

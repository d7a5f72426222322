use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::quat::Quaternion;
use crate::vector::QVector;

/// Square color image held as quaternion component planes.
///
/// Three-channel images are pure quaternions (`R, G, B → i, j, k`); a fourth
/// channel (transparency) goes to the real part. Planes are row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ColorImage {
    n: usize,
    channels: usize,
    planes: [Vec<f64>; 4],
}

impl ColorImage {
    /// `planes` are given in quaternion component order `w, i, j, k`; for
    /// three channels the `w` plane must be all zeros.
    pub fn from_planes(n: usize, channels: usize, planes: [Vec<f64>; 4]) -> Result<Self, Error> {
        if channels != 3 && channels != 4 {
            return Err(Error::InvalidArgument("images have 3 or 4 channels"));
        }
        for p in &planes {
            if p.len() != n * n {
                return Err(Error::DimensionMismatch { expected: n * n, found: p.len() });
            }
        }
        if channels == 3 && planes[0].iter().any(|&v| v != 0.0) {
            return Err(Error::InvalidArgument("3-channel images have no real part"));
        }
        Ok(Self { n, channels, planes })
    }

    /// From interleaved RGB samples, row-major.
    pub fn from_rgb(n: usize, rgb: &[f64]) -> Result<Self, Error> {
        if rgb.len() != 3 * n * n {
            return Err(Error::DimensionMismatch { expected: 3 * n * n, found: rgb.len() });
        }
        let plane = |c: usize| rgb.iter().skip(c).step_by(3).copied().collect::<Vec<_>>();
        Self::from_planes(n, 3, [vec![0.0; n * n], plane(0), plane(1), plane(2)])
    }

    pub fn side(&self) -> usize {
        self.n
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// Component plane `c` (0 = real/transparency, 1..3 = R, G, B).
    pub fn plane(&self, c: usize) -> &[f64] {
        &self.planes[c]
    }

    pub fn pixel(&self, row: usize, col: usize) -> Quaternion {
        let k = row * self.n + col;
        Quaternion::new(self.planes[0][k], self.planes[1][k], self.planes[2][k], self.planes[3][k])
    }

    /// Interleaved RGB samples, row-major.
    pub fn to_rgb(&self) -> Vec<f64> {
        (0..self.n * self.n).flat_map(|k| [self.planes[1][k], self.planes[2][k], self.planes[3][k]]).collect()
    }

    /// Column-stacked `vec(X)`: pixel `(row, col)` lands at `row + col·n`.
    pub fn to_qvector(&self) -> QVector {
        let n = self.n;
        QVector::from_fn(n * n, |k| self.pixel(k % n, k / n))
    }

    /// Inverse of [`to_qvector`](Self::to_qvector). For three channels the
    /// real part of `v` is dropped.
    pub fn from_qvector(v: &QVector, n: usize, channels: usize) -> Result<Self, Error> {
        if v.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: v.len() });
        }
        let mut planes = [vec![0.0; n * n], vec![0.0; n * n], vec![0.0; n * n], vec![0.0; n * n]];
        for (k, q) in v.iter().enumerate() {
            let idx = (k % n) * n + k / n;
            let c = q.to_array();
            for (p, &val) in planes.iter_mut().zip(c.iter()) {
                p[idx] = val;
            }
        }
        if channels == 3 {
            planes[0].iter_mut().for_each(|x| *x = 0.0);
        }
        Self::from_planes(n, channels, planes)
    }

    /// Copy with every sample clamped to `[0, max]`.
    pub fn clamped(&self, max: f64) -> Self {
        let mut out = self.clone();
        for p in out.planes.iter_mut() {
            p.iter_mut().for_each(|x| *x = x.clamp(0.0, max));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vec_round_trip_is_exact() {
        let n = 5;
        let rgb: Vec<f64> = (0..3 * n * n).map(|k| (k * 7 % 256) as f64).collect();
        let img = ColorImage::from_rgb(n, &rgb).unwrap();
        let v = img.to_qvector();
        assert_eq!(ColorImage::from_qvector(&v, n, 3).unwrap(), img);
        assert_eq!(img.to_rgb(), rgb);
        // column stacking
        assert_eq!(v[1], img.pixel(1, 0));
        assert_eq!(v[n], img.pixel(0, 1));
    }

    #[test]
    fn four_channels_keep_the_real_part() {
        let n = 2;
        let planes = [vec![1.0, 2.0, 3.0, 4.0], vec![0.0; 4], vec![5.0; 4], vec![0.0; 4]];
        let img = ColorImage::from_planes(n, 4, planes).unwrap();
        assert_eq!(ColorImage::from_qvector(&img.to_qvector(), n, 4).unwrap(), img);
        assert!(ColorImage::from_planes(n, 5, Default::default()).is_err());
    }
}

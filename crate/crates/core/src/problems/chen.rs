use alloc::vec::Vec;

use crate::error::Error;

/// Parameters of `x' = α(y−x)`, `y' = (ρ−α)x − xz + βy`, `z' = xy − βz`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChenParams {
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
}

impl Default for ChenParams {
    fn default() -> Self {
        Self { alpha: 35.0, beta: 3.0, rho: 28.0 }
    }
}

/// Samples at `t_k = k·h`, `k = 0 … ⌊T/h⌋`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub h: f64,
    pub states: Vec<[f64; 3]>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.h
    }
}

pub fn chen_derivative(s: [f64; 3], p: &ChenParams) -> [f64; 3] {
    let [x, y, z] = s;
    [p.alpha * (y - x), (p.rho - p.alpha) * x - x * z + p.beta * y, x * y - p.beta * z]
}

/// Classical fixed-step fourth-order Runge–Kutta integration on `[0, T]`.
pub fn chen_rk4(t_end: f64, h: f64, init: [f64; 3], params: ChenParams) -> Result<Trajectory, Error> {
    if !(h > 0.0) || !(t_end >= h) || !t_end.is_finite() {
        return Err(Error::InvalidArgument("need h > 0 and T >= h"));
    }
    // Guard against T/h landing just below an integer.
    let steps = libm::floor(t_end / h + 1e-9) as usize;
    let mut states = Vec::with_capacity(steps + 1);
    let mut s = init;
    states.push(s);
    let add = |a: [f64; 3], b: [f64; 3], c: f64| [a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2]];
    for k in 1..=steps {
        let k1 = chen_derivative(s, &params);
        let k2 = chen_derivative(add(s, k1, h / 2.0), &params);
        let k3 = chen_derivative(add(s, k2, h / 2.0), &params);
        let k4 = chen_derivative(add(s, k3, h), &params);
        for i in 0..3 {
            s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if !s.iter().all(|v| v.is_finite()) {
            return Err(Error::Divergence { step: k });
        }
        states.push(s);
    }
    Ok(Trajectory { h, states })
}

use alloc::vec::Vec;

use crate::dense::QDenseMatrix;
use crate::error::Error;
use crate::operator::QLinearOperator;
use crate::quat::Quaternion;
use crate::vector::QVector;

/// Coefficient streams of `m` three-term steps.
///
/// `alpha`, `alpha_bar`, `tau` are indexed by column `j = 1..m` (`tau[0] = τ₁ = 0`),
/// `rho`, `eps` hold `ρ_{j+1}, ε_{j+1}` and `sigma` holds `σ₁ … σ_{m+1}`.
#[derive(Clone, Debug, Default)]
pub struct TridiagFactors {
    pub alpha: Vec<Quaternion>,
    pub alpha_bar: Vec<Quaternion>,
    pub tau: Vec<Quaternion>,
    pub rho: Vec<f64>,
    pub eps: Vec<f64>,
    pub sigma: Vec<Quaternion>,
}

impl TridiagFactors {
    pub fn steps(&self) -> usize {
        self.alpha.len()
    }

    /// `τ̄_l = ε_l σ_{l−1}⁻* σ_l*` for `l ≥ 2`, zero for `l = 1`.
    pub fn tau_bar(&self) -> Result<Vec<Quaternion>, Error> {
        (0..self.steps())
            .map(|k| {
                if k == 0 {
                    Ok(Quaternion::ZERO)
                } else {
                    Ok(self.sigma[k - 1].inv_conj()? * self.sigma[k].conj() * self.eps[k - 1])
                }
            })
            .collect()
    }

    fn tridiag(&self, diag: &[Quaternion], sup: &[Quaternion]) -> QDenseMatrix {
        let m = self.steps();
        let mut h = QDenseMatrix::zeros(m + 1, m);
        for k in 0..m {
            h.set(k, k, diag[k]);
            h.set(k + 1, k, Quaternion::real(self.rho[k]));
            if k > 0 {
                h.set(k - 1, k, sup[k]);
            }
        }
        h
    }

    /// `H_{m+1,m}`: diagonal `α`, superdiagonal `τ`, subdiagonal `ρ`.
    pub fn h_matrix(&self) -> QDenseMatrix {
        self.tridiag(&self.alpha, &self.tau)
    }

    /// `H̄_{m+1,m}`: diagonal `ᾱ`, superdiagonal `τ̄`, subdiagonal `ρ`.
    pub fn hbar_matrix(&self) -> Result<QDenseMatrix, Error> {
        Ok(self.tridiag(&self.alpha_bar, &self.tau_bar()?))
    }

    /// `s₁ … s_{m+1}` with `s₁ = 1`, `sᵢ = s_{i−1} ρᵢ / εᵢ`.
    pub fn gamma(&self) -> Vec<f64> {
        let mut s = Vec::with_capacity(self.steps() + 1);
        s.push(1.0);
        for k in 0..self.steps() {
            let prev = s[k];
            s.push(prev * self.rho[k] / self.eps[k]);
        }
        s
    }

    /// `D = diag(σ₁ … σ_m)`.
    pub fn d_matrix(&self) -> QDenseMatrix {
        QDenseMatrix::diagonal(&self.sigma[..self.steps()])
    }
}

/// Coefficient streams of `m` coupled two-term steps.
#[derive(Clone, Debug, Default)]
pub struct BidiagFactors {
    pub l: Vec<Quaternion>,
    pub tau1: Vec<Quaternion>,
    /// `μ_j`, with `mu[0] = 0`.
    pub mu: Vec<Quaternion>,
    pub rho: Vec<f64>,
    pub eps: Vec<f64>,
    pub sigma: Vec<Quaternion>,
}

impl BidiagFactors {
    pub fn steps(&self) -> usize {
        self.l.len()
    }

    /// Lower bidiagonal `L_{m+1,m}`: diagonal `τ⁽¹⁾`, subdiagonal `ρ`.
    pub fn l_matrix(&self) -> QDenseMatrix {
        let m = self.steps();
        let mut l = QDenseMatrix::zeros(m + 1, m);
        for k in 0..m {
            l.set(k, k, self.tau1[k]);
            l.set(k + 1, k, Quaternion::real(self.rho[k]));
        }
        l
    }

    /// Unit upper bidiagonal `U_m` with superdiagonal `μ`.
    pub fn u_matrix(&self) -> QDenseMatrix {
        let m = self.steps();
        let mut u = QDenseMatrix::identity(m);
        for k in 1..m {
            u.set(k - 1, k, self.mu[k]);
        }
        u
    }
}

/// Frobenius residuals of the four structural relations of the three-term
/// process.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FactorizationResiduals {
    /// `‖W_m* V_m − D_m‖`.
    pub biorthogonality: f64,
    /// `‖A V_m − V_{m+1} H_{m+1,m}‖`.
    pub forward: f64,
    /// `‖A* W_m − W_{m+1} Γ_{m+1}⁻¹ H̄_{m+1,m} Γ_m‖`.
    pub adjoint: f64,
    /// `‖W_m* A V_m − D_m H_m‖`.
    pub projected: f64,
}

impl FactorizationResiduals {
    pub fn max(&self) -> f64 {
        self.biorthogonality.max(self.forward).max(self.adjoint).max(self.projected)
    }
}

/// Checks the relations on recorded bases `v₁ … v_{m+1}`, `w₁ … w_{m+1}`.
pub fn verify_factorization<A: QLinearOperator + ?Sized>(
    a: &A,
    v: &[QVector],
    w: &[QVector],
    f: &TridiagFactors,
) -> Result<FactorizationResiduals, Error> {
    let m = f.steps();
    if m == 0 || v.len() < m + 1 || w.len() < m + 1 {
        return Err(Error::InvalidArgument("need m >= 1 steps with m + 1 recorded basis vectors"));
    }
    let vm1 = QDenseMatrix::from_columns(&v[..m + 1])?;
    let wm1 = QDenseMatrix::from_columns(&w[..m + 1])?;
    let vm = vm1.block(vm1.rows(), m);
    let wm = wm1.block(wm1.rows(), m);
    let av: Vec<QVector> = v[..m].iter().map(|x| a.apply(x)).collect::<Result<_, _>>()?;
    let aw: Vec<QVector> = w[..m].iter().map(|x| a.apply_adjoint(x)).collect::<Result<_, _>>()?;
    let av = QDenseMatrix::from_columns(&av)?;
    let aw = QDenseMatrix::from_columns(&aw)?;

    let d = f.d_matrix();
    let h = f.h_matrix();
    let hbar = f.hbar_matrix()?;
    let s = f.gamma();
    let scaled = QDenseMatrix::from_fn(m + 1, m, |i, k| hbar.get(i, k) * (s[k] / s[i]));

    let wstar = wm.adjoint();
    let biorthogonality = wstar.mul(&vm)?.sub(&d)?.frobenius_norm();
    let forward = av.sub(&vm1.mul(&h)?)?.frobenius_norm();
    let adjoint = aw.sub(&wm1.mul(&scaled)?)?.frobenius_norm();
    let projected = wstar.mul(&av)?.sub(&d.mul(&h.block(m, m))?)?.frobenius_norm();
    Ok(FactorizationResiduals { biorthogonality, forward, adjoint, projected })
}

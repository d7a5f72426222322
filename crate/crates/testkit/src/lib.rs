//! Dense oracles on the real counterpart and random problem generators.
//!
//! Everything here goes through `ℛ(·)` and nalgebra, independently of the
//! structure-preserving kernels under test.

pub use nalgebra;
use nalgebra::{DMatrix, DVector};
use qqmr_core::dense::{vector_first_block_column, vector_from_first_block_column};
use qqmr_core::{QDenseMatrix, QSparseMatrix, QVector, Quaternion, RealMatrix};
use rand::Rng;
pub use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Components uniform in `[−1, 1)`.
pub fn random_quat(rng: &mut impl Rng) -> Quaternion {
    Quaternion::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_qvector(rng: &mut impl Rng, n: usize) -> QVector {
    QVector::from_fn(n, |_| random_quat(rng))
}

pub fn random_dense(rng: &mut impl Rng, m: usize, n: usize) -> QDenseMatrix {
    QDenseMatrix::from_fn(m, n, |_, _| random_quat(rng))
}

/// `shift·I + R/√n` with a random dense `R`; for `shift ≳ 4` the spectrum
/// stays well away from the origin.
pub fn shifted_random(rng: &mut impl Rng, n: usize, shift: f64) -> QDenseMatrix {
    let s = 1.0 / (n as f64).sqrt();
    QDenseMatrix::from_fn(n, n, |i, j| {
        let r = random_quat(rng) * s;
        if i == j {
            r + Quaternion::real(shift)
        } else {
            r
        }
    })
}

/// Random sparse matrix with the given fill fraction off the diagonal and a
/// dominant diagonal.
pub fn random_sparse(rng: &mut impl Rng, n: usize, density: f64, diag_shift: f64) -> QSparseMatrix {
    let mut t = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                t.push((i, j, random_quat(rng) + Quaternion::real(diag_shift)));
            } else if rng.gen::<f64>() < density {
                t.push((i, j, random_quat(rng)));
            }
        }
    }
    QSparseMatrix::from_triplets(n, n, t).unwrap()
}

pub fn to_na(m: &RealMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j))
}

pub fn from_na(m: &DMatrix<f64>) -> RealMatrix {
    RealMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// `ℛ(x)_c` as an nalgebra vector.
pub fn fbc(x: &QVector) -> DVector<f64> {
    DVector::from_vec(vector_first_block_column(x))
}

pub fn from_fbc(v: &DVector<f64>) -> QVector {
    vector_from_first_block_column(v.as_slice()).unwrap()
}

/// `A x` computed as `ℛ(A) ℛ(x)_c`.
pub fn counterpart_apply(a: &QDenseMatrix, x: &QVector) -> QVector {
    from_fbc(&(to_na(&a.real_counterpart()) * fbc(x)))
}

/// `A* x` computed as `ℛ(A)ᵀ ℛ(x)_c`.
pub fn counterpart_apply_adjoint(a: &QDenseMatrix, x: &QVector) -> QVector {
    from_fbc(&(to_na(&a.real_counterpart()).transpose() * fbc(x)))
}

/// `⟨x, y⟩` computed as `ℛ(y*) ℛ(x)_c`.
pub fn counterpart_inner(x: &QVector, y: &QVector) -> Quaternion {
    let ystar = QDenseMatrix::from_columns(std::slice::from_ref(y)).unwrap().adjoint();
    let v = to_na(&ystar.real_counterpart()) * fbc(x);
    Quaternion::new(v[0], v[1], v[2], v[3])
}

/// Solves `A x = b` by LU on the `4n×4n` real counterpart.
pub fn counterpart_solve(a: &QDenseMatrix, b: &QVector) -> QVector {
    let lu = to_na(&a.real_counterpart()).lu();
    from_fbc(&lu.solve(&fbc(b)).expect("nonsingular counterpart"))
}

/// `min_z ‖β e₁ − H z‖₂` for an `(m+1)×m` quaternion `H`, via SVD least
/// squares on `ℛ(H)`.
pub fn counterpart_lstsq_residual(h: &QDenseMatrix, beta: f64) -> f64 {
    let r = to_na(&h.real_counterpart());
    let mut rhs = DVector::zeros(r.nrows());
    rhs[0] = beta;
    let svd = r.clone().svd(true, true);
    let z = svd.solve(&rhs, 1e-14).expect("svd solve");
    (rhs - r * z).norm()
}

/// Explicit Kronecker product `B1 ⊗ B2`.
pub fn kron(b1: &RealMatrix, b2: &RealMatrix) -> RealMatrix {
    from_na(&to_na(b1).kronecker(&to_na(b2)))
}

/// Largest singular value of `ℛ(A)`, which equals the quaternion 2-norm.
pub fn spectral_norm(a: &QDenseMatrix) -> f64 {
    to_na(&a.real_counterpart()).singular_values().max()
}

pub fn rel_err(x: &QVector, reference: &QVector) -> f64 {
    x.rel_diff(reference)
}

use proptest::prelude::*;
use qqmr_core::dense::vector_first_block_column;
use qqmr_core::operator::{ChannelScaled, Identity, KronToeplitz};
use qqmr_core::{CsrMatrix, QDenseMatrix, QLinearOperator, QSparseMatrix, QVector, Quaternion, RealMatrix};
use qqmr_testkit::nalgebra::DVector;
use qqmr_testkit::*;

fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
    Quaternion::new(w, x, y, z)
}

/// Product through the 4×4 real counterpart of the left factor.
fn counterpart_mul(a: Quaternion, b: Quaternion) -> Quaternion {
    let ra = to_na(&QDenseMatrix::from_fn(1, 1, |_, _| a).real_counterpart());
    let v = ra * DVector::from_vec(b.to_array().to_vec());
    q(v[0], v[1], v[2], v[3])
}

#[test]
fn product_table() {
    assert_eq!(Quaternion::I * Quaternion::J, Quaternion::K);
    assert_eq!(Quaternion::J * Quaternion::I, -Quaternion::K);
    let p = q(1.0, 1.0, 0.0, 0.0) * q(1.0, 0.0, 1.0, 0.0);
    assert_eq!(p, q(1.0, 1.0, 1.0, 1.0));
    assert_eq!(p, counterpart_mul(q(1.0, 1.0, 0.0, 0.0), q(1.0, 0.0, 1.0, 0.0)));
}

#[test]
fn inverses() {
    assert_eq!(q(1.0, 1.0, 1.0, 1.0).inv().unwrap(), q(0.25, -0.25, -0.25, -0.25));
    assert_eq!(Quaternion::real(2.0).inv().unwrap(), Quaternion::real(0.5));
    assert_eq!(Quaternion::I.inv().unwrap(), -Quaternion::I);
    assert!(Quaternion::ZERO.inv().is_err());
}

#[test]
fn inner_products() {
    let i = QVector::from_vec(vec![Quaternion::I]);
    assert_eq!(i.inner(&i).unwrap(), Quaternion::ONE);
    let j = QVector::from_vec(vec![Quaternion::J]);
    let k = QVector::from_vec(vec![Quaternion::K]);
    assert_eq!(j.inner(&k).unwrap(), Quaternion::I);

    let x = QVector::from_vec(vec![q(1.0, 1.0, 0.0, 0.0), Quaternion::J]);
    let y = QVector::from_vec(vec![Quaternion::ONE, Quaternion::K]);
    let expected = q(1.0, 2.0, 0.0, 0.0);
    assert_eq!(x.inner(&y).unwrap(), expected);
    assert!(counterpart_inner(&x, &y).approx_eq(expected, 1e-15));
    assert!(x.inner(&QVector::zeros(3)).is_err());
}

#[test]
fn real_counterpart_examples() {
    let r = QDenseMatrix::from_fn(1, 1, |_, _| Quaternion::I).real_counterpart();
    let expected = [[0.0, -1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, -1.0], [0.0, 0.0, 1.0, 0.0]];
    for (a, row) in expected.iter().enumerate() {
        for (b, &v) in row.iter().enumerate() {
            assert_eq!(r.get(a, b), v);
        }
    }
    let id = QDenseMatrix::identity(3).real_counterpart();
    assert_eq!(id.max_abs_diff(&RealMatrix::identity(12)), 0.0);

    let mut g = rng(1);
    let m = random_dense(&mut g, 3, 3);
    let n = random_dense(&mut g, 3, 3);
    let lhs = m.mul(&n).unwrap().real_counterpart();
    let rhs = m.real_counterpart().mul(&n.real_counterpart()).unwrap();
    assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    assert_eq!(QDenseMatrix::from_real_counterpart(&m.real_counterpart()).unwrap(), m);
}

#[test]
fn sparse_examples() {
    let mut g = rng(2);
    let x = random_qvector(&mut g, 5);
    assert_eq!(QSparseMatrix::identity(5).apply(&x).unwrap(), x);

    let di = QSparseMatrix::from_diagonal(&[Quaternion::I]);
    let xj = QVector::from_vec(vec![Quaternion::J]);
    assert_eq!(di.apply(&xj).unwrap().as_slice(), &[Quaternion::K]);
    let xk = QVector::from_vec(vec![Quaternion::K]);
    assert_eq!(di.apply_adjoint(&xk).unwrap().as_slice(), &[Quaternion::J]);

    let a = random_sparse(&mut g, 8, 0.4, 0.0);
    let x = random_qvector(&mut g, 8);
    let dense = a.to_dense();
    assert!(a.apply(&x).unwrap().max_abs_diff(&counterpart_apply(&dense, &x)) < 1e-12);
    assert!(a.apply_adjoint(&x).unwrap().max_abs_diff(&counterpart_apply_adjoint(&dense, &x)) < 1e-12);

    // Hermitian: A* = A.
    let h = random_dense(&mut g, 6, 6);
    let herm = QSparseMatrix::from_dense(&h.adjoint().mul(&h).unwrap());
    let y = random_qvector(&mut g, 6);
    assert!(herm.apply(&y).unwrap().max_abs_diff(&herm.apply_adjoint(&y).unwrap()) < 1e-12);
}

#[test]
fn sparse_structure() {
    let mut g = rng(3);
    let a = random_sparse(&mut g, 30, 0.2, 1.0);
    for i in 0..a.rows() {
        let cols: Vec<usize> = a.row(i).map(|(c, _)| c).collect();
        assert!(cols.windows(2).all(|w| w[0] < w[1]));
        assert!(cols.iter().all(|&c| c < a.cols()));
    }
    let x = random_qvector(&mut g, 30);
    assert!(a.apply(&x).unwrap().max_abs_diff(&counterpart_apply(&a.to_dense(), &x)) < 1e-12);
}

#[test]
fn channel_scaled_examples() {
    let mut g = rng(4);
    let a0 = CsrMatrix::from_dense(&RealMatrix::from_fn(10, 10, |i, j| if (i + 2 * j) % 3 == 0 { (i as f64) - 0.5 * j as f64 } else { 0.0 }));
    let x = random_qvector(&mut g, 10);

    let real = ChannelScaled::new(a0.clone(), Quaternion::ONE).unwrap();
    let expect = QSparseMatrix::from_real_scaled(&a0, Quaternion::ONE);
    assert_eq!(real.apply(&x).unwrap(), expect.apply(&x).unwrap());

    let c = q(1.0, 2.0, -1.5, 0.5);
    let op = ChannelScaled::new(CsrMatrix::identity(3), c).unwrap();
    let e1 = QVector::from_fn(3, |i| if i == 0 { Quaternion::ONE } else { Quaternion::ZERO });
    assert_eq!(op.apply(&e1).unwrap()[0], c);

    let op = ChannelScaled::new(a0.clone(), c).unwrap();
    let dense = QDenseMatrix::from_fn(10, 10, |i, j| c * a0.get(i, j));
    assert!(op.apply(&x).unwrap().max_abs_diff(&counterpart_apply(&dense, &x)) < 1e-12);
    assert!(op.apply_adjoint(&x).unwrap().max_abs_diff(&counterpart_apply_adjoint(&dense, &x)) < 1e-12);
    assert!(ChannelScaled::new(CsrMatrix::from_dense(&RealMatrix::zeros(2, 3)), c).is_err());
}

#[test]
fn kronecker_examples() {
    let n = 3;
    let id = KronToeplitz::new(RealMatrix::identity(n), RealMatrix::identity(n), Quaternion::ONE).unwrap();
    let mut g = rng(5);
    let x = random_qvector(&mut g, n * n);
    assert_eq!(id.apply(&x).unwrap(), x);

    let b1 = RealMatrix::from_fn(n, n, |i, j| (1 + i * 3 + j) as f64 * 0.1 - 0.4);
    let b2 = RealMatrix::from_fn(n, n, |i, j| if i >= j { 1.0 + j as f64 } else { -0.3 * i as f64 });
    let op = KronToeplitz::new(b1.clone(), b2.clone(), Quaternion::ONE).unwrap();
    let k = to_na(&kron(&b1, &b2));
    let xr: Vec<f64> = (0..n * n).map(|i| (i as f64).sin()).collect();
    let xq = QVector::from_fn(n * n, |i| Quaternion::real(xr[i]));
    let y = op.apply(&xq).unwrap();
    let yr = &k * DVector::from_vec(xr);
    for i in 0..n * n {
        assert!((y[i].w - yr[i]).abs() < 1e-12);
        assert_eq!([y[i].x, y[i].y, y[i].z], [0.0; 3]);
    }

    let xj = QVector::from_fn(n * n, |i| Quaternion::new(0.0, 0.0, 1.0 + i as f64, 0.0));
    for v in op.apply(&xj).unwrap().iter() {
        assert_eq!((v.w, v.x, v.z), (0.0, 0.0, 0.0));
    }
    assert!(op.apply_checked(&QVector::zeros(8)).is_err());
}

#[test]
fn kronecker_with_coefficient_matches_assembly() {
    let n = 4;
    let b1 = RealMatrix::from_fn(n, n, |i, j| 1.0 / (1.0 + (i as f64 - j as f64).abs()));
    let b2 = RealMatrix::from_fn(n, n, |i, j| if i.abs_diff(j) <= 1 { 0.5 } else { 0.0 });
    let c = q(1.0, 1.0, -1.0, -1.0);
    let op = KronToeplitz::new(b1.clone(), b2.clone(), c).unwrap();
    let kr = kron(&b1, &b2);
    let dense = QDenseMatrix::from_fn(n * n, n * n, |i, j| c * kr.get(i, j));
    let mut g = rng(6);
    let x = random_qvector(&mut g, n * n);
    assert!(op.apply(&x).unwrap().max_abs_diff(&counterpart_apply(&dense, &x)) < 1e-12);
    assert!(op.apply_adjoint(&x).unwrap().max_abs_diff(&counterpart_apply_adjoint(&dense, &x)) < 1e-12);
}

#[test]
fn identity_operator() {
    let x = QVector::from_fn(4, |i| Quaternion::new(i as f64, 1.0, 2.0, 3.0));
    assert_eq!(Identity(4).apply(&x).unwrap(), x);
    assert!(Identity(3).apply(&x).is_err());
}

fn quat_strategy() -> impl Strategy<Value = Quaternion> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(w, x, y, z)| q(w, x, y, z))
}

fn vec_strategy(n: usize) -> impl Strategy<Value = QVector> {
    prop::collection::vec(quat_strategy(), n).prop_map(QVector::from_vec)
}

proptest! {
    #[test]
    fn counterpart_is_multiplicative(a in quat_strategy(), b in quat_strategy()) {
        prop_assert!((a * b).approx_eq(counterpart_mul(a, b), 1e-12));
    }

    #[test]
    fn inner_product_axioms(x in vec_strategy(5), y in vec_strategy(5), z in vec_strategy(5), al in quat_strategy(), be in quat_strategy()) {
        let lhs = x.mul_right(al).add(&y.mul_right(be)).unwrap().inner(&z).unwrap();
        let rhs = x.inner(&z).unwrap() * al + y.inner(&z).unwrap() * be;
        prop_assert!(lhs.approx_eq(rhs, 1e-10));
        prop_assert!(x.inner(&y).unwrap().approx_eq(y.inner(&x).unwrap().conj(), 1e-12));
        prop_assert!(x.inner(&y).unwrap().approx_eq(counterpart_inner(&x, &y), 1e-12));
        let n2 = x.inner(&x).unwrap();
        prop_assert!((n2.w - x.norm() * x.norm()).abs() < 1e-10 && n2.x.abs() + n2.y.abs() + n2.z.abs() < 1e-12);
    }

    #[test]
    fn sparse_adjoint_consistency(seed in 0u64..1000, n in 1usize..20) {
        let mut g = rng(seed);
        let a = random_sparse(&mut g, n, 0.3, 0.0);
        let x = random_qvector(&mut g, n);
        let y = random_qvector(&mut g, n);
        let lhs = a.apply(&x).unwrap().inner(&y).unwrap();
        let rhs = x.inner(&a.apply_adjoint(&y).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
    }

    #[test]
    fn kron_adjoint_consistency(seed in 0u64..1000, n in 1usize..6, c in quat_strategy()) {
        let mut g = rng(seed);
        let b1 = RealMatrix::from_fn(n, n, |_, _| random_quat(&mut g).w);
        let b2 = RealMatrix::from_fn(n, n, |_, _| random_quat(&mut g).x);
        let op = KronToeplitz::new(b1, b2, c).unwrap();
        let x = random_qvector(&mut g, n * n);
        let y = random_qvector(&mut g, n * n);
        let lhs = op.apply(&x).unwrap().inner(&y).unwrap();
        let rhs = x.inner(&op.apply_adjoint(&y).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
    }

    #[test]
    fn adjoint_reverses_products(seed in 0u64..1000) {
        let mut g = rng(seed);
        let m = random_dense(&mut g, 3, 4);
        let n = random_dense(&mut g, 4, 2);
        let lhs = m.mul(&n).unwrap().adjoint();
        let rhs = n.adjoint().mul(&m.adjoint()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().frobenius_norm() < 1e-12);
        prop_assert!(m.adjoint().real_counterpart().max_abs_diff(&m.real_counterpart().transpose()) == 0.0);
    }

    #[test]
    fn first_block_column_products(seed in 0u64..1000) {
        let mut g = rng(seed);
        let a = random_dense(&mut g, 5, 5);
        let x = random_qvector(&mut g, 5);
        let direct = vector_first_block_column(&a.mul_vec(&x).unwrap());
        let via = a.real_counterpart().mul_vec(&vector_first_block_column(&x)).unwrap();
        prop_assert!(direct.iter().zip(&via).all(|(p, r)| (p - r).abs() < 1e-12));
    }
}

use qqmr_core::precond::{IdentityPreconditioner, Preconditioner, SsorPreconditioner};
use qqmr_core::solvers::{pqqmr_solve, SolveOptions, Variant};
use qqmr_core::{Error, QDenseMatrix, QLinearOperator, QSparseMatrix, Quaternion};
use qqmr_testkit::*;

/// `(D + L) D⁻¹ (D + U)` assembled densely.
fn dense_ssor(a: &QSparseMatrix) -> QDenseMatrix {
    let d = a.to_dense();
    let n = d.rows();
    let lower = QDenseMatrix::from_fn(n, n, |i, j| if i >= j { d.get(i, j) } else { Quaternion::ZERO });
    let upper = QDenseMatrix::from_fn(n, n, |i, j| if i <= j { d.get(i, j) } else { Quaternion::ZERO });
    let dinv = QDenseMatrix::from_fn(n, n, |i, j| if i == j { d.get(i, i).inv().unwrap() } else { Quaternion::ZERO });
    lower.mul(&dinv).unwrap().mul(&upper).unwrap()
}

fn unit(q: Quaternion) -> Quaternion {
    q / q.abs()
}

#[test]
fn trivial_cases() {
    let mut g = rng(30);
    let r = random_qvector(&mut g, 5);
    let m = SsorPreconditioner::new(&QSparseMatrix::identity(5)).unwrap();
    assert_eq!(m.apply_forward(&r).unwrap(), r);
    assert_eq!(m.apply_inverse(&r).unwrap(), r);
    assert_eq!(IdentityPreconditioner(5).apply_inverse(&r).unwrap(), r);

    let d: Vec<Quaternion> = (0..5).map(|_| random_quat(&mut g) + Quaternion::real(2.0)).collect();
    let a = QSparseMatrix::from_diagonal(&d);
    let m = SsorPreconditioner::new(&a).unwrap();
    assert!(m.apply_forward(&r).unwrap().max_abs_diff(&a.apply(&r).unwrap()) < 1e-14);
    let z = m.apply_inverse(&r).unwrap();
    for i in 0..5 {
        assert!(z[i].approx_eq(d[i].inv().unwrap() * r[i], 1e-14));
    }
}

#[test]
fn factored_apply_matches_assembly() {
    let mut g = rng(31);
    let n = 10;
    let mut t = Vec::new();
    for i in 0..n {
        t.push((i, i, unit(random_quat(&mut g))));
        for j in 0..n {
            if i != j && (i * 7 + j * 3) % 4 == 0 {
                t.push((i, j, random_quat(&mut g)));
            }
        }
    }
    let a = QSparseMatrix::from_triplets(n, n, t).unwrap();
    let m = SsorPreconditioner::new(&a).unwrap();
    let md = dense_ssor(&a);
    let x = random_qvector(&mut g, n);
    assert!(m.apply_forward(&x).unwrap().max_abs_diff(&counterpart_apply(&md, &x)) < 1e-10);
    let back = m.apply_inverse(&m.apply_forward(&x).unwrap()).unwrap();
    assert!(back.rel_diff(&x) < 1e-10);
}

#[test]
fn inverse_round_trips_through_dense_oracle() {
    for seed in 0..5 {
        let mut g = rng(40 + seed);
        let a = random_sparse(&mut g, 12, 0.3, 3.0);
        let m = SsorPreconditioner::new(&a).unwrap();
        let md = dense_ssor(&a);
        let r = random_qvector(&mut g, 12);
        let z = m.apply_inverse(&r).unwrap();
        assert!(counterpart_apply(&md, &z).rel_diff(&r) < 1e-10);
        let za = m.apply_inverse_adjoint(&r).unwrap();
        assert!(counterpart_apply_adjoint(&md, &za).rel_diff(&r) < 1e-10);
    }
}

#[test]
fn missing_diagonal_names_row() {
    let a = QSparseMatrix::from_triplets(3, 3, vec![(0, 0, Quaternion::ONE), (1, 0, Quaternion::I), (2, 2, Quaternion::J)]).unwrap();
    assert!(matches!(SsorPreconditioner::new(&a), Err(Error::ZeroDiagonal { row: 1 })));
}

#[test]
fn identity_and_triangular_systems_take_one_step() {
    let mut g = rng(50);
    let b = random_qvector(&mut g, 8);
    let opts = SolveOptions::default();
    let id = QSparseMatrix::identity(8);
    let m = SsorPreconditioner::new(&id).unwrap();
    for v in [Variant::ThreeTerm, Variant::TwoTerm] {
        let rep = pqqmr_solve(v, &id, &b, None, &m, &opts).unwrap();
        assert!(rep.converged());
        assert_eq!(rep.iterations, 1);
        assert!(rep.x.rel_diff(&b) < 1e-14);
    }

    let mut t = Vec::new();
    for i in 0..8 {
        t.push((i, i, random_quat(&mut g) + Quaternion::real(2.0)));
        for j in 0..i {
            t.push((i, j, random_quat(&mut g)));
        }
    }
    let lower = QSparseMatrix::from_triplets(8, 8, t).unwrap();
    let m = SsorPreconditioner::new(&lower).unwrap();
    let exact = counterpart_solve(&lower.to_dense(), &b);
    for v in [Variant::ThreeTerm, Variant::TwoTerm] {
        let rep = pqqmr_solve(v, &lower, &b, None, &m, &opts).unwrap();
        assert!(rep.converged());
        assert_eq!(rep.iterations, 1);
        assert!(rep.x.rel_diff(&exact) < 1e-10);
    }
}

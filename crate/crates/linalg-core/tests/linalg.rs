use proptest::prelude::*;
use qer_linalg::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix64 {
    Matrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> Matrix64 {
    random_matrix(rng, n, n).hermitian_part()
}

// Oracle: explicit index loops, independent of the kron/matmul kernels.
fn naive_product(a: &Matrix64, b: &Matrix64) -> Matrix64 {
    Matrix::from_fn(a.rows(), b.cols(), |i, j| {
        (0..a.cols()).map(|k| a[(i, k)] * b[(k, j)]).sum()
    })
}

fn naive_kron_conj_apply(m: &Matrix64, n: &Matrix64, c: &Matrix64) -> Vec<C64> {
    // (M ⊗ conj N) acting on the row-major flattening of C.
    let (p, q) = (m.rows(), n.rows());
    let mut out = vec![C64::new(0.0, 0.0); p * q];
    for i in 0..p {
        for k in 0..q {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..m.cols() {
                for l in 0..n.cols() {
                    acc += m[(i, j)] * n[(k, l)].conj() * c[(j, l)];
                }
            }
            out[i * q + k] = acc;
        }
    }
    out
}

#[test]
fn vectorize_identity_and_basis_element() {
    let id = Matrix64::identity(2);
    let v = vectorize(&id);
    let re: Vec<f64> = v.amplitudes.iter().map(|z| z.re).collect();
    assert_eq!(re, vec![1.0, 0.0, 0.0, 1.0]);

    let e01 = Matrix64::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
    let re: Vec<f64> = vectorize(&e01).amplitudes.iter().map(|z| z.re).collect();
    assert_eq!(re, vec![0.0, 1.0, 0.0, 0.0]);
}

#[test]
fn vectorize_round_trip_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = random_matrix(&mut rng, 3, 5);
    let v = vectorize(&a);
    assert_eq!((v.d_out, v.d_in), (3, 5));
    assert_eq!(devectorize(&v), a);
}

#[test]
fn triple_product_identity_on_rectangular_factors() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let a = random_matrix(&mut rng, 2, 3);
    let b = random_matrix(&mut rng, 3, 3);
    let c = random_matrix(&mut rng, 3, 3);
    let lhs = a.kron(&b.conj()).matvec(&vectorize(&c).amplitudes);
    let rhs = vectorize(&naive_product(&naive_product(&a, &c), &b.adjoint())).amplitudes;
    for (x, y) in lhs.iter().zip(&rhs) {
        assert!((x - y).norm() < 1e-12);
    }
}

#[test]
fn partial_trace_of_product_state() {
    let rho = Matrix64::from_real(2, 2, &[0.7, 0.1, 0.1, 0.3]).unwrap();
    let sigma = Matrix64::from_real(3, 3, &[0.5, 0.0, 0.2, 0.0, 0.25, 0.0, 0.2, 0.0, 0.25]).unwrap();
    let joint = rho.kron(&sigma);
    let r = partial_trace(&joint, 2, 3, Factor::Second).unwrap();
    assert!(r.distance(&rho) < 1e-14);
    let s = partial_trace(&joint, 2, 3, Factor::First).unwrap();
    assert!(s.distance(&sigma) < 1e-14);
}

#[test]
fn partial_trace_of_bell_projector_is_maximally_mixed() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = vec![C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)];
    let p = Matrix64::outer(&bell, &bell);
    let half = Matrix64::identity(2).scale(0.5);
    for side in [Factor::First, Factor::Second] {
        assert!(partial_trace(&p, 2, 2, side).unwrap().distance(&half) < 1e-15);
    }
}

#[test]
fn partial_trace_of_double_ket_outer_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (dout, din) in [(2, 2), (2, 3), (4, 2)] {
        let a = random_matrix(&mut rng, dout, din);
        let b = random_matrix(&mut rng, dout, din);
        let m = Matrix64::outer(&vectorize(&a).amplitudes, &vectorize(&b).amplitudes);
        let first = partial_trace(&m, dout, din, Factor::First).unwrap();
        let oracle = naive_product(&a.adjoint(), &b).conj();
        assert!(first.distance(&oracle) < 1e-12);
        let second = partial_trace(&m, dout, din, Factor::Second).unwrap();
        assert!(second.distance(&naive_product(&a, &b.adjoint())) < 1e-12);
        assert!((first.trace() - m.trace()).norm() < 1e-12);
    }
}

#[test]
fn partial_trace_rejects_bad_split() {
    let m = Matrix64::identity(6);
    assert!(partial_trace(&m, 2, 2, Factor::First).is_err());
}

#[test]
fn eig_of_diagonal_sorts_descending() {
    let d = Matrix64::from_real(3, 3, &[3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0]).unwrap();
    let e = hermitian_eig(&d).unwrap();
    for (a, b) in e.eigenvalues.iter().zip([3.0, 2.0, 1.0]) {
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn eig_of_pauli_x() {
    let x = Matrix64::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
    let e = hermitian_eig(&x).unwrap();
    assert!((e.eigenvalues[0] - 1.0).abs() < 1e-14);
    assert!((e.eigenvalues[1] + 1.0).abs() < 1e-14);
    let v = e.vector(0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // up to phase: |⟨+|v⟩| = 1
    let overlap = (v[0] * h + v[1] * h).norm();
    assert!((overlap - 1.0).abs() < 1e-12);
}

#[test]
fn eig_reconstruction_random_hermitian() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let h = random_hermitian(&mut rng, 8);
    let e = hermitian_eig(&h).unwrap();
    assert!(e.reconstruct().distance(&h) <= 1e-10 * h.frobenius_norm());
    let vv = e.eigenvectors.adjoint().matmul(&e.eigenvectors);
    assert!(vv.distance(&Matrix64::identity(8)) < 1e-10);
}

#[test]
fn eig_rejects_non_square_and_non_hermitian() {
    assert!(hermitian_eig(&Matrix64::zeros(2, 3)).is_err());
    let a = Matrix64::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
    assert!(matches!(hermitian_eig(&a), Err(LinalgError::NotHermitian { .. })));
}

#[test]
fn eig_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = random_hermitian(&mut rng, 12);
    let a = hermitian_eig(&h).unwrap();
    let b = hermitian_eig(&h).unwrap();
    assert_eq!(a.eigenvalues, b.eigenvalues);
    assert_eq!(a.eigenvectors, b.eigenvectors);
}

#[test]
fn eig_works_in_single_precision() {
    let h = Matrix32::from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
    let e = hermitian_eig(&h).unwrap();
    assert!((e.eigenvalues[0] - 3.0).abs() < 1e-5);
    assert!((e.eigenvalues[1] - 1.0).abs() < 1e-5);
}

#[test]
fn svd_examples() {
    let s = svd(&Matrix64::identity(3)).unwrap();
    assert!(s.singular_values.iter().all(|&x| (x - 1.0).abs() < 1e-14));
    let d = Matrix64::from_real(2, 2, &[0.0, 0.0, 0.0, 5.0]).unwrap();
    let s = svd(&d).unwrap();
    assert!((s.singular_values[0] - 5.0).abs() < 1e-14 && s.singular_values[1].abs() < 1e-14);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let a = random_matrix(&mut rng, 4, 6);
    let s = svd(&a).unwrap();
    assert!(s.reconstruct().distance(&a) <= 1e-10 * a.frobenius_norm());
    assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1] && w[1] >= 0.0));
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> Matrix64 {
    let s = svd(&random_matrix(rng, n, n)).unwrap();
    s.u.matmul(&s.vdag)
}

#[test]
fn closest_isometry_fixed_point_and_scaling() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let w = random_unitary(&mut rng, 3);
    assert!(closest_isometry(&w, 3).unwrap().distance(&w) < 1e-10);
    assert!(closest_isometry(&w.scale(2.0), 3).unwrap().distance(&w) < 1e-10);
    // a 2×4 isometry (rows orthonormal)
    let v = random_unitary(&mut rng, 4).submatrix(0, 0, 2, 4);
    assert!(closest_isometry(&v, 2).unwrap().distance(&v) < 1e-10);
    assert!(closest_isometry(&v, 3).is_err());
}

#[test]
fn closest_isometry_beats_random_isometries() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let x = random_matrix(&mut rng, 2, 4);
    let r = closest_isometry(&x, 2).unwrap();
    let best = x.distance(&r);
    for _ in 0..10_000 {
        let cand = random_unitary(&mut rng, 4).submatrix(0, 0, 2, 4);
        assert!(x.distance(&cand) >= best - 1e-12);
    }
}

#[test]
fn closest_isometry_rank_pattern() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let x = random_matrix(&mut rng, 3, 5);
    let r = closest_isometry(&x, 2).unwrap();
    let rr = r.matmul(&r.adjoint());
    let ev = hermitian_eigenvalues(&rr).unwrap();
    for (a, b) in ev.iter().zip([1.0, 1.0, 0.0]) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn schmidt_examples() {
    let a = [C64::new(1.0, 0.0), C64::new(0.0, 2.0)];
    let b = [C64::new(0.5, 0.0), C64::new(0.0, 0.0), C64::new(0.5, -0.5)];
    let v: Vec<C64> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
    let s = schmidt_decompose(&v, 2, 3).unwrap();
    let expect = vec_norm(&a) * vec_norm(&b);
    assert!((s.coefficients[0] - expect).abs() < 1e-12);
    assert!(s.coefficients[1].abs() < 1e-12);

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = [C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)];
    let s = schmidt_decompose(&bell, 2, 2).unwrap();
    assert!(s.coefficients.iter().all(|&l| (l - h).abs() < 1e-12));

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let r: Vec<C64> = random_matrix(&mut rng, 12, 1).into_data();
    let s = schmidt_decompose(&r, 3, 4).unwrap();
    let back = s.reconstruct();
    assert!(back.iter().zip(&r).all(|(x, y)| (x - y).norm() < 1e-12));
    let sum: f64 = s.coefficients.iter().map(|l| l * l).sum();
    assert!((sum - vec_norm(&r).powi(2)).abs() < 1e-12);
    assert!(schmidt_decompose(&r, 5, 2).is_err());
}

#[test]
fn orthonormal_span_examples() {
    let e = |i: usize| {
        let mut v = vec![C64::new(0.0, 0.0); 3];
        v[i] = C64::new(1.0, 0.0);
        v
    };
    assert_eq!(orthonormal_span(&[e(0), e(0), e(1)], 1e-9).unwrap().cols(), 2);
    let mut near = e(0);
    near[1] = C64::new(1e-15, 0.0);
    assert_eq!(orthonormal_span(&[e(0), near], 1e-9).unwrap().cols(), 1);
    assert_eq!(orthonormal_span::<f64>(&[], 1e-9).unwrap().cols(), 0);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let vs: Vec<Vec<C64>> = (0..5).map(|_| random_matrix(&mut rng, 8, 1).into_data()).collect();
    let q = orthonormal_span(&vs, 1e-9).unwrap();
    assert_eq!(q.cols(), 5);
    let p = q.matmul(&q.adjoint());
    for v in &vs {
        let pv = p.matvec(v);
        assert!(pv.iter().zip(v).all(|(a, b)| (a - b).norm() < 1e-10));
    }
}

#[test]
fn cholesky_solves_and_inverts() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let a = random_matrix(&mut rng, 6, 6);
    let h = a.matmul(&a.adjoint()) + Matrix64::identity(6);
    let ch = Cholesky::new(&h).unwrap();
    let b: Vec<C64> = random_matrix(&mut rng, 6, 1).into_data();
    let x = ch.solve(&b);
    let hx = h.matvec(&x);
    assert!(hx.iter().zip(&b).all(|(p, q)| (p - q).norm() < 1e-10));
    assert!(h.matmul(&ch.inverse()).distance(&Matrix64::identity(6)) < 1e-10);
    let neg = Matrix64::identity(2).scale(-1.0);
    assert!(Cholesky::new(&neg).is_err());
}

#[test]
fn matrix_rejects_bad_input() {
    assert!(Matrix64::new(2, 2, vec![C64::new(0.0, 0.0); 3]).is_err());
    assert!(Matrix64::new(1, 1, vec![C64::new(f64::NAN, 0.0)]).is_err());
}

fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix64> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols).prop_map(move |v| {
        Matrix::new(rows, cols, v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn prop_double_ket_inner_product((a, b) in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| (arb_matrix(r, c), arb_matrix(r, c)))) {
        let lhs = vectorize(&a).inner(&vectorize(&b));
        let rhs = naive_product(&a.adjoint(), &b).trace();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn prop_triple_product((m, n, c) in (1usize..4, 1usize..4, 1usize..4, 1usize..4).prop_flat_map(|(p, q, j, l)| (arb_matrix(p, j), arb_matrix(q, l), arb_matrix(j, l)))) {
        let lhs = m.kron(&n.conj()).matvec(&vectorize(&c).amplitudes);
        let oracle = naive_kron_conj_apply(&m, &n, &c);
        let direct = vectorize(&naive_product(&naive_product(&m, &c), &n.adjoint())).amplitudes;
        for ((x, y), z) in lhs.iter().zip(&oracle).zip(&direct) {
            prop_assert!((x - y).norm() < 1e-12);
            prop_assert!((x - z).norm() < 1e-12);
        }
    }

    #[test]
    fn prop_closest_isometry_saturation((x, d) in (1usize..4, 1usize..5).prop_flat_map(|(r, c)| (arb_matrix(r, c), 1..=r.min(c)))) {
        let r = closest_isometry(&x, d).unwrap();
        let s = svd(&x).unwrap();
        let lhs = (naive_product(&x.adjoint(), &r) + naive_product(&r.adjoint(), &x)).trace();
        let rhs: f64 = 2.0 * s.singular_values.iter().take(d).sum::<f64>();
        prop_assert!((lhs.re - rhs).abs() < 1e-10 && lhs.im.abs() < 1e-10);
    }

    #[test]
    fn prop_degenerate_spectrum_reconstructs(vals in prop::collection::vec(prop::sample::select(vec![-1.0, 0.0, 2.0]), 2..8), seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = vals.len();
        let u = random_unitary(&mut rng, n);
        let h = u.matmul(&Matrix64::real_diag(&vals)).matmul(&u.adjoint()).hermitian_part();
        let e = hermitian_eig(&h).unwrap();
        prop_assert!(e.reconstruct().distance(&h) <= 1e-10 * h.frobenius_norm().max(1.0));
        let vv = e.eigenvectors.adjoint().matmul(&e.eigenvectors);
        prop_assert!(vv.distance(&Matrix64::identity(n)) < 1e-10);
    }
}

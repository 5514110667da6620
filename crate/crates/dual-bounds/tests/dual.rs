use proptest::prelude::*;
use qer_channels::{amplitude_damping, depolarizing, n_fold, ProductChannel};
use qer_dual::*;
use qer_linalg::{hermitian_eig, identity_kron, max_eigenvalue, Matrix, Matrix64};
use qer_ops::{data_matrix, random, DataMatrix, Ensemble, QuantumChannel};
use qer_optimal::solve_optimal_recovery;
use qer_stabilizer::{encoding_isometry, five_qubit, generic_qec_recovery, ml_pauli_recovery, StabilizerCode, SyndromePartition};
use qer_structured::{block_eigqer, eigqer, EigQerOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ad_data(code: &StabilizerCode, gamma: f64) -> DataMatrix<f64> {
    let u = encoding_isometry::<f64>(code).unwrap();
    let ch = ProductChannel::uniform(&amplitude_damping(gamma).unwrap(), code.n())
        .unwrap()
        .after_isometry(&u)
        .unwrap();
    data_matrix(&Ensemble::maximally_mixed(code.d_s()), &ch).unwrap()
}

fn random_partition(d: usize, rng: &mut ChaCha8Rng) -> SyndromePartition<f64> {
    let u: Matrix64 = random::unitary(d, rng);
    let mut bases = Vec::new();
    let mut at = 0;
    while at < d {
        let r = rng.random_range(1..=(d - at).min(3));
        bases.push(u.columns(at..at + r));
        at += r;
    }
    let labels = (0..bases.len()).map(|q| q.to_string()).collect();
    SyndromePartition::new(bases, labels).unwrap()
}

fn random_data(d_s: usize, d_c: usize, kraus: usize, rng: &mut ChaCha8Rng) -> DataMatrix<f64> {
    let ch: QuantumChannel<f64> = random::channel(d_s, d_c, kraus, rng);
    data_matrix(&Ensemble::maximally_mixed(d_s), &ch).unwrap()
}

#[test]
fn feasibility_of_simple_points() {
    let data = ad_data(&five_qubit(), 0.1);
    let top = max_eigenvalue(data.matrix()).unwrap();
    let big = is_dual_feasible(&Matrix::identity(32).scale(top), &data, 1e-12).unwrap();
    assert!(big.feasible && big.min_eigenvalue >= -1e-12);
    let zero = is_dual_feasible(&Matrix64::zeros(32, 32), &data, 1e-12).unwrap();
    assert!(!zero.feasible);
    assert!((zero.min_eigenvalue + top).abs() < 1e-12);
    assert!(is_dual_feasible(&Matrix64::zeros(4, 4), &data, 1e-12).is_err());
}

#[test]
fn analytic_pauli_dual_is_feasible() {
    let code = five_qubit();
    let noise = n_fold(&depolarizing(0.02).unwrap(), 5).unwrap();
    let u = encoding_isometry::<f64>(&code).unwrap();
    let data = data_matrix(&Ensemble::maximally_mixed(2), &QuantumChannel::isometry(u).unwrap().then(&noise).unwrap()).unwrap();
    let ml = ml_pauli_recovery::<f64>(&code, &noise).unwrap();
    let w: Vec<f64> = ml.best_weights().iter().map(|w| w / 2.0).collect();
    let y = weighted_dual(&ml.partition, &w).unwrap();
    let check = is_dual_feasible(&y, &data, 1e-10).unwrap();
    assert!(check.feasible && check.min_eigenvalue >= -1e-10);
    assert!((y.trace().re - ml.fidelity).abs() < 1e-10);
}

#[test]
fn gersgorin_on_diagonal_kernel_is_tight() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (d_s, d_c) = (2, 6);
    let diag: Vec<f64> = (0..d_s * d_c).map(|_| rng.random_range(0.0..1.0)).collect();
    let data = DataMatrix::from_matrix(Matrix::real_diag(&diag), d_s, d_c).unwrap();
    let id = Matrix64::identity(d_c);
    let bases = vec![id.columns(0..2), id.columns(2..3), id.columns(3..6)];
    let partition = SyndromePartition::new(bases, vec!["a".into(), "b".into(), "c".into()]).unwrap();
    let g = gersgorin_bound(&data, &partition).unwrap();
    let s = svd_dual_point(&data, &partition).unwrap();
    let l = lambda_max_init(&data, &partition).unwrap();
    let expect = |cols: std::ops::Range<usize>| {
        (0..d_s).flat_map(|a| cols.clone().map(move |c| a * d_c + c)).map(|i| diag[i]).fold(0.0, f64::max)
    };
    let want = [expect(0..2), expect(2..3), expect(3..6)];
    for q in 0..3 {
        assert!((g.weights[q] - want[q]).abs() < 1e-14);
        assert!((s.weights[q] - want[q]).abs() < 1e-12);
        assert!((l.weights[q] - want[q]).abs() < 1e-12);
    }
    assert!(g.certificate.is_valid() && s.certificate.is_valid());
    assert!((g.bound() - s.bound()).abs() < 1e-12);
}

#[test]
fn partition_bounds_on_five_qubit_code() {
    for gamma in [0.05, 0.1, 0.2] {
        let data = ad_data(&five_qubit(), gamma);
        let opt = solve_optimal_recovery(&data, 1e-9).unwrap().primal_value;
        let e = eigqer(&data, &EigQerOptions::default()).unwrap();
        let p = partition_of(&e).unwrap();
        let g = gersgorin_bound(&data, &p).unwrap();
        let s = svd_dual_point(&data, &p).unwrap();
        assert!(g.certificate.feasibility_residual <= 1e-10);
        assert!(g.bound() > opt);
        assert!(s.bound() <= g.bound() + 1e-12, "svd {} gersgorin {}", s.bound(), g.bound());
        assert!(s.bound() >= opt - 1e-6);

        let l = lambda_max_init(&data, &p).unwrap();
        let r = repair_kernel(&l.certificate.y, data.matrix(), 2, &RepairOptions::default()).unwrap();
        assert!(r.iterations <= 64, "{} updates", r.iterations);
        let bound = r.traces.last().copied().unwrap();
        assert!(bound <= s.bound() + 1e-9 && bound >= opt - 1e-8);
    }
}

#[test]
fn gersgorin_exceeds_one_at_high_noise() {
    let data = ad_data(&five_qubit(), 0.2);
    let e = eigqer(&data, &EigQerOptions::default()).unwrap();
    assert!(gersgorin_bound(&data, &partition_of(&e).unwrap()).unwrap().bound() > 1.0);
}

#[test]
fn gersgorin_feasible_over_noise_grid() {
    let code = five_qubit();
    let generic = generic_qec_recovery::<f64>(&code).unwrap();
    let partition = qer_stabilizer::syndrome_partition::<f64>(&code).unwrap();
    for k in 0..20 {
        let gamma = 0.01 + 0.02 * k as f64;
        let data = ad_data(&code, gamma);
        let g = gersgorin_bound(&data, &partition).unwrap();
        assert!(g.certificate.feasibility_residual <= 1e-10, "gamma {gamma}");
        assert!(generic.fidelity(&data) <= g.bound() + 1e-6);
    }
}

#[test]
fn feasible_start_is_unchanged() {
    let data = ad_data(&five_qubit(), 0.1);
    let e = eigqer(&data, &EigQerOptions::default()).unwrap();
    let g = gersgorin_bound(&data, &partition_of(&e).unwrap()).unwrap();
    let r = repair_kernel(&g.certificate.y, data.matrix(), 2, &RepairOptions::default()).unwrap();
    assert_eq!(r.iterations, 0);
    assert_eq!(r.y.distance(&g.certificate.y), 0.0);
}

#[test]
fn block_initialized_repair_is_near_optimal() {
    for gamma in [0.1, 0.2] {
        let data = ad_data(&five_qubit(), gamma);
        let opt = solve_optimal_recovery(&data, 1e-9).unwrap().primal_value;
        let b = block_eigqer(&data, 2, &EigQerOptions::default()).unwrap();
        let (partition, duals) = recovery_duals(&b).unwrap();
        let y0 = block_dual_init(&data, &partition, &duals).unwrap();
        let direct = iterative_dual(&y0, &data, &RepairOptions::default()).unwrap();
        assert!(direct.is_valid());
        let bound = direct.certified_bound();
        assert!(bound >= opt - 1e-7 && bound - opt <= 1e-3, "bound {bound} optimum {opt}");

        let iterated = iterated_block_dual(&data, &partition, &duals, &RepairOptions::default()).unwrap();
        assert!(iterated.certificate.is_valid());
        assert!((iterated.certificate.certified_bound() - bound).abs() <= 1e-4);
        assert!(iterated.rounds.len() >= 2);
        assert!(b.fidelity(&data) <= iterated.certificate.certified_bound() + 1e-6);
    }
}

#[test]
fn single_block_matches_direct_repair() {
    let data = ad_data(&five_qubit(), 0.15);
    let partition = SyndromePartition::new(vec![Matrix64::identity(32)], vec!["all".into()]).unwrap();
    let l = lambda_max_init(&data, &partition).unwrap();
    let direct = iterative_dual(&l.certificate.y, &data, &RepairOptions::default()).unwrap();
    let block = iterated_block_dual(&data, &partition, &[None], &RepairOptions::default()).unwrap();
    assert!((block.certificate.certified_bound() - direct.certified_bound()).abs() < 1e-9);
    assert_eq!(block.final_updates, 0);
}

#[test]
fn mismatched_duals_are_rejected() {
    let data = ad_data(&five_qubit(), 0.1);
    let e = eigqer(&data, &EigQerOptions::default()).unwrap();
    let p = partition_of(&e).unwrap();
    assert!(block_dual_init(&data, &p, &[None]).is_err());
    let mut duals = vec![None; p.len()];
    duals[0] = Some(Matrix64::identity(5));
    assert!(iterated_block_dual(&data, &p, &duals, &RepairOptions::default()).is_err());
    let id = Matrix64::identity(32);
    assert!(SyndromePartition::new(vec![id.columns(0..16)], vec!["half".into()]).is_err());
}

#[test]
fn update_budget_reports_best_point() {
    let data = ad_data(&five_qubit(), 0.1);
    let opts = RepairOptions { max_iters: Some(2), ..Default::default() };
    match repair_kernel(&Matrix64::zeros(32, 32), data.matrix(), 2, &opts) {
        Err(DualError::MaxIterations { iterations, residual, best }) => {
            assert_eq!(iterations, 2);
            assert!(residual > 0.0);
            assert!(best.trace().re > 0.0);
        }
        other => panic!("expected budget error, got {other:?}"),
    }
}

#[test]
fn single_precision_repair() {
    let u = encoding_isometry::<f32>(&five_qubit()).unwrap();
    let ch = ProductChannel::uniform(&amplitude_damping(0.1f32).unwrap(), 5).unwrap().after_isometry(&u).unwrap();
    let data = data_matrix(&Ensemble::maximally_mixed(2), &ch).unwrap();
    let e = eigqer(&data, &EigQerOptions::default()).unwrap();
    let l = lambda_max_init(&data, &partition_of(&e).unwrap()).unwrap();
    let opts = RepairOptions { tol: 1e-5, ..Default::default() };
    let r = repair_kernel(&l.certificate.y, data.matrix(), 2, &opts).unwrap();
    assert!(r.min_eigenvalue >= -1e-5);
    assert!((r.traces.last().unwrap() - 0.98817).abs() < 0.01);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gersgorin_always_feasible(seed in 0u64..100_000, d_c in 2usize..9, kraus in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = random_data(2, d_c, kraus, &mut rng);
        let p = random_partition(d_c, &mut rng);
        let g = gersgorin_bound(&data, &p).unwrap();
        prop_assert!(g.certificate.feasibility_residual <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn repair_is_monotone_and_dominates(seed in 0u64..100_000, kraus in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = random_data(2, 4, kraus, &mut rng);
        let p = random_partition(4, &mut rng);
        let s = svd_dual_point(&data, &p).unwrap();
        let r = repair_kernel(&s.certificate.y, data.matrix(), 2, &RepairOptions::default()).unwrap();
        prop_assert!(r.negative_counts.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(r.traces.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        let cert = DualCertificate::new(r.y.clone(), &data).unwrap();
        let opt = solve_optimal_recovery(&data, 1e-9).unwrap().primal_value;
        prop_assert!(opt <= cert.certified_bound() + 1e-6);
        let e = eigqer(&data, &EigQerOptions::default()).unwrap();
        prop_assert!(e.fidelity(&data) <= cert.certified_bound() + 1e-6);
        let g = gersgorin_bound(&data, &p).unwrap();
        prop_assert!(opt <= g.bound() + 1e-6);
    }

    #[test]
    fn single_update_lifts_target(seed in 0u64..100_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = random_data(2, 3, 2, &mut rng);
        let y0 = Matrix64::zeros(3, 3);
        let z0 = (&identity_kron(2, &y0) - data.matrix()).hermitian_part();
        let eig = hermitian_eig(&z0).unwrap();
        let n = eig.eigenvalues.len();
        prop_assume!(eig.eigenvalues[n - 2] - eig.eigenvalues[n - 1] > 1e-9);
        let v = eig.vector(n - 1);
        let opts = RepairOptions { max_iters: Some(1), ..Default::default() };
        let y1 = match repair_kernel(&y0, data.matrix(), 2, &opts) {
            Err(DualError::MaxIterations { best, .. }) => *best,
            Ok(r) => r.y,
            Err(e) => panic!("{e}"),
        };
        let z1 = (&identity_kron(2, &y1) - data.matrix()).hermitian_part();
        prop_assert!(z1.quadratic_form(&v).re >= -1e-10);
    }
}

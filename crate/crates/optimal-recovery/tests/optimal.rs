use proptest::prelude::*;
use qer_channels::{amplitude_damping, depolarizing, n_fold};
use qer_linalg::{c, Complex, Matrix, Matrix64};
use qer_ops::{composite_fidelity, data_matrix, random, DataMatrix, Ensemble, QuantumChannel, RecoveryOperation};
use qer_optimal::io::{read_solution, summary_json, write_solution, SolutionSummary};
use qer_optimal::*;
use qer_stabilizer::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn encoded(code: &StabilizerCode, noise: &QuantumChannel<f64>) -> QuantumChannel<f64> {
    let u = encoding_isometry::<f64>(code).unwrap();
    QuantumChannel::isometry(u).unwrap().then(noise).unwrap()
}

fn code_data(code: &StabilizerCode, noise: &QuantumChannel<f64>) -> DataMatrix<f64> {
    data_matrix(&Ensemble::maximally_mixed(code.d_s()), &encoded(code, noise)).unwrap()
}

fn ad_data(code: &StabilizerCode, gamma: f64) -> DataMatrix<f64> {
    code_data(code, &n_fold(&amplitude_damping(gamma).unwrap(), code.n()).unwrap())
}

#[test]
fn identity_channel_is_perfectly_recoverable() {
    let data = data_matrix(&Ensemble::<f64>::maximally_mixed(2), &QuantumChannel::identity(2)).unwrap();
    let sol = solve_optimal_recovery(&data, 1e-9).unwrap();
    assert!((sol.primal_value - 1.0).abs() < 1e-7, "{}", sol.primal_value);
    assert!(sol.gap >= -1e-7 && sol.gap <= 1e-7);
    let id = Matrix64::identity(2);
    let vec_i = qer_linalg::vectorize(&id).amplitudes;
    let expected = Matrix::outer(&vec_i, &vec_i);
    assert!(sol.x.distance(&expected) < 1e-5, "{}", sol.x.distance(&expected));
}

#[test]
fn pauli_channel_optimum_is_maximum_likelihood() {
    let code = five_qubit();
    let noise = n_fold(&depolarizing(0.02).unwrap(), 5).unwrap();
    let data = code_data(&code, &noise);
    let sol = solve_optimal_recovery(&data, 1e-9).unwrap();
    let ml = ml_pauli_recovery::<f64>(&code, &noise).unwrap();
    let expected: f64 = ml.best_weights().iter().sum();
    assert!((sol.primal_value - expected).abs() < 1e-6, "{} vs {expected}", sol.primal_value);
    assert!((ml.fidelity - expected).abs() < 1e-12);
    let report = verify_optimality(&sol.x, &sol.y, &data).unwrap();
    assert!(report.passes(1e-6), "{report:?}");
}

#[test]
fn amplitude_damping_optimum_beats_generic() {
    let code = five_qubit();
    let data = ad_data(&code, 0.1);
    let sol = solve_optimal_recovery(&data, 1e-9).unwrap();
    let generic = generic_qec_recovery::<f64>(&code).unwrap();
    assert!(sol.primal_value > generic.fidelity(&data) + 1e-3);
    assert!(sol.primal_value <= 1.0 + 1e-9);
}

#[test]
fn analytic_pauli_pair_satisfies_optimality() {
    let code = five_qubit();
    let noise = n_fold(&depolarizing(0.02).unwrap(), 5).unwrap();
    let data = code_data(&code, &noise);
    let ml = ml_pauli_recovery::<f64>(&code, &noise).unwrap();
    let mut y = Matrix64::zeros(32, 32);
    for (q, w) in ml.best_weights().iter().enumerate() {
        y = &y + &ml.partition.projector(q).conj().scale(w / 2.0);
    }
    let report = verify_optimality(&ml.recovery.choi(), &y, &data).unwrap();
    assert!(report.passes(1e-9), "{report:?}");
}

#[test]
fn choi_round_trip_preserves_fidelity() {
    let data = ad_data(&five_qubit(), 0.1);
    let sol = solve_optimal_recovery(&data, 1e-9).unwrap();
    let rec = recovery_from_choi(&sol.x, 2, 32, 1e-10).unwrap();
    assert!(rec.channel().is_cptp(1e-10));
    assert!((rec.fidelity(&data) - sol.primal_value).abs() < 1e-8);
    assert!((data.kraus_fidelity(rec.kraus()) - sol.primal_value).abs() < 1e-8);
    assert!(numerical_rank(&sol.x, 1e-6).unwrap() <= 32);

    let again = recovery_from_choi(&rec.choi(), 2, 32, 1e-10).unwrap();
    assert!((again.fidelity(&data) - rec.fidelity(&data)).abs() < 1e-9);
}

#[test]
fn recovery_from_choi_rejects_infeasible_matrices() {
    let x = Matrix64::identity(4);
    assert!(matches!(recovery_from_choi(&x, 2, 2, 1e-9), Err(OptimalError::Infeasible(_))));
    assert!(matches!(recovery_from_choi(&x, 2, 3, 1e-9), Err(OptimalError::Dimension(_))));
}

#[test]
fn dual_from_optimal_recovery_is_a_certificate() {
    let code = five_qubit();
    let data = ad_data(&code, 0.1);
    let sol = solve_optimal_recovery(&data, 1e-9).unwrap();
    let rec = recovery_from_choi(&sol.x, 2, 32, 1e-10).unwrap();
    let cert = dual_from_primal(&rec, &data).unwrap();
    assert!(cert.feasibility_residual <= 1e-6, "{}", cert.feasibility_residual);
    assert!((cert.bound - rec.fidelity(&data)).abs() < 1e-9);
    assert!((cert.bound - sol.primal_value).abs() < 1e-7);
    assert!(cert.hermiticity_residual < 1e-8, "{}", cert.hermiticity_residual);

    let ens = Ensemble::maximally_mixed(2);
    let noise = n_fold(&amplitude_damping(0.1).unwrap(), 5).unwrap();
    let same = dual_from_recovery(&rec, &ens, &encoded(&code, &noise)).unwrap();
    assert!(same.y.distance(&cert.y) < 1e-12);
}

#[test]
fn dual_from_generic_recovery_is_infeasible() {
    let code = five_qubit();
    let data = ad_data(&code, 0.1);
    let generic = generic_qec_recovery::<f64>(&code).unwrap();
    let cert = dual_from_primal(&generic, &data).unwrap();
    assert!((cert.bound - generic.fidelity(&data)).abs() < 1e-9);
    assert!(cert.feasibility_residual > 1e-4, "{}", cert.feasibility_residual);
    assert!(!cert.is_valid());
}

#[test]
fn perturbed_primal_fails_slackness() {
    let data = ad_data(&leung_41(), 0.1);
    let sol = solve_optimal_recovery(&data, 1e-9).unwrap();
    let report = verify_optimality(&sol.x, &sol.y, &data).unwrap();
    assert!(report.passes(1e-6), "{report:?}");
    let n = sol.x.rows();
    let x = &sol.x.scale(0.9) + &Matrix64::identity(n).scale(0.1 / 2.0);
    let bad = verify_optimality(&x, &sol.y, &data).unwrap();
    assert!(bad.primal_infeasibility < 1e-9);
    assert!(bad.slackness > 1e-3, "{bad:?}");
    assert!(!bad.passes(1e-6));
}

#[test]
fn oversized_problems_are_refused() {
    let data = DataMatrix::from_matrix(Matrix64::zeros(2 * 128, 2 * 128), 2, 128).unwrap();
    assert!(matches!(
        solve_optimal_recovery(&data, 1e-9),
        Err(OptimalError::TooLarge { d_out: 2, d_in: 128 })
    ));
    assert!(SdpProblem::new(Matrix64::zeros(3, 3), 2, 2).is_err());
}

#[test]
fn solver_is_deterministic() {
    let data = ad_data(&leung_41(), 0.2);
    let a = solve_optimal_recovery(&data, 1e-9).unwrap();
    let b = solve_optimal_recovery(&data, 1e-9).unwrap();
    assert_eq!(a.x.data(), b.x.data());
    assert_eq!(a.iterations, b.iterations);
}

#[test]
fn single_precision_solve() {
    let data = ad_data(&leung_41(), 0.1);
    let data32 = DataMatrix::<f32>::from_matrix(data.matrix().cast(), 2, 16).unwrap();
    let sol = solve_optimal_recovery(&data32, 1e-5).unwrap();
    let exact = solve_optimal_recovery(&data, 1e-9).unwrap();
    assert!((sol.primal_value as f64 - exact.primal_value).abs() < 1e-4);
}

#[test]
fn robust_single_point_is_plain_data_matrix() {
    let data = ad_data(&leung_41(), 0.1);
    let robust = robust_data_matrix(&[(1.0, data.clone())]).unwrap();
    assert!(robust.matrix().distance(data.matrix()) < 1e-12);
    assert!(robust_data_matrix(&[(0.7, data.clone())]).is_err());
    assert!(robust_data_matrix::<f64>(&[]).is_err());

    let plain = DataMatrix::from_matrix(data.matrix().clone(), 2, 16).unwrap();
    let mixed = robust_data_matrix(&[(0.5, data.clone()), (0.5, plain)]).unwrap();
    assert!(mixed.factor().is_none());
    assert!(mixed.matrix().distance(data.matrix()) < 1e-12);
}

#[test]
fn robust_recovery_tracks_uncertain_damping() {
    let code = five_qubit();
    let (low, high, mid) = (ad_data(&code, 0.05), ad_data(&code, 0.15), ad_data(&code, 0.1));
    let robust = robust_data_matrix(&[(0.5, low.clone()), (0.5, high)]).unwrap();
    let expected = &low.matrix().scale(0.5) + &ad_data(&code, 0.15).matrix().scale(0.5);
    assert!(robust.matrix().distance(&expected) < 1e-12);

    let r_robust = recovery_from_choi(&solve_optimal_recovery(&robust, 1e-9).unwrap().x, 2, 32, 1e-10).unwrap();
    let r_low = recovery_from_choi(&solve_optimal_recovery(&low, 1e-9).unwrap().x, 2, 32, 1e-10).unwrap();
    assert!(r_robust.fidelity(&mid) >= r_low.fidelity(&mid) - 1e-9);
}

#[test]
fn adapted_recovery_is_robust_to_mismatch() {
    let code = five_qubit();
    let sol = solve_optimal_recovery(&ad_data(&code, 0.1), 1e-9).unwrap();
    let adapted = recovery_from_choi(&sol.x, 2, 32, 1e-10).unwrap();
    let generic = generic_qec_recovery::<f64>(&code).unwrap();
    for gamma in [0.05, 0.1, 0.15, 0.2, 0.25, 0.3] {
        let data = ad_data(&code, gamma);
        assert!(adapted.fidelity(&data) > generic.fidelity(&data), "gamma = {gamma}");
    }
}

#[test]
fn noiseless_encoding_reaches_one() {
    let ens = Ensemble::<f64>::maximally_mixed(2);
    let id = RecoveryOperation::new(vec![Matrix64::identity(2)]).unwrap();
    let enc = solve_optimal_encoding(&id, &QuantumChannel::identity(2), &ens).unwrap();
    assert!((enc.value - 1.0).abs() < 1e-7);
    assert_eq!(enc.rank, 1);
}

#[test]
fn encoding_kernel_reproduces_composite_fidelity() {
    let code = leung_41();
    let noise = n_fold(&amplitude_damping(0.1).unwrap(), 4).unwrap();
    let ens = Ensemble::maximally_mixed(2);
    let rec = leung_recovery::<f64>(0.1).unwrap();
    let u = encoding_isometry::<f64>(&code).unwrap();
    let kernel = encoding_kernel(rec.kraus(), &noise, &ens).unwrap();
    let choi = QuantumChannel::isometry(u.clone()).unwrap().choi();
    let via_kernel = choi.matrix().trace_product(&kernel).re;
    let direct = composite_fidelity(&ens, rec.kraus(), &encoded(&code, &noise)).unwrap();
    assert!((via_kernel - direct).abs() < 1e-12, "{via_kernel} vs {direct}");
}

#[test]
fn reoptimized_encoding_is_no_worse() {
    let code = leung_41();
    let noise = n_fold(&amplitude_damping(0.1).unwrap(), 4).unwrap();
    let ens = Ensemble::maximally_mixed(2);
    let data = code_data(&code, &noise);
    let rec = recovery_from_choi(&solve_optimal_recovery(&data, 1e-9).unwrap().x, 2, 16, 1e-10).unwrap();
    let before = rec.fidelity(&data);
    let enc = solve_optimal_encoding(&rec, &noise, &ens).unwrap();
    assert!(enc.value >= before - 1e-8, "{} < {before}", enc.value);
    assert!(enc.encoding.is_cptp(1e-8));
    assert!(enc.rank >= 1 && enc.rank <= 16);
}

#[test]
fn alternating_optimization_is_monotone() {
    let code = five_qubit();
    let noise = n_fold(&amplitude_damping(0.1).unwrap(), 5).unwrap();
    let ens = Ensemble::maximally_mixed(2);
    let u = encoding_isometry::<f64>(&code).unwrap();
    let it = iterate_encoding_recovery(&u, &noise, &ens, 2, 1e-12).unwrap();
    let recovery_only = solve_optimal_recovery(&code_data(&code, &noise), 1e-9).unwrap().primal_value;
    assert!((it.trace[0] - recovery_only).abs() < 1e-7);
    assert!(it.trace[1] >= recovery_only - 1e-9);
    let inc = it.increments();
    assert!(inc.iter().all(|&d| d >= -1e-9), "{inc:?}");
    let total: f64 = inc.iter().sum();
    assert!((total - (it.value() - it.trace[0])).abs() < 1e-12);
    let check = composite_fidelity(&ens, it.recovery.kraus(), &it.encoding.then(&noise).unwrap()).unwrap();
    assert!(check >= it.trace[it.trace.len() - 2] - 1e-8);
}

fn baseline(gamma: f64) -> f64 {
    let s = (1.0 + (1.0 - gamma).sqrt()) / 2.0;
    s * s
}

#[test]
fn iterated_three_qubit_codes_beat_baseline() {
    let ens = Ensemble::maximally_mixed(2);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for gamma in [0.1, 0.25, 0.4] {
        let noise = n_fold(&amplitude_damping(gamma).unwrap(), 3).unwrap();
        let best = (0..20)
            .map(|_| {
                let u = random::isometry::<f64, _>(8, 2, &mut rng);
                iterate_encoding_recovery(&u, &noise, &ens, 15, 1e-7).unwrap().value()
            })
            .fold(f64::MIN, f64::max);
        assert!(best > baseline(gamma), "gamma = {gamma}: {best} vs {}", baseline(gamma));
    }
}

/// Every commuting, independent pair of signed 3-qubit Paulis.
fn three_qubit_codes() -> Vec<Vec<PauliOperator>> {
    let mut all = Vec::new();
    for a in 1u64..64 {
        for b in (a + 1)..64 {
            let (ga, gb) = (
                PauliOperator::new(3, a >> 3, a & 7, 0).unwrap(),
                PauliOperator::new(3, b >> 3, b & 7, 0).unwrap(),
            );
            if !ga.commutes(&gb) || a == b {
                continue;
            }
            for signs in 0..4u8 {
                let g1 = if signs & 1 == 1 { ga.negate() } else { ga.clone() };
                let g2 = if signs & 2 == 2 { gb.negate() } else { gb.clone() };
                all.push(vec![g1, g2]);
            }
        }
    }
    all
}

fn orthogonal(a: &Matrix64, b: &Matrix64) -> bool {
    a.adjoint().matmul(b).frobenius_norm() < 1e-9
}

#[test]
fn no_three_qubit_code_separates_all_single_dampings() {
    let mut checked = 0;
    for gens in three_qubit_codes() {
        // Skip pairs whose product is ±I or whose stabilized space is not 2-dimensional.
        let Ok(code) = stabilized_subspace::<f64>(&gens) else { continue };
        if code.cols() != 2 {
            continue;
        }
        checked += 1;
        let damped: Vec<_> = (0..3).map(|q| damped_subspace(&gens, q).unwrap()).collect();
        if damped.iter().any(|d| d.dimension != 2) {
            continue;
        }
        let bases: Vec<Matrix64> = damped.iter().map(|d| d.basis().unwrap()).collect();
        let separated = bases.iter().all(|b| orthogonal(b, &code))
            && orthogonal(&bases[0], &bases[1])
            && orthogonal(&bases[0], &bases[2])
            && orthogonal(&bases[1], &bases[2]);
        assert!(!separated, "{gens:?}");
    }
    assert!(checked > 100, "{checked}");
}

#[test]
fn solution_files_round_trip() {
    let data = ad_data(&leung_41(), 0.1);
    let sol = solve_optimal_recovery(&data, 1e-9).unwrap();
    let mut buf = Vec::new();
    write_solution(&sol, &mut buf).unwrap();
    assert_eq!(buf.len(), 8 + 16 + 16 * (32 * 32 + 16 * 16) + 32);
    let back = read_solution(buf.as_slice()).unwrap();
    assert_eq!(back.x.data(), sol.x.data());
    assert_eq!(back.y.data(), sol.y.data());
    assert_eq!(back.primal_value.to_bits(), sol.primal_value.to_bits());
    assert_eq!(back.gap.to_bits(), sol.gap.to_bits());
    assert_eq!((back.d_out, back.d_in, back.iterations), (2, 16, sol.iterations));

    let json = summary_json(&sol).unwrap();
    let summary: SolutionSummary = serde_json::from_str(&json).unwrap();
    assert_eq!(summary, SolutionSummary::of(&sol));

    buf[0] = b'X';
    assert!(matches!(read_solution(buf.as_slice()), Err(OptimalError::Format(_))));
    assert!(read_solution(&buf[..20]).is_err());

    let dir = std::env::temp_dir().join(format!("qer-optimal-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let stem = dir.join("leung");
    qer_optimal::io::save_solution(&sol, &stem).unwrap();
    let loaded = qer_optimal::io::load_solution(&stem.with_extension("bin")).unwrap();
    assert_eq!(loaded.x.data(), sol.x.data());
    std::fs::remove_dir_all(&dir).unwrap();
}

fn random_problem(seed: u64, d_c: usize, kraus: usize) -> (DataMatrix<f64>, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let channel = random::channel::<f64, _>(2, d_c, kraus, &mut rng);
    let ens = Ensemble::new(
        vec![random::density(2, 2, &mut rng), random::density(2, 1, &mut rng)],
        vec![0.6, 0.4],
    )
    .unwrap();
    (data_matrix(&ens, &channel).unwrap(), rng)
}

fn random_recovery(rng: &mut ChaCha8Rng, d_c: usize) -> RecoveryOperation<f64> {
    let k = rng.random_range(1..=2 * d_c);
    RecoveryOperation::new(random::channel::<f64, _>(d_c, 2, k, rng).into_kraus()).unwrap()
}

#[test]
fn optimum_dominates_random_recoveries() {
    let (data, mut rng) = random_problem(5, 2, 3);
    let sol = solve_optimal_recovery(&data, 1e-9).unwrap();
    let best = (0..100_000)
        .map(|_| random_recovery(&mut rng, 2).fidelity(&data))
        .fold(f64::MIN, f64::max);
    assert!(sol.primal_value >= best - 1e-6, "{} < {best}", sol.primal_value);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_instances_satisfy_optimality(seed in any::<u64>(), d_c in 2usize..5, kraus in 1usize..4) {
        let (data, mut rng) = random_problem(seed, d_c, kraus);
        let sol = solve_optimal_recovery(&data, 1e-9).unwrap();
        let report = verify_optimality(&sol.x, &sol.y, &data).unwrap();
        prop_assert!(report.passes(1e-6), "{:?}", report);
        prop_assert!(sol.gap >= -1e-7 && sol.gap <= 1e-6);
        let cert = DualCertificate::new(sol.y.clone(), &data).unwrap();
        prop_assert!(cert.is_valid());
        for _ in 0..200 {
            let rec = random_recovery(&mut rng, d_c);
            prop_assert!(rec.fidelity(&data) <= cert.bound + 1e-6);
        }
        let rec = recovery_from_choi(&sol.x, 2, d_c, 1e-10).unwrap();
        prop_assert!((rec.fidelity(&data) - sol.primal_value).abs() < 1e-8);
        let from_primal = dual_from_primal(&rec, &data).unwrap();
        prop_assert!(from_primal.feasibility_residual < 1e-6);
    }

    #[test]
    fn dual_bound_covers_every_recovery(seed in any::<u64>()) {
        let (data, mut rng) = random_problem(seed, 3, 2);
        let y = Matrix::identity(3).scale(qer_linalg::max_eigenvalue(data.matrix()).unwrap());
        let cert = DualCertificate::new(y, &data).unwrap();
        prop_assert!(cert.is_valid());
        let rec = random_recovery(&mut rng, 3);
        prop_assert!(rec.fidelity(&data) <= cert.bound + 1e-9);
        let weak = dual_from_primal(&rec, &data).unwrap();
        prop_assert!((weak.bound - rec.fidelity(&data)).abs() < 1e-9);
    }
}

#[test]
fn complex_kernel_is_handled() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let b = random::gaussian_matrix::<f64, _>(6, 4, &mut rng);
    let data = DataMatrix::from_factor(b.scale_c(c(0.0, 0.3)), 2, 3).unwrap();
    let sol = solve_optimal_recovery(&data, 1e-9).unwrap();
    let report = verify_optimality(&sol.x, &sol.y, &data).unwrap();
    assert!(report.passes(1e-6), "{report:?}");
    assert!(sol.x.data().iter().any(|z: &Complex<f64>| z.im.abs() > 1e-6));
}

use proptest::prelude::*;
use qer_channels::{amplitude_damping, apply_on_qubit, depolarizing, n_fold, pauli_channel};
use qer_linalg::{c, vec_norm, Complex, Matrix64, C64};
use qer_ops::{data_matrix, entanglement_fidelity, DensityMatrix, Ensemble, QuantumChannel, RecoveryOperation};
use qer_stabilizer::symplectic::in_span;
use qer_stabilizer::*;

fn p(s: &str) -> PauliOperator {
    PauliOperator::parse(s).unwrap()
}

fn strings(gens: &[PauliOperator]) -> Vec<String> {
    gens.iter().map(|g| g.to_string()).collect()
}

fn encoded(code: &StabilizerCode, noise: &QuantumChannel<f64>) -> QuantumChannel<f64> {
    let u = encoding_isometry::<f64>(code).unwrap();
    QuantumChannel::isometry(u).unwrap().then(noise).unwrap()
}

/// `F_e(I/d_S, R∘E∘U)` from the composite Kraus operators.
fn composite_fe(code: &StabilizerCode, noise: &QuantumChannel<f64>, rec: &RecoveryOperation<f64>) -> f64 {
    let full = encoded(code, noise).then(rec.channel()).unwrap();
    entanglement_fidelity(&DensityMatrix::maximally_mixed(code.d_s()), &full).unwrap()
}

/// Output of the recovery on a pure damaged state.
fn recover(rec: &RecoveryOperation<f64>, psi: &Matrix64) -> Matrix64 {
    let n = vec_norm(psi.data());
    let psi = psi.scale(1.0 / n);
    let mut out = Matrix64::zeros(rec.d_s(), rec.d_s());
    for r in rec.kraus() {
        let v = r.matmul(&psi);
        out = &out + &v.matmul(&v.adjoint());
    }
    out
}

fn dense_commutator_vanishes(a: &PauliOperator, b: &PauliOperator) -> bool {
    let (ma, mb) = (a.to_matrix::<f64>(), b.to_matrix::<f64>());
    ma.matmul(&mb).distance(&mb.matmul(&ma)) < 1e-12
}

#[test]
fn single_qubit_products_track_phase() {
    assert_eq!(p("X") * p("Z"), p("-iY"));
    assert_eq!(p("Z") * p("X"), p("iY"));
    assert_eq!(p("Y") * p("Y"), p("I"));
    let dense = p("X").to_matrix::<f64>().matmul(&p("Z").to_matrix());
    assert!(dense.distance(&p("-iY").to_matrix()) < 1e-15);
}

#[test]
fn weight_parse_and_display() {
    assert_eq!(p("ZZIIII").weight(), 2);
    assert_eq!(p("-ZZII").to_string(), "-ZZII");
    assert!(PauliOperator::parse("XQ").is_err());
    assert!(PauliOperator::parse("").is_err());
}

#[test]
fn five_qubit_generators_commute_by_dense_oracle() {
    let (a, b) = (p("XZZXI"), p("ZXIXZ"));
    assert_eq!(a.commutes(&b), dense_commutator_vanishes(&a, &b));
    assert!(a.commutes(&b));
    assert!(!p("XIIII").commutes(&p("ZXIXZ")));
}

#[test]
fn library_tables() {
    let five = code_library("five_qubit").unwrap();
    assert_eq!(strings(five.generators()), ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]);
    assert_eq!(strings(five.logical_x()), ["XXXXX"]);
    assert_eq!(strings(five.logical_z()), ["ZZZZZ"]);
    assert_eq!(steane().generators().len(), 6);
    let l = leung_41();
    assert_eq!(strings(l.generators()), ["XXXX", "ZZII", "IIZZ"]);
    assert_eq!(strings(l.logical_x()), ["XXII"]);
    assert_eq!(strings(l.logical_z()), ["ZIZI"]);
    let g = gottesman_83();
    assert_eq!((g.n(), g.k()), (8, 3));
    assert!(matches!(code_library("toric"), Err(StabilizerError::UnknownCode(_))));
}

#[test]
fn generalized_adc_tables() {
    let c2 = generalized_adc_code(2).unwrap();
    assert_eq!(strings(c2.generators()), ["XXXXXX", "ZZIIII", "IIZIIZ", "IIIZZI"]);
    let c3 = generalized_adc_code(3).unwrap();
    assert_eq!(strings(c3.generators()), ["XXXXXXXX", "ZZIIIIII", "IIZIIIIZ", "IIIZIIZI", "IIIIZZII"]);
    assert!(generalized_adc_code(0).is_err());
}

#[test]
fn m1_family_member_is_the_four_qubit_code() {
    let a = generalized_adc_code(1).unwrap();
    let l = leung_41();
    assert_eq!(a.generators(), l.generators());
    let gens: Vec<u128> = l.generators().iter().map(PauliOperator::symplectic).collect();
    for (x, y) in a.logical_x().iter().zip(l.logical_x()).chain(a.logical_z().iter().zip(l.logical_z())) {
        assert!(in_span((*x * *y).symplectic(), &gens));
    }
}

#[test]
fn hamming_linear_code() {
    let code = linear_adc_code(&hamming_7_4()).unwrap();
    assert_eq!(strings(code.generators()), ["IIIZZZZ", "IZZIIZZ", "ZIZIZIZ", "XXXXXXX"]);
    assert_eq!(code.k(), 3);
    assert!(linear_adc_code(&[vec![1, 1]]).is_err());
    assert!(linear_adc_code(&[vec![1, 1, 1, 0]]).is_err());
}

#[test]
fn encoding_isometries_are_stabilized() {
    for name in LIBRARY_CODES {
        let code = code_library(name).unwrap();
        let u = encoding_isometry::<f64>(&code).unwrap();
        assert!(u.adjoint().matmul(&u).distance(&Matrix64::identity(code.d_s())) < 1e-10, "{name}");
        for g in code.generators() {
            assert!(g.apply(&u).distance(&u) < 1e-10, "{name}: {g}");
        }
        for (j, z) in code.logical_z().iter().enumerate() {
            let zu = z.apply(&u);
            for m in 0..code.d_s() {
                let sign = if m >> (code.k() - 1 - j) & 1 == 1 { -1.0 } else { 1.0 };
                let col = Matrix64::from_fn(u.rows(), 1, |i, _| zu[(i, m)] - u[(i, m)] * sign);
                assert!(col.frobenius_norm() < 1e-10);
            }
        }
    }
}

#[test]
fn four_qubit_and_six_qubit_codewords() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let u = encoding_isometry::<f64>(&leung_41()).unwrap();
    for r in 0..16 {
        let want = if r == 0 || r == 15 { h } else { 0.0 };
        assert!((u[(r, 0)] - c(want, 0.0)).norm() < 1e-12);
        let want1 = if r == 0b0011 || r == 0b1100 { h } else { 0.0 };
        assert!((u[(r, 1)] - c(want1, 0.0)).norm() < 1e-12);
    }
    let u6 = encoding_isometry::<f64>(&generalized_adc_code(2).unwrap()).unwrap();
    assert!((u6[(0, 0)] - c(h, 0.0)).norm() < 1e-12);
    assert!((u6[(63, 0)] - c(h, 0.0)).norm() < 1e-12);
}

#[test]
fn syndromes() {
    let five = five_qubit();
    assert_eq!(code_syndrome(&five, "IIIII"), [false; 4]);
    let x1 = p("XIIII");
    let oracle: Vec<bool> = five.generators().iter().map(|g| !dense_commutator_vanishes(g, &x1)).collect();
    assert_eq!(pauli_syndrome(&five, &x1), oracle);
    assert_eq!(oracle, [false, false, false, true]);
    let s = shor();
    let z1 = s.syndrome_index(&p("ZIIIIIIII"));
    assert_eq!(z1, s.syndrome_index(&p("IZIIIIIII")));
    assert_eq!(z1, s.syndrome_index(&p("IIZIIIIII")));
    assert_ne!(z1, 0);
}

fn code_syndrome(code: &StabilizerCode, e: &str) -> Vec<bool> {
    pauli_syndrome(code, &p(e))
}

#[test]
fn syndrome_partitions_are_complete() {
    for code in [five_qubit(), steane(), leung_41()] {
        let part = syndrome_partition::<f64>(&code).unwrap();
        assert_eq!(part.len(), code.num_syndromes());
        let checked = SyndromePartition::new(part.bases().to_vec(), part.labels().to_vec());
        assert!(checked.is_ok(), "{}", code.name);
        assert!((0..part.len()).all(|q| part.rank(q) == code.d_s()));
    }
}

fn corrects_every_single_pauli(code: &StabilizerCode) {
    let rec = generic_qec_recovery::<f64>(code).unwrap();
    let u = encoding_isometry::<f64>(code).unwrap();
    let d = code.d_s() as f64;
    for e in PauliOperator::all_of_weight(code.n(), 1) {
        let eu = e.apply(&u);
        let f: f64 = rec.kraus().iter().map(|r| (r.matmul(&eu).trace() / d).norm_sqr()).sum();
        assert!((f - 1.0).abs() < 1e-10, "{}: {e} gives {f}", code.name);
    }
}

#[test]
fn generic_recovery_corrects_single_paulis() {
    corrects_every_single_pauli(&five_qubit());
    corrects_every_single_pauli(&steane());
    corrects_every_single_pauli(&shor());
}

#[test]
fn generic_recovery_restores_a_random_codeword() {
    let code = five_qubit();
    let rec = generic_qec_recovery::<f64>(&code).unwrap();
    let u = encoding_isometry::<f64>(&code).unwrap();
    let psi = Matrix64::column_vector(&[c(0.6, 0.1), c(-0.2, 0.76)]);
    let psi = psi.scale(1.0 / psi.frobenius_norm());
    let damaged = p("IIXII").apply(&u.matmul(&psi));
    let out = recover(&rec, &damaged);
    let f = out.quadratic_form(psi.data()).re;
    assert!((f - 1.0).abs() < 1e-10);
}

#[test]
fn shor_degenerate_errors_recover_identically() {
    let code = shor();
    let rec = generic_qec_recovery::<f64>(&code).unwrap();
    let u = encoding_isometry::<f64>(&code).unwrap();
    let psi = Matrix64::column_vector(&[c(0.8, 0.0), c(0.0, 0.6)]);
    let a = recover(&rec, &p("ZIIIIIIII").apply(&u.matmul(&psi)));
    let b = recover(&rec, &p("IZIIIIIII").apply(&u.matmul(&psi)));
    assert!(a.distance(&b) < 1e-10);
    assert!((a.quadratic_form(psi.data()).re - 1.0).abs() < 1e-10);
}

#[test]
fn ml_matches_generic_for_depolarizing_noise() {
    let code = five_qubit();
    let noise = n_fold(&depolarizing(0.01).unwrap(), 5).unwrap();
    let ml = ml_pauli_recovery(&code, &noise).unwrap();
    assert!(ml.chosen.iter().all(|&p| p == 0));
    let generic = generic_qec_recovery::<f64>(&code).unwrap();
    for (a, b) in ml.recovery.kraus().iter().zip(generic.kraus()) {
        assert!(a.distance(b) < 1e-12);
    }
    let data = data_matrix(&Ensemble::maximally_mixed(2), &encoded(&code, &noise)).unwrap();
    let two_path = data.kraus_fidelity(ml.recovery.kraus());
    assert!((two_path - ml.fidelity).abs() < 1e-9, "{two_path} vs {}", ml.fidelity);
    let direct = composite_fe(&code, &noise, &ml.recovery);
    assert!((direct - ml.fidelity).abs() < 1e-9);
}

/// Probability of an unsigned Pauli under the independent biased channel.
fn biased_probability(e: &PauliOperator, px: f64, pz: f64) -> f64 {
    (0..e.n())
        .map(|q| match e.label(q) {
            'I' => (1.0 - px) * (1.0 - pz),
            'X' => px * (1.0 - pz),
            'Z' => pz * (1.0 - px),
            _ => px * pz,
        })
        .product()
}

#[test]
fn ml_prefers_likely_cosets_for_biased_noise() {
    let (px, pz) = (0.01, 0.2);
    let single = pauli_channel(&[
        ("I".to_string(), (1.0 - px) * (1.0 - pz)),
        ("X".to_string(), px * (1.0 - pz)),
        ("Z".to_string(), pz * (1.0 - px)),
        ("Y".to_string(), px * pz),
    ])
    .unwrap();
    let code = five_qubit();
    let ml = ml_pauli_recovery(&code, &n_fold(&single, 5).unwrap()).unwrap();

    // Independent enumeration over all 4^5 Paulis: coset of each error relative to the chosen correction.
    let mut best = vec![0.0f64; code.num_syndromes()];
    let mut coset = vec![vec![0.0f64; 4]; code.num_syndromes()];
    for bits in 0u64..(1 << 10) {
        let e = PauliOperator::new(5, bits >> 5, bits & 31, 0).unwrap();
        let q = code.syndrome_index(&e);
        let rel = ml.representatives[q] * e;
        coset[q][code.logical_class(&rel)] += biased_probability(&e, px, pz);
    }
    for q in 0..code.num_syndromes() {
        best[q] = coset[q].iter().cloned().fold(0.0, f64::max);
        assert!((best[q] - ml.weights[q][ml.chosen[q]]).abs() < 1e-12);
    }
    let total: f64 = best.iter().sum();
    assert!((total - ml.fidelity).abs() < 1e-12);
    let flipped: Vec<usize> = (0..best.len()).filter(|&q| ml.chosen[q] != 0).collect();
    assert!(!flipped.is_empty());
    let q = flipped[0];
    let chosen_op = ml.representatives[q] * code.logical_operator(ml.chosen[q]);
    let zz_type_more_likely = PauliOperator::all_of_weight(5, 2).into_iter().any(|e| {
        e.x_bits() == 0
            && code.syndrome_index(&e) == q
            && code.logical_class(&(chosen_op * e)) == 0
            && biased_probability(&e, px, pz) > biased_probability(&ml.representatives[q], px, pz)
    });
    assert!(zz_type_more_likely, "syndrome {q} picks {chosen_op}");
}

#[test]
fn ml_rejects_non_pauli_channels() {
    let noise = n_fold(&amplitude_damping(0.1).unwrap(), 5).unwrap();
    assert!(matches!(ml_pauli_recovery(&five_qubit(), &noise), Err(StabilizerError::NotPauli(_))));
}

#[test]
fn damped_subspaces_of_the_four_qubit_code() {
    let l = leung_41();
    let d1 = damped_subspace(l.generators(), 0).unwrap();
    assert_eq!(strings(&d1.generators), ["-ZZII", "IIZZ", "ZIII"]);
    assert_eq!(d1.dimension, 2);
    let d3 = damped_subspace(l.generators(), 2).unwrap();
    assert_eq!(strings(&d3.generators), ["ZZII", "-IIZZ", "IIZI"]);
    let both = damp_qubits(l.generators(), &[0, 2]).unwrap();
    assert_eq!(both.generators.len(), 4);
    assert!(both.is_one_dimensional());
    assert!(damp_qubits(l.generators(), &[0, 0]).unwrap().is_empty());
}

#[test]
fn damped_subspace_of_the_six_qubit_code() {
    let c2 = generalized_adc_code(2).unwrap();
    let d = damp_qubits(c2.generators(), &[0, 4]).unwrap();
    assert_eq!(strings(&d.generators), ["-ZZIIII", "IIZIIZ", "-IIIZZI", "ZIIIII", "IIIIZI"]);
    assert_eq!(d.dimension, 2);
}

#[test]
fn damped_subspace_matches_the_damaged_code_space() {
    let l = leung_41();
    let u = encoding_isometry::<f64>(&l).unwrap();
    let e = damping_operator(1.0);
    for q in 0..4 {
        let damaged = apply_on_qubit(&e, q, 4, &u);
        let basis = damped_subspace(l.generators(), q).unwrap().basis::<f64>().unwrap();
        let proj = basis.matmul(&basis.adjoint());
        assert!(proj.matmul(&damaged).distance(&damaged) < 1e-10);
    }
}

#[test]
fn single_damping_subspaces_are_orthogonal() {
    for m in 1..=3 {
        let code = generalized_adc_code(m).unwrap();
        let mut spaces = vec![encoding_isometry::<f64>(&code).unwrap()];
        for q in 0..code.n() {
            spaces.push(damped_subspace(code.generators(), q).unwrap().basis().unwrap());
        }
        for i in 0..spaces.len() {
            for j in i + 1..spaces.len() {
                assert!(spaces[i].adjoint().matmul(&spaces[j]).max_abs() < 1e-9, "M={m}: {i} vs {j}");
            }
        }
    }
}

#[test]
fn correctability_examples() {
    let u = encoding_isometry::<f64>(&leung_41()).unwrap();
    let id = check_correctability(&u, &[Matrix64::identity(16)]).unwrap();
    assert!(id.satisfied);
    assert!((id.alpha[(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
    let singles = check_correctability_images(&damping_error_images(&u, 4, 0.25, 1)).unwrap();
    assert!(singles.satisfied, "{}", singles.residual);
    let xs = [p("XIII").to_matrix(), p("IXII").to_matrix()];
    assert!(!check_correctability(&u, &xs).unwrap().satisfied);
}

#[test]
fn damping_correctability_for_adapted_codes() {
    for m in 1..=3 {
        let code = generalized_adc_code(m).unwrap();
        let u = encoding_isometry::<f64>(&code).unwrap();
        let r = check_correctability_images(&damping_error_images(&u, code.n(), 0.25, 1)).unwrap();
        assert!(r.satisfied, "M={m}: {}", r.residual);
    }
    let code = linear_adc_code(&hamming_7_4()).unwrap();
    let u = encoding_isometry::<f64>(&code).unwrap();
    assert!(check_correctability_images(&damping_error_images(&u, 7, 0.25, 1)).unwrap().satisfied);
    let s = shor();
    let u = encoding_isometry::<f64>(&s).unwrap();
    let r = check_correctability_images(&damping_error_images(&u, 9, 0.2, 2)).unwrap();
    assert!(r.satisfied, "{}", r.residual);
}

#[test]
fn family_recovery_fixes_single_dampings_exactly() {
    let code = generalized_adc_code(1).unwrap();
    let rec = adc_family_recovery::<f64>(&code).unwrap();
    assert!(rec.channel().is_cptp(1e-9));
    let u = encoding_isometry::<f64>(&code).unwrap();
    let plus = Matrix64::column_vector(&[c(1.0, 0.0), c(1.0, 0.0)]).scale(std::f64::consts::FRAC_1_SQRT_2);
    let target = plus.matmul(&plus.adjoint());
    for q in 0..4 {
        let damaged = apply_on_qubit(&damping_operator(0.3), q, 4, &u.matmul(&plus));
        assert!(recover(&rec, &damaged).distance(&target) < 1e-10, "qubit {q}");
    }
}

#[test]
fn family_recovery_single_dampings_for_larger_codes() {
    for m in 2..=3 {
        let code = generalized_adc_code(m).unwrap();
        let rec = adc_family_recovery::<f64>(&code).unwrap();
        assert!(rec.channel().is_cptp(1e-9));
        let u = encoding_isometry::<f64>(&code).unwrap();
        let d = code.d_s() as f64;
        for q in 0..code.n() {
            let img = apply_on_qubit(&damping_operator(1.0), q, code.n(), &u).scale(2f64.sqrt());
            let f: f64 = rec.kraus().iter().map(|r| (r.matmul(&img).trace() / d).norm_sqr()).sum();
            assert!((f - 1.0).abs() < 1e-10, "M={m}, qubit {q}: {f}");
        }
    }
}

#[test]
fn family_recovery_double_damping_keeps_two_logical_states() {
    let code = generalized_adc_code(2).unwrap();
    let rec = adc_family_recovery::<f64>(&code).unwrap();
    let u = encoding_isometry::<f64>(&code).unwrap();
    let e = damping_operator(1.0);
    let mut survivors = 0;
    for m in 0..4 {
        let col = Matrix64::from_fn(64, 1, |i, _| u[(i, m)]);
        let damaged = apply_on_qubit(&e, 4, 6, &apply_on_qubit(&e, 0, 6, &col));
        if damaged.frobenius_norm() < 1e-12 {
            continue;
        }
        survivors += 1;
        let out = recover(&rec, &damaged);
        assert!((out[(m, m)].re - 1.0).abs() < 1e-10, "logical {m}");
    }
    assert_eq!(survivors, 2);
}

#[test]
fn family_recovery_beats_an_unprotected_qubit() {
    let code = generalized_adc_code(1).unwrap();
    let rec = adc_family_recovery::<f64>(&code).unwrap();
    for gamma in [0.05, 0.1, 0.2, 0.3] {
        let noise = n_fold(&amplitude_damping(gamma).unwrap(), 4).unwrap();
        let f = composite_fe(&code, &noise, &rec);
        let baseline = ((1.0 + (1.0f64 - gamma).sqrt()) / 2.0).powi(2);
        assert!(f > baseline, "γ={gamma}: {f} ≤ {baseline}");
    }
}

#[test]
fn leung_recovery_is_cptp_and_exact_without_noise() {
    let code = leung_41();
    for gamma in [0.0, 0.1, 0.4] {
        let rec = leung_recovery(gamma).unwrap();
        assert_eq!(rec.kraus().len(), 12);
        assert!(rec.channel().is_cptp(1e-8));
    }
    let f = composite_fe(&code, &QuantumChannel::identity(16), &leung_recovery(0.0).unwrap());
    assert!((f - 1.0).abs() < 1e-9);
    assert!(leung_recovery(1.0).is_err());
}

#[test]
fn leung_recovery_small_noise_behaviour() {
    let code = leung_41();
    let gamma = 1e-3;
    let noise = n_fold(&amplitude_damping(gamma).unwrap(), 4).unwrap();
    let rec = leung_recovery(gamma).unwrap();
    let rho = encoded(&code, &noise).apply_operator(&Matrix64::identity(2).scale(0.5)).unwrap();
    let w00: f64 = rec.kraus()[..2].iter().map(|r| r.matmul(&rho).matmul(&r.adjoint()).trace().re).sum();
    assert!(w00 > 0.99);
    let gamma = 0.01;
    let noise = n_fold(&amplitude_damping(gamma).unwrap(), 4).unwrap();
    let f = composite_fe(&code, &noise, &leung_recovery(gamma).unwrap());
    let c2 = (f - 1.0) / (gamma * gamma);
    assert!((c2 + 2.75).abs() < 0.3, "c2 = {c2}");
}

#[test]
fn pauli_decomposition_recovers_amplitudes() {
    let k = p("XZY").to_matrix::<f64>().scale_c(c(0.0, 0.3));
    let terms = pauli_decomposition(&[k, Matrix64::zeros(8, 8)]).unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0].pauli, p("XZY"));
    assert!((terms[0].amplitude - c(0.0, 0.3)).norm() < 1e-14);
    let mut bad = p("XI").to_matrix::<f64>();
    bad[(0, 0)] = C64::new(0.1, 0.0);
    assert!(pauli_decomposition(&[bad]).is_err());
}

fn arb_pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
    let m = (1u64 << n) - 1;
    (0..=m, 0..=m, 0u8..4).prop_map(move |(x, z, ph)| PauliOperator::new(n, x, z, ph).unwrap())
}

proptest! {
    #[test]
    fn products_match_dense_multiplication((a, b) in (1usize..=4).prop_flat_map(|n| (arb_pauli(n), arb_pauli(n)))) {
        let dense = a.to_matrix::<f64>().matmul(&b.to_matrix());
        prop_assert!((a * b).to_matrix::<f64>().distance(&dense) < 1e-12);
        prop_assert_eq!(a.commutes(&b), dense_commutator_vanishes(&a, &b));
        prop_assert_eq!(a.weight(), (0..a.n()).filter(|&q| a.label(q) != 'I').count());
    }

    #[test]
    fn syndrome_bits_follow_anticommutation(bits in 0u64..1024) {
        let code = five_qubit();
        let e = PauliOperator::new(5, bits >> 5, bits & 31, 0).unwrap();
        let idx = code.syndrome_index(&e);
        for (i, g) in code.generators().iter().enumerate() {
            let bit = idx >> (3 - i) & 1 == 1;
            prop_assert_eq!(bit, !dense_commutator_vanishes(g, &e));
        }
    }

    #[test]
    fn apply_matches_dense_action(x in 0u64..8, z in 0u64..8, ph in 0u8..4, re in -1.0f64..1.0, im in -1.0f64..1.0) {
        let e = PauliOperator::new(3, x, z, ph).unwrap();
        let v = Matrix64::from_fn(8, 2, |i, j| Complex::new(re + i as f64, im - j as f64));
        prop_assert!(e.apply(&v).distance(&e.to_matrix::<f64>().matmul(&v)) < 1e-12);
    }
}

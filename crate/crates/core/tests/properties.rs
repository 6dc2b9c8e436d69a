// Copyright 2026 The fockgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::sync::Arc;

use fockgate_core::gate::{qubit_registry, PORT1, PORT2};
use fockgate_core::optics::ElementSpec;
use fockgate_core::permanent::permanent_by_permutations;
use fockgate_core::random::{
    haar_unitary, random_amplitudes, random_fock_state, random_product_amplitudes,
};
use fockgate_core::{
    beam_splitter_matrix, evolve, oracle_evolve, permanent, postselect, BasisInput, Circuit,
    Complex64, FockBasisState, GateConfig, ModeRegistry, PhaseGateLab, PostSelectionRule,
    PureState, QubitEncoding,
};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn registry(n: usize) -> Arc<ModeRegistry> {
    Arc::new(ModeRegistry::new((0..n).map(|i| format!("m{i}"))).unwrap())
}

#[test]
fn oracle_matches_permanent_evolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF0C);
    for _ in 0..200 {
        let modes = rng.random_range(1..=6);
        let photons = rng.random_range(0..=3);
        let reg = registry(modes);
        let u = haar_unitary(modes, &mut rng);
        let psi = random_fock_state(reg, photons, 3, &mut rng).unwrap();
        let a = evolve(&psi, &u).unwrap();
        let b = oracle_evolve(&psi, &u).unwrap();
        assert!(a.max_deviation(&b).unwrap() < 1e-10);
    }
}

#[test]
fn evolution_conserves_norm_and_photon_number() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let modes = rng.random_range(2..=6);
        let photons = rng.random_range(1..=3);
        let u = haar_unitary(modes, &mut rng);
        let psi = random_fock_state(registry(modes), photons, 4, &mut rng).unwrap();
        let out = evolve(&psi, &u).unwrap();
        assert!((out.norm_squared() - psi.norm_squared()).abs() < 1e-12);
        assert_eq!(out.photon_number(), Some(photons));
    }
}

#[test]
fn evolution_is_a_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let modes = rng.random_range(2..=5);
        let u = haar_unitary(modes, &mut rng);
        let v = haar_unitary(modes, &mut rng);
        let uv = v.then(&u).unwrap();
        let psi = random_fock_state(registry(modes), 2, 3, &mut rng).unwrap();
        let direct = evolve(&psi, &uv).unwrap();
        let stepwise = evolve(&evolve(&psi, &v).unwrap(), &u).unwrap();
        assert!(direct.max_deviation(&stepwise).unwrap() < 1e-10);
    }
}

#[test]
fn random_circuits_stay_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let reg = registry(5);
    for _ in 0..50 {
        let mut c = Circuit::new(reg.clone());
        for _ in 0..rng.random_range(0..30) {
            let a = rng.random_range(0..5);
            let b = (a + rng.random_range(1..5)) % 5;
            let (la, lb) = (format!("m{a}"), format!("m{b}"));
            if rng.random_bool(0.5) {
                c.push(ElementSpec::beam_splitter(rng.random(), &la, &lb));
            } else {
                c.push(ElementSpec::phase_shift(&la, rng.random_range(-3.2..3.2)));
            }
        }
        assert!(c.compose().unwrap().deviation_from_unitarity() < 1e-10);
    }
}

#[test]
fn ryser_agrees_with_permutation_sum_up_to_six() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for n in 0..=6 {
        for _ in 0..10 {
            let m = DMatrix::from_fn(n, n, |_, _| {
                Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
            });
            let diff = permanent(&m).unwrap() - permanent_by_permutations(&m).unwrap();
            assert!(diff.norm() < 1e-10);
        }
    }
}

#[test]
fn single_photon_lines_for_random_reflectivities() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let reg = registry(2);
    for _ in 0..10 {
        let r: f64 = rng.random();
        let u = beam_splitter_matrix(r).unwrap();
        let t = Complex64::new(0.0, -(1.0 - r).sqrt());
        let s = Complex64::new(r.sqrt(), 0.0);
        let up = evolve(&PureState::basis(reg.clone(), &[0, 1]).unwrap(), &u).unwrap();
        assert!((up.amplitude(&FockBasisState::new(vec![0, 1])) - s).norm() < 1e-12);
        assert!((up.amplitude(&FockBasisState::new(vec![1, 0])) - t).norm() < 1e-12);
        let lo = evolve(&PureState::basis(reg.clone(), &[1, 0]).unwrap(), &u).unwrap();
        assert!((lo.amplitude(&FockBasisState::new(vec![1, 0])) - s).norm() < 1e-12);
        assert!((lo.amplitude(&FockBasisState::new(vec![0, 1])) - t).norm() < 1e-12);
    }
}

#[test]
fn attenuator_on_fresh_vacuum_scales_signal() {
    let reg = Arc::new(ModeRegistry::new(["sig", "loss"]).unwrap());
    let u = Circuit::new(reg.clone())
        .with(ElementSpec::attenuator(1.0 / 3.0, "sig", "loss"))
        .compose()
        .unwrap();
    let out = evolve(&PureState::basis(reg, &[1, 0]).unwrap(), &u).unwrap();
    let kept = out.amplitude(&FockBasisState::new(vec![1, 0]));
    assert!((kept - Complex64::new((1.0f64 / 3.0).sqrt(), 0.0)).norm() < 1e-12);
}

#[test]
fn gate_budgets_complete_and_efficiency_uniform() {
    let lab = PhaseGateLab::default();
    let q = Arc::new(qubit_registry());
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for input in BasisInput::ALL {
        assert!((lab.error_budget(input).unwrap().total() - 1.0).abs() < 1e-12);
    }
    for _ in 0..100 {
        let amps = random_product_amplitudes(&mut rng);
        let psi = QubitEncoding::PhaseGate.encode_amplitudes(q.clone(), &amps).unwrap();
        let b = lab.error_budget_for(&psi).unwrap();
        assert!((b.total() - 1.0).abs() < 1e-12);
        assert!((b.success - 1.0 / 9.0).abs() < 1e-12);
    }
    for enc in [QubitEncoding::PhaseGate, QubitEncoding::Cnot] {
        for _ in 0..20 {
            let amps: [Complex64; 4] = random_amplitudes(&mut rng);
            let psi = enc.encode_amplitudes(q.clone(), &amps).unwrap();
            let raw = lab.run_gate(&psi).unwrap();
            let p = postselect(&raw, &PostSelectionRule::full()).unwrap().probability;
            assert!((p - 1.0 / 9.0).abs() < 1e-12);
        }
    }
}

#[test]
fn postselected_action_is_linear() {
    let lab = PhaseGateLab::default();
    let reg = lab.registry().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let diag = [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, -1.0 / 3.0];
    for _ in 0..30 {
        let amps: [Complex64; 4] = random_amplitudes(&mut rng);
        let psi = QubitEncoding::PhaseGate.encode_amplitudes(reg.clone(), &amps).unwrap();
        let raw = lab.run_gate(&psi).unwrap();
        let projected = postselect(&raw, &PostSelectionRule::full()).unwrap().projected;
        let expected: [Complex64; 4] = std::array::from_fn(|k| amps[k] * diag[k]);
        let expected = QubitEncoding::PhaseGate.encode_amplitudes(reg.clone(), &expected).unwrap();
        assert!(projected.max_deviation(&expected).unwrap() < 1e-12);
    }
}

#[test]
fn rescaled_truth_table_is_unitary() {
    let lab = PhaseGateLab::default();
    for enc in [QubitEncoding::PhaseGate, QubitEncoding::Cnot] {
        let t = lab.truth_table(enc).unwrap().table_matrix() * Complex64::new(3.0, 0.0);
        let gram = t.adjoint() * &t;
        assert!((gram - DMatrix::identity(4, 4)).norm() < 1e-12);
    }
}

#[test]
fn efficiency_is_unbalanced_away_from_a_third() {
    for r in [0.05, 0.2, 0.3, 0.34, 0.4, 0.45] {
        let lab = PhaseGateLab::new(GateConfig::uniform(r)).unwrap();
        let p = lab.truth_table(QubitEncoding::PhaseGate).unwrap().success_probabilities;
        let spread = p.iter().cloned().fold(f64::MIN, f64::max) - p.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread > 1e-6, "R={r}: {p:?}");
    }
}

#[test]
fn practical_rule_matches_full_on_product_inputs() {
    let lab = PhaseGateLab::default();
    let q = Arc::new(qubit_registry());
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let inputs: Vec<PureState> = (0..50)
        .map(|_| {
            let amps = random_product_amplitudes(&mut rng);
            QubitEncoding::PhaseGate.encode_amplitudes(q.clone(), &amps).unwrap()
        })
        .collect();
    let report = lab.rule_equivalence(&inputs).unwrap();
    assert!(report.holds());
    assert!(report.checks.iter().all(|c| c.in_contract));
}

#[test]
fn port_constants_match_registry() {
    let reg = ModeRegistry::gate_modes();
    for l in PORT1.iter().chain(PORT2.iter()) {
        assert!(reg.find(l).is_some());
    }
}

fn small_state() -> impl Strategy<Value = Vec<(u32, f64, f64)>> {
    prop::collection::vec((0u32..3, -1.0f64..1.0, -1.0f64..1.0), 1..4)
}

fn build(labels: [&str; 2], spec: &[(u32, f64, f64)]) -> PureState {
    let reg = Arc::new(ModeRegistry::new(labels).unwrap());
    let terms = spec
        .iter()
        .map(|&(n, re, im)| (FockBasisState::new(vec![n, 2 - n.min(2)]), Complex64::new(re, im)));
    PureState::from_terms(reg, terms).unwrap()
}

proptest! {
    #[test]
    fn tensor_norms_multiply_and_associate(a in small_state(), b in small_state(), c in small_state()) {
        let (x, y, z) = (build(["a0", "a1"], &a), build(["b0", "b1"], &b), build(["c0", "c1"], &c));
        let left = x.tensor(&y).unwrap().tensor(&z).unwrap();
        let right = x.tensor(&y.tensor(&z).unwrap()).unwrap();
        prop_assert!(left.max_deviation(&right).unwrap() < 1e-12);
        let expected = x.norm_squared() * y.norm_squared() * z.norm_squared();
        prop_assert!((left.norm_squared() - expected).abs() < 1e-12 * expected.max(1.0));
    }

    #[test]
    fn normalize_round_trip(a in small_state()) {
        let s = build(["a0", "a1"], &a);
        prop_assume!(s.norm_squared() > 1e-6);
        let (n, p) = s.normalize().unwrap();
        prop_assert!((n.norm_squared() - 1.0).abs() < 1e-12);
        prop_assert!((p - s.norm_squared()).abs() < 1e-15);
    }

    #[test]
    fn diagonal_amplitudes_follow_reflectivity(r in 0.0f64..=1.0) {
        let rows = fockgate_core::reflectivity_scan(&[r]).unwrap();
        let row = rows[0];
        prop_assert!((row.vacuum - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        prop_assert!((row.upper - Complex64::new(r.sqrt(), 0.0)).norm() < 1e-12);
        prop_assert!((row.lower - Complex64::new(r.sqrt(), 0.0)).norm() < 1e-12);
        prop_assert!((row.pair - Complex64::new(2.0 * r - 1.0, 0.0)).norm() < 1e-12);
    }
}

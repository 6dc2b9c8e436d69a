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

//! Invariant checks run by `fockgate verify`.
//!
//! Randomized checks draw from a ChaCha8 stream seeded by the config, so a
//! given seed always reproduces the same instances and the same report.

use std::sync::Arc;

use anyhow::Result;
use fockgate_core::gate::qubit_registry;
use fockgate_core::permanent::permanent_by_permutations;
use fockgate_core::random::{
    haar_unitary, random_amplitudes, random_fock_state, random_product_amplitudes,
};
use fockgate_core::{
    beam_splitter_matrix, evolve, fidelity, oracle_evolve, permanent, postselect, BasisInput,
    Complex64, DMatrix, FockBasisState, GateConfig, ModeRegistry, PhaseGateLab, PostSelectionRule,
    PureState, QubitEncoding, EPS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::ScenarioConfig;

pub const ORACLE_INSTANCES: usize = 200;
pub const UNITARY_INSTANCES: usize = 100;
pub const PRODUCT_INSTANCES: usize = 100;
pub const RULE_INSTANCES: usize = 50;
pub const PROPERTY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, worst: f64, tol: f64) -> CheckResult {
    CheckResult {
        name,
        passed: worst <= tol,
        detail: format!("max deviation {worst:.2e} (tolerance {tol:.0e})"),
    }
}

fn registry(modes: usize) -> Arc<ModeRegistry> {
    Arc::new(ModeRegistry::new((0..modes).map(|i| format!("m{i}"))).expect("unique labels"))
}

/// Runs every check against the gate at `config.reflectivity`.
pub fn run_checks(config: &ScenarioConfig) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let r = config.reflectivity;
    let lab = PhaseGateLab::new(GateConfig::uniform(r))?;
    let mut out = Vec::new();

    out.push(check(
        "gate unitarity",
        lab.unitary().deviation_from_unitarity(),
        PROPERTY_TOL,
    ));
    out.push(check("beam splitter Fock map", beam_splitter_worst(r)?, EPS));

    let mut worst = 0.0f64;
    for _ in 0..ORACLE_INSTANCES {
        let modes = rng.random_range(1..=6);
        let photons = rng.random_range(0..=3);
        let u = haar_unitary(modes, &mut rng);
        let psi = random_fock_state(registry(modes), photons, 3, &mut rng)?;
        worst = worst.max(evolve(&psi, &u)?.max_deviation(&oracle_evolve(&psi, &u)?)?);
    }
    out.push(check("oracle equivalence", worst, PROPERTY_TOL));

    let (mut norm_worst, mut hom_worst) = (0.0f64, 0.0f64);
    for _ in 0..UNITARY_INSTANCES {
        let modes = rng.random_range(2..=6);
        let u = haar_unitary(modes, &mut rng);
        let v = haar_unitary(modes, &mut rng);
        let psi = random_fock_state(registry(modes), rng.random_range(1..=3), 3, &mut rng)?;
        let once = evolve(&psi, &u)?;
        norm_worst = norm_worst.max((once.norm_squared() - psi.norm_squared()).abs());
        let direct = evolve(&psi, &v.then(&u)?)?;
        hom_worst = hom_worst.max(direct.max_deviation(&evolve(&evolve(&psi, &v)?, &u)?)?);
    }
    out.push(check("norm conservation", norm_worst, PROPERTY_TOL));
    out.push(check("composition homomorphism", hom_worst, PROPERTY_TOL));

    let mut worst = 0.0f64;
    for n in 1..=6 {
        for _ in 0..10 {
            let m = random_matrix(n, &mut rng);
            worst = worst.max((permanent(&m)? - permanent_by_permutations(&m)?).norm());
        }
    }
    out.push(check("permanent vs permutation sum", worst, PROPERTY_TOL));

    let q = Arc::new(qubit_registry());
    let mut worst = 0.0f64;
    for b in BasisInput::ALL {
        worst = worst.max((lab.error_budget(b)?.total() - 1.0).abs());
    }
    for _ in 0..PRODUCT_INSTANCES {
        let amps = random_product_amplitudes(&mut rng);
        let psi = QubitEncoding::PhaseGate.encode_amplitudes(q.clone(), &amps)?;
        worst = worst.max((lab.error_budget_for(&psi)?.total() - 1.0).abs());
    }
    out.push(check("error budget completeness", worst, EPS));

    let mut worst = 0.0f64;
    for enc in [QubitEncoding::PhaseGate, QubitEncoding::Cnot] {
        for k in 0..4 {
            worst = worst.max(success_gap(&lab, &enc.encode(q.clone(), k)?)?);
        }
        for _ in 0..20 {
            let amps: [Complex64; 4] = random_amplitudes(&mut rng);
            worst = worst.max(success_gap(&lab, &enc.encode_amplitudes(q.clone(), &amps)?)?);
        }
    }
    out.push(check("uniform 1/9 efficiency", worst, EPS));

    let third = 1.0 / 3.0;
    let phase = lab.truth_table(QubitEncoding::PhaseGate)?;
    let cz = [third, third, third, -third];
    out.push(check(
        "phase-gate truth table",
        table_gap(&phase.truth_table, |i, j| if i == j { cz[i] } else { 0.0 }),
        EPS,
    ));
    let cnot = lab.truth_table(QubitEncoding::Cnot)?;
    let target = [0, 1, 3, 2];
    out.push(check(
        "CNOT truth table",
        table_gap(&cnot.truth_table, |i, j| if target[j] == i { third } else { 0.0 }),
        EPS,
    ));

    let mut inputs: Vec<PureState> = BasisInput::ALL
        .iter()
        .map(|b| b.state(q.clone()))
        .collect::<fockgate_core::Result<_>>()?;
    for _ in 0..RULE_INSTANCES {
        let amps = random_product_amplitudes(&mut rng);
        inputs.push(QubitEncoding::PhaseGate.encode_amplitudes(q.clone(), &amps)?);
    }
    let eq = lab.rule_equivalence(&inputs)?;
    let worst = eq
        .checks
        .iter()
        .map(|c| c.max_probability_gap.max(c.max_state_deviation))
        .fold(0.0, f64::max);
    out.push(CheckResult {
        passed: eq.holds() && worst <= EPS,
        ..check("post-selection rule equivalence", worst, EPS)
    });

    out.push(check(
        "fidelity vs CZ",
        (fidelity(&phase, &QubitEncoding::PhaseGate.ideal())? - 1.0).abs(),
        EPS,
    ));
    out.push(check(
        "fidelity vs CNOT",
        (fidelity(&cnot, &QubitEncoding::Cnot.ideal())? - 1.0).abs(),
        EPS,
    ));
    Ok(out)
}

fn success_gap(lab: &PhaseGateLab, input: &PureState) -> Result<f64> {
    let raw = lab.run_gate(input)?;
    let p = postselect(&raw, &PostSelectionRule::full())?.probability;
    Ok((p - 1.0 / 9.0).abs())
}

fn table_gap(table: &[[Complex64; 4]; 4], want: impl Fn(usize, usize) -> f64) -> f64 {
    let mut worst = 0.0f64;
    for (i, row) in table.iter().enumerate() {
        for (j, t) in row.iter().enumerate() {
            worst = worst.max((t - Complex64::new(want(i, j), 0.0)).norm());
        }
    }
    worst
}

/// Largest gap between the evolved beam-splitter outputs and the closed
/// forms `√R`, `-i√(1-R)`, `2R-1`, `-i√(2R(1-R))`.
fn beam_splitter_worst(r: f64) -> Result<f64> {
    let reg = registry(2);
    let u = beam_splitter_matrix(r)?;
    let s = Complex64::new(r.sqrt(), 0.0);
    let t = Complex64::new(0.0, -(1.0 - r).sqrt());
    let pair = Complex64::new(0.0, -(2.0 * r * (1.0 - r)).sqrt());
    let one = Complex64::new(1.0, 0.0);
    let lines: [([u32; 2], Vec<([u32; 2], Complex64)>); 4] = [
        ([0, 0], vec![([0, 0], one)]),
        ([0, 1], vec![([0, 1], s), ([1, 0], t)]),
        ([1, 0], vec![([1, 0], s), ([0, 1], t)]),
        ([1, 1], vec![([1, 1], Complex64::new(2.0 * r - 1.0, 0.0)), ([2, 0], pair), ([0, 2], pair)]),
    ];
    let mut worst = 0.0f64;
    for (input, terms) in lines {
        let expected = PureState::from_terms(
            reg.clone(),
            terms.into_iter().map(|(k, a)| (FockBasisState::new(k.to_vec()), a)),
        )?;
        let got = evolve(&PureState::basis(reg.clone(), &input)?, &u)?;
        worst = worst.max(got.max_deviation(&expected)?);
    }
    Ok(worst)
}

fn random_matrix<R: Rng>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

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

//! The post-selected photonic phase gate.
//!
//! Two polarization qubits enter on ports `q1` and `q2`. Inside the gate a
//! polarizing beam splitter on each port separates H and V. The two H rails
//! meet at a central beam splitter, and each V rail passes an attenuating
//! beam splitter whose other output is a dedicated loss mode. A second pair
//! of polarizing beam splitters recombines the rails. With every
//! reflectivity at 1/3 the output conditioned on one photon per port is
//! `(1/3)·CZ`: the central splitter contributes `2R-1 = -1/3` to `|HH>` and
//! `√R·√R = 1/3` to the other three inputs.
//!
//! Mode order is fixed to `[q1H, q1V, q2H, q2V, loss1, loss2]`.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::evolution::{evolve, transition_amplitude, TransitionQuery};
use crate::optics::{beam_splitter_matrix, unitarity_deviation, Circuit, ElementSpec, ModeUnitary};
use crate::{Error, FockBasisState, ModeRegistry, PureState, Result, EPS, UNITARITY_TOL};

pub const PORT1: [&str; 2] = ["q1H", "q1V"];
pub const PORT2: [&str; 2] = ["q2H", "q2V"];
pub const LOSS_MODES: [&str; 2] = ["loss1", "loss2"];

/// Qubit modes only, `[q1H, q1V, q2H, q2V]`, for building gate inputs.
pub fn qubit_registry() -> ModeRegistry {
    ModeRegistry::new(["q1H", "q1V", "q2H", "q2V"]).expect("static labels are unique")
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Reflectivities of the three beam splitters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateConfig {
    /// Splitter joining the two H rails.
    pub central_reflectivity: f64,
    /// Splitters coupling each V rail to its loss mode.
    pub loss_reflectivity: f64,
}

impl GateConfig {
    pub fn uniform(reflectivity: f64) -> Self {
        GateConfig {
            central_reflectivity: reflectivity,
            loss_reflectivity: reflectivity,
        }
    }
}

impl Default for GateConfig {
    fn default() -> Self {
        GateConfig::uniform(balanced_reflectivity())
    }
}

/// The gate circuit at reflectivity 1/3.
pub fn build_gate_circuit() -> Circuit {
    build_gate_circuit_with(&GateConfig::default()).expect("1/3 is a valid reflectivity")
}

pub fn build_gate_circuit_with(config: &GateConfig) -> Result<Circuit> {
    for r in [config.central_reflectivity, config.loss_reflectivity] {
        beam_splitter_matrix(r)?;
    }
    let circuit = Circuit::new(Arc::new(ModeRegistry::gate_modes()))
        .with(ElementSpec::pbs(&["q1", "q2"]))
        .with(ElementSpec::beam_splitter(config.central_reflectivity, "q1H", "q2H"))
        .with(ElementSpec::attenuator(config.loss_reflectivity, "q1V", "loss1"))
        .with(ElementSpec::attenuator(config.loss_reflectivity, "q2V", "loss2"))
        .with(ElementSpec::pbs(&["q1", "q2"]));
    Ok(circuit)
}

/// Polarization basis inputs, one photon per port.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisInput {
    VV,
    VH,
    HV,
    HH,
}

impl BasisInput {
    pub const ALL: [BasisInput; 4] = [BasisInput::VV, BasisInput::VH, BasisInput::HV, BasisInput::HH];

    /// Position in the two-qubit basis under the phase-gate encoding.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            BasisInput::VV => "VV",
            BasisInput::VH => "VH",
            BasisInput::HV => "HV",
            BasisInput::HH => "HH",
        }
    }

    pub fn parse(label: &str) -> Option<Self> {
        BasisInput::ALL
            .into_iter()
            .find(|b| b.label().eq_ignore_ascii_case(label))
    }

    /// `|V;V>` etc. on the six gate modes.
    pub fn state(self, registry: Arc<ModeRegistry>) -> Result<PureState> {
        QubitEncoding::PhaseGate.encode(registry, self.index())
    }
}

impl fmt::Display for BasisInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// How logical qubit values map onto polarization modes.
///
/// `PhaseGate`: `|0> = V`, `|1> = H` on both ports. `Cnot`: port 1 as
/// before, port 2 uses `|0> = (V+H)/√2`, `|1> = (V-H)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QubitEncoding {
    PhaseGate,
    Cnot,
}

impl QubitEncoding {
    pub fn name(self) -> &'static str {
        match self {
            QubitEncoding::PhaseGate => "phase",
            QubitEncoding::Cnot => "cnot",
        }
    }

    /// Two-qubit basis labels in index order.
    pub const LABELS: [&'static str; 4] = ["00", "01", "10", "11"];

    fn port_state(self, port: u8, bit: bool) -> Vec<(&'static str, Complex64)> {
        let (h, v) = if port == 1 { ("q1H", "q1V") } else { ("q2H", "q2V") };
        match (self, port, bit) {
            (QubitEncoding::Cnot, 2, _) => {
                let s = core::f64::consts::FRAC_1_SQRT_2;
                let hs = if bit { -s } else { s };
                vec![(v, Complex64::new(s, 0.0)), (h, Complex64::new(hs, 0.0))]
            }
            (_, _, false) => vec![(v, ONE)],
            (_, _, true) => vec![(h, ONE)],
        }
    }

    /// Encoded basis state `index` (`2·b1 + b2`) on `registry`, which must
    /// contain the four qubit modes. Any other modes stay empty.
    pub fn encode(self, registry: Arc<ModeRegistry>, index: usize) -> Result<PureState> {
        let (b1, b2) = (index & 2 != 0, index & 1 != 0);
        let mut terms = Vec::new();
        for (m1, a1) in self.port_state(1, b1) {
            for (m2, a2) in self.port_state(2, b2) {
                let mut occ = vec![0u32; registry.len()];
                occ[registry.index_of(m1)?] += 1;
                occ[registry.index_of(m2)?] += 1;
                terms.push((FockBasisState::new(occ), a1 * a2));
            }
        }
        PureState::from_terms(registry, terms)
    }

    /// `Σ_k amplitudes[k] · encode(k)`.
    pub fn encode_amplitudes(self, registry: Arc<ModeRegistry>, amplitudes: &[Complex64; 4]) -> Result<PureState> {
        let mut acc = PureState::zero(registry.clone());
        for (k, a) in amplitudes.iter().enumerate() {
            acc = acc.add(&self.encode(registry.clone(), k)?.scale(*a))?;
        }
        Ok(acc)
    }

    /// The gate this encoding is meant to realize: CZ (sign flip on `|11>`)
    /// or CNOT (port 1 controls port 2).
    pub fn ideal(self) -> DMatrix<Complex64> {
        match self {
            QubitEncoding::PhaseGate => {
                DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, ONE, ONE, -ONE]))
            }
            QubitEncoding::Cnot => {
                let mut m = DMatrix::zeros(4, 4);
                m[(0, 0)] = ONE;
                m[(1, 1)] = ONE;
                m[(3, 2)] = ONE;
                m[(2, 3)] = ONE;
                m
            }
        }
    }
}

/// Which post-selection condition to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// One photon in each output port, nothing in the loss modes.
    Full,
    /// Nothing in the loss modes and one photon in the given port (1 or 2).
    Practical { port: u8 },
}

/// Photon-count constraints over disjoint groups of modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostSelectionRule {
    kind: RuleKind,
    constraints: Vec<(Vec<String>, u32)>,
}

fn group(labels: &[&str]) -> Vec<String> {
    labels.iter().map(|l| l.to_string()).collect()
}

impl PostSelectionRule {
    pub fn full() -> Self {
        PostSelectionRule {
            kind: RuleKind::Full,
            constraints: vec![
                (group(&PORT1), 1),
                (group(&PORT2), 1),
                (group(&LOSS_MODES[..1]), 0),
                (group(&LOSS_MODES[1..]), 0),
            ],
        }
    }

    /// Loss modes empty and exactly one photon in `port` (1 or 2).
    pub fn practical(port: u8) -> Self {
        let ports = if port == 2 { PORT2 } else { PORT1 };
        PostSelectionRule {
            kind: RuleKind::Practical {
                port: if port == 2 { 2 } else { 1 },
            },
            constraints: vec![
                (group(&LOSS_MODES[..1]), 0),
                (group(&LOSS_MODES[1..]), 0),
                (group(&ports), 1),
            ],
        }
    }

    pub fn of_kind(kind: RuleKind) -> Self {
        match kind {
            RuleKind::Full => Self::full(),
            RuleKind::Practical { port } => Self::practical(port),
        }
    }

    /// Custom rule; groups must be pairwise disjoint.
    pub fn custom(kind: RuleKind, constraints: Vec<(Vec<String>, u32)>) -> Result<Self> {
        let mut seen: Vec<&String> = Vec::new();
        for (labels, _) in &constraints {
            for l in labels {
                if seen.contains(&l) {
                    return Err(Error::DuplicateTarget(l.clone()));
                }
                seen.push(l);
            }
        }
        Ok(PostSelectionRule { kind, constraints })
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn constraints(&self) -> &[(Vec<String>, u32)] {
        &self.constraints
    }

    fn resolve(&self, registry: &ModeRegistry) -> Result<Vec<(Vec<usize>, u32)>> {
        self.constraints
            .iter()
            .map(|(labels, n)| {
                let idx = labels
                    .iter()
                    .map(|l| registry.index_of(l))
                    .collect::<Result<Vec<_>>>()?;
                Ok((idx, *n))
            })
            .collect()
    }
}

/// Outcome of a post-selection: the conditional state (absent when the
/// projection vanishes), its probability and the unnormalized projection.
#[derive(Debug, Clone, PartialEq)]
pub struct PostSelection {
    pub state: Option<PureState>,
    pub probability: f64,
    pub projected: PureState,
}

impl PostSelection {
    pub fn is_empty(&self) -> bool {
        self.state.is_none()
    }
}

/// Projects `raw` onto the basis states accepted by `rule`.
pub fn postselect(raw: &PureState, rule: &PostSelectionRule) -> Result<PostSelection> {
    let constraints = rule.resolve(raw.registry())?;
    let projected = raw.project(|ket| constraints.iter().all(|(modes, n)| ket.count_in(modes) == *n));
    match projected.normalize() {
        Ok((state, probability)) => Ok(PostSelection {
            state: Some(state),
            probability,
            projected,
        }),
        Err(Error::ZeroState) => Ok(PostSelection {
            state: None,
            probability: 0.0,
            projected,
        }),
        Err(e) => Err(e),
    }
}

/// Where the two photons went.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorBudget {
    /// Accepted by the full post-selection rule.
    pub success: f64,
    /// At least one photon in a loss mode.
    pub loss: f64,
    /// No loss, but two photons in the same output port.
    pub bunching: f64,
}

impl ErrorBudget {
    pub fn total(&self) -> f64 {
        self.success + self.loss + self.bunching
    }
}

/// Truth table and error analysis of the gate for one encoding.
#[derive(Debug, Clone, PartialEq)]
pub struct GateReport {
    pub encoding: QubitEncoding,
    pub config: GateConfig,
    pub rule: RuleKind,
    /// `truth_table[out][in]`: amplitude of encoded output `out` for encoded
    /// input `in`, including the post-selection attenuation.
    pub truth_table: [[Complex64; 4]; 4],
    /// Same table with each column normalized to the conditional state.
    pub conditional_table: [[Complex64; 4]; 4],
    pub success_probabilities: [f64; 4],
    pub error_budgets: [ErrorBudget; 4],
    /// Fidelity of the normalized table with [`QubitEncoding::ideal`].
    pub fidelity: f64,
}

impl GateReport {
    pub fn column_norm_squared(&self, input: usize) -> f64 {
        (0..4).map(|o| self.truth_table[o][input].norm_sqr()).sum()
    }

    pub fn table_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(4, 4, |r, c| self.truth_table[r][c])
    }
}

/// `|Tr(ideal† · T̂)|² / 16`, where `T̂` is the truth table with every
/// non-zero column scaled to unit norm.
pub fn fidelity(report: &GateReport, ideal: &DMatrix<Complex64>) -> Result<f64> {
    if ideal.nrows() != 4 || ideal.ncols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: ideal.nrows().max(ideal.ncols()),
        });
    }
    let deviation = unitarity_deviation(ideal);
    if !(deviation <= UNITARITY_TOL) {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(overlap_fidelity(&report.conditional_table, ideal))
}

fn overlap_fidelity(table: &[[Complex64; 4]; 4], ideal: &DMatrix<Complex64>) -> f64 {
    let mut tr = ZERO;
    for (r, row) in table.iter().enumerate() {
        for (c, t) in row.iter().enumerate() {
            tr += ideal[(r, c)].conj() * t;
        }
    }
    tr.norm_sqr() / 16.0
}

/// Outcome of comparing the full and practical post-selection rules on one
/// input.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleCheck {
    /// Two photons, none in a loss mode.
    pub in_contract: bool,
    pub full_probability: f64,
    /// Practical rule with the designated port set to 1 and to 2.
    pub practical_probabilities: [f64; 2],
    pub max_probability_gap: f64,
    pub max_state_deviation: f64,
    pub equivalent: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RuleEquivalenceReport {
    pub checks: Vec<RuleCheck>,
}

impl RuleEquivalenceReport {
    /// Every in-contract input gave identical outcomes under both rules.
    pub fn holds(&self) -> bool {
        self.checks.iter().filter(|c| c.in_contract).all(|c| c.equivalent)
    }

    /// Inputs outside the two-photon contract on which the rules disagree.
    pub fn out_of_contract_disagreements(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| !c.in_contract && !c.equivalent)
            .count()
    }
}

/// The gate circuit together with its composed mode unitary.
#[derive(Debug, Clone)]
pub struct PhaseGateLab {
    config: GateConfig,
    circuit: Circuit,
    unitary: ModeUnitary,
}

impl Default for PhaseGateLab {
    fn default() -> Self {
        PhaseGateLab::new(GateConfig::default()).expect("default gate is valid")
    }
}

impl PhaseGateLab {
    pub fn new(config: GateConfig) -> Result<Self> {
        let circuit = build_gate_circuit_with(&config)?;
        let unitary = circuit.compose()?;
        Ok(PhaseGateLab {
            config,
            circuit,
            unitary,
        })
    }

    pub fn config(&self) -> GateConfig {
        self.config
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn unitary(&self) -> &ModeUnitary {
        &self.unitary
    }

    pub fn registry(&self) -> &Arc<ModeRegistry> {
        self.circuit.registry()
    }

    /// Lifts a state on the four qubit modes (or on all six gate modes) to
    /// the gate registry with the loss modes in vacuum.
    pub fn embed_input(&self, input: &PureState) -> Result<PureState> {
        let reg = input.registry();
        if reg.labels() == self.registry().labels() {
            return Ok(input.clone());
        }
        if reg.labels() == qubit_registry().labels() {
            let loss = Arc::new(ModeRegistry::new(LOSS_MODES)?.with_cap(reg.cap()));
            let lifted = input.tensor(&PureState::vacuum(loss))?;
            // re-home onto the shared gate registry so states compare equal
            let terms = lifted.terms().map(|(k, a)| (k.clone(), *a)).collect::<Vec<_>>();
            return PureState::from_terms(self.registry().clone(), terms);
        }
        Err(Error::RegistryMismatch)
    }

    /// Raw six-mode output for an input with one photon per port.
    pub fn run_gate(&self, input: &PureState) -> Result<PureState> {
        let input = self.embed_input(input)?;
        let (p1, p2, loss) = self.mode_groups();
        let ok = !input.is_empty()
            && input
                .terms()
                .all(|(k, _)| k.count_in(&p1) == 1 && k.count_in(&p2) == 1 && k.count_in(&loss) == 0);
        if !ok {
            return Err(Error::WrongPhotonContent);
        }
        evolve(&input, &self.unitary)
    }

    fn mode_groups(&self) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let reg = self.registry();
        let idx = |labels: &[&str]| labels.iter().map(|l| reg.index_of(l).expect("gate mode")).collect();
        (idx(&PORT1), idx(&PORT2), idx(&LOSS_MODES))
    }

    /// Loss / bunching / success split of a raw output.
    pub fn budget_of(&self, raw: &PureState) -> Result<ErrorBudget> {
        self.budget_with_rule(raw, &PostSelectionRule::full())
    }

    /// As [`budget_of`](Self::budget_of) with `success` taken from `rule`.
    pub fn budget_with_rule(&self, raw: &PureState, rule: &PostSelectionRule) -> Result<ErrorBudget> {
        let (p1, p2, loss_modes) = self.mode_groups();
        let mut budget = ErrorBudget::default();
        for (k, a) in raw.terms() {
            let p = a.norm_sqr();
            if k.count_in(&loss_modes) > 0 {
                budget.loss += p;
            } else if k.count_in(&p1) >= 2 || k.count_in(&p2) >= 2 {
                budget.bunching += p;
            }
        }
        budget.success = postselect(raw, rule)?.probability;
        Ok(budget)
    }

    pub fn error_budget(&self, input: BasisInput) -> Result<ErrorBudget> {
        let raw = self.run_gate(&input.state(self.registry().clone())?)?;
        self.budget_of(&raw)
    }

    pub fn error_budget_for(&self, input: &PureState) -> Result<ErrorBudget> {
        let raw = self.run_gate(input)?;
        self.budget_of(&raw)
    }

    pub fn truth_table(&self, encoding: QubitEncoding) -> Result<GateReport> {
        self.truth_table_with_rule(encoding, &PostSelectionRule::full())
    }

    pub fn truth_table_with_rule(&self, encoding: QubitEncoding, rule: &PostSelectionRule) -> Result<GateReport> {
        let reg = self.registry().clone();
        let basis = (0..4)
            .map(|k| encoding.encode(reg.clone(), k))
            .collect::<Result<Vec<_>>>()?;
        let mut table = [[ZERO; 4]; 4];
        let mut success = [0.0; 4];
        let mut budgets = [ErrorBudget::default(); 4];
        for (j, input) in basis.iter().enumerate() {
            let raw = self.run_gate(input)?;
            let selected = postselect(&raw, rule)?;
            success[j] = selected.probability;
            budgets[j] = self.budget_of(&raw)?;
            for (i, out) in basis.iter().enumerate() {
                table[i][j] = out.inner_product(&selected.projected)?;
            }
        }

        // global phase: largest entry of the first column real positive
        if let Some(lead) = (0..4)
            .map(|i| table[i][0])
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .filter(|a| a.norm() > EPS)
        {
            let phase = lead.conj() / lead.norm();
            for row in table.iter_mut() {
                for t in row.iter_mut() {
                    *t *= phase;
                }
            }
        }

        let mut conditional = [[ZERO; 4]; 4];
        for j in 0..4 {
            let norm = libm::sqrt((0..4).map(|i| table[i][j].norm_sqr()).sum::<f64>());
            if norm > EPS {
                for i in 0..4 {
                    conditional[i][j] = table[i][j] / norm;
                }
            }
        }

        Ok(GateReport {
            encoding,
            config: self.config,
            rule: rule.kind(),
            truth_table: table,
            conditional_table: conditional,
            success_probabilities: success,
            error_budgets: budgets,
            fidelity: overlap_fidelity(&conditional, &encoding.ideal()),
        })
    }

    /// Compares the full rule with the practical rule (both port choices)
    /// on each input. Inputs may live on the qubit or the gate registry;
    /// those outside the two-photon, empty-loss contract are evaluated
    /// anyway and flagged.
    pub fn rule_equivalence(&self, inputs: &[PureState]) -> Result<RuleEquivalenceReport> {
        let (_, _, loss) = self.mode_groups();
        let full = PostSelectionRule::full();
        let practical = [PostSelectionRule::practical(1), PostSelectionRule::practical(2)];
        let mut report = RuleEquivalenceReport::default();
        for input in inputs {
            let input = self.embed_input(input)?;
            let in_contract = input.photon_number() == Some(2)
                && input.terms().all(|(k, _)| k.count_in(&loss) == 0);
            let raw = evolve(&input, &self.unitary)?;
            let f = postselect(&raw, &full)?;
            let mut probs = [0.0; 2];
            let mut gap = 0.0f64;
            let mut dev = 0.0f64;
            for (slot, rule) in practical.iter().enumerate() {
                let p = postselect(&raw, rule)?;
                probs[slot] = p.probability;
                gap = gap.max((p.probability - f.probability).abs());
                dev = dev.max(match (&f.state, &p.state) {
                    (Some(a), Some(b)) => a.max_deviation(b)?,
                    (None, None) => 0.0,
                    _ => 1.0,
                });
            }
            report.checks.push(RuleCheck {
                in_contract,
                full_probability: f.probability,
                practical_probabilities: probs,
                max_probability_gap: gap,
                max_state_deviation: dev,
                equivalent: gap <= EPS && dev <= EPS,
            });
        }
        Ok(report)
    }
}

/// Reflectivity at which the post-selected two-photon amplitude `|2R-1|`
/// equals the square of the one-photon amplitude `√R`, for `R < 1/2`.
///
/// There `|2R-1| = 1 - 2R`, so the balance `1 - 2R = R` is linear with the
/// single root `R = 1/3`.
pub fn balanced_reflectivity() -> f64 {
    1.0 / 3.0
}

/// Photon-number-conserving amplitudes of one beam splitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub reflectivity: f64,
    /// `<0;0|U|0;0>`
    pub vacuum: Complex64,
    /// `<0;1|U|0;1>`
    pub upper: Complex64,
    /// `<1;0|U|1;0>`
    pub lower: Complex64,
    /// `<1;1|U|1;1>`
    pub pair: Complex64,
    /// `|pair| - |upper|²`; zero exactly when losses look linear.
    pub imbalance: f64,
}

/// Diagonal Fock amplitudes of a beam splitter for each reflectivity.
pub fn reflectivity_scan(grid: &[f64]) -> Result<Vec<ScanRow>> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    grid.iter()
        .map(|&r| {
            let u = beam_splitter_matrix(r)?;
            let diag = |occ: [u32; 2]| {
                let ket = FockBasisState::new(occ.to_vec());
                transition_amplitude(TransitionQuery::new(&u, &ket, &ket))
            };
            let upper = diag([0, 1])?;
            let pair = diag([1, 1])?;
            Ok(ScanRow {
                reflectivity: r,
                vacuum: diag([0, 0])?,
                upper,
                lower: diag([1, 0])?,
                pair,
                imbalance: pair.norm() - upper.norm_sqr(),
            })
        })
        .collect()
}

/// Reflectivities in `[0, 1/2)` where the imbalance vanishes: grid points
/// within [`EPS`] of zero, plus linearly interpolated sign changes.
pub fn balance_points(rows: &[ScanRow]) -> Vec<f64> {
    let rows: Vec<&ScanRow> = rows
        .iter()
        .filter(|r| (0.0..0.5).contains(&r.reflectivity))
        .collect();
    let mut points: Vec<f64> = Vec::new();
    let mut push = |x: f64| {
        if !points.iter().any(|p| (p - x).abs() <= 1e-9) {
            points.push(x);
        }
    };
    for (i, row) in rows.iter().enumerate() {
        if row.imbalance.abs() <= EPS {
            push(row.reflectivity);
        }
        if let Some(next) = rows.get(i + 1) {
            let (a, b) = (row.imbalance, next.imbalance);
            if a.abs() > EPS && b.abs() > EPS && (a < 0.0) != (b < 0.0) {
                let t = a / (a - b);
                push(row.reflectivity + t * (next.reflectivity - row.reflectivity));
            }
        }
    }
    points
}

/// `start, start+step, ...` up to and including `stop` (within a relative
/// slack of `1e-9` steps).
pub fn linear_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::InvalidGrid("need start <= stop and step > 0".into()));
    }
    let n = ((stop - start) / step + 1e-9) as usize;
    if n > 1_000_000 {
        return Err(Error::InvalidGrid("too many grid points".into()));
    }
    Ok((0..=n).map(|k| start + k as f64 * step).collect())
}

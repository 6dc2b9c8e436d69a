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

//! Mode-space unitaries for beam splitters, polarizing beam splitters,
//! phase shifters and attenuators, and their composition into circuits.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, ModeRegistry, Result, UNITARITY_TOL};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Unitary acting on mode creation operators.
///
/// Column `i` is the image of input mode `i`: `a_i† -> Σ_j U[j, i] a_j†`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeUnitary(DMatrix<Complex64>);

impl ModeUnitary {
    /// Wraps `matrix` after checking it is square and unitary within
    /// [`UNITARITY_TOL`].
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let deviation = unitarity_deviation(&matrix);
        if !(deviation <= UNITARITY_TOL) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(ModeUnitary(matrix))
    }

    pub fn identity(dim: usize) -> Self {
        ModeUnitary(DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    /// `U[output, input]`.
    pub fn entry(&self, output: usize, input: usize) -> Complex64 {
        self.0[(output, input)]
    }

    pub fn adjoint(&self) -> ModeUnitary {
        ModeUnitary(self.0.adjoint())
    }

    /// Applies `self` first and `next` afterwards, i.e. `next · self`.
    pub fn then(&self, next: &ModeUnitary) -> Result<ModeUnitary> {
        if next.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: next.dim(),
            });
        }
        ModeUnitary::new(&next.0 * &self.0)
    }

    pub fn deviation_from_unitarity(&self) -> f64 {
        unitarity_deviation(&self.0)
    }
}

/// Largest entry of `|U†U - I|`.
pub fn unitarity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let gram = m.adjoint() * m;
    let mut worst = 0.0f64;
    for r in 0..gram.nrows() {
        for c in 0..gram.ncols() {
            let target = if r == c { ONE } else { ZERO };
            worst = worst.max((gram[(r, c)] - target).norm());
        }
    }
    worst
}

/// 2×2 beam splitter of reflectivity `r`: `[[√R, -i√(1-R)], [-i√(1-R), √R]]`.
pub fn beam_splitter_matrix(reflectivity: f64) -> Result<ModeUnitary> {
    if !(0.0..=1.0).contains(&reflectivity) {
        return Err(Error::InvalidReflectivity(reflectivity));
    }
    let r = Complex64::new(libm::sqrt(reflectivity), 0.0);
    let t = Complex64::new(0.0, -libm::sqrt(1.0 - reflectivity));
    ModeUnitary::new(DMatrix::from_row_slice(2, 2, &[r, t, t, r]))
}

fn resolve_targets(targets: &[&str], registry: &ModeRegistry) -> Result<Vec<usize>> {
    let mut idx = Vec::with_capacity(targets.len());
    for label in targets {
        let i = registry.index_of(label)?;
        if idx.contains(&i) {
            return Err(Error::DuplicateTarget(label.to_string()));
        }
        idx.push(i);
    }
    Ok(idx)
}

/// Lifts a `k`-mode unitary onto `targets` of the registry, identity elsewhere.
pub fn embed(small: &ModeUnitary, targets: &[&str], registry: &ModeRegistry) -> Result<ModeUnitary> {
    if small.dim() != targets.len() {
        return Err(Error::DimensionMismatch {
            expected: targets.len(),
            actual: small.dim(),
        });
    }
    let idx = resolve_targets(targets, registry)?;
    let mut m = DMatrix::identity(registry.len(), registry.len());
    for (a, &ra) in idx.iter().enumerate() {
        for (b, &rb) in idx.iter().enumerate() {
            m[(ra, rb)] = small.entry(a, b);
        }
    }
    Ok(ModeUnitary(m))
}

/// One port entering a polarizing beam splitter.
///
/// The port's `H` mode is routed onto the transmitted rail and its `V` mode
/// onto the reflected rail. When no rails are given they coincide with the
/// port's own polarization modes, which is how the gate registry labels its
/// arms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PbsPort {
    pub port: String,
    pub transmitted_rail: Option<String>,
    pub reflected_rail: Option<String>,
}

impl PbsPort {
    pub fn new(port: impl Into<String>) -> Self {
        PbsPort {
            port: port.into(),
            transmitted_rail: None,
            reflected_rail: None,
        }
    }

    pub fn with_rails(port: impl Into<String>, transmitted: impl Into<String>, reflected: impl Into<String>) -> Self {
        PbsPort {
            port: port.into(),
            transmitted_rail: Some(transmitted.into()),
            reflected_rail: Some(reflected.into()),
        }
    }
}

/// Permutation routing each port's H mode to its transmitted rail and V mode
/// to its reflected rail. Every routed mode keeps phase +1, so the routing
/// is its own inverse.
pub fn pbs_routing(registry: &ModeRegistry, ports: &[PbsPort]) -> Result<ModeUnitary> {
    let n = registry.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut touched = vec![false; n];
    for p in ports {
        let h_label = alloc::format!("{}H", p.port);
        let v_label = alloc::format!("{}V", p.port);
        let (h, v) = match (registry.find(&h_label), registry.find(&v_label)) {
            (Some(h), Some(v)) => (h, v),
            _ => return Err(Error::MissingPolarizationPartner(p.port.clone())),
        };
        let t = match &p.transmitted_rail {
            Some(l) => registry.index_of(l)?,
            None => h,
        };
        let r = match &p.reflected_rail {
            Some(l) => registry.index_of(l)?,
            None => v,
        };
        for (src, dst) in [(h, t), (v, r)] {
            // transpositions must be disjoint to stay an involution
            for m in [src, dst] {
                if touched[m] {
                    return Err(Error::DuplicateTarget(registry.label(m).unwrap_or("").to_string()));
                }
            }
            touched[src] = true;
            touched[dst] = true;
            perm.swap(src, dst);
        }
    }
    let mut m = DMatrix::zeros(n, n);
    for (input, &output) in perm.iter().enumerate() {
        m[(output, input)] = ONE;
    }
    Ok(ModeUnitary(m))
}

/// Optical element placed in a [`Circuit`].
#[derive(Debug, Clone, PartialEq)]
pub enum ElementSpec {
    BeamSplitter { reflectivity: f64, modes: (String, String) },
    PolarizingBs { ports: Vec<PbsPort> },
    PhaseShift { mode: String, angle: f64 },
    /// Beam splitter coupling `signal` to a vacuum `loss` mode; the signal
    /// amplitude is scaled by `√R`.
    Attenuator { reflectivity: f64, signal: String, loss: String },
    /// Arbitrary unitary block on the listed modes.
    Block { targets: Vec<String>, unitary: ModeUnitary },
}

impl ElementSpec {
    pub fn beam_splitter(reflectivity: f64, a: &str, b: &str) -> Self {
        ElementSpec::BeamSplitter {
            reflectivity,
            modes: (a.to_string(), b.to_string()),
        }
    }

    pub fn attenuator(reflectivity: f64, signal: &str, loss: &str) -> Self {
        ElementSpec::Attenuator {
            reflectivity,
            signal: signal.to_string(),
            loss: loss.to_string(),
        }
    }

    pub fn phase_shift(mode: &str, angle: f64) -> Self {
        ElementSpec::PhaseShift {
            mode: mode.to_string(),
            angle,
        }
    }

    pub fn pbs(ports: &[&str]) -> Self {
        ElementSpec::PolarizingBs {
            ports: ports.iter().map(|p| PbsPort::new(*p)).collect(),
        }
    }

    /// Mode unitary of this element on `registry`.
    pub fn unitary(&self, registry: &ModeRegistry) -> Result<ModeUnitary> {
        match self {
            ElementSpec::BeamSplitter { reflectivity, modes: (a, b) }
            | ElementSpec::Attenuator { reflectivity, signal: a, loss: b } => {
                embed(&beam_splitter_matrix(*reflectivity)?, &[a, b], registry)
            }
            ElementSpec::PolarizingBs { ports } => pbs_routing(registry, ports),
            ElementSpec::PhaseShift { mode, angle } => {
                let phase = ModeUnitary(DMatrix::from_element(1, 1, Complex64::cis(*angle)));
                embed(&phase, &[mode], registry)
            }
            ElementSpec::Block { targets, unitary } => {
                let t: Vec<&str> = targets.iter().map(String::as_str).collect();
                embed(unitary, &t, registry)
            }
        }
    }

    /// The element undoing this one.
    pub fn inverse(&self, registry: &ModeRegistry) -> Result<ElementSpec> {
        Ok(match self {
            ElementSpec::PolarizingBs { .. } => self.clone(),
            ElementSpec::PhaseShift { mode, angle } => ElementSpec::PhaseShift {
                mode: mode.clone(),
                angle: -angle,
            },
            ElementSpec::BeamSplitter { reflectivity, modes: (a, b) }
            | ElementSpec::Attenuator { reflectivity, signal: a, loss: b } => {
                let _ = registry.index_of(a)?;
                ElementSpec::Block {
                    targets: vec![a.clone(), b.clone()],
                    unitary: beam_splitter_matrix(*reflectivity)?.adjoint(),
                }
            }
            ElementSpec::Block { targets, unitary } => ElementSpec::Block {
                targets: targets.clone(),
                unitary: unitary.adjoint(),
            },
        })
    }
}

/// Ordered list of elements over a registry; elements act in list order.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    registry: Arc<ModeRegistry>,
    elements: Vec<ElementSpec>,
}

impl Circuit {
    pub fn new(registry: Arc<ModeRegistry>) -> Self {
        Circuit {
            registry,
            elements: Vec::new(),
        }
    }

    pub fn push(&mut self, element: ElementSpec) -> &mut Self {
        self.elements.push(element);
        self
    }

    pub fn with(mut self, element: ElementSpec) -> Self {
        self.elements.push(element);
        self
    }

    pub fn registry(&self) -> &Arc<ModeRegistry> {
        &self.registry
    }

    pub fn elements(&self) -> &[ElementSpec] {
        &self.elements
    }

    /// Product `U_n ⋯ U_2 U_1` of the element unitaries.
    pub fn compose(&self) -> Result<ModeUnitary> {
        let n = self.registry.len();
        let mut acc = DMatrix::identity(n, n);
        for el in &self.elements {
            acc = el.unitary(&self.registry)?.0 * acc;
        }
        ModeUnitary::new(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < TOL
    }

    fn assert_matrix_eq(u: &ModeUnitary, expected: &DMatrix<Complex64>) {
        assert_eq!(u.dim(), expected.nrows());
        for r in 0..u.dim() {
            for c in 0..u.dim() {
                assert!(close(u.entry(r, c), expected[(r, c)]), "entry ({r},{c})");
            }
        }
    }

    #[test]
    fn beam_splitter_limits() {
        assert_matrix_eq(&beam_splitter_matrix(1.0).unwrap(), &DMatrix::identity(2, 2));
        let full = beam_splitter_matrix(0.0).unwrap();
        let mi = Complex64::new(0.0, -1.0);
        assert_matrix_eq(&full, &DMatrix::from_row_slice(2, 2, &[ZERO, mi, mi, ZERO]));
    }

    #[test]
    fn beam_splitter_third() {
        let u = beam_splitter_matrix(1.0 / 3.0).unwrap();
        let r = Complex64::new(libm::sqrt(1.0f64 / 3.0), 0.0);
        let t = Complex64::new(0.0, -libm::sqrt(2.0f64 / 3.0));
        assert_matrix_eq(&u, &DMatrix::from_row_slice(2, 2, &[r, t, t, r]));
        assert!(u.deviation_from_unitarity() < 1e-15);
    }

    #[test]
    fn beam_splitter_rejects_bad_reflectivity() {
        assert_eq!(beam_splitter_matrix(1.5), Err(Error::InvalidReflectivity(1.5)));
        assert!(beam_splitter_matrix(-0.1).is_err());
        assert!(beam_splitter_matrix(f64::NAN).is_err());
    }

    #[test]
    fn non_unitary_is_rejected() {
        let m = DMatrix::from_element(2, 2, ONE);
        assert!(matches!(ModeUnitary::new(m), Err(Error::NotUnitary { .. })));
        let rect = DMatrix::from_element(2, 3, ONE);
        assert_eq!(ModeUnitary::new(rect), Err(Error::NotSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn embed_identity_is_identity() {
        let reg = ModeRegistry::gate_modes();
        let u = embed(&ModeUnitary::identity(2), &["q1V", "loss2"], &reg).unwrap();
        assert_matrix_eq(&u, &DMatrix::identity(6, 6));
    }

    #[test]
    fn embed_central_and_loss_couplers() {
        let reg = ModeRegistry::gate_modes();
        let bs = beam_splitter_matrix(1.0 / 3.0).unwrap();
        let central = embed(&bs, &["q1H", "q2H"], &reg).unwrap();
        assert!(close(central.entry(0, 2), bs.entry(0, 1)));
        assert!(close(central.entry(2, 0), bs.entry(1, 0)));
        assert!(close(central.entry(0, 0), bs.entry(0, 0)));
        assert_eq!(central.entry(1, 1), ONE);

        let left = embed(&bs, &["q1V", "loss1"], &reg).unwrap();
        assert!(close(left.entry(1, 1), bs.entry(0, 0)));
        assert!(close(left.entry(4, 1), bs.entry(1, 0)));
        assert_eq!(left.entry(0, 0), ONE);
    }

    #[test]
    fn embed_errors() {
        let reg = ModeRegistry::gate_modes();
        let bs = beam_splitter_matrix(0.5).unwrap();
        assert_eq!(embed(&bs, &["q1H", "q1H"], &reg), Err(Error::DuplicateTarget("q1H".into())));
        assert_eq!(embed(&bs, &["q1H", "nope"], &reg), Err(Error::UnknownLabel("nope".into())));
        assert!(matches!(embed(&bs, &["q1H"], &reg), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn pbs_on_gate_registry_keeps_rails() {
        let reg = ModeRegistry::gate_modes();
        let p = pbs_routing(&reg, &[PbsPort::new("q1"), PbsPort::new("q2")]).unwrap();
        assert_matrix_eq(&p, &DMatrix::identity(6, 6));
        assert_eq!(
            pbs_routing(&reg, &[PbsPort::new("loss")]),
            Err(Error::MissingPolarizationPartner("loss".into()))
        );
    }

    #[test]
    fn pbs_with_separate_rails_is_an_involution() {
        let reg = ModeRegistry::new(["inH", "inV", "railT", "railR"]).unwrap();
        let p = pbs_routing(&reg, &[PbsPort::with_rails("in", "railT", "railR")]).unwrap();
        // V goes to the reflected rail, H to the transmitted rail
        assert_eq!(p.entry(3, 1), ONE);
        assert_eq!(p.entry(2, 0), ONE);
        let twice = p.then(&p).unwrap();
        assert_matrix_eq(&twice, &DMatrix::identity(4, 4));
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(Arc::new(ModeRegistry::gate_modes()));
        assert_matrix_eq(&c.compose().unwrap(), &DMatrix::identity(6, 6));
    }

    #[test]
    fn beam_splitter_followed_by_inverse_is_identity() {
        let reg = Arc::new(ModeRegistry::new(["a", "b", "c"]).unwrap());
        let bs = ElementSpec::beam_splitter(0.3, "a", "c");
        let inv = bs.inverse(&reg).unwrap();
        let ps = ElementSpec::phase_shift("b", 0.7);
        let c = Circuit::new(reg.clone())
            .with(ps.clone())
            .with(bs)
            .with(inv)
            .with(ps.inverse(&reg).unwrap());
        assert_matrix_eq(&c.compose().unwrap(), &DMatrix::identity(3, 3));
    }

    #[test]
    fn composition_order_is_application_order() {
        let reg = Arc::new(ModeRegistry::new(["a", "b"]).unwrap());
        let c = Circuit::new(reg)
            .with(ElementSpec::phase_shift("a", core::f64::consts::FRAC_PI_2))
            .with(ElementSpec::beam_splitter(0.0, "a", "b"));
        let u = c.compose().unwrap();
        // a† -> i a† -> i (-i b†) = b†
        assert!(close(u.entry(1, 0), ONE));
        assert!(close(u.entry(0, 0), ZERO));
    }

    #[test]
    fn attenuator_keeps_sqrt_r_on_signal() {
        let reg = ModeRegistry::new(["s", "l"]).unwrap();
        for r in [0.0, 0.2, 1.0 / 3.0, 0.9] {
            let u = ElementSpec::attenuator(r, "s", "l").unitary(&reg).unwrap();
            assert!(close(u.entry(0, 0), Complex64::new(libm::sqrt(r), 0.0)));
        }
    }
}

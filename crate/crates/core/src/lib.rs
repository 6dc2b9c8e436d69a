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

//! Exact Fock-space simulation of small passive linear-optical circuits.
//!
//! The crate is `no_std` (it needs `alloc`). States are sparse maps from
//! occupation-number vectors to complex amplitudes, circuits are described
//! by their action on mode creation operators, and multi-photon amplitudes
//! are obtained from matrix permanents. On top of that engine, [`gate`]
//! builds the three-beam-splitter post-selected phase gate for
//! polarization-encoded photonic qubits and extracts its truth table,
//! efficiency and loss/bunching error budget.
//!
//! # Phase convention
//!
//! A beam splitter of reflectivity `R` acts on creation operators as
//!
//! ```text
//! [ √R        -i√(1-R) ]
//! [ -i√(1-R)  √R       ]
//! ```
//!
//! so a reflected photon keeps its phase and a transmitted photon picks up
//! `-i`. Every golden value in the test suite depends on this choice.
//!
//! Mode unitaries use the column convention: column `i` holds the image of
//! input mode `i`, i.e. `a_i† -> Σ_j U[j, i] a_j†`.

#![no_std]

extern crate alloc;

pub mod error;
pub mod evolution;
pub mod fock;
pub mod gate;
pub mod optics;
pub mod permanent;
#[cfg(feature = "rand")]
pub mod random;

pub use nalgebra::DMatrix;
pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use evolution::{evolve, oracle_evolve, transition_amplitude, TransitionQuery};
pub use fock::{FockBasisState, ModeRegistry, PureState};
pub use gate::{
    balanced_reflectivity, fidelity, postselect, reflectivity_scan, BasisInput, ErrorBudget,
    GateConfig, GateReport, PhaseGateLab, PostSelection, PostSelectionRule, QubitEncoding, RuleKind,
};
pub use optics::{beam_splitter_matrix, embed, pbs_routing, Circuit, ElementSpec, ModeUnitary};
pub use permanent::permanent;

/// Global comparison tolerance for amplitudes and probabilities.
pub const EPS: f64 = 1e-12;

/// Amplitudes with magnitude below this are dropped from sparse states.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Tolerance on `U†U = I` for mode unitaries.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Default per-mode photon cap.
pub const DEFAULT_PHOTON_CAP: u32 = 4;

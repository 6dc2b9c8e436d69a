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

use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("mode registry must contain at least one mode")]
    EmptyRegistry,
    #[error("duplicate mode label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown mode label `{0}`")]
    UnknownLabel(String),
    #[error("expected {expected} occupations, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("photon number {count} exceeds cap {cap}")]
    CapExceeded { count: u32, cap: u32 },
    #[error("states live on different mode registries")]
    RegistryMismatch,
    #[error("mode label sets overlap at `{0}`")]
    OverlappingModes(String),
    #[error("cannot normalize a zero state")]
    ZeroState,
    #[error("reflectivity {0} outside [0, 1]")]
    InvalidReflectivity(f64),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix deviates from unitarity by {deviation:e}")]
    NotUnitary { deviation: f64 },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("permanent dimension {0} exceeds the supported maximum")]
    PermanentTooLarge(usize),
    #[error("port `{0}` lacks an H/V polarization partner")]
    MissingPolarizationPartner(String),
    #[error("element references mode `{0}` more than once")]
    DuplicateTarget(String),
    #[error("gate input must carry exactly one photon per port and vacuum in loss modes")]
    WrongPhotonContent,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

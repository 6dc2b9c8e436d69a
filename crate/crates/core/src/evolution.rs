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

//! Lifting mode unitaries to Fock space.
//!
//! [`evolve`] uses permanents of repeated-row/column submatrices.
//! [`oracle_evolve`] reaches the same result by expanding products of
//! creation operators symbolically and never touches a permanent; the two
//! are cross-checked in the test suites.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::permanent::{permanent, MAX_PERMANENT_DIM};
use crate::{
    Error, FockBasisState, ModeUnitary, PureState, Result, DEFAULT_PHOTON_CAP, PRUNE_THRESHOLD,
};

/// `<output| U |input>` for a single pair of basis states.
#[derive(Debug, Clone, Copy)]
pub struct TransitionQuery<'a> {
    pub unitary: &'a ModeUnitary,
    pub input: &'a FockBasisState,
    pub output: &'a FockBasisState,
    pub cap: u32,
}

impl<'a> TransitionQuery<'a> {
    pub fn new(unitary: &'a ModeUnitary, input: &'a FockBasisState, output: &'a FockBasisState) -> Self {
        TransitionQuery {
            unitary,
            input,
            output,
            cap: DEFAULT_PHOTON_CAP,
        }
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = cap;
        self
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn check_ket(ket: &FockBasisState, dim: usize, cap: u32) -> Result<()> {
    if ket.modes() != dim {
        return Err(Error::LengthMismatch {
            expected: dim,
            actual: ket.modes(),
        });
    }
    match ket.occupations().iter().find(|&&n| n > cap) {
        Some(&count) => Err(Error::CapExceeded { count, cap }),
        None => Ok(()),
    }
}

/// Mode index repeated once per photon: `[1, 0, 2]` -> `[0, 2, 2]`.
fn expand_modes(ket: &FockBasisState) -> Vec<usize> {
    ket.occupations()
        .iter()
        .enumerate()
        .flat_map(|(mode, &n)| core::iter::repeat_n(mode, n as usize))
        .collect()
}

/// `Per(U[out, in]) / √(Π out_j! Π in_i!)`, zero when photon numbers differ.
pub fn transition_amplitude(query: TransitionQuery<'_>) -> Result<Complex64> {
    let dim = query.unitary.dim();
    check_ket(query.input, dim, query.cap)?;
    check_ket(query.output, dim, query.cap)?;
    if query.input.total() != query.output.total() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let cols = expand_modes(query.input);
    amplitude_for(query.unitary, &cols, query.input, query.output)
}

fn amplitude_for(
    u: &ModeUnitary,
    cols: &[usize],
    input: &FockBasisState,
    output: &FockBasisState,
) -> Result<Complex64> {
    let n = cols.len();
    if n > MAX_PERMANENT_DIM {
        return Err(Error::PermanentTooLarge(n));
    }
    let rows = expand_modes(output);
    let sub = DMatrix::from_fn(n, n, |r, c| u.entry(rows[r], cols[c]));
    let norm: f64 = input
        .occupations()
        .iter()
        .chain(output.occupations())
        .map(|&k| factorial(k))
        .product();
    Ok(permanent(&sub)? / libm::sqrt(norm))
}

/// All occupation vectors of `total` photons spread over `support` modes.
fn distributions(dim: usize, support: &[usize], total: u32) -> Vec<FockBasisState> {
    fn rec(support: &[usize], left: u32, occ: &mut Vec<u32>, out: &mut Vec<FockBasisState>) {
        match support {
            [] => {
                if left == 0 {
                    out.push(FockBasisState::new(occ.clone()));
                }
            }
            [last] => {
                occ[*last] = left;
                out.push(FockBasisState::new(occ.clone()));
                occ[*last] = 0;
            }
            [first, rest @ ..] => {
                for k in (0..=left).rev() {
                    occ[*first] = k;
                    rec(rest, left - k, occ, out);
                }
                occ[*first] = 0;
            }
        }
    }
    let mut out = Vec::new();
    rec(support, total, &mut vec![0; dim], &mut out);
    out
}

fn check_dims(state: &PureState, u: &ModeUnitary) -> Result<()> {
    if u.dim() != state.registry().len() {
        return Err(Error::DimensionMismatch {
            expected: state.registry().len(),
            actual: u.dim(),
        });
    }
    Ok(())
}

fn check_photon_cap(ket: &FockBasisState, cap: u32) -> Result<()> {
    let total = ket.total();
    if total > cap {
        return Err(Error::CapExceeded { count: total, cap });
    }
    Ok(())
}

/// `Û |ψ>` computed term by term from permanents.
///
/// Output kets are enumerated only over modes that the occupied input modes
/// actually couple to. Every input term must have total photon number within
/// the registry cap, which bounds every output occupation as well.
pub fn evolve(state: &PureState, u: &ModeUnitary) -> Result<PureState> {
    check_dims(state, u)?;
    let dim = u.dim();
    let cap = state.registry().cap();
    let mut out: BTreeMap<FockBasisState, Complex64> = BTreeMap::new();
    for (ket, amp) in state.terms() {
        check_photon_cap(ket, cap)?;
        let cols = expand_modes(ket);
        let support: Vec<usize> = (0..dim)
            .filter(|&j| cols.iter().any(|&i| u.entry(j, i).norm() >= PRUNE_THRESHOLD))
            .collect();
        for target in distributions(dim, &support, ket.total()) {
            let a = amplitude_for(u, &cols, ket, &target)?;
            *out.entry(target).or_insert(Complex64::new(0.0, 0.0)) += a * amp;
        }
    }
    Ok(PureState::from_map_unchecked(state.registry().clone(), out))
}

/// Same contract as [`evolve`], computed by expanding
/// `Π_i (Σ_j U[j,i] a_j†)^{n_i} / √(n_i!)` as a polynomial in creation
/// operators and reading each monomial `Π_j (a_j†)^{m_j}|0>` as
/// `√(Π m_j!) |m>`.
pub fn oracle_evolve(state: &PureState, u: &ModeUnitary) -> Result<PureState> {
    check_dims(state, u)?;
    let dim = u.dim();
    let cap = state.registry().cap();
    let mut out: BTreeMap<FockBasisState, Complex64> = BTreeMap::new();
    for (ket, amp) in state.terms() {
        check_photon_cap(ket, cap)?;
        let norm: f64 = ket.occupations().iter().map(|&n| factorial(n)).product();
        // monomial exponents -> coefficient
        let mut poly: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
        poly.insert(vec![0; dim], *amp / libm::sqrt(norm));
        for (mode, &n) in ket.occupations().iter().enumerate() {
            for _ in 0..n {
                let mut next: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
                for (mono, coeff) in &poly {
                    for target in 0..dim {
                        let w = u.entry(target, mode);
                        if w == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        let mut m = mono.clone();
                        m[target] += 1;
                        *next.entry(m).or_insert(Complex64::new(0.0, 0.0)) += coeff * w;
                    }
                }
                poly = next;
            }
        }
        for (mono, coeff) in poly {
            let weight: f64 = mono.iter().map(|&m| factorial(m)).product();
            *out.entry(FockBasisState::new(mono))
                .or_insert(Complex64::new(0.0, 0.0)) += coeff * libm::sqrt(weight);
        }
    }
    Ok(PureState::from_map_unchecked(state.registry().clone(), out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::beam_splitter_matrix;
    use crate::ModeRegistry;
    use alloc::sync::Arc;

    const TOL: f64 = 1e-12;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_modes() -> Arc<ModeRegistry> {
        Arc::new(ModeRegistry::new(["a", "b"]).unwrap())
    }

    fn ket(v: &[u32]) -> FockBasisState {
        FockBasisState::new(v.to_vec())
    }

    fn amp(u: &ModeUnitary, input: &[u32], output: &[u32]) -> Complex64 {
        transition_amplitude(TransitionQuery::new(u, &ket(input), &ket(output))).unwrap()
    }

    #[test]
    fn two_photon_lines() {
        for r in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
            let u = beam_splitter_matrix(r).unwrap();
            assert!((amp(&u, &[1, 1], &[1, 1]) - c(2.0 * r - 1.0, 0.0)).norm() < TOL);
            let bunched = c(0.0, -libm::sqrt(2.0 * r * (1.0 - r)));
            assert!((amp(&u, &[1, 1], &[2, 0]) - bunched).norm() < TOL);
            assert!((amp(&u, &[1, 1], &[0, 2]) - bunched).norm() < TOL);
            assert!((amp(&u, &[0, 1], &[1, 0]) - c(0.0, -libm::sqrt(1.0 - r))).norm() < TOL);
        }
    }

    #[test]
    fn photon_number_mismatch_is_zero() {
        let u = beam_splitter_matrix(0.4).unwrap();
        assert_eq!(amp(&u, &[1, 1], &[1, 0]), c(0.0, 0.0));
    }

    #[test]
    fn query_validation() {
        let u = beam_splitter_matrix(0.4).unwrap();
        let big = ket(&[5, 0]);
        let q = TransitionQuery::new(&u, &big, &big);
        assert_eq!(transition_amplitude(q), Err(Error::CapExceeded { count: 5, cap: 4 }));
        assert!(transition_amplitude(q.with_cap(5)).is_ok());
        let (short, long) = (ket(&[1]), ket(&[1, 0]));
        let q = TransitionQuery::new(&u, &short, &long);
        assert!(matches!(transition_amplitude(q), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn hong_ou_mandel_dip() {
        let u = beam_splitter_matrix(0.5).unwrap();
        let out = evolve(&PureState::basis(two_modes(), &[1, 1]).unwrap(), &u).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out.amplitude(&ket(&[1, 1])), c(0.0, 0.0));
        let h = c(0.0, -libm::sqrt(0.5f64));
        assert!((out.amplitude(&ket(&[2, 0])) - h).norm() < TOL);
        assert!((out.amplitude(&ket(&[0, 2])) - h).norm() < TOL);
    }

    #[test]
    fn third_reflectivity_pair() {
        // 2R-1 = -1/3 and -i√(2·1/3·2/3) = -2i/3 at R = 1/3
        let u = beam_splitter_matrix(1.0 / 3.0).unwrap();
        let input = PureState::basis(two_modes(), &[1, 1]).unwrap();
        for out in [evolve(&input, &u).unwrap(), oracle_evolve(&input, &u).unwrap()] {
            assert_eq!(out.len(), 3);
            assert!((out.amplitude(&ket(&[1, 1])) - c(-1.0 / 3.0, 0.0)).norm() < TOL);
            assert!((out.amplitude(&ket(&[2, 0])) - c(0.0, -2.0 / 3.0)).norm() < TOL);
            assert!((out.amplitude(&ket(&[0, 2])) - c(0.0, -2.0 / 3.0)).norm() < TOL);
            assert!((out.norm_squared() - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn vacuum_is_invariant() {
        let u = beam_splitter_matrix(0.37).unwrap();
        let vac = PureState::vacuum(two_modes());
        assert_eq!(evolve(&vac, &u).unwrap(), vac);
        assert_eq!(oracle_evolve(&vac, &u).unwrap(), vac);
    }

    #[test]
    fn dimension_and_cap_errors() {
        let u = beam_splitter_matrix(0.37).unwrap();
        let three = Arc::new(ModeRegistry::new(["a", "b", "c"]).unwrap());
        let s = PureState::vacuum(three);
        assert!(matches!(evolve(&s, &u), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(oracle_evolve(&s, &u), Err(Error::DimensionMismatch { .. })));
        let small = Arc::new(ModeRegistry::new(["a", "b"]).unwrap().with_cap(2));
        let s = PureState::basis(small, &[1, 2]).unwrap();
        assert_eq!(evolve(&s, &u), Err(Error::CapExceeded { count: 3, cap: 2 }));
    }

    #[test]
    fn distributions_cover_compositions() {
        let d = distributions(4, &[0, 2, 3], 2);
        assert_eq!(d.len(), 6);
        assert!(d.iter().all(|k| k.total() == 2 && k.get(1) == 0));
        assert_eq!(distributions(3, &[], 0).len(), 1);
    }
}

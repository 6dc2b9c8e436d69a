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

//! Random instances for property checks (enabled by the `rand` feature).

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{FockBasisState, ModeRegistry, ModeUnitary, PureState, Result};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random `n×n` unitary: Gram–Schmidt on a complex Gaussian matrix.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ModeUnitary {
    loop {
        let mut m = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
        let mut degenerate = false;
        for j in 0..n {
            for k in 0..j {
                let proj: Complex64 = (0..n).map(|i| m[(i, k)].conj() * m[(i, j)]).sum();
                for i in 0..n {
                    let v = m[(i, k)];
                    m[(i, j)] -= proj * v;
                }
            }
            let norm = libm::sqrt((0..n).map(|i| m[(i, j)].norm_sqr()).sum::<f64>());
            if norm < 1e-8 {
                degenerate = true;
                break;
            }
            for i in 0..n {
                m[(i, j)] /= norm;
            }
        }
        if !degenerate {
            if let Ok(u) = ModeUnitary::new(m) {
                return u;
            }
        }
    }
}

/// Unit vector of `N` complex amplitudes.
pub fn random_amplitudes<const N: usize, R: Rng + ?Sized>(rng: &mut R) -> [Complex64; N] {
    loop {
        let v: [Complex64; N] = core::array::from_fn(|_| gaussian(rng));
        let norm = libm::sqrt(v.iter().map(Complex64::norm_sqr).sum::<f64>());
        if norm > 1e-8 {
            return v.map(|a| a / norm);
        }
    }
}

/// Amplitudes `a ⊗ b` of a random two-qubit product state.
pub fn random_product_amplitudes<R: Rng + ?Sized>(rng: &mut R) -> [Complex64; 4] {
    let a: [Complex64; 2] = random_amplitudes(rng);
    let b: [Complex64; 2] = random_amplitudes(rng);
    [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
}

/// Uniformly chosen ket with `photons` photons over `modes` modes.
pub fn random_ket<R: Rng + ?Sized>(modes: usize, photons: u32, rng: &mut R) -> FockBasisState {
    let mut occ = vec![0u32; modes];
    for _ in 0..photons {
        occ[rng.random_range(0..modes)] += 1;
    }
    FockBasisState::new(occ)
}

/// Normalized superposition of up to `terms` random kets carrying
/// `photons` photons each.
pub fn random_fock_state<R: Rng + ?Sized>(
    registry: Arc<ModeRegistry>,
    photons: u32,
    terms: usize,
    rng: &mut R,
) -> Result<PureState> {
    let kets: Vec<(FockBasisState, Complex64)> = (0..terms.max(1))
        .map(|_| (random_ket(registry.len(), photons, rng), gaussian(rng)))
        .collect();
    let state = PureState::from_terms(registry, kets)?;
    Ok(state.normalize()?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_samples_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=6 {
            assert!(haar_unitary(n, &mut rng).deviation_from_unitarity() < 1e-12);
        }
    }

    #[test]
    fn amplitudes_are_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = random_product_amplitudes(&mut rng);
        assert!((p.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-12);
        let reg = Arc::new(ModeRegistry::new(["a", "b", "c"]).unwrap());
        let s = random_fock_state(reg, 3, 4, &mut rng).unwrap();
        assert_eq!(s.photon_number(), Some(3));
        assert!((s.norm_squared() - 1.0).abs() < 1e-12);
    }
}

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

//! Multimode bosonic states with bounded photon number.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::{Error, Result, DEFAULT_PHOTON_CAP, EPS, PRUNE_THRESHOLD};

/// Ordered set of mode labels plus the per-mode photon cap.
///
/// Labels follow the `<port><polarization>` naming used throughout the
/// crate (`q1H`, `q1V`, ...) so that polarizing elements can find the
/// partner mode of a port.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeRegistry {
    labels: Vec<String>,
    cap: u32,
}

impl ModeRegistry {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyRegistry);
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(ModeRegistry {
            labels,
            cap: DEFAULT_PHOTON_CAP,
        })
    }

    /// The six modes of the phase gate: `[q1H, q1V, q2H, q2V, loss1, loss2]`.
    pub fn gate_modes() -> Self {
        Self::new(["q1H", "q1V", "q2H", "q2V", "loss1", "loss2"]).expect("static labels are unique")
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = cap;
        self
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.labels.get(index).map(String::as_str)
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.find(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Concatenates two registries with disjoint labels. The smaller cap wins.
    pub fn concat(&self, other: &ModeRegistry) -> Result<ModeRegistry> {
        if let Some(shared) = other.labels.iter().find(|l| self.labels.contains(l)) {
            return Err(Error::OverlappingModes(shared.clone()));
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Ok(ModeRegistry {
            labels,
            cap: self.cap.min(other.cap),
        })
    }

    pub(crate) fn same_modes(&self, other: &ModeRegistry) -> bool {
        self.labels == other.labels
    }
}

/// Occupation-number vector, one entry per registry mode.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockBasisState(Vec<u32>);

impl FockBasisState {
    pub fn new(occupations: Vec<u32>) -> Self {
        FockBasisState(occupations)
    }

    pub fn vacuum(modes: usize) -> Self {
        FockBasisState(alloc::vec![0; modes])
    }

    pub fn occupations(&self) -> &[u32] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, mode: usize) -> u32 {
        self.0[mode]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Sum of occupations over the given mode indices.
    pub fn count_in(&self, modes: &[usize]) -> u32 {
        modes.iter().map(|&m| self.0[m]).sum()
    }

    pub fn check(&self, registry: &ModeRegistry) -> Result<()> {
        if self.0.len() != registry.len() {
            return Err(Error::LengthMismatch {
                expected: registry.len(),
                actual: self.0.len(),
            });
        }
        match self.0.iter().find(|&&n| n > registry.cap()) {
            Some(&count) => Err(Error::CapExceeded {
                count,
                cap: registry.cap(),
            }),
            None => Ok(()),
        }
    }

    fn concat(&self, other: &FockBasisState) -> FockBasisState {
        let mut occ = self.0.clone();
        occ.extend_from_slice(&other.0);
        FockBasisState(occ)
    }
}

impl fmt::Display for FockBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str(">")
    }
}

/// Sparse superposition of Fock basis states over a shared registry.
///
/// Terms are kept in a `BTreeMap`, so iteration order (and therefore any
/// rendered output) is deterministic. Amplitudes below
/// [`PRUNE_THRESHOLD`] are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    registry: Arc<ModeRegistry>,
    terms: BTreeMap<FockBasisState, Complex64>,
}

impl PureState {
    pub fn zero(registry: Arc<ModeRegistry>) -> Self {
        PureState {
            registry,
            terms: BTreeMap::new(),
        }
    }

    pub fn vacuum(registry: Arc<ModeRegistry>) -> Self {
        let n = registry.len();
        let mut terms = BTreeMap::new();
        terms.insert(FockBasisState::vacuum(n), Complex64::new(1.0, 0.0));
        PureState { registry, terms }
    }

    /// Single basis state `|n_1; n_2; ...>` with amplitude 1.
    pub fn basis(registry: Arc<ModeRegistry>, occupations: &[u32]) -> Result<Self> {
        let ket = FockBasisState::new(occupations.to_vec());
        ket.check(&registry)?;
        let mut terms = BTreeMap::new();
        terms.insert(ket, Complex64::new(1.0, 0.0));
        Ok(PureState { registry, terms })
    }

    /// One photon in each listed mode, everything else empty.
    pub fn single_photons(registry: Arc<ModeRegistry>, labels: &[&str]) -> Result<Self> {
        let mut occ = alloc::vec![0u32; registry.len()];
        for label in labels {
            occ[registry.index_of(label)?] += 1;
        }
        Self::basis(registry, &occ)
    }

    /// Builds a state from `(ket, amplitude)` pairs; repeated kets add up.
    pub fn from_terms<I>(registry: Arc<ModeRegistry>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FockBasisState, Complex64)>,
    {
        let mut state = PureState::zero(registry);
        for (ket, amp) in terms {
            ket.check(&state.registry)?;
            *state.terms.entry(ket).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        state.prune();
        Ok(state)
    }

    pub(crate) fn from_map_unchecked(
        registry: Arc<ModeRegistry>,
        terms: BTreeMap<FockBasisState, Complex64>,
    ) -> Self {
        let mut state = PureState { registry, terms };
        state.prune();
        state
    }

    fn prune(&mut self) {
        self.terms.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
    }

    pub fn registry(&self) -> &Arc<ModeRegistry> {
        &self.registry
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockBasisState, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, ket: &FockBasisState) -> Complex64 {
        self.terms
            .get(ket)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Total photon number, if every term carries the same one.
    pub fn photon_number(&self) -> Option<u32> {
        let mut totals = self.terms.keys().map(FockBasisState::total);
        let first = totals.next()?;
        totals.all(|t| t == first).then_some(first)
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &PureState) -> Result<Complex64> {
        if !self.registry.same_modes(&other.registry) {
            return Err(Error::RegistryMismatch);
        }
        let (small, large, conj_small) = if self.terms.len() <= other.terms.len() {
            (&self.terms, &other.terms, true)
        } else {
            (&other.terms, &self.terms, false)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (ket, a) in small {
            if let Some(b) = large.get(ket) {
                acc += if conj_small { a.conj() * b } else { b.conj() * a };
            }
        }
        Ok(acc)
    }

    /// Product state on the concatenated registry.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let registry = Arc::new(self.registry.concat(&other.registry)?);
        let mut terms = BTreeMap::new();
        for (ka, a) in &self.terms {
            for (kb, b) in &other.terms {
                let ket = ka.concat(kb);
                ket.check(&registry)?;
                terms.insert(ket, a * b);
            }
        }
        Ok(PureState::from_map_unchecked(registry, terms))
    }

    pub fn norm_squared(&self) -> f64 {
        self.terms.values().map(Complex64::norm_sqr).sum()
    }

    /// Returns the unit-norm state together with the original squared norm.
    pub fn normalize(&self) -> Result<(PureState, f64)> {
        let n2 = self.norm_squared();
        if n2 < EPS * EPS {
            return Err(Error::ZeroState);
        }
        Ok((self.scale(Complex64::new(1.0 / libm::sqrt(n2), 0.0)), n2))
    }

    pub fn scale(&self, factor: Complex64) -> PureState {
        let terms = self
            .terms
            .iter()
            .map(|(k, a)| (k.clone(), a * factor))
            .collect();
        PureState::from_map_unchecked(self.registry.clone(), terms)
    }

    /// Amplitude-wise sum `self + other`.
    pub fn add(&self, other: &PureState) -> Result<PureState> {
        if !self.registry.same_modes(&other.registry) {
            return Err(Error::RegistryMismatch);
        }
        let mut terms = self.terms.clone();
        for (k, a) in &other.terms {
            *terms.entry(k.clone()).or_insert(Complex64::new(0.0, 0.0)) += a;
        }
        Ok(PureState::from_map_unchecked(self.registry.clone(), terms))
    }

    /// Keeps only the terms whose basis state satisfies `keep`.
    pub fn project<F>(&self, mut keep: F) -> PureState
    where
        F: FnMut(&FockBasisState) -> bool,
    {
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| keep(k))
            .map(|(k, a)| (k.clone(), *a))
            .collect();
        PureState {
            registry: self.registry.clone(),
            terms,
        }
    }

    /// Largest amplitude difference over the union of both supports.
    pub fn max_deviation(&self, other: &PureState) -> Result<f64> {
        if !self.registry.same_modes(&other.registry) {
            return Err(Error::RegistryMismatch);
        }
        let mut worst = 0.0f64;
        for (k, a) in &self.terms {
            worst = worst.max((a - other.amplitude(k)).norm());
        }
        for (k, b) in &other.terms {
            if !self.terms.contains_key(k) {
                worst = worst.max(b.norm());
            }
        }
        Ok(worst)
    }
}

impl fmt::Display for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (ket, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:.6}{:+.6}i){}", a.re, a.im, ket)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn reg(n: usize) -> Arc<ModeRegistry> {
        let labels: Vec<String> = (0..n).map(|i| alloc::format!("m{i}")).collect();
        Arc::new(ModeRegistry::new(labels).unwrap())
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn registry_rejects_duplicates_and_empty() {
        assert_eq!(
            ModeRegistry::new(["a", "b", "a"]),
            Err(Error::DuplicateLabel("a".into()))
        );
        assert_eq!(
            ModeRegistry::new(Vec::<String>::new()),
            Err(Error::EmptyRegistry)
        );
        let r = ModeRegistry::gate_modes();
        assert_eq!(r.index_of("q2V"), Ok(3));
        assert_eq!(r.index_of("loss2"), Ok(5));
        assert!(r.index_of("q3H").is_err());
    }

    #[test]
    fn vacuum_has_unit_norm() {
        let s = PureState::basis(reg(4), &[0, 0, 0, 0]).unwrap();
        assert_eq!(s, PureState::vacuum(reg(4)));
        assert_eq!(s.norm_squared(), 1.0);
        assert_eq!(s.photon_number(), Some(0));
    }

    #[test]
    fn basis_state_validation() {
        let s = PureState::basis(reg(2), &[1, 1]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.amplitude(&FockBasisState::new(vec![1, 1])), c(1.0, 0.0));
        assert_eq!(
            PureState::basis(reg(2), &[0, 5]),
            Err(Error::CapExceeded { count: 5, cap: 4 })
        );
        assert_eq!(
            PureState::basis(reg(2), &[1]),
            Err(Error::LengthMismatch {
                expected: 2,
                actual: 1
            })
        );
        let wide = Arc::new(ModeRegistry::new(["a", "b"]).unwrap().with_cap(6));
        assert!(PureState::basis(wide, &[0, 5]).is_ok());
    }

    #[test]
    fn orthonormal_basis() {
        let a = PureState::basis(reg(2), &[1, 0]).unwrap();
        let b = PureState::basis(reg(2), &[0, 1]).unwrap();
        assert_eq!(a.inner_product(&a).unwrap(), c(1.0, 0.0));
        assert_eq!(a.inner_product(&b).unwrap(), c(0.0, 0.0));
        assert_eq!(
            a.inner_product(&PureState::vacuum(reg(3))),
            Err(Error::RegistryMismatch)
        );
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_first_argument() {
        let k = PureState::basis(reg(1), &[1]).unwrap();
        let a = k.scale(c(0.0, 2.0));
        let b = k.scale(c(3.0, 0.0));
        assert_eq!(a.inner_product(&b).unwrap(), c(0.0, -6.0));
        assert_eq!(b.inner_product(&a).unwrap(), c(0.0, 6.0));
    }

    #[test]
    fn tensor_products() {
        let ra = Arc::new(ModeRegistry::new(["a1", "a2"]).unwrap());
        let rb = Arc::new(ModeRegistry::new(["b1", "b2"]).unwrap());
        let vv = PureState::vacuum(ra.clone())
            .tensor(&PureState::vacuum(rb.clone()))
            .unwrap();
        assert_eq!(vv.registry().len(), 4);
        assert_eq!(vv.amplitude(&FockBasisState::vacuum(4)), c(1.0, 0.0));

        let alpha = c(0.6, 0.0);
        let beta = c(0.0, 0.5);
        let sup = PureState::vacuum(ra.clone())
            .scale(alpha)
            .add(&PureState::basis(ra.clone(), &[0, 1]).unwrap().scale(beta))
            .unwrap();
        let t = sup.tensor(&PureState::vacuum(rb.clone())).unwrap();
        assert_eq!(t.len(), 2);
        assert!((t.norm_squared() - 0.61).abs() < EPS);

        assert_eq!(
            sup.tensor(&PureState::vacuum(ra)),
            Err(Error::OverlappingModes("a1".into()))
        );
    }

    #[test]
    fn normalize_round_trip_and_zero() {
        let s = PureState::basis(reg(2), &[1, 1]).unwrap().scale(c(1.0 / 3.0, 0.0));
        assert!((s.norm_squared() - 1.0 / 9.0).abs() < EPS);
        let (n, p) = s.normalize().unwrap();
        assert!((p - 1.0 / 9.0).abs() < EPS);
        assert!((n.norm_squared() - 1.0).abs() < EPS);
        assert_eq!(PureState::zero(reg(2)).normalize(), Err(Error::ZeroState));
    }

    #[test]
    fn cancelling_terms_are_pruned() {
        let k = PureState::basis(reg(2), &[2, 0]).unwrap();
        let sum = k.add(&k.scale(c(-1.0, 0.0))).unwrap();
        assert!(sum.is_empty());
        assert_eq!(sum.photon_number(), None);
    }

    #[test]
    fn display_format() {
        let k = PureState::basis(reg(2), &[1, 0]).unwrap();
        assert_eq!(alloc::format!("{k}"), "(1.000000+0.000000i)|1;0>");
    }
}

//! Multimode states as finite superpositions of coherent/Fock product kets.
//!
//! A [`HybridState`] is a list of [`ProductTerm`]s. Every mode factor of a
//! term is either a coherent ket `|α⟩` or a Fock ket `|n⟩`. All algebra is
//! exact in the coherent amplitudes: overlaps use the closed forms
//!
//! ```text
//! ⟨α|β⟩ = exp(−|α|²/2 − |β|²/2 + α*β)
//! ⟨n|α⟩ = exp(−|α|²/2) αⁿ / √n!
//! ⟨m|n⟩ = δ_mn
//! ```
//!
//! Coherent–coherent factors of a term pair are accumulated in the exponent
//! before a single `exp`, so products like `e^{−600}·e^{+600}` that appear for
//! large amplitudes never pass through an underflowed intermediate.
//!
//! States are immutable values; every operation returns a new state.

mod text;

use crate::error::{EcsError, Result};
use num_complex::Complex64;

pub type C64 = Complex64;

/// Largest photon number a Fock factor may carry.
pub const FOCK_CAP: u32 = 4;

/// Default amplitude distance under which two coherent factors are merged.
pub const MERGE_TOL: f64 = 1e-12;

/// Norms at or below this are treated as the zero vector.
pub const ZERO_NORM: f64 = 1e-14;

/// One mode factor of a product term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KetFactor {
    /// `|α⟩`
    Coherent(C64),
    /// `|n⟩`
    Fock(u32),
}

impl KetFactor {
    pub fn vacuum() -> Self {
        KetFactor::Coherent(C64::new(0.0, 0.0))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            KetFactor::Coherent(_) => "Coherent",
            KetFactor::Fock(_) => "Fock",
        }
    }

    pub fn is_coherent(&self) -> bool {
        matches!(self, KetFactor::Coherent(_))
    }

    /// `⟨self|ket⟩` split as `prefactor · exp(exponent)`.
    fn overlap_parts(&self, ket: &KetFactor) -> (C64, C64) {
        use KetFactor::*;
        match (*self, *ket) {
            (Coherent(a), Coherent(b)) => (
                C64::new(1.0, 0.0),
                -0.5 * a.norm_sqr() - 0.5 * b.norm_sqr() + a.conj() * b,
            ),
            (Fock(m), Fock(n)) => (
                C64::new(if m == n { 1.0 } else { 0.0 }, 0.0),
                C64::new(0.0, 0.0),
            ),
            (Fock(n), Coherent(a)) => (
                a.powu(n) / factorial(n).sqrt(),
                C64::new(-0.5 * a.norm_sqr(), 0.0),
            ),
            (Coherent(a), Fock(n)) => (
                a.conj().powu(n) / factorial(n).sqrt(),
                C64::new(-0.5 * a.norm_sqr(), 0.0),
            ),
        }
    }

    /// `⟨self|ket⟩`
    pub fn overlap(&self, ket: &KetFactor) -> C64 {
        let (pre, expo) = self.overlap_parts(ket);
        pre * expo.exp()
    }

    fn close_to(&self, other: &KetFactor, eps: f64) -> bool {
        match (self, other) {
            (KetFactor::Coherent(a), KetFactor::Coherent(b)) => {
                if eps == 0.0 {
                    a == b
                } else {
                    (a - b).norm() <= eps
                }
            }
            (KetFactor::Fock(m), KetFactor::Fock(n)) => m == n,
            _ => false,
        }
    }
}

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// A coefficient times a tensor product of one factor per mode.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductTerm {
    pub coefficient: C64,
    pub factors: Vec<KetFactor>,
}

impl ProductTerm {
    pub fn new(coefficient: C64, factors: Vec<KetFactor>) -> Self {
        ProductTerm {
            coefficient,
            factors,
        }
    }

    /// `⟨self|ket⟩` including both coefficients.
    pub(crate) fn overlap(&self, ket: &ProductTerm) -> C64 {
        let mut pre = self.coefficient.conj() * ket.coefficient;
        let mut expo = C64::new(0.0, 0.0);
        for (f, g) in self.factors.iter().zip(&ket.factors) {
            let (p, e) = f.overlap_parts(g);
            pre *= p;
            if pre == C64::new(0.0, 0.0) {
                return pre;
            }
            expo += e;
        }
        pre * expo.exp()
    }
}

/// Finite superposition of product terms over a fixed number of modes.
#[derive(Clone, Debug, PartialEq)]
pub struct HybridState {
    modes: usize,
    terms: Vec<ProductTerm>,
}

impl HybridState {
    /// Builds a state, validating arity, finiteness and the photon cap.
    pub fn new(modes: usize, terms: Vec<ProductTerm>) -> Result<Self> {
        if modes == 0 {
            return Err(EcsError::InvalidParameter("a state needs at least one mode".into()));
        }
        for term in &terms {
            if term.factors.len() != modes {
                return Err(EcsError::Dimension {
                    expected: modes,
                    found: term.factors.len(),
                });
            }
            if !(term.coefficient.re.is_finite() && term.coefficient.im.is_finite()) {
                return Err(EcsError::InvalidParameter(format!(
                    "non-finite coefficient {}",
                    term.coefficient
                )));
            }
            for f in &term.factors {
                match *f {
                    KetFactor::Fock(n) if n > FOCK_CAP => {
                        return Err(EcsError::FockCap {
                            photons: n,
                            cap: FOCK_CAP,
                        })
                    }
                    KetFactor::Coherent(a) if !(a.re.is_finite() && a.im.is_finite()) => {
                        return Err(EcsError::InvalidParameter(format!(
                            "non-finite coherent amplitude {a}"
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(HybridState { modes, terms })
    }

    /// Internal constructor for element code that preserves the invariants by construction.
    pub(crate) fn from_parts(modes: usize, terms: Vec<ProductTerm>) -> Self {
        debug_assert!(terms.iter().all(|t| t.factors.len() == modes));
        HybridState { modes, terms }
    }

    /// Single product ket with unit coefficient.
    pub fn product(factors: Vec<KetFactor>) -> Result<Self> {
        let modes = factors.len();
        Self::new(modes, vec![ProductTerm::new(C64::new(1.0, 0.0), factors)])
    }

    pub fn coherent(amplitudes: &[C64]) -> Result<Self> {
        Self::product(amplitudes.iter().map(|&a| KetFactor::Coherent(a)).collect())
    }

    pub fn fock(photons: &[u32]) -> Result<Self> {
        Self::product(photons.iter().map(|&n| KetFactor::Fock(n)).collect())
    }

    /// Coherent vacuum on every mode.
    pub fn vacuum(modes: usize) -> Result<Self> {
        Self::product(vec![KetFactor::vacuum(); modes])
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn terms(&self) -> &[ProductTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn into_terms(self) -> Vec<ProductTerm> {
        self.terms
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode < self.modes {
            Ok(())
        } else {
            Err(EcsError::ModeIndex {
                index: mode,
                modes: self.modes,
            })
        }
    }

    pub(crate) fn check_arity(&self, other: &HybridState) -> Result<()> {
        if self.modes == other.modes {
            Ok(())
        } else {
            Err(EcsError::Dimension {
                expected: self.modes,
                found: other.modes,
            })
        }
    }

    /// `⟨self|ket⟩`
    pub fn overlap(&self, ket: &HybridState) -> Result<C64> {
        self.check_arity(ket)?;
        let mut sum = C64::new(0.0, 0.0);
        for a in &self.terms {
            for b in &ket.terms {
                sum += a.overlap(b);
            }
        }
        Ok(sum)
    }

    pub fn norm_sqr(&self) -> f64 {
        // Arity always matches itself.
        self.overlap(self).map(|z| z.re.max(0.0)).unwrap_or(0.0)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Copy with every coefficient multiplied by `c`.
    pub fn scaled(&self, c: C64) -> HybridState {
        let terms = self
            .terms
            .iter()
            .map(|t| ProductTerm::new(t.coefficient * c, t.factors.clone()))
            .collect();
        HybridState::from_parts(self.modes, terms)
    }

    /// Rescales to unit norm.
    pub fn normalize(&self) -> Result<HybridState> {
        let n = self.norm();
        if !(n > ZERO_NORM) {
            return Err(EcsError::DegenerateState);
        }
        Ok(self.scaled(C64::new(1.0 / n, 0.0)))
    }

    /// `ca·self + cb·other`, no normalization.
    pub fn superpose(&self, other: &HybridState, ca: C64, cb: C64) -> Result<HybridState> {
        self.check_arity(other)?;
        let mut terms = self.scaled(ca).terms;
        terms.extend(other.scaled(cb).terms);
        Ok(HybridState::from_parts(self.modes, terms))
    }

    /// `self ⊗ other`; modes of `other` follow those of `self`.
    pub fn tensor(&self, other: &HybridState) -> HybridState {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut factors = a.factors.clone();
                factors.extend_from_slice(&b.factors);
                terms.push(ProductTerm::new(a.coefficient * b.coefficient, factors));
            }
        }
        HybridState::from_parts(self.modes + other.modes, terms)
    }

    /// `|⟨a|b⟩|² / (⟨a|a⟩⟨b|b⟩)`
    pub fn fidelity(&self, other: &HybridState) -> Result<f64> {
        self.check_arity(other)?;
        let na = self.norm_sqr();
        let nb = other.norm_sqr();
        if !(na.sqrt() > ZERO_NORM && nb.sqrt() > ZERO_NORM) {
            return Err(EcsError::DegenerateState);
        }
        let f = self.overlap(other)?.norm_sqr() / (na * nb);
        Ok(f.min(1.0))
    }

    /// Merges terms whose factors agree within `eps` and drops terms with `|coefficient| < eps`.
    pub fn prune(&self, eps: f64) -> HybridState {
        let eps = eps.max(0.0);
        let mut merged: Vec<ProductTerm> = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let slot = merged.iter_mut().find(|m| {
                m.factors
                    .iter()
                    .zip(&term.factors)
                    .all(|(f, g)| f.close_to(g, eps))
            });
            match slot {
                Some(m) => m.coefficient += term.coefficient,
                None => merged.push(term.clone()),
            }
        }
        merged.retain(|t| t.coefficient.norm() >= eps);
        HybridState::from_parts(self.modes, merged)
    }

    /// Replaces every term by the terms `f` produces for it.
    pub(crate) fn map_terms<F>(&self, mut f: F) -> Result<HybridState>
    where
        F: FnMut(&ProductTerm) -> Result<Vec<ProductTerm>>,
    {
        let mut out = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            out.extend(f(t)?);
        }
        Ok(HybridState::from_parts(self.modes, out))
    }

    /// Errors unless every term holds a coherent factor at `mode`.
    pub(crate) fn require_coherent(&self, mode: usize) -> Result<()> {
        self.check_mode(mode)?;
        for t in &self.terms {
            if let KetFactor::Fock(_) = t.factors[mode] {
                return Err(EcsError::UnsupportedKind {
                    mode,
                    required: "Coherent",
                    found: "Fock",
                });
            }
        }
        Ok(())
    }

    pub(crate) fn require_fock(&self, mode: usize) -> Result<()> {
        self.check_mode(mode)?;
        for t in &self.terms {
            if let KetFactor::Coherent(_) = t.factors[mode] {
                return Err(EcsError::UnsupportedKind {
                    mode,
                    required: "Fock",
                    found: "Coherent",
                });
            }
        }
        Ok(())
    }

    /// Largest coherent amplitude modulus appearing on each mode.
    pub fn max_amplitudes(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.modes];
        for t in &self.terms {
            for (m, f) in t.factors.iter().enumerate() {
                if let KetFactor::Coherent(a) = f {
                    out[m] = f64::max(out[m], a.norm());
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn coh(a: f64) -> HybridState {
        HybridState::coherent(&[c(a, 0.0)]).unwrap()
    }

    #[test]
    fn overlap_examples() {
        let one = coh(1.0);
        assert!((one.overlap(&one).unwrap() - c(1.0, 0.0)).norm() < 1e-15);

        let f0 = HybridState::fock(&[0]).unwrap();
        assert!((f0.overlap(&coh(0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let v = f0.overlap(&coh(2.0)).unwrap();
        assert!((v.re - E.powi(-2)).abs() < 1e-15 && v.im.abs() < 1e-15);
        assert!((v.re - 0.135335).abs() < 1e-6);
    }

    #[test]
    fn fock_coherent_overlap_matches_series() {
        let a = c(0.7, -0.4);
        let k = KetFactor::Coherent(a);
        for n in 0..=FOCK_CAP {
            let direct = KetFactor::Fock(n).overlap(&k);
            let expect = (-0.5 * a.norm_sqr()).exp() * a.powu(n) / factorial(n).sqrt();
            assert!((direct - expect).norm() < 1e-15);
            assert!((k.overlap(&KetFactor::Fock(n)) - expect.conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn norm_examples() {
        assert!((coh(1.0).norm() - 1.0).abs() < 1e-15);
        let cat = coh(1.0).superpose(&coh(-1.0), c(1.0, 0.0), c(-1.0, 0.0)).unwrap();
        let expect = (2.0 - 2.0 * E.powi(-2)).sqrt();
        assert!((cat.norm() - expect).abs() < 1e-14);
        assert!((cat.norm() - 1.315040).abs() < 1e-6);
    }

    #[test]
    fn normalize_examples() {
        let two = HybridState::fock(&[0]).unwrap().scaled(c(2.0, 0.0));
        let n = two.normalize().unwrap();
        assert!((n.terms()[0].coefficient - c(1.0, 0.0)).norm() < 1e-15);

        let w_fock = HybridState::fock(&[1, 0, 0])
            .unwrap()
            .superpose(&HybridState::fock(&[0, 1, 0]).unwrap(), c(1.0, 0.0), c(1.0, 0.0))
            .unwrap()
            .superpose(&HybridState::fock(&[0, 0, 1]).unwrap(), c(1.0, 0.0), c(1.0, 0.0))
            .unwrap()
            .normalize()
            .unwrap();
        for t in w_fock.terms() {
            assert!((t.coefficient.re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        }

        for alpha in [0.3, 1.0, 2.5] {
            let a = c(alpha, 0.0);
            let z = c(0.0, 0.0);
            let w = HybridState::coherent(&[a, z, z])
                .unwrap()
                .superpose(&HybridState::coherent(&[z, a, z]).unwrap(), c(1.0, 0.0), c(1.0, 0.0))
                .unwrap()
                .superpose(&HybridState::coherent(&[z, z, a]).unwrap(), c(1.0, 0.0), c(1.0, 0.0))
                .unwrap()
                .normalize()
                .unwrap();
            let expect = 1.0 / (3.0 + 6.0 * (-alpha * alpha).exp()).sqrt();
            for t in w.terms() {
                assert!((t.coefficient.re - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn normalize_rejects_zero_state() {
        let s = coh(1.0);
        let zero = s.superpose(&s, c(1.0, 0.0), c(-1.0, 0.0)).unwrap();
        assert!(zero.norm() < 1e-12);
        assert_eq!(zero.normalize(), Err(EcsError::DegenerateState));
    }

    #[test]
    fn superpose_and_tensor_arity() {
        let one = coh(1.0);
        let two = HybridState::vacuum(2).unwrap();
        assert!(matches!(
            one.superpose(&two, c(1.0, 0.0), c(1.0, 0.0)),
            Err(EcsError::Dimension { .. })
        ));
        let t = HybridState::fock(&[1]).unwrap().tensor(&coh(0.5));
        assert_eq!(t.modes(), 2);
        assert_eq!(t.len(), 1);
        let vv = HybridState::vacuum(1).unwrap().tensor(&HybridState::vacuum(1).unwrap());
        assert_eq!(vv.terms()[0].factors, vec![KetFactor::vacuum(); 2]);
    }

    #[test]
    fn fidelity_examples() {
        let s = coh(0.8);
        assert!((s.fidelity(&s).unwrap() - 1.0).abs() < 1e-15);
        let f = coh(1.0).fidelity(&coh(-1.0)).unwrap();
        assert!((f - E.powi(-4)).abs() < 1e-15);
        assert!((f - 0.018316).abs() < 1e-6);
    }

    #[test]
    fn prune_merges_and_drops() {
        let f = vec![KetFactor::Coherent(c(0.5, 0.1))];
        let s = HybridState::new(
            1,
            vec![
                ProductTerm::new(c(0.5, 0.0), f.clone()),
                ProductTerm::new(c(0.5, 0.0), f.clone()),
            ],
        )
        .unwrap();
        let p = s.prune(MERGE_TOL);
        assert_eq!(p.len(), 1);
        assert!((p.terms()[0].coefficient - c(1.0, 0.0)).norm() < 1e-15);

        // eps = 0 merges only bit-identical factors.
        let near = HybridState::new(
            1,
            vec![
                ProductTerm::new(c(0.5, 0.0), f.clone()),
                ProductTerm::new(c(0.5, 0.0), vec![KetFactor::Coherent(c(0.5 + 1e-15, 0.1))]),
            ],
        )
        .unwrap();
        assert_eq!(near.prune(0.0).len(), 2);
        assert_eq!(near.prune(MERGE_TOL).len(), 1);
    }

    #[test]
    fn new_validates() {
        assert!(matches!(HybridState::fock(&[5]), Err(EcsError::FockCap { .. })));
        assert!(HybridState::new(
            2,
            vec![ProductTerm::new(c(1.0, 0.0), vec![KetFactor::vacuum()])]
        )
        .is_err());
        assert!(HybridState::new(
            1,
            vec![ProductTerm::new(c(f64::NAN, 0.0), vec![KetFactor::vacuum()])]
        )
        .is_err());
    }
}

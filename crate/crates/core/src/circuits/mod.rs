//! State-preparation pipelines and reference states.
//!
//! All beam splitters here use `φ = π`, for which the coherent map sends
//! `|α⟩|0⟩ → |tα⟩|rα⟩` and single photons split with non-negative amplitudes.
//!
//! W-circuit mode layout: `[1′, 2′, 3′, f1, f2, f3]`, photon modes first. The
//! single photon enters on `3′`; BS1 `(3′, 1′)` and BS2 `(3′, 2′)` leave the
//! amplitudes `(√(2/5), √(2/5), √(1/5))`. Photon mode `k` drives a cross-Kerr
//! phase on field mode `k`. BS5 mixes `(1′, 2′)`: its `1′` output carries the
//! antisymmetric combination and feeds detector A. BS6 mixes `(3′, 2′)`: the
//! `2′` output (detector B) carries the symmetric sum of all three field kets,
//! `3′` (detector C) the sum with the third sign flipped. With
//! `E = e^{−4|α|²}`, `α = γ(e^{iθ} − 1)/2`:
//!
//! ```text
//! P(A) = (2 − 2E)/5     P(B) = (3 + 6E)/10     P(C) = (3 − 2E)/10
//! ```

use crate::elements::{
    apply_beam_splitter, apply_cross_kerr, apply_displacement, BeamSplitterSpec, CrossKerrSpec,
    DisplacementSpec,
};
use crate::error::{EcsError, Result};
use crate::measure::{threshold_detect, GhzSign, SMALL_ALPHA};
use crate::states::{HybridState, KetFactor, ProductTerm, C64};
use std::f64::consts::{FRAC_PI_2, PI};

/// Fidelity above which a heralded state is identified with a reference.
pub const MATCH_FIDELITY: f64 = 1.0 - 1e-9;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Normalized `c₁|α⟩ + c₂|−α⟩`.
pub fn css(alpha: C64, c1: C64, c2: C64) -> Result<HybridState> {
    let plus = HybridState::coherent(&[alpha])?;
    let minus = HybridState::coherent(&[-alpha])?;
    plus.superpose(&minus, c1, c2)?.normalize()
}

/// Normalized `c₁|α,…,α⟩ + c₂|−α,…,−α⟩` on `n` modes.
pub fn ghz_reference(alpha: C64, c1: C64, c2: C64, n: usize) -> Result<HybridState> {
    let plus = HybridState::coherent(&vec![alpha; n])?;
    let minus = HybridState::coherent(&vec![-alpha; n])?;
    plus.superpose(&minus, c1, c2)?.normalize()
}

/// `(|1,0,…⟩ + |0,1,…⟩ + … )/√n` in the Fock basis.
pub fn w_fock(n: usize) -> Result<HybridState> {
    let terms = (0..n)
        .map(|k| {
            let factors = (0..n).map(|m| KetFactor::Fock((m == k) as u32)).collect();
            ProductTerm::new(C64::new(1.0 / (n as f64).sqrt(), 0.0), factors)
        })
        .collect();
    HybridState::new(n, terms)
}

/// Splits mode 0 evenly over `n` modes with `n − 1` beam splitters, `r_k = 1/√(n − k + 1)`.
fn split_evenly(mut s: HybridState, n: usize) -> Result<HybridState> {
    for k in 1..n {
        let r = 1.0 / ((n - k + 1) as f64).sqrt();
        s = apply_beam_splitter(&s, &BeamSplitterSpec::with_reflectivity(r, PI, 0, k)?)?;
    }
    Ok(s)
}

/// A cat state `|√n α⟩ ± |−√n α⟩` split over `n` modes.
///
/// For the minus sign with `|α| < SMALL_ALPHA` the source is the single
/// photon the odd cat tends to, giving the Fock W state.
pub fn generate_ghz(alpha: C64, sign: GhzSign, n: usize) -> Result<HybridState> {
    if n < 2 {
        return Err(EcsError::InvalidParameter(format!("GHZ needs at least 2 modes, got {n}")));
    }
    let source = if sign == GhzSign::Minus && alpha.norm() < SMALL_ALPHA {
        let mut photons = vec![0; n];
        photons[0] = 1;
        HybridState::fock(&photons)?
    } else {
        let cat = css(alpha * (n as f64).sqrt(), one(), C64::new(sign.factor(), 0.0))?;
        cat.tensor(&HybridState::vacuum(n - 1)?)
    };
    split_evenly(source, n)
}

/// Normalized `a₁|α,−α,−α⟩ + a₂|−α,α,−α⟩ + a₃|−α,−α,α⟩`.
pub fn w_reference(alpha: C64, a1: C64, a2: C64, a3: C64) -> Result<HybridState> {
    let terms = [a1, a2, a3]
        .iter()
        .enumerate()
        .map(|(k, &a)| {
            let factors = (0..3)
                .map(|m| KetFactor::Coherent(if m == k { alpha } else { -alpha }))
                .collect();
            ProductTerm::new(a, factors)
        })
        .collect();
    HybridState::new(3, terms)?.normalize()
}

/// Normalized `|α,0,0⟩ + |0,α,0⟩ + |0,0,α⟩`.
pub fn w_logical(alpha: C64) -> Result<HybridState> {
    let zero = C64::new(0.0, 0.0);
    let terms = (0..3)
        .map(|k| {
            let factors = (0..3)
                .map(|m| KetFactor::Coherent(if m == k { alpha } else { zero }))
                .collect();
            ProductTerm::new(one(), factors)
        })
        .collect();
    HybridState::new(3, terms)?.normalize()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WCircuitSpec {
    /// Coherent amplitude reaching each field mode.
    pub gamma: C64,
    /// Cross-Kerr phase `χt`.
    pub theta: f64,
    pub apply_final_displacement: bool,
}

impl WCircuitSpec {
    pub fn effective_alpha(&self) -> C64 {
        self.gamma * (C64::from_polar(1.0, self.theta) - one()) * 0.5
    }

    /// `x = −(γ + γe^{iθ})/2`
    pub fn displacement(&self) -> C64 {
        -(self.gamma + self.gamma * C64::from_polar(1.0, self.theta)) * 0.5
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Detector {
    A,
    B,
    C,
}

impl Detector {
    pub const ALL: [Detector; 3] = [Detector::A, Detector::B, Detector::C];

    fn photon_mode(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeraldedOutcome {
    pub detector: Detector,
    pub probability: f64,
    /// Collapsed, normalized state of the three field modes.
    pub state: HybridState,
    pub is_w_type: bool,
    /// Sign pattern of the matching W reference, normalized so the first entry is `+1`.
    pub sign_pattern: Option<[i8; 3]>,
}

/// The four sign patterns inequivalent under a global sign.
pub const SIGN_PATTERNS: [[i8; 3]; 4] = [[1, 1, 1], [1, 1, -1], [1, -1, 1], [1, -1, -1]];

/// Matches a displaced three-mode state against the W references.
pub fn classify_w_state(state: &HybridState, alpha: C64) -> (bool, Option<[i8; 3]>) {
    if state.modes() != 3 || alpha.norm() == 0.0 {
        return (false, None);
    }
    for pattern in SIGN_PATTERNS {
        let c = |s: i8| C64::new(s as f64, 0.0);
        let Ok(reference) = w_reference(alpha, c(pattern[0]), c(pattern[1]), c(pattern[2])) else {
            continue;
        };
        if matches!(state.fidelity(&reference), Ok(f) if f >= MATCH_FIDELITY) {
            return (true, Some(pattern));
        }
    }
    (false, None)
}

pub fn classify_w_outcome(outcome: &HeraldedOutcome, alpha: C64) -> (bool, Option<[i8; 3]>) {
    classify_w_state(&outcome.state, alpha)
}

/// Splits `|√3 γ⟩` into `|γ, γ, γ⟩` with BS3 and BS4.
pub fn field_source(gamma: C64) -> Result<HybridState> {
    let s = HybridState::coherent(&[gamma * 3f64.sqrt(), C64::new(0.0, 0.0), C64::new(0.0, 0.0)])?;
    split_evenly(s, 3)
}

/// Single photon through BS1 and BS2 on the three photon modes.
pub fn photon_source(photon: bool) -> Result<HybridState> {
    let s = HybridState::fock(&[0, 0, photon as u32])?;
    let bs1 = BeamSplitterSpec::with_reflectivity((2.0f64 / 5.0).sqrt(), PI, 2, 0)?;
    let bs2 = BeamSplitterSpec::with_reflectivity((2.0f64 / 3.0).sqrt(), PI, 2, 1)?;
    apply_beam_splitter(&apply_beam_splitter(&s, &bs1)?, &bs2)
}

/// Six-mode state just before the detectors.
///
/// `photon = false` models a source that failed to emit: the field modes stay
/// in `|γ,γ,γ⟩` and no detector can click.
pub fn pre_detection_state(spec: &WCircuitSpec, photon: bool) -> Result<HybridState> {
    let mut s = photon_source(photon)?.tensor(&field_source(spec.gamma)?);
    for k in 0..3 {
        s = apply_cross_kerr(&s, &CrossKerrSpec::new(k, 3 + k, spec.theta)?)?;
    }
    let bs5 = BeamSplitterSpec::new(FRAC_PI_2, PI, 0, 1)?;
    let bs6 = BeamSplitterSpec::new(FRAC_PI_2, PI, 2, 1)?;
    apply_beam_splitter(&apply_beam_splitter(&s, &bs5)?, &bs6)
}

/// Runs the heralded W-state circuit and returns the A, B and C outcomes.
pub fn run_w_circuit(spec: &WCircuitSpec) -> Result<Vec<HeraldedOutcome>> {
    if spec.theta == 0.0 {
        return Err(EcsError::InvalidParameter("cross-Kerr phase must be nonzero".into()));
    }
    let s = pre_detection_state(spec, true)?;
    let alpha = spec.effective_alpha();
    let x = spec.displacement();
    let mut out = Vec::with_capacity(3);
    for det in Detector::ALL {
        // Detect the three photon modes in order; the remaining state shrinks by one mode each time.
        let mut state = s.clone();
        let mut probability = 1.0;
        for m in 0..3 {
            let want_click = m == det.photon_mode();
            let branch = threshold_detect(&state, 0)?
                .into_iter()
                .find(|b| b.click == want_click)
                .expect("detection yields both branches");
            probability *= branch.probability;
            state = match branch.state {
                Some(st) => st,
                None => return Err(EcsError::DegenerateState),
            };
        }
        let displaced_modes: &[usize] = if det == Detector::A { &[0, 1] } else { &[0, 1, 2] };
        let mut displaced = state.clone();
        for &mode in displaced_modes {
            displaced = apply_displacement(&displaced, &DisplacementSpec { mode, beta: x })?;
        }
        let (is_w_type, sign_pattern) = classify_w_state(&displaced, alpha);
        out.push(HeraldedOutcome {
            detector: det,
            probability,
            state: if spec.apply_final_displacement { displaced } else { state },
            is_w_type,
            sign_pattern,
        });
    }
    Ok(out)
}

/// Exact branch probabilities `(P(A), P(B), P(C))`.
pub fn w_branch_probabilities(alpha: C64) -> (f64, f64, f64) {
    let e = (-4.0 * alpha.norm_sqr()).exp();
    ((2.0 - 2.0 * e) / 5.0, (3.0 + 6.0 * e) / 10.0, (3.0 - 2.0 * e) / 10.0)
}

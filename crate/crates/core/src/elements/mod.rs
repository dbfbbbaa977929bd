//! Unitary optical elements acting on [`HybridState`]s.
//!
//! Beam splitter convention: the element is `exp{θ/2 (e^{iφ} a†b − e^{−iφ} b†a)}`
//! with `r = sin(θ/2)`, `t = cos(θ/2)`. Conjugating the creation operators by
//! it gives
//!
//! ```text
//! a† → t a† − r e^{−iφ} b†        b† → r e^{iφ} a† + t b†
//! ```
//!
//! so a coherent pair `|α⟩|β⟩` maps to `|tα + e^{iφ}rβ⟩|−e^{−iφ}rα + tβ⟩`, and
//! Fock pairs expand binomially under the same substitution. The
//! truncated-Fock oracle builds the same element by matrix exponential of the
//! generator and is used to check this map.
//!
//! Displacement carries the phase `D(β)|γ⟩ = e^{(βγ* − β*γ)/2}|γ + β⟩`.
//! The π-Kerr gate is applied through `|α⟩ → e^{−iπ/4}(|α⟩ + i|−α⟩)/√2`,
//! which is exact for coherent inputs.

mod script;

pub use script::{parse_circuit, Element};

use crate::error::{EcsError, Result};
use crate::states::{factorial, HybridState, KetFactor, ProductTerm, C64, FOCK_CAP, MERGE_TOL};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

/// Fock amplitudes below this are discarded after a beam-splitter expansion.
const FOCK_AMPLITUDE_FLOOR: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BeamSplitterSpec {
    pub theta: f64,
    pub phi: f64,
    pub mode_a: usize,
    pub mode_b: usize,
}

impl BeamSplitterSpec {
    pub fn new(theta: f64, phi: f64, mode_a: usize, mode_b: usize) -> Result<Self> {
        if mode_a == mode_b {
            return Err(EcsError::InvalidParameter(format!(
                "beam splitter needs two distinct modes, got {mode_a} twice"
            )));
        }
        if !(theta.is_finite() && phi.is_finite()) {
            return Err(EcsError::InvalidParameter("non-finite beam splitter angle".into()));
        }
        Ok(BeamSplitterSpec {
            theta,
            phi,
            mode_a,
            mode_b,
        })
    }

    /// Beam splitter with reflectivity `r ∈ [0, 1]`.
    pub fn with_reflectivity(r: f64, phi: f64, mode_a: usize, mode_b: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(EcsError::InvalidParameter(format!("reflectivity {r} outside [0, 1]")));
        }
        Self::new(2.0 * r.asin(), phi, mode_a, mode_b)
    }

    pub fn reflectivity(&self) -> f64 {
        (self.theta / 2.0).sin()
    }

    pub fn transmittivity(&self) -> f64 {
        (self.theta / 2.0).cos()
    }

    /// 2×2 map on coherent amplitudes `(α, β)`.
    pub fn amplitude_map(&self) -> [[C64; 2]; 2] {
        let (r, t) = (self.reflectivity(), self.transmittivity());
        let e = C64::from_polar(1.0, self.phi);
        [
            [C64::new(t, 0.0), e * r],
            [-e.conj() * r, C64::new(t, 0.0)],
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DisplacementSpec {
    pub mode: usize,
    pub beta: C64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossKerrSpec {
    pub control: usize,
    pub target: usize,
    /// Accumulated phase `χt` per control photon, in `(−π, π]`.
    pub theta: f64,
}

impl CrossKerrSpec {
    pub fn new(control: usize, target: usize, theta: f64) -> Result<Self> {
        if control == target {
            return Err(EcsError::InvalidParameter(
                "cross-Kerr control and target must differ".into(),
            ));
        }
        if !(theta > -PI && theta <= PI) {
            return Err(EcsError::InvalidParameter(format!(
                "cross-Kerr phase {theta} outside (-pi, pi]"
            )));
        }
        Ok(CrossKerrSpec {
            control,
            target,
            theta,
        })
    }
}

/// `U_X = D(α/2) U_K D(−α/2)` on one mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KerrXSpec {
    pub mode: usize,
    pub alpha: C64,
}

fn binomial(n: u32, k: u32) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Output Fock amplitudes of `|m, n⟩` through the beam splitter, as `(p, q, amplitude)`.
fn split_fock_pair(m: u32, n: u32, bs: &BeamSplitterSpec) -> Vec<(u32, u32, C64)> {
    let map = bs.amplitude_map();
    // a† → u1 a† + v1 b†, b† → u2 a† + v2 b†
    let (u1, v1) = (map[0][0], map[1][0]);
    let (u2, v2) = (map[0][1], map[1][1]);
    let total = m + n;
    let mut amps = vec![C64::new(0.0, 0.0); total as usize + 1];
    for j in 0..=m {
        for k in 0..=n {
            let p = j + k;
            let c = binomial(m, j)
                * binomial(n, k)
                * u1.powu(j)
                * v1.powu(m - j)
                * u2.powu(k)
                * v2.powu(n - k);
            amps[p as usize] += c;
        }
    }
    let scale = 1.0 / (factorial(m) * factorial(n)).sqrt();
    amps.into_iter()
        .enumerate()
        .filter_map(|(p, a)| {
            let p = p as u32;
            let q = total - p;
            let amp = a * scale * (factorial(p) * factorial(q)).sqrt();
            (amp.norm() >= FOCK_AMPLITUDE_FLOOR).then_some((p, q, amp))
        })
        .collect()
}

pub fn apply_beam_splitter(s: &HybridState, spec: &BeamSplitterSpec) -> Result<HybridState> {
    let (ma, mb) = (spec.mode_a, spec.mode_b);
    s.check_mode(ma)?;
    s.check_mode(mb)?;
    if ma == mb {
        return Err(EcsError::InvalidParameter("beam splitter on a single mode".into()));
    }
    let map = spec.amplitude_map();
    let mut saw_fock = false;
    let out = s.map_terms(|term| match (term.factors[ma], term.factors[mb]) {
        (KetFactor::Coherent(a), KetFactor::Coherent(b)) => {
            let mut factors = term.factors.clone();
            factors[ma] = KetFactor::Coherent(map[0][0] * a + map[0][1] * b);
            factors[mb] = KetFactor::Coherent(map[1][0] * a + map[1][1] * b);
            Ok(vec![ProductTerm::new(term.coefficient, factors)])
        }
        (KetFactor::Fock(m), KetFactor::Fock(n)) => {
            if m + n > FOCK_CAP {
                return Err(EcsError::FockCap {
                    photons: m + n,
                    cap: FOCK_CAP,
                });
            }
            saw_fock = true;
            Ok(split_fock_pair(m, n, spec)
                .into_iter()
                .map(|(p, q, amp)| {
                    let mut factors = term.factors.clone();
                    factors[ma] = KetFactor::Fock(p);
                    factors[mb] = KetFactor::Fock(q);
                    ProductTerm::new(term.coefficient * amp, factors)
                })
                .collect())
        }
        _ => Err(EcsError::UnsupportedPair {
            mode_a: ma,
            mode_b: mb,
        }),
    })?;
    Ok(if saw_fock { out.prune(0.0) } else { out })
}

pub fn apply_phase_shifter(s: &HybridState, mode: usize, phi: f64) -> Result<HybridState> {
    s.check_mode(mode)?;
    let rot = C64::from_polar(1.0, phi);
    s.map_terms(|term| {
        let mut t = term.clone();
        match t.factors[mode] {
            KetFactor::Coherent(a) => t.factors[mode] = KetFactor::Coherent(rot * a),
            KetFactor::Fock(n) => t.coefficient *= C64::from_polar(1.0, n as f64 * phi),
        }
        Ok(vec![t])
    })
}

/// `D(β)|γ⟩ = e^{(βγ* − β*γ)/2} |γ + β⟩`
pub(crate) fn displace_amplitude(gamma: C64, beta: C64) -> (C64, C64) {
    let phase = ((beta * gamma.conj() - beta.conj() * gamma) * 0.5).exp();
    (phase, gamma + beta)
}

pub fn apply_displacement(s: &HybridState, spec: &DisplacementSpec) -> Result<HybridState> {
    s.require_coherent(spec.mode)?;
    if !(spec.beta.re.is_finite() && spec.beta.im.is_finite()) {
        return Err(EcsError::InvalidParameter("non-finite displacement".into()));
    }
    s.map_terms(|term| {
        let mut t = term.clone();
        if let KetFactor::Coherent(g) = t.factors[spec.mode] {
            let (phase, out) = displace_amplitude(g, spec.beta);
            t.coefficient *= phase;
            t.factors[spec.mode] = KetFactor::Coherent(out);
        }
        Ok(vec![t])
    })
}

pub fn apply_cross_kerr(s: &HybridState, spec: &CrossKerrSpec) -> Result<HybridState> {
    let spec = CrossKerrSpec::new(spec.control, spec.target, spec.theta)?;
    s.require_fock(spec.control)?;
    s.require_coherent(spec.target)?;
    s.map_terms(|term| {
        let mut t = term.clone();
        if let (KetFactor::Fock(n), KetFactor::Coherent(g)) =
            (t.factors[spec.control], t.factors[spec.target])
        {
            t.factors[spec.target] = KetFactor::Coherent(g * C64::from_polar(1.0, n as f64 * spec.theta));
        }
        Ok(vec![t])
    })
}

/// `|α⟩ → e^{−iπ/4}(|α⟩ + i|−α⟩)/√2` on `mode`; bit-identical terms are merged.
pub fn apply_kerr_pi(s: &HybridState, mode: usize) -> Result<HybridState> {
    s.require_coherent(mode)?;
    let keep = C64::from_polar(FRAC_1_SQRT_2, -FRAC_PI_4);
    let flip = keep * C64::new(0.0, 1.0);
    let out = s.map_terms(|term| {
        let mut a = term.clone();
        let mut b = term.clone();
        if let KetFactor::Coherent(x) = term.factors[mode] {
            b.factors[mode] = KetFactor::Coherent(-x);
        }
        a.coefficient *= keep;
        b.coefficient *= flip;
        Ok(vec![a, b])
    })?;
    Ok(out.prune(0.0))
}

/// Displacement-conjugated π-Kerr rotation on the `{|0⟩, |α⟩}` qubit.
pub fn apply_ux(s: &HybridState, spec: &KerrXSpec) -> Result<HybridState> {
    let half = spec.alpha * 0.5;
    let s = apply_displacement(s, &DisplacementSpec { mode: spec.mode, beta: -half })?;
    let s = apply_kerr_pi(&s, spec.mode)?;
    let s = apply_displacement(&s, &DisplacementSpec { mode: spec.mode, beta: half })?;
    Ok(s.prune(0.0))
}

/// Default merge tolerance re-exported for callers pruning after element chains.
pub const PRUNE_TOL: f64 = MERGE_TOL;

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn amp_of(s: &HybridState, photons: &[u32]) -> C64 {
        let target: Vec<KetFactor> = photons.iter().map(|&n| KetFactor::Fock(n)).collect();
        s.terms()
            .iter()
            .filter(|t| t.factors == target)
            .map(|t| t.coefficient)
            .sum()
    }

    #[test]
    fn single_photon_split_magnitudes() {
        let bs = BeamSplitterSpec::with_reflectivity((2.0f64 / 5.0).sqrt(), 0.0, 0, 1).unwrap();
        let out = apply_beam_splitter(&HybridState::fock(&[1, 0]).unwrap(), &bs).unwrap();
        assert!((amp_of(&out, &[1, 0]).norm() - (3.0f64 / 5.0).sqrt()).abs() < 1e-15);
        assert!((amp_of(&out, &[0, 1]).norm() - (2.0f64 / 5.0).sqrt()).abs() < 1e-15);
        // phi = 0: reflected amplitude is -r
        assert!((amp_of(&out, &[0, 1]) - c(-(2.0f64 / 5.0).sqrt(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn two_stage_split_gives_two_two_one() {
        // photon enters mode 2; BS1 on (2,0), BS2 on (2,1)
        let s = HybridState::fock(&[0, 0, 1]).unwrap();
        let bs1 = BeamSplitterSpec::with_reflectivity((2.0f64 / 5.0).sqrt(), PI, 2, 0).unwrap();
        let bs2 = BeamSplitterSpec::with_reflectivity((2.0f64 / 3.0).sqrt(), PI, 2, 1).unwrap();
        let out = apply_beam_splitter(&apply_beam_splitter(&s, &bs1).unwrap(), &bs2).unwrap();
        let expect = [(2.0f64 / 5.0).sqrt(), (2.0f64 / 5.0).sqrt(), (1.0f64 / 5.0).sqrt()];
        for (i, e) in expect.iter().enumerate() {
            let mut p = [0, 0, 0];
            p[i] = 1;
            assert!((amp_of(&out, &p).norm() - e).abs() < 1e-15);
        }
        assert!((out.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn coherent_half_split() {
        let a = c(1.3, -0.2);
        let s = HybridState::coherent(&[a, c(0.0, 0.0)]).unwrap();
        let bs = BeamSplitterSpec::new(FRAC_PI_2, 0.0, 0, 1).unwrap();
        let out = apply_beam_splitter(&s, &bs).unwrap();
        let f = &out.terms()[0].factors;
        match (f[0], f[1]) {
            (KetFactor::Coherent(x), KetFactor::Coherent(y)) => {
                assert!((x - a * FRAC_1_SQRT_2).norm() < 1e-15);
                assert!((y + a * FRAC_1_SQRT_2).norm() < 1e-15);
                assert!((x.norm_sqr() + y.norm_sqr() - a.norm_sqr()).abs() < 1e-14);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn hong_ou_mandel_cancels() {
        let bs = BeamSplitterSpec::new(FRAC_PI_2, 0.0, 0, 1).unwrap();
        let out = apply_beam_splitter(&HybridState::fock(&[1, 1]).unwrap(), &bs).unwrap();
        assert!(amp_of(&out, &[1, 1]).norm() < 1e-15);
        assert!((amp_of(&out, &[2, 0]).norm_sqr() - 0.5).abs() < 1e-14);
        assert!((out.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn beam_splitter_errors() {
        let bs = BeamSplitterSpec::new(1.0, 0.0, 0, 1).unwrap();
        let mixed = HybridState::product(vec![KetFactor::Fock(1), KetFactor::vacuum()]).unwrap();
        assert!(matches!(
            apply_beam_splitter(&mixed, &bs),
            Err(EcsError::UnsupportedPair { .. })
        ));
        let heavy = HybridState::fock(&[3, 2]).unwrap();
        assert!(matches!(apply_beam_splitter(&heavy, &bs), Err(EcsError::FockCap { .. })));
        assert!(BeamSplitterSpec::new(1.0, 0.0, 1, 1).is_err());
    }

    #[test]
    fn phase_shifter_examples() {
        let s = HybridState::coherent(&[c(0.4, 0.3)]).unwrap();
        assert_eq!(apply_phase_shifter(&s, 0, 0.0).unwrap(), s);
        let flipped = apply_phase_shifter(&s, 0, PI).unwrap();
        let minus = HybridState::coherent(&[c(-0.4, -0.3)]).unwrap();
        assert!((flipped.fidelity(&minus).unwrap() - 1.0).abs() < 1e-15);
        let one = apply_phase_shifter(&HybridState::fock(&[1]).unwrap(), 0, FRAC_PI_2).unwrap();
        assert!((one.terms()[0].coefficient - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn displacement_examples() {
        let s = HybridState::coherent(&[c(0.2, -0.5)]).unwrap();
        let zero = DisplacementSpec { mode: 0, beta: c(0.0, 0.0) };
        assert_eq!(apply_displacement(&s, &zero).unwrap(), s);
        let beta = c(0.7, 0.1);
        let d = apply_displacement(&HybridState::vacuum(1).unwrap(), &DisplacementSpec { mode: 0, beta }).unwrap();
        assert_eq!(d.terms()[0].factors[0], KetFactor::Coherent(beta));
        assert!((d.terms()[0].coefficient - c(1.0, 0.0)).norm() < 1e-15);
        let f = HybridState::fock(&[1]).unwrap();
        assert!(matches!(
            apply_displacement(&f, &DisplacementSpec { mode: 0, beta }),
            Err(EcsError::UnsupportedKind { .. })
        ));
    }

    #[test]
    fn displacement_composes_with_phase() {
        // D(b2) D(b1) = e^{(b2 b1* − b2* b1)/2} D(b1 + b2)
        let g = c(0.3, 0.9);
        let (b1, b2) = (c(-0.4, 0.25), c(1.1, -0.6));
        let s = HybridState::coherent(&[g]).unwrap();
        let two = apply_displacement(
            &apply_displacement(&s, &DisplacementSpec { mode: 0, beta: b1 }).unwrap(),
            &DisplacementSpec { mode: 0, beta: b2 },
        )
        .unwrap();
        let one = apply_displacement(&s, &DisplacementSpec { mode: 0, beta: b1 + b2 }).unwrap();
        let phase = ((b2 * b1.conj() - b2.conj() * b1) * 0.5).exp();
        assert!((two.terms()[0].coefficient - one.terms()[0].coefficient * phase).norm() < 1e-14);
    }

    #[test]
    fn cross_kerr_examples() {
        let g = c(2.0, 0.5);
        let spec = CrossKerrSpec::new(0, 1, 0.4).unwrap();
        let off = HybridState::product(vec![KetFactor::Fock(0), KetFactor::Coherent(g)]).unwrap();
        assert_eq!(apply_cross_kerr(&off, &spec).unwrap(), off);
        let on = HybridState::product(vec![KetFactor::Fock(1), KetFactor::Coherent(g)]).unwrap();
        let out = apply_cross_kerr(&on, &spec).unwrap();
        assert_eq!(out.terms()[0].factors[1], KetFactor::Coherent(g * C64::from_polar(1.0, 0.4)));
        assert!(CrossKerrSpec::new(0, 1, -PI).is_err());
        assert!(CrossKerrSpec::new(0, 0, 0.1).is_err());
        assert!(matches!(
            apply_cross_kerr(&on, &CrossKerrSpec::new(1, 0, 0.1).unwrap()),
            Err(EcsError::UnsupportedKind { .. })
        ));
    }

    #[test]
    fn kerr_pi_examples() {
        let vac = apply_kerr_pi(&HybridState::vacuum(1).unwrap(), 0).unwrap();
        assert_eq!(vac.len(), 1);
        assert!((vac.terms()[0].coefficient.norm() - 1.0).abs() < 1e-15);

        let a = c(1.2, 0.3);
        let s = HybridState::coherent(&[a]).unwrap();
        let once = apply_kerr_pi(&s, 0).unwrap();
        let k = C64::from_polar(FRAC_1_SQRT_2, -FRAC_PI_4);
        let expect = s
            .superpose(&HybridState::coherent(&[-a]).unwrap(), k, k * c(0.0, 1.0))
            .unwrap();
        assert!((once.overlap(&expect).unwrap() - c(1.0, 0.0)).norm() < 1e-14);

        // U_K² is the parity operator: |α⟩ → |−α⟩.
        let twice = apply_kerr_pi(&once, 0).unwrap();
        assert_eq!(twice.len(), 2);
        assert!((twice.norm() - 1.0).abs() < 1e-14);
        let pruned = twice.prune(MERGE_TOL);
        assert_eq!(pruned.len(), 1);
        let minus = HybridState::coherent(&[-a]).unwrap();
        assert!((pruned.overlap(&minus).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn ux_on_logical_basis() {
        for alpha in [c(0.5, 0.0), c(2.0, 0.0), c(1.0, 1.0)] {
            let spec = KerrXSpec { mode: 0, alpha };
            let k = C64::from_polar(FRAC_1_SQRT_2, -FRAC_PI_4);
            let zero = HybridState::vacuum(1).unwrap();
            let one = HybridState::coherent(&[alpha]).unwrap();
            let e0 = zero.superpose(&one, k, k * c(0.0, 1.0)).unwrap();
            let e1 = zero.superpose(&one, k * c(0.0, 1.0), k).unwrap();
            let u0 = apply_ux(&zero, &spec).unwrap();
            let u1 = apply_ux(&one, &spec).unwrap();
            // exact including the global phase
            assert!((u0.overlap(&e0).unwrap() - e0.norm_sqr()).norm() < 1e-12);
            assert!((u1.overlap(&e1).unwrap() - e1.norm_sqr()).norm() < 1e-12);
            assert!((u0.fidelity(&e0).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ux_twice_flips_logical_zero() {
        // U_X² = D(α/2) P D(−α/2): |0⟩ → |α⟩ exactly, up to a global phase.
        let alpha = c(3.0, 0.0);
        let spec = KerrXSpec { mode: 0, alpha };
        let zero = HybridState::vacuum(1).unwrap();
        let twice = apply_ux(&apply_ux(&zero, &spec).unwrap(), &spec).unwrap().prune(MERGE_TOL);
        let one = HybridState::coherent(&[alpha]).unwrap();
        assert!((twice.fidelity(&one).unwrap() - 1.0).abs() < 1e-12);
        assert!((twice.norm() - 1.0).abs() < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_c(r: f64) -> impl Strategy<Value = C64> {
            (-r..r, -r..r).prop_map(|(a, b)| C64::new(a, b))
        }

        /// Two-term coherent state on 3 modes.
        fn arb_coherent() -> impl Strategy<Value = HybridState> {
            (prop::array::uniform3(arb_c(1.5)), prop::array::uniform3(arb_c(1.5)), arb_c(1.0))
                .prop_map(|(a, b, k)| {
                    HybridState::coherent(&a)
                        .unwrap()
                        .superpose(&HybridState::coherent(&b).unwrap(), C64::new(1.0, 0.0), k)
                        .unwrap()
                })
        }

        /// Fock control on mode 0 (at most one photon per term), coherent modes 1 and 2.
        fn arb_hybrid() -> impl Strategy<Value = HybridState> {
            (arb_c(1.5), arb_c(1.5), arb_c(1.0)).prop_map(|(a, b, k)| {
                let t0 = HybridState::product(vec![KetFactor::Fock(0), KetFactor::Coherent(a), KetFactor::Coherent(b)]);
                let t1 = HybridState::product(vec![KetFactor::Fock(1), KetFactor::Coherent(b), KetFactor::Coherent(-a)]);
                t0.unwrap().superpose(&t1.unwrap(), C64::new(0.6, 0.0), k).unwrap()
            })
        }

        fn arb_element() -> impl Strategy<Value = Element> {
            prop_oneof![
                (0.0..6.0f64, -3.0..3.0f64).prop_map(|(t, p)| Element::BeamSplitter(
                    BeamSplitterSpec::new(t, p, 1, 2).unwrap()
                )),
                (-3.0..3.0f64).prop_map(|phi| Element::PhaseShifter { mode: 2, phi }),
                arb_c(1.0).prop_map(|beta| Element::Displacement(DisplacementSpec { mode: 1, beta })),
                (-3.1..3.1f64).prop_map(|t| Element::CrossKerr(CrossKerrSpec::new(0, 2, t).unwrap())),
                arb_c(2.0).prop_map(|alpha| Element::KerrX(KerrXSpec { mode: 1, alpha })),
            ]
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]

            #[test]
            fn elements_are_unitary(a in arb_hybrid(), b in arb_hybrid(), el in arb_element()) {
                let before = a.overlap(&b).unwrap();
                let after = el.apply(&a).unwrap().overlap(&el.apply(&b).unwrap()).unwrap();
                prop_assert!((before - after).norm() < 1e-10);
                prop_assert!((el.apply(&a).unwrap().norm() - a.norm()).abs() < 1e-10);
            }

            #[test]
            fn kerr_pi_is_unitary(a in arb_coherent(), b in arb_coherent()) {
                let ua = apply_kerr_pi(&a, 0).unwrap();
                let ub = apply_kerr_pi(&b, 0).unwrap();
                prop_assert!((a.overlap(&b).unwrap() - ua.overlap(&ub).unwrap()).norm() < 1e-10);
            }

            #[test]
            fn beam_splitters_compose(s in arb_coherent(), t1 in 0.0..3.0f64, t2 in 0.0..3.0f64, phi in -3.0..3.0f64) {
                let one = BeamSplitterSpec::new(t1, phi, 0, 2).unwrap();
                let two = BeamSplitterSpec::new(t2, phi, 0, 2).unwrap();
                let both = BeamSplitterSpec::new(t1 + t2, phi, 0, 2).unwrap();
                let seq = apply_beam_splitter(&apply_beam_splitter(&s, &one).unwrap(), &two).unwrap();
                let once = apply_beam_splitter(&s, &both).unwrap();
                prop_assert!((seq.fidelity(&once).unwrap() - 1.0).abs() < 1e-10);
            }

            #[test]
            fn fock_beam_splitter_is_unitary(m in 0u32..3, n in 0u32..3, p in 0u32..3, q in 0u32..3, t in 0.0..6.0f64, phi in -3.0..3.0f64) {
                let bs = BeamSplitterSpec::new(t, phi, 0, 1).unwrap();
                let a = apply_beam_splitter(&HybridState::fock(&[m, n]).unwrap(), &bs).unwrap();
                let b = apply_beam_splitter(&HybridState::fock(&[p, q]).unwrap(), &bs).unwrap();
                let expect = if (m, n) == (p, q) { 1.0 } else { 0.0 };
                prop_assert!((a.overlap(&b).unwrap() - C64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }
}

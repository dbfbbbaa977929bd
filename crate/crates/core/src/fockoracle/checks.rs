//! Oracle-equivalence suites: analytic results against dense truncated-Fock computation.

use super::{expect, operator_matrix, required_dim, to_fock, unitarity_defect, FockVector, Matrix, OperatorKind, Truncation};
use crate::bell::{bm_parity, bm_threshold, mermin, BellSettings};
use crate::circuits::{css, generate_ghz, ghz_reference, run_w_circuit, w_branch_probabilities, w_fock, w_logical, w_reference, WCircuitSpec};
use crate::elements::{
    apply_beam_splitter, apply_cross_kerr, apply_displacement, apply_kerr_pi, apply_phase_shifter, apply_ux, BeamSplitterSpec,
    CrossKerrSpec, DisplacementSpec, KerrXSpec,
};
use crate::error::{EcsError, Result};
use crate::measure::{
    characteristic_ghz, expect_a_tau, expect_displaced_parity, expect_displaced_threshold, ghz_parity_closed, ghz_threshold_closed,
    single_photon_w_parity, GhzSign,
};
use crate::states::{HybridState, KetFactor, ProductTerm, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Default agreement tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Bound on `‖U†U − I‖_max` for the unitary kinds.
pub const UNITARITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    States,
    Elements,
    Measure,
    Circuits,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::States, Suite::Elements, Suite::Measure, Suite::Circuits];

    pub fn name(self) -> &'static str {
        match self {
            Suite::States => "states",
            Suite::Elements => "elements",
            Suite::Measure => "measure",
            Suite::Circuits => "circuits",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = EcsError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| EcsError::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckReport {
    fn new(name: &str, max_deviation: f64, tolerance: f64) -> Self {
        CheckReport {
            name: name.to_string(),
            max_deviation,
            tolerance,
            // NaN deviations fail
            passed: max_deviation <= tolerance,
        }
    }
}

/// Runs one suite. `tol` overrides the agreement tolerance; the unitarity
/// bound never loosens beyond `UNITARITY_TOL`.
pub fn run_suite(suite: Suite, tol: Option<f64>) -> Result<Vec<CheckReport>> {
    let tol = tol.unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0) {
        return Err(EcsError::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    match suite {
        Suite::States => states_suite(tol),
        Suite::Elements => elements_suite(tol),
        Suite::Measure => measure_suite(tol),
        Suite::Circuits => circuits_suite(tol),
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn sample(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    c(rng.random_range(-radius..radius), rng.random_range(-radius..radius))
}

fn covering(states: &[&HybridState], extra: &[f64]) -> Result<Truncation> {
    let mut dims = vec![2; states[0].modes()];
    for s in states {
        for (d, n) in dims.iter_mut().zip(Truncation::adequate_for(s, extra)?.dims) {
            *d = (*d).max(n);
        }
    }
    Truncation::new(dims)
}

/// Agreement of an oracle output with the analytic one: every Fock-basis
/// probability, plus the phase-sensitive overlap `⟨analytic|oracle⟩`.
///
/// Raw amplitudes near the cutoff can differ by the square root of the
/// truncated tail, so they are not compared directly.
fn action_dev(oracle: &FockVector, analytic: &FockVector) -> Result<f64> {
    let probs = oracle
        .amplitudes
        .iter()
        .zip(&analytic.amplitudes)
        .map(|(x, y)| (x.norm_sqr() - y.norm_sqr()).abs())
        .fold(0.0, f64::max);
    let overlap = (analytic.inner(oracle)? - analytic.norm_sqr()).norm();
    Ok(probs.max(overlap))
}

/// `⟨v| ⊗_m kinds[m] |v⟩` with one single-mode operator per mode.
fn local_expect(v: &FockVector, kinds: &[OperatorKind]) -> Result<C64> {
    let mats = kinds
        .iter()
        .enumerate()
        .map(|(m, &k)| operator_matrix(k, &[v.truncation.dims[m]]))
        .collect::<Result<Vec<_>>>()?;
    let modes: Vec<[usize; 1]> = (0..kinds.len()).map(|m| [m]).collect();
    let ops: Vec<(&Matrix, &[usize])> = mats.iter().zip(&modes).map(|(m, k)| (m, &k[..])).collect();
    expect(v, &ops)
}

/// Deviation of a real analytic expectation from a complex oracle value.
fn real_dev(analytic: f64, oracle: C64) -> f64 {
    (analytic - oracle.re).abs().max(oracle.im.abs())
}

fn states_suite(tol: f64) -> Result<Vec<CheckReport>> {
    let mixed = HybridState::new(
        2,
        vec![
            ProductTerm::new(c(0.6, 0.1), vec![KetFactor::Fock(1), KetFactor::Coherent(c(0.5, 0.0))]),
            ProductTerm::new(c(-0.3, 0.4), vec![KetFactor::Coherent(c(0.0, 1.1)), KetFactor::Fock(2)]),
        ],
    )?;
    let pairs: Vec<(HybridState, HybridState)> = vec![
        (HybridState::fock(&[0])?, HybridState::coherent(&[c(2.0, 0.0)])?),
        (css(c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0))?, css(c(0.8, 0.3), c(1.0, 0.0), c(0.0, 1.0))?),
        (ghz_reference(c(0.7, 0.0), c(1.0, 0.0), c(-1.0, 0.0), 3)?, ghz_reference(c(0.7, 0.2), c(1.0, 0.0), c(1.0, 0.0), 3)?),
        (mixed.clone(), HybridState::coherent(&[c(0.3, 0.0), c(-0.8, 0.2)])?),
        (mixed.clone(), mixed),
        (w_reference(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0))?, w_logical(c(1.0, 0.0))?),
        (w_fock(3)?, HybridState::coherent(&[c(0.4, 0.0), c(0.0, -0.6), c(1.2, 0.0)])?),
    ];
    let mut overlap_dev: f64 = 0.0;
    let mut norm_dev: f64 = 0.0;
    for (a, b) in &pairs {
        let t = covering(&[a, b], &[])?;
        let (va, vb) = (to_fock(a, &t)?, to_fock(b, &t)?);
        overlap_dev = overlap_dev.max((a.overlap(b)? - va.inner(&vb)?).norm());
        norm_dev = norm_dev.max((a.norm_sqr() - va.norm_sqr()).abs());
    }
    let w = to_fock(&w_fock(3)?, &Truncation::new(vec![2, 2, 2])?)?;
    let third = 1.0 / 3f64.sqrt();
    let w_dev = [1usize, 2, 4]
        .iter()
        .map(|&i| (w.amplitudes[i] - c(third, 0.0)).norm())
        .chain([0usize, 3, 5, 6, 7].iter().map(|&i| w.amplitudes[i].norm()))
        .fold(0.0, f64::max);
    Ok(vec![
        CheckReport::new("overlap", overlap_dev, tol),
        CheckReport::new("norm", norm_dev, tol),
        CheckReport::new("w_fock_amplitudes", w_dev, tol),
    ])
}

fn elements_suite(tol: f64) -> Result<Vec<CheckReport>> {
    let utol = tol.min(UNITARITY_TOL);
    let two = |a: usize, b: usize| vec![a, b];
    let kinds: Vec<(OperatorKind, Vec<usize>)> = vec![
        (OperatorKind::Displacement(c(2.0, 0.0)), vec![required_dim(2.0)]),
        (OperatorKind::Displacement(c(-0.7, 1.1)), vec![required_dim(1.31)]),
        (OperatorKind::BeamSplitter { theta: PI / 2.0, phi: PI }, two(20, 20)),
        (OperatorKind::BeamSplitter { theta: 1.3, phi: 0.4 }, two(15, 26)),
        (OperatorKind::KerrPi, vec![30]),
        (OperatorKind::CrossKerr(0.8), two(5, 29)),
        (OperatorKind::PhaseShift(2.2), vec![20]),
    ];
    let mut unitarity: f64 = 0.0;
    for (k, dims) in &kinds {
        unitarity = unitarity.max(unitarity_defect(&operator_matrix(*k, dims)?));
    }

    let coherent_pair = HybridState::coherent(&[c(1.2, 0.3), c(-0.5, 0.8)])?;
    let fock_pair = HybridState::new(
        2,
        vec![
            ProductTerm::new(c(0.6, 0.0), vec![KetFactor::Fock(2), KetFactor::Fock(1)]),
            ProductTerm::new(c(0.0, 0.8), vec![KetFactor::Fock(0), KetFactor::Fock(3)]),
        ],
    )?;
    let mut bs_dev: f64 = 0.0;
    for (theta, phi) in [(PI / 2.0, PI), (0.9, 2.0), (2.4, -0.7)] {
        let spec = BeamSplitterSpec::new(theta, phi, 0, 1)?;
        for s in [&coherent_pair, &fock_pair] {
            let out = apply_beam_splitter(s, &spec)?;
            let t = covering(&[s, &out], &[])?;
            let u = operator_matrix(OperatorKind::BeamSplitter { theta, phi }, &t.dims)?;
            bs_dev = bs_dev.max(action_dev(&to_fock(s, &t)?.apply(&u, &[0, 1])?, &to_fock(&out, &t)?)?);
        }
    }

    let single = HybridState::new(
        1,
        vec![
            ProductTerm::new(c(0.8, 0.0), vec![KetFactor::Coherent(c(0.9, -0.4))]),
            ProductTerm::new(c(0.0, 0.6), vec![KetFactor::Coherent(c(-1.0, 0.5))]),
        ],
    )?;
    let mut disp_dev: f64 = 0.0;
    for beta in [c(0.5, 0.5), c(-1.0, 0.2), c(0.0, -0.9)] {
        let out = apply_displacement(&single, &DisplacementSpec { mode: 0, beta })?;
        let t = covering(&[&single, &out], &[beta.norm()])?;
        let d = operator_matrix(OperatorKind::Displacement(beta), &t.dims)?;
        disp_dev = disp_dev.max(action_dev(&to_fock(&single, &t)?.apply(&d, &[0])?, &to_fock(&out, &t)?)?);
    }

    let mut ps_dev: f64 = 0.0;
    let fock_single = HybridState::new(
        1,
        vec![ProductTerm::new(c(0.6, 0.0), vec![KetFactor::Fock(1)]), ProductTerm::new(c(0.8, 0.0), vec![KetFactor::Fock(3)])],
    )?;
    for s in [&single, &fock_single] {
        let phi = 0.7;
        let out = apply_phase_shifter(s, 0, phi)?;
        let t = covering(&[s, &out], &[])?;
        let p = operator_matrix(OperatorKind::PhaseShift(phi), &t.dims)?;
        ps_dev = ps_dev.max(action_dev(&to_fock(s, &t)?.apply(&p, &[0])?, &to_fock(&out, &t)?)?);
    }

    let ck_state = HybridState::new(
        2,
        vec![
            ProductTerm::new(c(0.6, 0.0), vec![KetFactor::Coherent(c(1.1, 0.3)), KetFactor::Fock(0)]),
            ProductTerm::new(c(0.0, 0.6), vec![KetFactor::Coherent(c(-0.4, 0.9)), KetFactor::Fock(1)]),
            ProductTerm::new(c(0.5, 0.2), vec![KetFactor::Coherent(c(0.7, 0.0)), KetFactor::Fock(2)]),
        ],
    )?;
    let mut ck_dev: f64 = 0.0;
    for theta in [0.8, -2.5, PI] {
        let out = apply_cross_kerr(&ck_state, &CrossKerrSpec::new(1, 0, theta)?)?;
        let t = covering(&[&ck_state, &out], &[])?;
        let m = operator_matrix(OperatorKind::CrossKerr(theta), &[t.dims[1], t.dims[0]])?;
        ck_dev = ck_dev.max(action_dev(&to_fock(&ck_state, &t)?.apply(&m, &[1, 0])?, &to_fock(&out, &t)?)?);
    }

    let mut kerr_dev: f64 = 0.0;
    for s in [HybridState::coherent(&[c(1.0, 0.0)])?, single.clone()] {
        let out = apply_kerr_pi(&s, 0)?;
        let t = covering(&[&s, &out], &[])?;
        let k = operator_matrix(OperatorKind::KerrPi, &t.dims)?;
        kerr_dev = kerr_dev.max(action_dev(&to_fock(&s, &t)?.apply(&k, &[0])?, &to_fock(&out, &t)?)?);
    }

    let mut ux_dev: f64 = 0.0;
    for alpha in [c(0.5, 0.0), c(1.0, 0.0), c(0.8, 0.6)] {
        let s = HybridState::coherent(&[alpha])?.superpose(&HybridState::vacuum(1)?, c(0.6, 0.0), c(0.0, 0.8))?;
        let out = apply_ux(&s, &KerrXSpec { mode: 0, alpha })?;
        let t = covering(&[&s, &out], &[alpha.norm()])?;
        let u = ux_matrix(alpha, t.dims[0])?;
        ux_dev = ux_dev.max(action_dev(&to_fock(&s, &t)?.apply(&u, &[0])?, &to_fock(&out, &t)?)?);
    }

    Ok(vec![
        CheckReport::new("unitarity", unitarity, utol),
        CheckReport::new("beam_splitter", bs_dev, tol),
        CheckReport::new("displacement", disp_dev, tol),
        CheckReport::new("phase_shifter", ps_dev, tol),
        CheckReport::new("cross_kerr", ck_dev, tol),
        CheckReport::new("kerr_pi", kerr_dev, tol),
        CheckReport::new("kerr_x", ux_dev, tol),
    ])
}

/// `U_X = D(α/2) U_K D(−α/2)`
fn ux_matrix(alpha: C64, dim: usize) -> Result<Matrix> {
    let plus = operator_matrix(OperatorKind::Displacement(alpha * 0.5), &[dim])?;
    let minus = operator_matrix(OperatorKind::Displacement(-alpha * 0.5), &[dim])?;
    let k = operator_matrix(OperatorKind::KerrPi, &[dim])?;
    Ok(plus * k * minus)
}

fn measure_suite(tol: f64) -> Result<Vec<CheckReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let one = c(1.0, 0.0);

    let mut parity_dev: f64 = 0.0;
    let mut char_dev: f64 = 0.0;
    for (alpha, sign) in [
        (c(0.5, 0.0), GhzSign::Minus),
        (c(1.0, 0.0), GhzSign::Minus),
        (c(0.6, 0.8), GhzSign::Plus),
        (c(1.5, 0.0), GhzSign::Plus),
    ] {
        let s = ghz_reference(alpha, one, c(sign.factor(), 0.0), 3)?;
        for _ in 0..3 {
            let betas = [0; 3].map(|_| sample(&mut rng, 0.5));
            let t = Truncation::adequate_for(&s, &betas.map(|b| 2.0 * b.norm()))?;
            let v = to_fock(&s, &t)?;
            let oracle = local_expect(&v, &betas.map(OperatorKind::ParityDisplaced))?;
            parity_dev = parity_dev
                .max(real_dev(ghz_parity_closed(&betas, alpha, sign)?, oracle))
                .max(real_dev(expect_displaced_parity(&s, &betas)?, oracle));
            let chi = local_expect(&v, &betas.map(OperatorKind::Displacement))?;
            char_dev = char_dev.max((characteristic_ghz(&betas, alpha, sign) - chi).norm());
        }
        let t = Truncation::adequate_for(&s, &[])?;
        let v = to_fock(&s, &t)?;
        let at_origin = local_expect(&v, &[OperatorKind::ParityDisplaced(c(0.0, 0.0)); 3])?;
        parity_dev = parity_dev.max(real_dev(sign.factor(), at_origin));
    }

    let mut threshold_dev: f64 = 0.0;
    for (alpha, c1, c2) in [
        (c(0.5, 0.0), one, -one),
        (c(1.2, 0.0), one, c(0.3, 0.5)),
        (c(0.4, -0.7), c(0.2, 1.0), -one),
    ] {
        let s = ghz_reference(alpha, c1, c2, 3)?;
        for _ in 0..3 {
            let betas = [0; 3].map(|_| sample(&mut rng, 0.6));
            let t = Truncation::adequate_for(&s, &betas.map(|b| b.norm()))?;
            let oracle = local_expect(&to_fock(&s, &t)?, &betas.map(OperatorKind::ThresholdDisplaced))?;
            threshold_dev = threshold_dev
                .max(real_dev(ghz_threshold_closed(alpha, c1, c2, &betas)?, oracle))
                .max(real_dev(expect_displaced_threshold(&s, &betas)?, oracle));
        }
    }

    let mut tau_dev: f64 = 0.0;
    for a in [0.5, 1.0, 1.5] {
        let alpha = c(a, 0.0);
        let s = w_logical(alpha)?;
        let t = Truncation::adequate_for(&s, &[a; 3])?;
        let v = to_fock(&s, &t)?;
        let threshold = operator_matrix(OperatorKind::ThresholdDisplaced(c(0.0, 0.0)), &[t.dims[0]])?;
        let u = ux_matrix(alpha, t.dims[0])?;
        let rotated = u.adjoint() * &threshold * &u;
        for bits in 0..8u8 {
            let tau = [bits & 1, (bits >> 1) & 1, (bits >> 2) & 1];
            let mats: Vec<&Matrix> = tau.iter().map(|&x| if x == 1 { &rotated } else { &threshold }).collect();
            let modes = [[0usize], [1], [2]];
            let ops: Vec<(&Matrix, &[usize])> = mats.into_iter().zip(&modes).map(|(m, k)| (m, &k[..])).collect();
            tau_dev = tau_dev.max(real_dev(expect_a_tau(&s, &tau, alpha)?, expect(&v, &ops)?));
        }
    }

    let mut w_dev: f64 = 0.0;
    let w = w_fock(3)?;
    for _ in 0..4 {
        let betas = [0; 3].map(|_| sample(&mut rng, 0.6));
        let dims = betas.iter().map(|b| required_dim(2.0 * b.norm()).max(2)).collect();
        let v = to_fock(&w, &Truncation::new(dims)?)?;
        let oracle = local_expect(&v, &betas.map(OperatorKind::ParityDisplaced))?;
        w_dev = w_dev.max(real_dev(single_photon_w_parity(&betas), oracle));
    }

    let mut bm_dev: f64 = 0.0;
    for alpha in [c(0.18, 0.0), c(0.5, 0.0), c(1.0, 0.0)] {
        let s = ghz_reference(alpha, one, -one, 3)?;
        let v = to_fock(&s, &Truncation::adequate_for(&s, &[])?)?;
        let e = local_expect(&v, &[OperatorKind::ThresholdDisplaced(c(0.0, 0.0)); 3])?;
        bm_dev = bm_dev.max((bm_threshold(alpha, one, -one, &BellSettings::default())? - mermin([e.re; 4])).abs());
        let params: Vec<f64> = (0..12).map(|_| rng.random_range(-0.4..0.4)).collect();
        let settings = BellSettings::from_params(&params)?;
        let mut vals = [0.0; 4];
        for (val, triple) in vals.iter_mut().zip(settings.triples()) {
            let t = Truncation::adequate_for(&s, &triple.map(|b| 2.0 * b.norm()))?;
            *val = local_expect(&to_fock(&s, &t)?, &triple.map(OperatorKind::ParityDisplaced))?.re;
        }
        bm_dev = bm_dev.max((bm_parity(alpha, GhzSign::Minus, &settings) - mermin(vals)).abs());
    }

    let odd = css(one, one, -one)?;
    let v = to_fock(&odd, &Truncation::adequate_for(&odd, &[])?)?;
    let cat_dev = real_dev(-1.0, local_expect(&v, &[OperatorKind::ParityDisplaced(c(0.0, 0.0))])?);

    Ok(vec![
        CheckReport::new("displaced_parity", parity_dev, tol),
        CheckReport::new("characteristic", char_dev, tol),
        CheckReport::new("displaced_threshold", threshold_dev, tol),
        CheckReport::new("a_tau", tau_dev, tol),
        CheckReport::new("w_parity_limit", w_dev, tol),
        CheckReport::new("bell_mermin", bm_dev, tol),
        CheckReport::new("odd_cat_parity", cat_dev, tol),
    ])
}

/// Oracle run of the heralded W circuit: probabilities and field states per detector.
pub fn w_circuit_oracle(spec: &WCircuitSpec) -> Result<Vec<(f64, FockVector)>> {
    let field_amp = spec.gamma.norm() * 3f64.sqrt();
    let fd = required_dim(field_amp);
    let t = Truncation::new(vec![2, 2, 2, fd, fd, fd])?;
    let zero = c(0.0, 0.0);
    let start = HybridState::product(vec![
        KetFactor::Fock(0),
        KetFactor::Fock(0),
        KetFactor::Fock(1),
        KetFactor::Coherent(spec.gamma * 3f64.sqrt()),
        KetFactor::Coherent(zero),
        KetFactor::Coherent(zero),
    ])?;
    let mut v = to_fock(&start, &t)?;
    let bs = |r: f64| OperatorKind::BeamSplitter {
        theta: 2.0 * r.asin(),
        phi: PI,
    };
    let photon_bs = [(bs((2.0f64 / 5.0).sqrt()), [2, 0]), (bs((2.0f64 / 3.0).sqrt()), [2, 1])];
    for (kind, modes) in photon_bs {
        v = v.apply(&operator_matrix(kind, &[2, 2])?, &modes)?;
    }
    for (kind, modes) in [(bs(1.0 / 3f64.sqrt()), [3, 4]), (bs(1.0 / 2f64.sqrt()), [3, 5])] {
        v = v.apply(&operator_matrix(kind, &[fd, fd])?, &modes)?;
    }
    let ck = operator_matrix(OperatorKind::CrossKerr(spec.theta), &[2, fd])?;
    for k in 0..3 {
        v = v.apply(&ck, &[k, 3 + k])?;
    }
    let mix = operator_matrix(
        OperatorKind::BeamSplitter {
            theta: PI / 2.0,
            phi: PI,
        },
        &[2, 2],
    )?;
    v = v.apply(&mix, &[0, 1])?.apply(&mix, &[2, 1])?;
    let block = fd * fd * fd;
    let field = Truncation::new(vec![fd; 3])?;
    // one photon in total: a click on mode k with the others dark is the pattern e_k
    Ok([4usize, 2, 1]
        .iter()
        .map(|&p| {
            let amplitudes = v.amplitudes[p * block..(p + 1) * block].to_vec();
            let out = FockVector {
                amplitudes,
                truncation: field.clone(),
            };
            (out.norm_sqr(), out)
        })
        .collect())
}

fn circuits_suite(tol: f64) -> Result<Vec<CheckReport>> {
    let mut prob_dev: f64 = 0.0;
    let mut state_dev: f64 = 0.0;
    for (gamma, theta) in [(c(1.5, 0.0), 0.8), (c(0.6, 0.9), -1.7)] {
        let spec = WCircuitSpec {
            gamma,
            theta,
            apply_final_displacement: false,
        };
        let outcomes = run_w_circuit(&spec)?;
        let oracle = w_circuit_oracle(&spec)?;
        let (pa, pb, pc) = w_branch_probabilities(spec.effective_alpha());
        for ((outcome, (p, field)), exact) in outcomes.iter().zip(&oracle).zip([pa, pb, pc]) {
            prob_dev = prob_dev.max((outcome.probability - p).abs()).max((exact - p).abs());
            let analytic = to_fock(&outcome.state, &field.truncation)?;
            let fidelity = analytic.inner(field)?.norm_sqr() / (analytic.norm_sqr() * field.norm_sqr());
            state_dev = state_dev.max((1.0 - fidelity).abs());
        }
    }

    let mut ghz_dev: f64 = 0.0;
    for (alpha, sign) in [(c(0.6, 0.0), GhzSign::Plus), (c(0.5, 0.4), GhzSign::Minus), (c(1e-9, 0.0), GhzSign::Minus)] {
        let out = generate_ghz(alpha, sign, 3)?;
        let reference = if alpha.norm() < 1e-8 {
            w_fock(3)?
        } else {
            ghz_reference(alpha, c(1.0, 0.0), c(sign.factor(), 0.0), 3)?
        };
        let big = alpha * 3f64.sqrt();
        let source = css(big, c(1.0, 0.0), c(sign.factor(), 0.0));
        let source = match source {
            Ok(cat) if alpha.norm() >= 1e-8 => cat.tensor(&HybridState::vacuum(2)?),
            _ => HybridState::fock(&[1, 0, 0])?,
        };
        let d = required_dim(big.norm()).max(2);
        let t = Truncation::new(vec![d; 3])?;
        let mut v = to_fock(&source, &t)?;
        for (k, r) in [(1usize, 1.0 / 3f64.sqrt()), (2, 1.0 / 2f64.sqrt())] {
            let u = operator_matrix(
                OperatorKind::BeamSplitter {
                    theta: 2.0 * r.asin(),
                    phi: PI,
                },
                &[d, d],
            )?;
            v = v.apply(&u, &[0, k])?;
        }
        ghz_dev = ghz_dev
            .max(action_dev(&v, &to_fock(&out, &t)?)?)
            .max((1.0 - out.fidelity(&reference)?).abs());
    }

    Ok(vec![
        CheckReport::new("w_branch_probabilities", prob_dev, tol),
        CheckReport::new("w_heralded_states", state_dev, tol),
        CheckReport::new("ghz_generation", ghz_dev, tol),
    ])
}

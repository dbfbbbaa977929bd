//! Closed forms for GHZ-type and displaced-W states.
//!
//! With `A = |α|²` and `s = Σ_i β_i α*`, the scaled Wigner function of the
//! normalized GHZ state `|α,α,α⟩ ± |−α,−α,−α⟩` reduces to
//!
//! ```text
//! (π³/8) W± = e^{−2Σ|β_i|²} [e^{−6A} cosh(4 Re s) ± cos(4 Im s)] / (1 ± e^{−6A})
//! ```
//!
//! and the characteristic function, with `s = Σ_i η_i α*`, to
//!
//! ```text
//! χ± = e^{−Σ|η_i|²/2} [cos(2 Im s) ± e^{−6A} cosh(2 Re s)] / (1 ± e^{−6A})
//! ```
//!
//! The minus branches are rewritten with `expm1` and half-angle squares so
//! they stay accurate as `α → 0`.

use crate::error::{EcsError, Result};
use crate::states::C64;
use std::f64::consts::PI;

/// Below this `|α|` the minus-sign GHZ normalization is treated as singular.
pub const SMALL_ALPHA: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GhzSign {
    /// `c₁ = +c₂`
    Plus,
    /// `c₁ = −c₂`
    Minus,
}

impl GhzSign {
    pub fn factor(self) -> f64 {
        match self {
            GhzSign::Plus => 1.0,
            GhzSign::Minus => -1.0,
        }
    }
}

/// `e^{x − 6A} cosh(k)` without forming `cosh(k)` alone.
fn damped_cosh(k: f64, six_a: f64) -> f64 {
    0.5 * ((k - six_a).exp() + (-k - six_a).exp())
}

/// `e^{−6A} cosh x − cos y`, accurate both for `A, x, y → 0` and for large `|x|`.
fn minus_bracket(x: f64, y: f64, six_a: f64) -> f64 {
    if x.abs() < 1.0 {
        let half_x = (0.5 * x).sinh();
        let half_y = (0.5 * y).sin();
        (-six_a).exp_m1() * x.cosh() + 2.0 * half_x * half_x + 2.0 * half_y * half_y
    } else {
        damped_cosh(x, six_a) - y.cos()
    }
}

fn sum_weighted(points: &[C64; 3], alpha: C64) -> (f64, C64) {
    let sq = points.iter().map(|p| p.norm_sqr()).sum();
    let s = points.iter().map(|p| p * alpha.conj()).sum();
    (sq, s)
}

/// `χ±(η₁, η₂, η₃) = ⟨GHZ|D(η₁)D(η₂)D(η₃)|GHZ⟩`.
pub fn characteristic_ghz(eta: &[C64; 3], alpha: C64, sign: GhzSign) -> C64 {
    let (h, s) = sum_weighted(eta, alpha);
    let six_a = 6.0 * alpha.norm_sqr();
    let envelope = (-0.5 * h).exp();
    let (x, y) = (2.0 * s.re, 2.0 * s.im);
    let value = match sign {
        GhzSign::Plus => (y.cos() + damped_cosh(x, six_a)) / (1.0 + (-six_a).exp()),
        GhzSign::Minus if alpha.norm() < SMALL_ALPHA => {
            // single-photon W limit
            let total: C64 = eta.iter().sum();
            (3.0 - total.norm_sqr()) / 3.0
        }
        GhzSign::Minus => -minus_bracket(x, y, six_a) / -(-six_a).exp_m1(),
    };
    C64::new(envelope * value, 0.0)
}

/// `(π³/8) W±(β₁, β₂, β₃)`, equal to the displaced-parity correlator.
pub fn ghz_parity_closed(beta: &[C64; 3], alpha: C64, sign: GhzSign) -> Result<f64> {
    let (b, s) = sum_weighted(beta, alpha);
    let six_a = 6.0 * alpha.norm_sqr();
    let envelope = (-2.0 * b).exp();
    let (x, y) = (4.0 * s.re, 4.0 * s.im);
    let value = match sign {
        GhzSign::Plus => (damped_cosh(x, six_a) + y.cos()) / (1.0 + (-six_a).exp()),
        GhzSign::Minus => {
            if alpha.norm() < SMALL_ALPHA {
                return Err(EcsError::SingularNormalization { alpha: alpha.norm() });
            }
            minus_bracket(x, y, six_a) / -(-six_a).exp_m1()
        }
    };
    Ok(envelope * value)
}

/// `α → 0` limit of the minus-sign parity correlator: the single-photon W state.
pub fn single_photon_w_parity(beta: &[C64; 3]) -> f64 {
    let b: f64 = beta.iter().map(|x| x.norm_sqr()).sum();
    let total: C64 = beta.iter().sum();
    (-2.0 * b).exp() * (4.0 / 3.0 * total.norm_sqr() - 1.0)
}

/// Wigner function of the normalized three-mode GHZ-type state.
pub fn wigner_ghz(beta: &[C64; 3], alpha: C64, sign: GhzSign) -> Result<f64> {
    Ok(ghz_parity_closed(beta, alpha, sign)? * 8.0 / PI.powi(3))
}

/// `J = ⟨α|A(β)|α⟩`, `K = ⟨−α|A(β)|−α⟩`, `L = ⟨α|A(β)|−α⟩`.
pub fn jkl(alpha: C64, beta: C64) -> (f64, f64, C64) {
    let j = 2.0 * (-(alpha + beta).norm_sqr()).exp() - 1.0;
    let k = 2.0 * (-(alpha - beta).norm_sqr()).exp() - 1.0;
    // e^{E}(2 − e^{−(α+β)*(α−β)}) expanded; the second
    // exponent collapses to −2|α|², which avoids overflow at large |β|.
    let e1 = -alpha.norm_sqr() - beta.norm_sqr() + alpha * beta.conj() - alpha.conj() * beta;
    let l = e1.exp() * 2.0 - C64::new((-2.0 * alpha.norm_sqr()).exp(), 0.0);
    (j, k, l)
}

/// `⟨A(β₁)A(β₂)A(β₃)⟩` on `c₁|α,α,α⟩ + c₂|−α,−α,−α⟩`, normalized internally.
pub fn ghz_threshold_closed(alpha: C64, c1: C64, c2: C64, beta: &[C64; 3]) -> Result<f64> {
    let overlap = (-6.0 * alpha.norm_sqr()).exp();
    let norm = c1.norm_sqr() + c2.norm_sqr() + 2.0 * (c1.conj() * c2).re * overlap;
    if !(norm.sqrt() > crate::states::ZERO_NORM) {
        return Err(EcsError::DegenerateState);
    }
    let mut jjj = 1.0;
    let mut kkk = 1.0;
    let mut lll = C64::new(1.0, 0.0);
    for b in beta {
        let (j, k, l) = jkl(alpha, *b);
        jjj *= j;
        kkk *= k;
        lll *= l;
    }
    let cross = 2.0 * (c1.conj() * c2 * lll).re;
    Ok((c1.norm_sqr() * jjj + c2.norm_sqr() * kkk + cross) / norm)
}

/// `⟨𝒜(0)𝒜(0)𝒜(0)⟩` on the displaced W state, real `α`.
pub fn logical_v(alpha: f64) -> f64 {
    let e = (alpha * alpha).exp();
    (4.0 - e) / (2.0 + e)
}

/// `⟨𝒜(0)𝒜(1)𝒜(1)⟩` on the displaced W state, real `α`.
pub fn logical_w(alpha: f64) -> f64 {
    let a2 = alpha * alpha;
    let e = a2.exp();
    -(2.0 - 2.0 * (-2.0 * a2).exp() - 7.0 * (-a2).exp() - 2.0 * e) / (3.0 * (2.0 + e))
}

//! Three-party Bell–Mermin combinations
//! `|E(s₁s₂s₃) − E(s₁s′₂s′₃) − E(s′₁s₂s′₃) − E(s′₁s′₂s₃)|`
//! for displaced parity, displaced threshold and logical-qubit observables.

use crate::circuits::w_logical;
use crate::error::{EcsError, Result};
use crate::measure::{
    expect_a_tau, expect_displaced_parity, expect_displaced_threshold, ghz_parity_closed,
    ghz_threshold_closed, single_photon_w_parity, GhzSign, SMALL_ALPHA,
};
use crate::states::{HybridState, C64};

/// Number of real parameters in a [`BellSettings`].
pub const PARAMS: usize = 12;

/// Displacements `β₁, β₂, β₃` and `β′₁, β′₂, β′₃`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BellSettings {
    pub unprimed: [C64; 3],
    pub primed: [C64; 3],
}

impl BellSettings {
    /// Layout: `Re β₁, Im β₁, Re β₂, …, Re β′₃, Im β′₃`.
    pub fn from_params(p: &[f64]) -> Result<Self> {
        if p.len() != PARAMS {
            return Err(EcsError::Dimension {
                expected: PARAMS,
                found: p.len(),
            });
        }
        let at = |k: usize| C64::new(p[2 * k], p[2 * k + 1]);
        Ok(BellSettings {
            unprimed: [at(0), at(1), at(2)],
            primed: [at(3), at(4), at(5)],
        })
    }

    pub fn to_params(&self) -> [f64; PARAMS] {
        let mut out = [0.0; PARAMS];
        for (k, b) in self.unprimed.iter().chain(&self.primed).enumerate() {
            out[2 * k] = b.re;
            out[2 * k + 1] = b.im;
        }
        out
    }

    /// The four setting triples in Mermin order.
    pub fn triples(&self) -> [[C64; 3]; 4] {
        let (u, p) = (self.unprimed, self.primed);
        [[u[0], u[1], u[2]], [u[0], p[1], p[2]], [p[0], u[1], p[2]], [p[0], p[1], u[2]]]
    }

    /// Reorders the three parties.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        BellSettings {
            unprimed: perm.map(|i| self.unprimed[i]),
            primed: perm.map(|i| self.primed[i]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TauBellSettings {
    pub unprimed: [u8; 3],
    pub primed: [u8; 3],
}

impl TauBellSettings {
    pub fn new(unprimed: [u8; 3], primed: [u8; 3]) -> Result<Self> {
        if unprimed.iter().chain(&primed).any(|&t| t > 1) {
            return Err(EcsError::InvalidParameter("tau settings must be 0 or 1".into()));
        }
        Ok(TauBellSettings { unprimed, primed })
    }

    /// `τ = (0,0,0)`, `τ′ = (1,1,1)`.
    pub fn canonical() -> Self {
        TauBellSettings {
            unprimed: [0; 3],
            primed: [1; 3],
        }
    }

    pub fn triples(&self) -> [[u8; 3]; 4] {
        let (u, p) = (self.unprimed, self.primed);
        [[u[0], u[1], u[2]], [u[0], p[1], p[2]], [p[0], u[1], p[2]], [p[0], p[1], u[2]]]
    }
}

/// `|E₀ − E₁ − E₂ − E₃|`
pub fn mermin(correlators: [f64; 4]) -> f64 {
    (correlators[0] - correlators[1] - correlators[2] - correlators[3]).abs()
}

fn mermin_with<T: Copy>(triples: [T; 4], mut e: impl FnMut(T) -> Result<f64>) -> Result<f64> {
    let mut vals = [0.0; 4];
    for (v, t) in vals.iter_mut().zip(triples) {
        *v = e(t)?;
    }
    Ok(mermin(vals))
}

/// Parity Bell–Mermin value of the normalized GHZ-type state, via the closed form.
pub fn bm_parity(alpha: C64, sign: GhzSign, settings: &BellSettings) -> f64 {
    let singular = sign == GhzSign::Minus && alpha.norm() < SMALL_ALPHA;
    mermin_with(settings.triples(), |b| {
        if singular {
            Ok(single_photon_w_parity(&b))
        } else {
            ghz_parity_closed(&b, alpha, sign)
        }
    })
    .expect("closed form is total away from the singular point")
}

/// Parity Bell–Mermin value of an arbitrary three-mode state.
pub fn bm_parity_generic(s: &HybridState, settings: &BellSettings) -> Result<f64> {
    mermin_with(settings.triples(), |b| expect_displaced_parity(s, &b))
}

/// Threshold Bell–Mermin value of `c₁|α,α,α⟩ + c₂|−α,−α,−α⟩`.
pub fn bm_threshold(alpha: C64, c1: C64, c2: C64, settings: &BellSettings) -> Result<f64> {
    mermin_with(settings.triples(), |b| ghz_threshold_closed(alpha, c1, c2, &b))
}

/// Threshold Bell–Mermin value of an arbitrary three-mode state.
pub fn bm_threshold_generic(s: &HybridState, settings: &BellSettings) -> Result<f64> {
    mermin_with(settings.triples(), |b| expect_displaced_threshold(s, &b))
}

/// Logical-qubit Bell–Mermin value on the displaced W state, real `α`.
pub fn bm_w_generic(alpha: f64, settings: &TauBellSettings) -> Result<f64> {
    let a = C64::new(alpha, 0.0);
    let s = w_logical(a)?;
    mermin_with(settings.triples(), |t| expect_a_tau(&s, &t, a))
}

/// `|(6 − 2e^{−2α²} − 7e^{−α²} − 3e^{α²}) / (2 + e^{α²})|`
pub fn bm_w_closed(alpha: f64) -> f64 {
    // Scaled by e^{−α²} so large α does not overflow.
    let x = (-alpha * alpha).exp();
    ((6.0 * x - 2.0 * x * x * x - 7.0 * x * x - 3.0) / (2.0 * x + 1.0)).abs()
}

/// Bisection for the point where `f` crosses the classical bound 2.
pub fn find_violation_onset(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let mut g_lo = f(lo) - 2.0;
    let g_hi = f(hi) - 2.0;
    if !(g_lo.is_finite() && g_hi.is_finite()) {
        return Err(EcsError::NonFiniteObjective {
            value: if g_lo.is_finite() { g_hi } else { g_lo },
        });
    }
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(EcsError::NoBracket {
            f_lo: g_lo + 2.0,
            f_hi: g_hi + 2.0,
        });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let g = f(mid) - 2.0;
        if g == 0.0 {
            return Ok(mid);
        }
        if g.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

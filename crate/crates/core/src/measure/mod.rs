//! Expectation values of local observables on hybrid states.
//!
//! Displaced parity follows `Π(β) = D(β) P D†(β)` and the displaced threshold
//! observable follows `A(β) = D†(β)(2|0⟩⟨0| − I)D(β) = 2|−β⟩⟨−β| − I`. The two
//! side conventions are opposite on purpose; both are kept as defined.
//!
//! Generic expectations sum `c_i* c_j Π_m ⟨f_im|O_m|f_jm⟩` over term pairs.
//! Each single-mode element is bounded by 1 in modulus, so the products can
//! only underflow toward their true (negligible) value.

mod closed;

pub use closed::{
    characteristic_ghz, ghz_parity_closed, ghz_threshold_closed, jkl, logical_v, logical_w,
    single_photon_w_parity, wigner_ghz, GhzSign, SMALL_ALPHA,
};

use crate::elements::{apply_ux, KerrXSpec};
use crate::error::{EcsError, Result};
use crate::states::{HybridState, KetFactor, ProductTerm, C64, ZERO_NORM};

/// Single-mode Hermitian observable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LocalOp {
    Identity,
    /// `D(β) P D†(β)`
    Parity(C64),
    /// `2|−β⟩⟨−β| − I`
    Threshold(C64),
}

fn parity_element(bra: &KetFactor, ket: &KetFactor, beta: C64) -> Result<C64> {
    if beta == C64::new(0.0, 0.0) {
        return Ok(match *ket {
            KetFactor::Coherent(g) => bra.overlap(&KetFactor::Coherent(-g)),
            KetFactor::Fock(n) => bra.overlap(ket) * if n % 2 == 0 { 1.0 } else { -1.0 },
        });
    }
    // ⟨f|Π(β)|γ⟩ = e^{β*γ − βγ*} ⟨f|2β − γ⟩
    let shifted = |g: C64, f: &KetFactor| {
        let phase = (beta.conj() * g - beta * g.conj()).exp();
        phase * f.overlap(&KetFactor::Coherent(beta * 2.0 - g))
    };
    match (*bra, *ket) {
        (_, KetFactor::Coherent(g)) => Ok(shifted(g, bra)),
        // Π is Hermitian: ⟨γ|Π|n⟩ = conj(⟨n|Π|γ⟩)
        (KetFactor::Coherent(g), _) => Ok(shifted(g, ket).conj()),
        _ => Err(EcsError::UnsupportedKind {
            mode: usize::MAX,
            required: "Coherent",
            found: "Fock",
        }),
    }
}

fn local_element(op: &LocalOp, bra: &KetFactor, ket: &KetFactor) -> Result<C64> {
    match *op {
        LocalOp::Identity => Ok(bra.overlap(ket)),
        LocalOp::Parity(beta) => parity_element(bra, ket, beta),
        LocalOp::Threshold(beta) => {
            let vac = KetFactor::Coherent(-beta);
            Ok(bra.overlap(&vac) * vac.overlap(ket) * 2.0 - bra.overlap(ket))
        }
    }
}

fn pair_element(ops: &[LocalOp], a: &ProductTerm, b: &ProductTerm) -> Result<C64> {
    let mut acc = a.coefficient.conj() * b.coefficient;
    for (m, op) in ops.iter().enumerate() {
        let e = local_element(op, &a.factors[m], &b.factors[m]).map_err(|e| match e {
            EcsError::UnsupportedKind { required, found, .. } => EcsError::UnsupportedKind {
                mode: m,
                required,
                found,
            },
            other => other,
        })?;
        acc *= e;
        if acc == C64::new(0.0, 0.0) {
            break;
        }
    }
    Ok(acc)
}

/// `⟨s|O_1 ⊗ … ⊗ O_N|s⟩ / ⟨s|s⟩` for one local operator per mode.
pub fn expect_product(s: &HybridState, ops: &[LocalOp]) -> Result<f64> {
    if ops.len() != s.modes() {
        return Err(EcsError::Dimension {
            expected: s.modes(),
            found: ops.len(),
        });
    }
    let norm = s.norm_sqr();
    if !(norm.sqrt() > ZERO_NORM) {
        return Err(EcsError::DegenerateState);
    }
    let terms = s.terms();
    let mut sum = C64::new(0.0, 0.0);
    for (i, a) in terms.iter().enumerate() {
        sum += pair_element(ops, a, a)?;
        for b in &terms[i + 1..] {
            // Hermitian operator: the (j, i) element is the conjugate of (i, j).
            sum += pair_element(ops, a, b)?.re * 2.0;
        }
    }
    Ok(sum.re / norm)
}

/// `⟨Π(β_1) ⊗ … ⊗ Π(β_N)⟩`, one displacement per mode.
pub fn expect_displaced_parity(s: &HybridState, betas: &[C64]) -> Result<f64> {
    let ops: Vec<LocalOp> = betas.iter().map(|&b| LocalOp::Parity(b)).collect();
    expect_product(s, &ops)
}

/// `⟨A(β_1) ⊗ … ⊗ A(β_N)⟩`, one displacement per mode.
pub fn expect_displaced_threshold(s: &HybridState, betas: &[C64]) -> Result<f64> {
    let ops: Vec<LocalOp> = betas.iter().map(|&b| LocalOp::Threshold(b)).collect();
    expect_product(s, &ops)
}

/// `⟨𝒜(τ_1)𝒜(τ_2)𝒜(τ_3)⟩` where `𝒜(τ) = U(τ)†(2|0⟩⟨0| − I)U(τ)`, `U(0) = I`, `U(1) = U_X`.
pub fn expect_a_tau(s: &HybridState, tau: &[u8], alpha: C64) -> Result<f64> {
    if tau.len() != s.modes() {
        return Err(EcsError::Dimension {
            expected: s.modes(),
            found: tau.len(),
        });
    }
    let mut rotated = s.clone();
    for (mode, &t) in tau.iter().enumerate() {
        match t {
            0 => {}
            1 => rotated = apply_ux(&rotated, &KerrXSpec { mode, alpha })?,
            other => {
                return Err(EcsError::InvalidParameter(format!("tau must be 0 or 1, got {other}")))
            }
        }
    }
    let zero = C64::new(0.0, 0.0);
    expect_product(&rotated, &vec![LocalOp::Threshold(zero); tau.len()])
}

/// One outcome of a click/no-click detection on a Fock mode.
#[derive(Clone, Debug, PartialEq)]
pub struct DetectionBranch {
    pub click: bool,
    pub probability: f64,
    /// Collapsed, normalized state of the remaining modes; `None` when the
    /// branch has zero probability or no modes remain.
    pub state: Option<HybridState>,
}

/// Projects `mode` onto zero photons (no click) and onto `n ≥ 1` (click).
///
/// The click branch is pure only when a single photon number contributes to
/// it; otherwise the remaining modes would be left mixed and this errors.
pub fn threshold_detect(s: &HybridState, mode: usize) -> Result<Vec<DetectionBranch>> {
    s.require_fock(mode)?;
    let total = s.norm_sqr();
    if !(total.sqrt() > ZERO_NORM) {
        return Err(EcsError::DegenerateState);
    }
    let remaining = s.modes() - 1;
    let strip = |n: u32| -> Vec<ProductTerm> {
        s.terms()
            .iter()
            .filter(|t| t.factors[mode] == KetFactor::Fock(n))
            .map(|t| {
                let mut f = t.factors.clone();
                f.remove(mode);
                ProductTerm::new(t.coefficient, f)
            })
            .collect()
    };
    let weight = |terms: &[ProductTerm]| -> f64 {
        if remaining == 0 {
            terms.iter().map(|t| t.coefficient).sum::<C64>().norm_sqr()
        } else {
            HybridState::from_parts(remaining, terms.to_vec()).norm_sqr()
        }
    };
    let branch = |click: bool, terms: Vec<ProductTerm>, w: f64| -> Result<DetectionBranch> {
        let probability = w / total;
        let state = if remaining == 0 || !(w.sqrt() > ZERO_NORM) {
            None
        } else {
            Some(HybridState::from_parts(remaining, terms).normalize()?)
        };
        Ok(DetectionBranch {
            click,
            probability,
            state,
        })
    };

    let vacuum = strip(0);
    let w0 = weight(&vacuum);
    let mut photons: Vec<u32> = s
        .terms()
        .iter()
        .filter_map(|t| match t.factors[mode] {
            KetFactor::Fock(n) if n > 0 => Some(n),
            _ => None,
        })
        .collect();
    photons.sort_unstable();
    photons.dedup();
    let mut click_terms = Vec::new();
    let mut w1 = 0.0;
    let mut populated = 0;
    for n in photons {
        let terms = strip(n);
        let w = weight(&terms);
        if w.sqrt() > ZERO_NORM {
            populated += 1;
            w1 += w;
            click_terms = terms;
        }
    }
    if populated > 1 && remaining > 0 {
        return Err(EcsError::MixedBranch { mode });
    }
    Ok(vec![branch(false, vacuum, w0)?, branch(true, click_terms, w1)?])
}

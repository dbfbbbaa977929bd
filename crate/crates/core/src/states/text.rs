//! Plain-text state dump: one term per line,
//! `coeff_re coeff_im | C:re,im F:n ...`.
//!
//! Blank lines and lines starting with `#` are ignored. Floats are written in
//! shortest round-trip scientific form so a dump parses back bit-exactly.

use super::{HybridState, KetFactor, ProductTerm, C64};
use crate::error::{EcsError, Result};
use std::fmt;
use std::str::FromStr;

impl fmt::Display for KetFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KetFactor::Coherent(a) => write!(f, "C:{:e},{:e}", a.re, a.im),
            KetFactor::Fock(n) => write!(f, "F:{n}"),
        }
    }
}

impl fmt::Display for HybridState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in self.terms() {
            write!(f, "{:e} {:e} |", t.coefficient.re, t.coefficient.im)?;
            for k in &t.factors {
                write!(f, " {k}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn perr(line: usize, msg: impl Into<String>) -> EcsError {
    EcsError::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| perr(line, format!("bad number {s:?}: {e}")))
}

fn parse_factor(tok: &str, line: usize) -> Result<KetFactor> {
    let (kind, value) = tok
        .split_once(':')
        .ok_or_else(|| perr(line, format!("factor {tok:?} lacks a kind prefix")))?;
    match kind {
        "C" => {
            let (re, im) = value
                .split_once(',')
                .ok_or_else(|| perr(line, format!("coherent factor {tok:?} needs re,im")))?;
            Ok(KetFactor::Coherent(C64::new(
                parse_f64(re, line)?,
                parse_f64(im, line)?,
            )))
        }
        "F" => value
            .parse::<u32>()
            .map(KetFactor::Fock)
            .map_err(|e| perr(line, format!("bad photon number {value:?}: {e}"))),
        other => Err(perr(line, format!("unknown factor kind {other:?}"))),
    }
}

impl FromStr for HybridState {
    type Err = EcsError;

    fn from_str(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let (coeff, factors) = body
                .split_once('|')
                .ok_or_else(|| perr(line, "missing '|' separator"))?;
            let mut parts = coeff.split_whitespace();
            let (re, im) = match (parts.next(), parts.next(), parts.next()) {
                (Some(re), Some(im), None) => (parse_f64(re, line)?, parse_f64(im, line)?),
                _ => return Err(perr(line, "coefficient must be `re im`")),
            };
            let factors = factors
                .split_whitespace()
                .map(|tok| parse_factor(tok, line))
                .collect::<Result<Vec<_>>>()?;
            if factors.is_empty() {
                return Err(perr(line, "term has no factors"));
            }
            terms.push(ProductTerm::new(C64::new(re, im), factors));
        }
        let modes = terms
            .first()
            .map(|t| t.factors.len())
            .ok_or_else(|| perr(0, "no terms"))?;
        HybridState::new(modes, terms)
    }
}

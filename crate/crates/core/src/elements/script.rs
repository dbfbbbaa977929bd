//! Plain-text circuit descriptions, one element per line:
//!
//! ```text
//! BS theta phi a b
//! PS mode phi
//! D  mode re im
//! CK ctrl tgt theta
//! UX mode re im
//! ```
//!
//! Blank lines and `#` comments are ignored.

use super::{
    apply_beam_splitter, apply_cross_kerr, apply_displacement, apply_phase_shifter, apply_ux,
    BeamSplitterSpec, CrossKerrSpec, DisplacementSpec, KerrXSpec,
};
use crate::error::{EcsError, Result};
use crate::states::{HybridState, C64};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Element {
    BeamSplitter(BeamSplitterSpec),
    PhaseShifter { mode: usize, phi: f64 },
    Displacement(DisplacementSpec),
    CrossKerr(CrossKerrSpec),
    KerrX(KerrXSpec),
}

impl Element {
    pub fn apply(&self, s: &HybridState) -> Result<HybridState> {
        match self {
            Element::BeamSplitter(b) => apply_beam_splitter(s, b),
            Element::PhaseShifter { mode, phi } => apply_phase_shifter(s, *mode, *phi),
            Element::Displacement(d) => apply_displacement(s, d),
            Element::CrossKerr(k) => apply_cross_kerr(s, k),
            Element::KerrX(x) => apply_ux(s, x),
        }
    }
}

fn field<T: FromStr>(tok: &[&str], i: usize, line: usize) -> Result<T> {
    let raw = tok.get(i).ok_or_else(|| EcsError::Parse {
        line,
        msg: format!("expected {} fields", i + 1),
    })?;
    raw.parse().map_err(|_| EcsError::Parse {
        line,
        msg: format!("cannot parse field {raw:?}"),
    })
}

fn parse_line(tok: &[&str], line: usize) -> Result<Element> {
    let arity = |n: usize| -> Result<()> {
        if tok.len() == n {
            Ok(())
        } else {
            Err(EcsError::Parse {
                line,
                msg: format!("{} takes {} fields, got {}", tok[0], n - 1, tok.len() - 1),
            })
        }
    };
    let wrap = |e: EcsError| match e {
        EcsError::Parse { .. } => e,
        other => EcsError::Parse {
            line,
            msg: other.to_string(),
        },
    };
    let el = match tok[0] {
        "BS" => {
            arity(5)?;
            Element::BeamSplitter(
                BeamSplitterSpec::new(
                    field(tok, 1, line)?,
                    field(tok, 2, line)?,
                    field(tok, 3, line)?,
                    field(tok, 4, line)?,
                )
                .map_err(wrap)?,
            )
        }
        "PS" => {
            arity(3)?;
            Element::PhaseShifter {
                mode: field(tok, 1, line)?,
                phi: field(tok, 2, line)?,
            }
        }
        "D" => {
            arity(4)?;
            Element::Displacement(DisplacementSpec {
                mode: field(tok, 1, line)?,
                beta: C64::new(field(tok, 2, line)?, field(tok, 3, line)?),
            })
        }
        "CK" => {
            arity(4)?;
            Element::CrossKerr(
                CrossKerrSpec::new(field(tok, 1, line)?, field(tok, 2, line)?, field(tok, 3, line)?)
                    .map_err(wrap)?,
            )
        }
        "UX" => {
            arity(4)?;
            Element::KerrX(KerrXSpec {
                mode: field(tok, 1, line)?,
                alpha: C64::new(field(tok, 2, line)?, field(tok, 3, line)?),
            })
        }
        other => {
            return Err(EcsError::Parse {
                line,
                msg: format!("unknown element {other:?}"),
            })
        }
    };
    Ok(el)
}

pub fn parse_circuit(text: &str) -> Result<Vec<Element>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tok: Vec<&str> = body.split_whitespace().collect();
        out.push(parse_line(&tok, i + 1)?);
    }
    Ok(out)
}

//! Dense truncated-Fock representation used to check the analytic code.
//!
//! Amplitudes are stored row-major with mode 0 most significant. Operators are
//! dense matrices acting on one or two modes; applying one contracts only the
//! touched modes, iterating the nonzero entries so block-sparse matrices such
//! as beam splitters stay cheap. Unitary kinds are exponentials of truncated
//! anti-Hermitian generators, hence exactly unitary on the truncated space;
//! their action on low photon numbers is accurate when the adequacy rule holds.

mod checks;

pub use checks::{run_suite, w_circuit_oracle, CheckReport, Suite, DEFAULT_TOL, UNITARITY_TOL};

use crate::error::{EcsError, Result};
use crate::states::{HybridState, KetFactor, C64};
use nalgebra::DMatrix;
use std::f64::consts::PI;

/// Largest dense state the oracle will build.
pub const MAX_AMPLITUDES: usize = 10_000_000;

pub type Matrix = DMatrix<C64>;

/// `ceil(|α|² + 6|α| + 10)`; a zero amplitude is represented exactly by any dimension.
pub fn required_dim(amplitude: f64) -> usize {
    if amplitude == 0.0 {
        return 2;
    }
    (amplitude * amplitude + 6.0 * amplitude + 10.0).ceil() as usize
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub dims: Vec<usize>,
}

impl Truncation {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.iter().any(|&d| d < 2) {
            return Err(EcsError::InvalidParameter("every truncated dimension must be at least 2".into()));
        }
        let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
        match total {
            Some(t) if t <= MAX_AMPLITUDES => Ok(Truncation { dims }),
            Some(t) => Err(EcsError::OracleTooLarge(t)),
            None => Err(EcsError::OracleTooLarge(usize::MAX)),
        }
    }

    /// Smallest adequate truncation for `s`, with per-mode amplitude headroom
    /// `extra[m]` for later displacements or mixing.
    pub fn adequate_for(s: &HybridState, extra: &[f64]) -> Result<Self> {
        let amps = s.max_amplitudes();
        let dims = (0..s.modes())
            .map(|m| {
                let photons = s
                    .terms()
                    .iter()
                    .filter_map(|t| match t.factors[m] {
                        KetFactor::Fock(n) => Some(n as usize + 1),
                        _ => None,
                    })
                    .max()
                    .unwrap_or(0);
                let coherent = amps[m] + extra.get(m).copied().unwrap_or(0.0);
                required_dim(coherent).max(photons)
            })
            .collect();
        Truncation::new(dims)
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dims.len()];
        for m in (0..self.dims.len().saturating_sub(1)).rev() {
            s[m] = s[m + 1] * self.dims[m + 1];
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    pub amplitudes: Vec<C64>,
    pub truncation: Truncation,
}

/// Truncated coherent-state vector `e^{−|α|²/2} αⁿ/√n!`.
pub fn coherent_vector(alpha: C64, dim: usize) -> Vec<C64> {
    let mut v = Vec::with_capacity(dim);
    let mut cur = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 0..dim {
        v.push(cur);
        cur = cur * alpha / ((n + 1) as f64).sqrt();
    }
    v
}

fn factor_vector(f: &KetFactor, dim: usize, mode: usize) -> Result<Vec<C64>> {
    match *f {
        KetFactor::Coherent(a) => {
            let required = required_dim(a.norm());
            if dim < required {
                return Err(EcsError::Truncation {
                    mode,
                    dim,
                    required,
                    amplitude: a.norm(),
                });
            }
            Ok(coherent_vector(a, dim))
        }
        KetFactor::Fock(n) => {
            if n as usize >= dim {
                return Err(EcsError::Truncation {
                    mode,
                    dim,
                    required: n as usize + 1,
                    amplitude: 0.0,
                });
            }
            let mut v = vec![C64::new(0.0, 0.0); dim];
            v[n as usize] = C64::new(1.0, 0.0);
            Ok(v)
        }
    }
}

pub fn to_fock(s: &HybridState, t: &Truncation) -> Result<FockVector> {
    if t.dims.len() != s.modes() {
        return Err(EcsError::Dimension {
            expected: s.modes(),
            found: t.dims.len(),
        });
    }
    let mut out = vec![C64::new(0.0, 0.0); t.total()];
    for term in s.terms() {
        let mut v = vec![term.coefficient];
        for (m, f) in term.factors.iter().enumerate() {
            let fv = factor_vector(f, t.dims[m], m)?;
            let mut next = Vec::with_capacity(v.len() * fv.len());
            for a in &v {
                next.extend(fv.iter().map(|b| a * b));
            }
            v = next;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o += x;
        }
    }
    Ok(FockVector {
        amplitudes: out,
        truncation: t.clone(),
    })
}

impl FockVector {
    /// `⟨self|other⟩`
    pub fn inner(&self, other: &FockVector) -> Result<C64> {
        if self.truncation != other.truncation {
            return Err(EcsError::Dimension {
                expected: self.amplitudes.len(),
                found: other.amplitudes.len(),
            });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies `op` to `modes` (one or more, in the operator's index order).
    pub fn apply(&self, op: &Matrix, modes: &[usize]) -> Result<FockVector> {
        let t = &self.truncation;
        let mut sub = 1;
        for (k, &m) in modes.iter().enumerate() {
            if m >= t.dims.len() || modes[..k].contains(&m) {
                return Err(EcsError::ModeIndex {
                    index: m,
                    modes: t.dims.len(),
                });
            }
            sub *= t.dims[m];
        }
        if op.nrows() != sub || op.ncols() != sub {
            return Err(EcsError::Dimension {
                expected: sub,
                found: op.nrows(),
            });
        }
        let strides = t.strides();
        // offset of each sub-index within the full vector
        let mut offsets = vec![0usize; sub];
        for (i, off) in offsets.iter_mut().enumerate() {
            let mut rem = i;
            for &m in modes.iter().rev() {
                *off += (rem % t.dims[m]) * strides[m];
                rem /= t.dims[m];
            }
        }
        let rows: Vec<Vec<(usize, C64)>> = (0..sub)
            .map(|r| {
                (0..sub)
                    .filter_map(|c| {
                        let v = op[(r, c)];
                        (v != C64::new(0.0, 0.0)).then_some((c, v))
                    })
                    .collect()
            })
            .collect();
        let others: Vec<usize> = (0..t.dims.len()).filter(|m| !modes.contains(m)).collect();
        let n_outer: usize = others.iter().map(|&m| t.dims[m]).product();
        let mut out = vec![C64::new(0.0, 0.0); self.amplitudes.len()];
        let mut gathered = vec![C64::new(0.0, 0.0); sub];
        for o in 0..n_outer {
            let mut base = 0;
            let mut rem = o;
            for &m in others.iter().rev() {
                base += (rem % t.dims[m]) * strides[m];
                rem /= t.dims[m];
            }
            for (g, off) in gathered.iter_mut().zip(&offsets) {
                *g = self.amplitudes[base + off];
            }
            for (r, row) in rows.iter().enumerate() {
                let acc: C64 = row.iter().map(|&(c, v)| v * gathered[c]).sum();
                out[base + offsets[r]] = acc;
            }
        }
        Ok(FockVector {
            amplitudes: out,
            truncation: t.clone(),
        })
    }

    /// Zeroes every amplitude whose photon number on `mode` fails `keep`.
    pub fn project(&self, mode: usize, keep: impl Fn(usize) -> bool) -> Result<FockVector> {
        let t = &self.truncation;
        if mode >= t.dims.len() {
            return Err(EcsError::ModeIndex {
                index: mode,
                modes: t.dims.len(),
            });
        }
        let stride = t.strides()[mode];
        let dim = t.dims[mode];
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, &a)| if keep((i / stride) % dim) { a } else { C64::new(0.0, 0.0) })
            .collect();
        Ok(FockVector {
            amplitudes,
            truncation: t.clone(),
        })
    }
}

/// `⟨v|O_1 ⊗ O_2 ⊗ …|v⟩` for operators on disjoint mode groups.
pub fn expect(v: &FockVector, ops: &[(&Matrix, &[usize])]) -> Result<C64> {
    let mut w = v.clone();
    for (op, modes) in ops {
        w = w.apply(op, modes)?;
    }
    v.inner(&w)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OperatorKind {
    Displacement(C64),
    /// Two-mode; index `n_a · d_b + n_b`.
    BeamSplitter { theta: f64, phi: f64 },
    /// `D(β) P D†(β)`
    ParityDisplaced(C64),
    /// `D†(β)(2|0⟩⟨0| − I)D(β)`
    ThresholdDisplaced(C64),
    /// `diag(e^{−iπn²/2})`
    KerrPi,
    /// Two-mode `diag(e^{iθ n_c n_t})`, control first.
    CrossKerr(f64),
    PhaseShift(f64),
}

impl OperatorKind {
    pub fn is_two_mode(&self) -> bool {
        matches!(self, OperatorKind::BeamSplitter { .. } | OperatorKind::CrossKerr(_))
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(self, OperatorKind::ParityDisplaced(_) | OperatorKind::ThresholdDisplaced(_))
    }
}

fn annihilation(dim: usize) -> Matrix {
    let mut a = Matrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

fn displacement(beta: C64, dim: usize) -> Matrix {
    let a = annihilation(dim);
    let gen = a.adjoint() * beta - &a * beta.conj();
    gen.exp()
}

fn diagonal(dim: usize, f: impl Fn(usize) -> C64) -> Matrix {
    Matrix::from_fn(dim, dim, |r, c| if r == c { f(r) } else { C64::new(0.0, 0.0) })
}

fn beam_splitter(theta: f64, phi: f64, da: usize, db: usize) -> Matrix {
    // G = θ/2 (e^{iφ} a†b − e^{−iφ} b†a) conserves n_a + n_b; exponentiate per block.
    let e = C64::from_polar(0.5 * theta, phi);
    let mut out = Matrix::zeros(da * db, da * db);
    for total in 0..(da + db - 1) {
        let states: Vec<(usize, usize)> = (0..da)
            .filter(|&na| total >= na && total - na < db)
            .map(|na| (na, total - na))
            .collect();
        let k = states.len();
        let mut g = Matrix::zeros(k, k);
        for (j, &(na, nb)) in states.iter().enumerate() {
            // a†b |na, nb⟩ = √((na+1) nb) |na+1, nb−1⟩
            if nb > 0 && na + 1 < da {
                let i = states.iter().position(|&s| s == (na + 1, nb - 1)).expect("same block");
                g[(i, j)] += e * (((na + 1) * nb) as f64).sqrt();
            }
            // b†a |na, nb⟩ = √(na (nb+1)) |na−1, nb+1⟩
            if na > 0 && nb + 1 < db {
                let i = states.iter().position(|&s| s == (na - 1, nb + 1)).expect("same block");
                g[(i, j)] -= e.conj() * ((na * (nb + 1)) as f64).sqrt();
            }
        }
        let u = g.exp();
        for (i, &(ra, rb)) in states.iter().enumerate() {
            for (j, &(ca, cb)) in states.iter().enumerate() {
                out[(ra * db + rb, ca * db + cb)] = u[(i, j)];
            }
        }
    }
    out
}

/// Dense matrix of `kind` on modes of the given dimensions (two for two-mode kinds).
pub fn operator_matrix(kind: OperatorKind, dims: &[usize]) -> Result<Matrix> {
    let want = if kind.is_two_mode() { 2 } else { 1 };
    if dims.len() != want {
        return Err(EcsError::Dimension {
            expected: want,
            found: dims.len(),
        });
    }
    if dims.iter().any(|&d| d < 2) {
        return Err(EcsError::InvalidParameter("dimension below 2".into()));
    }
    let d = dims[0];
    let check = |beta: C64| -> Result<()> {
        let required = required_dim(beta.norm());
        if d < required {
            return Err(EcsError::Truncation {
                mode: 0,
                dim: d,
                required,
                amplitude: beta.norm(),
            });
        }
        Ok(())
    };
    Ok(match kind {
        OperatorKind::Displacement(beta) => {
            check(beta)?;
            displacement(beta, d)
        }
        OperatorKind::ParityDisplaced(beta) => {
            check(beta)?;
            let dm = displacement(beta, d);
            let p = diagonal(d, |n| C64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0));
            &dm * p * dm.adjoint()
        }
        OperatorKind::ThresholdDisplaced(beta) => {
            check(beta)?;
            let dm = displacement(beta, d);
            let q = diagonal(d, |n| C64::new(if n == 0 { 1.0 } else { -1.0 }, 0.0));
            dm.adjoint() * q * dm
        }
        OperatorKind::KerrPi => {
            // n² mod 4 keeps the phase argument small
            diagonal(d, |n| C64::from_polar(1.0, -PI * ((n * n) % 4) as f64 / 2.0))
        }
        OperatorKind::PhaseShift(phi) => diagonal(d, |n| C64::from_polar(1.0, phi * n as f64)),
        OperatorKind::CrossKerr(theta) => {
            let db = dims[1];
            diagonal(d * db, |i| C64::from_polar(1.0, theta * ((i / db) * (i % db)) as f64))
        }
        OperatorKind::BeamSplitter { theta, phi } => beam_splitter(theta, phi, d, dims[1]),
    })
}

/// `max |(U†U − I)_{ij}|`
pub fn unitarity_defect(u: &Matrix) -> f64 {
    let prod = u.adjoint() * u;
    let mut worst: f64 = 0.0;
    for r in 0..prod.nrows() {
        for c in 0..prod.ncols() {
            let target = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((prod[(r, c)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

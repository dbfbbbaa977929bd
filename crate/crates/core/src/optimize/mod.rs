//! Multi-start steepest ascent with central finite-difference gradients.
//!
//! Each start moves along the normalized gradient. An improving step is
//! accepted and the step length doubles; a failing one shrinks the step by
//! `step_shrink` and retries. A start stops once an accepted step gains less
//! than `conv_tol`, the step collapses, or `max_iters` steps were taken.
//! Restarts run in parallel; the reduction keeps the largest value and, on
//! ties, the lowest restart index, so results do not depend on scheduling.

use crate::bell::{BellSettings, PARAMS};
use crate::error::{EcsError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Step lengths below this end a start as converged.
const MIN_STEP: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub step_init: f64,
    pub step_shrink: f64,
    /// Central-difference half-width.
    pub grad_eps: f64,
    /// Minimum objective gain per accepted step.
    pub conv_tol: f64,
    pub seed: u64,
    /// Starts are drawn uniformly from `[−r, r]` per parameter.
    pub search_radius: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 64,
            max_iters: 2000,
            step_init: 0.1,
            step_shrink: 0.5,
            grad_eps: 1e-6,
            conv_tol: 1e-9,
            seed: 0,
            search_radius: 2.0,
        }
    }
}

impl OptimizerConfig {
    /// Defaults with the search box scaled to the amplitude.
    pub fn for_alpha(alpha: f64) -> Self {
        OptimizerConfig {
            search_radius: default_radius(alpha),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [self.step_init, self.grad_eps, self.conv_tol, self.search_radius];
        if self.restarts == 0
            || self.max_iters == 0
            || positive.iter().any(|v| !(*v > 0.0 && v.is_finite()))
            || !(self.step_shrink > 0.0 && self.step_shrink < 1.0)
        {
            return Err(EcsError::InvalidParameter(format!("invalid optimizer config {self:?}")));
        }
        Ok(())
    }
}

/// `min(2 / max(|α|, 0.5), 1)`
pub fn default_radius(alpha: f64) -> f64 {
    (2.0 / alpha.abs().max(0.5)).min(MAX_DEFAULT_RADIUS)
}

/// Cap on the default box: beyond it most starts sit where every correlator is flat.
pub const MAX_DEFAULT_RADIUS: f64 = 1.0;

/// One local ascent.
#[derive(Clone, Debug, PartialEq)]
pub struct Ascent {
    pub value: f64,
    pub point: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after the start and after every accepted step.
    pub history: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptResult {
    pub best_value: f64,
    pub best_settings: BellSettings,
    pub iterations: usize,
    pub restarts_used: usize,
    pub converged: bool,
}

fn checked(value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(EcsError::NonFiniteObjective { value })
    }
}

pub fn gradient<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], eps: f64) -> Result<Vec<f64>> {
    let mut probe = x.to_vec();
    let mut g = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        probe[i] = x[i] + eps;
        let up = checked(f(&probe))?;
        probe[i] = x[i] - eps;
        let down = checked(f(&probe))?;
        probe[i] = x[i];
        g.push((up - down) / (2.0 * eps));
    }
    Ok(g)
}

/// Steepest ascent from `start`.
pub fn ascend<F: Fn(&[f64]) -> f64>(f: &F, start: &[f64], config: &OptimizerConfig) -> Result<Ascent> {
    let mut x = start.to_vec();
    let mut value = checked(f(&x))?;
    let mut history = vec![value];
    let mut step = config.step_init;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iters {
        let g = gradient(f, &x, config.grad_eps)?;
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            converged = true;
            break;
        }
        let gain = loop {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi + step * gi / norm).collect();
            let ft = checked(f(&trial))?;
            if ft > value {
                x = trial;
                let gain = ft - value;
                value = ft;
                step *= 2.0;
                break Some(gain);
            }
            step *= config.step_shrink;
            if step < MIN_STEP {
                break None;
            }
        };
        match gain {
            None => {
                converged = true;
                break;
            }
            Some(gain) => {
                iterations += 1;
                history.push(value);
                if gain < config.conv_tol {
                    converged = true;
                    break;
                }
            }
        }
    }
    Ok(Ascent {
        value,
        point: x,
        iterations,
        converged,
        history,
    })
}

/// Start points in `[−r, r]^dim`, drawn sequentially from the seeded stream.
pub fn start_points(dim: usize, config: &OptimizerConfig) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let r = config.search_radius;
    (0..config.restarts)
        .map(|_| (0..dim).map(|_| rng.random_range(-r..=r)).collect())
        .collect()
}

/// Best local optimum over the given starts.
pub fn maximize_from<F>(f: &F, starts: &[Vec<f64>], config: &OptimizerConfig) -> Result<Ascent>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    config.validate()?;
    let runs: Vec<Result<Ascent>> = starts.par_iter().map(|s| ascend(f, s, config)).collect();
    let mut best: Option<Ascent> = None;
    for run in runs {
        let run = run?;
        // strict comparison keeps the lowest index among ties
        if best.as_ref().is_none_or(|b| run.value > b.value) {
            best = Some(run);
        }
    }
    best.ok_or_else(|| EcsError::InvalidParameter("no start points".into()))
}

pub fn maximize_params<F>(f: &F, dim: usize, config: &OptimizerConfig) -> Result<Ascent>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    maximize_from(f, &start_points(dim, config), config)
}

fn to_result(best: Ascent, restarts: usize) -> Result<OptResult> {
    Ok(OptResult {
        best_value: best.value,
        best_settings: BellSettings::from_params(&best.point)?,
        iterations: best.iterations,
        restarts_used: restarts,
        converged: best.converged,
    })
}

fn lift<F>(objective: &F) -> impl Fn(&[f64]) -> f64 + Sync + '_
where
    F: Fn(&BellSettings) -> f64 + Sync,
{
    move |p: &[f64]| BellSettings::from_params(p).map(|s| objective(&s)).unwrap_or(f64::NAN)
}

/// Maximizes a Bell–Mermin objective over the 12 displacement parameters.
pub fn maximize<F>(objective: &F, config: &OptimizerConfig) -> Result<OptResult>
where
    F: Fn(&BellSettings) -> f64 + Sync,
{
    let best = maximize_params(&lift(objective), PARAMS, config)?;
    to_result(best, config.restarts)
}

/// Per-α maximization. From the second α on, the last successful optimum
/// replaces the first random start. A failure at one α is returned in its row
/// and does not stop the sweep; only an invalid grid or config is fatal.
pub fn sweep_alpha<Fam, Obj, Cfg>(
    alphas: &[f64],
    family: Fam,
    config_for: Cfg,
) -> Result<Vec<(f64, Result<OptResult>)>>
where
    Fam: Fn(f64) -> Obj,
    Obj: Fn(&BellSettings) -> f64 + Sync,
    Cfg: Fn(f64) -> OptimizerConfig,
{
    for (k, &alpha) in alphas.iter().enumerate() {
        if !alpha.is_finite() || (k > 0 && alpha < alphas[k - 1]) {
            return Err(EcsError::InvalidParameter("alphas must be finite and ascending".into()));
        }
    }
    let mut out: Vec<(f64, Result<OptResult>)> = Vec::with_capacity(alphas.len());
    let mut warm: Option<[f64; PARAMS]> = None;
    for &alpha in alphas {
        let config = config_for(alpha);
        config.validate()?;
        let mut starts = start_points(PARAMS, &config);
        if let Some(p) = warm {
            starts[0] = p.to_vec();
        }
        let objective = family(alpha);
        let row = maximize_from(&lift(&objective), &starts, &config).and_then(|best| to_result(best, config.restarts));
        if let Ok(r) = &row {
            warm = Some(r.best_settings.to_params());
        }
        out.push((alpha, row));
    }
    Ok(out)
}

#[cfg(test)]
mod tests;

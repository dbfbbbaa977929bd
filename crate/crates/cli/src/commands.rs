use crate::manifest::RunManifest;
use crate::{
    Cli, Command, Family, GenerateWArgs, OptimizeArgs, OptimizerArgs, OracleArgs, ReproArgs, RunCircuitArgs, SignArg, SuiteArg,
    EXIT_CHECK_FAILED, EXIT_OK,
};
use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};
use ecs_core::bell::{bm_parity, bm_threshold, bm_w_closed, BellSettings};
use ecs_core::circuits::{run_w_circuit, w_branch_probabilities, w_reference, WCircuitSpec, SIGN_PATTERNS};
use ecs_core::elements::parse_circuit;
use ecs_core::fockoracle::{run_suite, Suite};
use ecs_core::optimize::{maximize, sweep_alpha, OptResult, OptimizerConfig};
use ecs_core::{HybridState, C64};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// Parity test, α from 0.1 to 10.
    Fig2a,
    /// Parity test at small α, 1e-3 to 1.
    Fig2b,
    /// Threshold test, α from 0.02 to 1.
    Fig3,
    /// Logical-qubit test on the W state, α from 0 to 4.
    Fig5,
}

fn log_grid(lo_exp: f64, step: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| 10f64.powf(lo_exp + step * k as f64)).collect()
}

fn linear_grid(lo: f64, step: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + step * k as f64).collect()
}

/// Sample points of each figure. Dense enough for five or more points across
/// the small-α peak, the threshold cutoff region and the W-state onset.
pub fn figure_grid(figure: Figure) -> Vec<f64> {
    match figure {
        Figure::Fig2a => log_grid(-1.0, 0.1, 21),
        Figure::Fig2b => log_grid(-3.0, 0.2, 16),
        Figure::Fig3 => linear_grid(0.02, 0.02, 50),
        Figure::Fig5 => linear_grid(0.0, 0.05, 81),
    }
}

fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn optimizer_config(alpha: f64, opt: &OptimizerArgs) -> OptimizerConfig {
    let mut config = OptimizerConfig::for_alpha(alpha);
    config.restarts = opt.restarts;
    config.seed = opt.seed;
    config.max_iters = opt.max_iters;
    if let Some(r) = opt.radius {
        config.search_radius = r;
    }
    config
}

fn c64(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn threshold_objective(alpha: f64, sign: SignArg) -> impl Fn(&BellSettings) -> f64 + Sync {
    let c2 = c64(sign.ghz().factor());
    move |s: &BellSettings| bm_threshold(c64(alpha), c64(1.0), c2, s).unwrap_or(f64::NAN)
}

fn parity_objective(alpha: f64, sign: SignArg) -> impl Fn(&BellSettings) -> f64 + Sync {
    move |s: &BellSettings| bm_parity(c64(alpha), sign.ghz(), s)
}

/// CSV text for one figure.
pub fn repro_csv(figure: Figure, sign: SignArg, opt: &OptimizerArgs) -> Result<String> {
    let grid = figure_grid(figure);
    let mut out = String::from("alpha,bm_value,converged,restarts\n");
    if figure == Figure::Fig5 {
        for a in grid {
            writeln!(out, "{},{},true,", num(a), num(bm_w_closed(a)))?;
        }
        return Ok(out);
    }
    let config_for = |a: f64| optimizer_config(a, opt);
    let rows = if figure == Figure::Fig3 {
        sweep_alpha(&grid, |a| threshold_objective(a, sign), config_for)?
    } else {
        sweep_alpha(&grid, |a| parity_objective(a, sign), config_for)?
    };
    for (a, row) in rows {
        match row {
            Ok(r) => writeln!(out, "{},{},{},{}", num(a), num(r.best_value), r.converged, r.restarts_used)?,
            Err(_) => writeln!(out, "{},{},false,{}", num(a), num(f64::NAN), opt.restarts)?,
        }
    }
    Ok(out)
}

fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

fn settings_json(s: &BellSettings) -> Value {
    json!({
        "unprimed": s.unprimed.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
        "primed": s.primed.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
    })
}

fn opt_result_json(r: &OptResult) -> Value {
    json!({
        "best_value": r.best_value,
        "best_params": r.best_settings.to_params().to_vec(),
        "best_settings": settings_json(&r.best_settings),
        "iterations": r.iterations,
        "restarts_used": r.restarts_used,
        "converged": r.converged,
    })
}

fn optimize_json(args: &OptimizeArgs) -> Result<Value> {
    if !args.alpha.is_finite() {
        bail!("alpha must be finite");
    }
    let config = optimizer_config(args.alpha, &args.opt);
    let result = match args.family {
        Family::Parity => maximize(&parity_objective(args.alpha, args.sign), &config)?,
        Family::Threshold => maximize(&threshold_objective(args.alpha, args.sign), &config)?,
    };
    Ok(json!({
        "family": format!("{:?}", args.family).to_lowercase(),
        "alpha": args.alpha,
        "sign": format!("{:?}", args.sign).to_lowercase(),
        "seed": config.seed,
        "search_radius": config.search_radius,
        "max_iters": config.max_iters,
        "result": opt_result_json(&result),
    }))
}

fn generate_w_json(args: &GenerateWArgs) -> Result<Value> {
    let spec = WCircuitSpec {
        gamma: args.gamma,
        theta: args.theta,
        apply_final_displacement: args.displace,
    };
    let alpha = spec.effective_alpha();
    let reported = run_w_circuit(&spec)?;
    let displaced = run_w_circuit(&WCircuitSpec {
        apply_final_displacement: true,
        ..spec
    })?;
    let mut probabilities = serde_json::Map::new();
    let mut outcomes = Vec::new();
    let mut sum = 0.0;
    for (out, disp) in reported.iter().zip(&displaced) {
        let name = format!("{:?}", out.detector);
        probabilities.insert(name.clone(), json!(out.probability));
        sum += out.probability;
        // best match among the W references, judged on the displaced state
        let mut fidelity: f64 = 0.0;
        for pattern in SIGN_PATTERNS {
            let c = |s: i8| c64(s as f64);
            let reference = w_reference(alpha, c(pattern[0]), c(pattern[1]), c(pattern[2]))?;
            fidelity = fidelity.max(disp.state.fidelity(&reference)?);
        }
        outcomes.push(json!({
            "detector": name,
            "probability": out.probability,
            "is_w_type": out.is_w_type,
            "sign_pattern": out.sign_pattern,
            "fidelity": fidelity,
            "terms": out.state.len(),
            "state": out.state.to_string(),
        }));
    }
    let (pa, pb, pc) = w_branch_probabilities(alpha);
    Ok(json!({
        "gamma": complex_json(args.gamma),
        "theta": args.theta,
        "displace": args.displace,
        "effective_alpha": complex_json(alpha),
        "probabilities": probabilities,
        "exact_probabilities": {"A": pa, "B": pb, "C": pc},
        "probability_sum": sum,
        "outcomes": outcomes,
    }))
}

fn oracle_json(args: &OracleArgs) -> Result<(Value, bool)> {
    let suites: Vec<Suite> = match args.suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::States => vec![Suite::States],
        SuiteArg::Elements => vec![Suite::Elements],
        SuiteArg::Measure => vec![Suite::Measure],
        SuiteArg::Circuits => vec![Suite::Circuits],
    };
    let mut checks = Vec::new();
    let mut all = true;
    for suite in suites {
        for r in run_suite(suite, Some(args.tol))? {
            all &= r.passed;
            checks.push(json!({
                "suite": suite.name(),
                "name": r.name,
                "max_deviation": r.max_deviation,
                "tolerance": r.tolerance,
                "passed": r.passed,
            }));
        }
    }
    Ok((json!({"tolerance": args.tol, "passed": all, "checks": checks}), all))
}

fn run_circuit_json(args: &RunCircuitArgs) -> Result<Value> {
    let text = std::fs::read_to_string(&args.state).with_context(|| format!("reading {}", args.state.display()))?;
    let mut state: HybridState = text.parse()?;
    let script = std::fs::read_to_string(&args.circuit).with_context(|| format!("reading {}", args.circuit.display()))?;
    let elements = parse_circuit(&script)?;
    for e in &elements {
        state = e.apply(&state)?;
    }
    Ok(json!({
        "elements": elements.len(),
        "modes": state.modes(),
        "terms": state.len(),
        "norm": state.norm(),
        "state": state.to_string(),
    }))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn opt_params(opt: &OptimizerArgs) -> Value {
    json!({"restarts": opt.restarts, "seed": opt.seed, "radius": opt.radius, "max_iters": opt.max_iters})
}

pub(crate) fn run(command: Command, argv: Vec<String>) -> Result<i32> {
    let started = Instant::now();
    let (name, parameters, seed, out, text, code): (&str, Value, Option<u64>, Option<PathBuf>, String, i32) = match command {
        Command::Repro(ReproArgs { figure, sign, opt, out }) => {
            let csv = repro_csv(figure, sign, &opt)?;
            let params = json!({
                "figure": format!("{figure:?}").to_lowercase(),
                "sign": format!("{sign:?}").to_lowercase(),
                "optimizer": opt_params(&opt),
            });
            ("repro", params, Some(opt.seed), out, csv, EXIT_OK)
        }
        Command::GenerateW(args) => {
            let report = generate_w_json(&args)?;
            let params = json!({"gamma": complex_json(args.gamma), "theta": args.theta, "displace": args.displace});
            ("generate-w", params, None, args.out.clone(), pretty(&report)?, EXIT_OK)
        }
        Command::Optimize(args) => {
            let report = optimize_json(&args)?;
            let params = json!({
                "family": format!("{:?}", args.family).to_lowercase(),
                "alpha": args.alpha,
                "sign": format!("{:?}", args.sign).to_lowercase(),
                "optimizer": opt_params(&args.opt),
            });
            ("optimize", params, Some(args.opt.seed), args.out.clone(), pretty(&report)?, EXIT_OK)
        }
        Command::OracleCheck(args) => {
            let (report, passed) = oracle_json(&args)?;
            let params = json!({"suite": format!("{:?}", args.suite).to_lowercase(), "tol": args.tol});
            let code = if passed { EXIT_OK } else { EXIT_CHECK_FAILED };
            ("oracle-check", params, None, args.out.clone(), pretty(&report)?, code)
        }
        Command::RunCircuit(args) => {
            let report = run_circuit_json(&args)?;
            let params = json!({"state": args.state, "circuit": args.circuit});
            ("run-circuit", params, None, args.out.clone(), pretty(&report)?, EXIT_OK)
        }
        Command::Replay(args) => {
            let manifest = RunManifest::read(&args.manifest)?;
            let mut replay_argv = vec!["ecsim".to_string()];
            replay_argv.extend(manifest.args.iter().cloned());
            let cli = Cli::try_parse_from(&replay_argv).with_context(|| "manifest arguments no longer parse")?;
            if matches!(cli.command, Command::Replay(_)) {
                bail!("a manifest cannot replay another replay");
            }
            return run(cli.command, manifest.args);
        }
    };
    emit(&text, out.as_deref())?;
    if let Some(path) = out {
        let manifest = RunManifest {
            command: name.to_string(),
            args: argv,
            parameters,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: vec![path.clone()],
            duration_secs: started.elapsed().as_secs_f64(),
        };
        manifest.write(&RunManifest::path_for(&path))?;
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_are_ascending_and_cover_features() {
        for fig in [Figure::Fig2a, Figure::Fig2b, Figure::Fig3, Figure::Fig5] {
            let g = figure_grid(fig);
            assert!(g.windows(2).all(|w| w[0] < w[1]));
        }
        let fig3 = figure_grid(Figure::Fig3);
        assert!(fig3.iter().filter(|a| (0.1..=0.26).contains(*a)).count() >= 5);
        assert!(fig3.iter().filter(|a| (0.5..=0.7).contains(*a)).count() >= 5);
        let fig5 = figure_grid(Figure::Fig5);
        assert_eq!(fig5[0], 0.0);
        assert!((fig5[80] - 4.0).abs() < 1e-12);
        assert!(fig5.iter().filter(|a| (1.3..=1.7).contains(*a)).count() >= 5);
        assert!((figure_grid(Figure::Fig2a)[20] - 10.0).abs() < 1e-9);
    }

    #[test]
    fn number_format_is_fixed_width_scientific() {
        assert_eq!(num(2.0), "2.00000000000e0");
        assert_eq!(num(0.0123), "1.23000000000e-2");
    }

    #[test]
    fn fig5_rows_start_at_two() {
        let opt = OptimizerArgs {
            restarts: 1,
            seed: 0,
            radius: None,
            max_iters: 1,
        };
        let csv = repro_csv(Figure::Fig5, SignArg::Minus, &opt).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("alpha,bm_value,converged,restarts"));
        assert_eq!(lines.next(), Some("0.00000000000e0,2.00000000000e0,true,"));
        assert_eq!(csv.lines().count(), 82);
    }
}

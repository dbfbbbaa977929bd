use super::*;
use crate::bell::{bm_parity, bm_threshold};
use crate::measure::GhzSign;
use crate::states::C64;

fn quadratic(p: &[f64]) -> f64 {
    -p.iter().map(|x| (x - 0.3) * (x - 0.3)).sum::<f64>()
}

fn small() -> OptimizerConfig {
    OptimizerConfig {
        restarts: 8,
        seed: 7,
        ..OptimizerConfig::for_alpha(1.0)
    }
}

#[test]
fn constant_objective() {
    let cfg = small();
    let r = maximize(&|_: &BellSettings| 1.25, &cfg).unwrap();
    assert_eq!(r.best_value, 1.25);
    assert!(r.converged);
    let first = start_points(PARAMS, &cfg)[0].clone();
    assert_eq!(r.best_settings.to_params().to_vec(), first);
}

#[test]
fn quadratic_objective() {
    let r = maximize(&|s: &BellSettings| quadratic(&s.to_params()), &small()).unwrap();
    assert!(r.best_value.abs() < 1e-6, "{}", r.best_value);
    for x in r.best_settings.to_params() {
        assert!((x - 0.3).abs() < 1e-3);
    }
}

#[test]
fn finite_difference_gradient() {
    let x: Vec<f64> = (0..PARAMS).map(|k| k as f64 * 0.07 - 0.4).collect();
    let g = gradient(&quadratic, &x, 1e-6).unwrap();
    for (gi, xi) in g.iter().zip(&x) {
        let exact = -2.0 * (xi - 0.3);
        assert!((gi - exact).abs() <= 1e-4 * exact.abs().max(1e-3));
    }
}

#[test]
fn ascent_is_monotone() {
    let f = |p: &[f64]| {
        bm_threshold(C64::new(0.3, 0.0), C64::new(1.0, 0.0), C64::new(-1.0, 0.0), &BellSettings::from_params(p).unwrap())
            .unwrap()
    };
    for start in start_points(PARAMS, &small()) {
        let a = ascend(&f, &start, &small()).unwrap();
        assert!(a.history.windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(a.history.len(), a.iterations + 1);
        assert_eq!(*a.history.last().unwrap(), a.value);
    }
}

#[test]
fn deterministic_and_self_consistent() {
    let alpha = C64::new(1.0, 0.0);
    let obj = |s: &BellSettings| bm_parity(alpha, GhzSign::Minus, s);
    let a = maximize(&obj, &small()).unwrap();
    let b = maximize(&obj, &small()).unwrap();
    assert_eq!(a, b);
    assert_eq!(obj(&a.best_settings).to_bits(), a.best_value.to_bits());
    let other = maximize(&obj, &OptimizerConfig { seed: 8, ..small() }).unwrap();
    assert_ne!(other.best_settings, a.best_settings);
}

#[test]
fn non_finite_objective_is_an_error() {
    let r = maximize(&|s: &BellSettings| if s.unprimed[0].re > 0.0 { f64::NAN } else { 0.0 }, &small());
    assert!(matches!(r, Err(EcsError::NonFiniteObjective { .. })));
    assert!(maximize(&|_: &BellSettings| 0.0, &OptimizerConfig { step_shrink: 1.0, ..small() }).is_err());
}

#[test]
fn sweep_edge_cases() {
    let fam = |_: f64| |_: &BellSettings| 0.0;
    assert!(sweep_alpha(&[], fam, |_| small()).unwrap().is_empty());
    assert!(sweep_alpha(&[1.0, 0.5], fam, |_| small()).is_err());
}

#[test]
fn sweep_records_row_failures() {
    let fam = |a: f64| move |_: &BellSettings| if a > 0.3 { f64::NAN } else { 1.0 };
    let out = sweep_alpha(&[0.2, 0.4, 0.5], fam, |_| small()).unwrap();
    assert_eq!(out.len(), 3);
    assert!(out[0].1.is_ok());
    assert!(matches!(out[1].1, Err(EcsError::NonFiniteObjective { .. })));
    assert!(out[2].1.is_err());
}

#[test]
fn sweep_warm_starts_from_previous_optimum() {
    let fam = |a: f64| move |s: &BellSettings| -(s.unprimed[0].re - a).powi(2) - s.to_params()[1..].iter().map(|x| x * x).sum::<f64>();
    let out = sweep_alpha(&[0.2, 0.4], fam, |_| small()).unwrap();
    for (a, r) in &out {
        let r = r.as_ref().unwrap();
        assert!((r.best_settings.unprimed[0].re - a).abs() < 1e-3);
    }
}

#[test]
fn threshold_optimum_at_small_alpha() {
    let alpha = C64::new(0.18, 0.0);
    let (c1, c2) = (C64::new(1.0, 0.0), C64::new(-1.0, 0.0));
    let obj = |s: &BellSettings| bm_threshold(alpha, c1, c2, s).unwrap();
    let r = maximize(&obj, &OptimizerConfig::for_alpha(0.18)).unwrap();
    assert!(r.best_value >= 2.45, "{}", r.best_value);
}

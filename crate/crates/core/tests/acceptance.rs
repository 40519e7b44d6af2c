//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::time::{Duration, Instant};

use cadlag::constructions::{adapted_monotone_step, bridge_error, is_monotone_on, monotone_bridge, BridgeVariant};
use cadlag::experiments::{run_convergence_study, run_machinery_trace, ExperimentConfig, Functional, TraceParams};
use cadlag::integral::{apply_correction, integration_by_parts_residual, ito_integral, CorrectionTerm};
use cadlag::metrics::w_prime;
use cadlag::scenarios::{
    check_r1, empirical_condition, example_1_1_early, example_1_1_late, example_2_1, m1_j1, rep_rng, OrderCondition,
    Scenario,
};
use cadlag::{d_j1, d_m1, MetricConfig, StepPath};
use rand::Rng;

/// Tolerance for comparing jump times built from `1 - 1/n`.
const TIME_TOL: f64 = 1e-12;
/// Default M1 resolution on the horizon-2 scenarios.
const M1_EPS: f64 = 1e-3 * 2.0;
/// Resolution of the brute-force metric comparison (horizon 1).
const ORACLE_EPS: f64 = 5e-3;
/// Kolmogorov–Smirnov cap for 10⁴ samples.
const KS_CAP: f64 = 0.05;
const IBP_TOL: f64 = 1e-12;
const RECON_TOL: f64 = 1e-12;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn check(cond: bool, msg: String) -> Outcome {
    if cond {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let note = format!(" [{:.3}s]", took.as_secs_f64());
    match (out, limit) {
        (Ok(m), Some(l)) if took > l => Err(format!("{m}; exceeded {:.0}s{note}", l.as_secs_f64())),
        (Ok(m), _) => Ok(m + &note),
        (Err(m), _) => Err(m + &note),
    }
}

fn same_step(p: &StepPath, t: f64, height: f64) -> bool {
    p.jump_count() == 1
        && (p.jump_times()[0] - t).abs() <= TIME_TOL
        && p.initial_value() == [0.0]
        && p.eval1(p.horizon()).unwrap() == height
}

fn closed_forms() -> Outcome {
    for n in [10usize, 100, 1000] {
        let t = 1.0 - 1.0 / n as f64;
        let early = example_1_1_early(n).unwrap().integral().unwrap();
        let late = example_1_1_late(n).unwrap().integral().unwrap();
        if !same_step(&early, t, 3.0) || !same_step(&late, t, 1.0) {
            return Err(format!("n={n}: early {early:?}, late {late:?}"));
        }
    }
    Ok("early pair gives 3·1[1-1/n,∞), late pair 1·1[1-1/n,∞) for n=10,100,1000".into())
}

fn j1_decay() -> Outcome {
    let early_limit = StepPath::indicator(2.0, 1.0, 3.0).unwrap();
    let late_limit = StepPath::indicator(2.0, 1.0, 1.0).unwrap();
    let mut worst = 0.0f64;
    for n in [10usize, 20, 40, 80] {
        let e = d_j1(&example_1_1_early(n).unwrap().integral().unwrap(), &early_limit).unwrap();
        let l = d_j1(&example_1_1_late(n).unwrap().integral().unwrap(), &late_limit).unwrap();
        worst = worst.max((e - 1.0 / n as f64).abs()).max((l - 1.0 / n as f64).abs());
    }
    check(worst <= 1e-9, format!("max |d_J1 - 1/n| = {worst:e} (tol 1e-9)"))
}

fn spike_signature() -> Outcome {
    let zero = StepPath::zero(2.0, 1).unwrap();
    let (mut wp_ok, mut worst) = (true, 0.0f64);
    for n in [30usize, 100, 300] {
        let i = example_2_1(n).unwrap().integral().unwrap();
        for delta in [0.1, 0.5] {
            wp_ok &= w_prime(&i, delta).unwrap() == 0.5;
        }
        let m = d_m1(&i, &zero, &MetricConfig::default()).unwrap();
        worst = worst.max((m - 0.5).abs());
    }
    check(wp_ok && worst <= M1_EPS, format!("w'(I_n, δ) = 0.5: {wp_ok}; max |d_M1(I_n, 0) - 0.5| = {worst:e} (tol {M1_EPS})"))
}

fn condition_checkers() -> Outcome {
    let e11 = Scenario::Example11 { p: 0.5 }.limit_pair().unwrap();
    let e21 = Scenario::Example21.limit_pair().unwrap();
    let r1 = (check_r1(&e11.h, &e11.x).unwrap(), check_r1(&e21.h, &e21.x).unwrap());
    let gamma = 0.5;
    let early = empirical_condition(&Scenario::Example11 { p: 1.0 }, OrderCondition::IntegrandFirst, 10, 0.2, gamma, 1000, 1).unwrap();
    let late = empirical_condition(&Scenario::Example11 { p: 0.0 }, OrderCondition::IntegrandFirst, 10, 0.05, gamma, 1000, 1).unwrap();
    check(
        r1 == (true, false) && early == 1.0 && late == 0.0,
        format!("sign condition (example_1_1, example_2_1) = {r1:?}; integrand-first frequency p=1: {early}, p=0: {late}"),
    )
}

/// Nearly monotone scalar path: values stay within `0.2 γ` of the running extreme.
fn staircase(rng: &mut impl Rng, gamma: f64) -> StepPath {
    let n = rng.gen_range(1..10);
    let mut times: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..0.99)).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    let mut top = 0.0;
    let jumps: Vec<(f64, f64)> = times
        .iter()
        .map(|&t| {
            top += rng.gen_range(0.0..0.5);
            (t, sign * (top - rng.gen_range(0.0..0.2) * gamma))
        })
        .collect();
    StepPath::scalar(1.0, 0.0, &jumps).unwrap()
}

fn bridge_suite() -> Outcome {
    let gamma = 0.2;
    let mut rng = rep_rng(5, 0);
    let mut report = Vec::new();
    for variant in [BridgeVariant::Settle, BridgeVariant::EndpointJump] {
        let (mut built, mut violations, mut tries) = (0, 0, 0);
        while built < 1000 && tries < 100_000 {
            tries += 1;
            let x = staircase(&mut rng, gamma);
            let t1 = rng.gen_range(0.0..0.6);
            let t2 = t1 + rng.gen_range(0.05..0.4);
            let Ok(b) = monotone_bridge(&x, t1, t2, gamma, variant) else { continue };
            built += 1;
            let (x1, x2) = (x.eval1(t1).unwrap(), x.eval1(t2).unwrap());
            let start = b.weights.eval1(t1).unwrap();
            let start_ok = start == 0.0
                || (variant == BridgeVariant::Settle && (x1 - x2).abs() <= 0.5 * gamma && start == 1.0);
            let ok = is_monotone_on(&b.weights, t1, t2, true).unwrap()
                && start_ok
                && b.weights.eval1(t2).unwrap() == 1.0
                && bridge_error(&x, &b).unwrap() <= gamma + 1e-12;
            violations += usize::from(!ok);
        }
        if built < 1000 {
            return Err(format!("{variant:?}: only {built} paths met the precondition"));
        }
        report.push(format!("{variant:?}: {violations} violations / {built}"));
        if violations > 0 {
            return Err(report.join("; "));
        }
    }
    let (mut built, mut violations) = (0, 0);
    while built < 1000 {
        let x = staircase(&mut rng, gamma);
        let t1 = rng.gen_range(0.0..0.6);
        let t2 = t1 + rng.gen_range(0.05..0.4);
        let Ok(a) = adapted_monotone_step(&x, t1, t2, gamma, 100) else { continue };
        built += 1;
        let up = x.eval1(t2).unwrap() >= x.eval1(t1).unwrap();
        let mut ok = is_monotone_on(&a.path, t1, t2, up).unwrap();
        for k in 0..8 {
            let t = t1 + (t2 - t1) * k as f64 / 8.0;
            ok &= (x.eval1(t).unwrap() - a.path.eval1(t).unwrap()).abs() <= gamma + 1e-12;
            let cut = adapted_monotone_step(&x.stopped_at(t).unwrap(), t1, t2, gamma, 100).unwrap();
            ok &= cut.path.eval1(t).unwrap() == a.path.eval1(t).unwrap();
        }
        violations += usize::from(!ok);
    }
    report.push(format!("adapted (monotone, γ-close, truncation invariant): {violations} violations / {built}"));
    check(violations == 0, report.join("; "))
}

fn integration_by_parts() -> Outcome {
    let mut rng = rep_rng(6, 0);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let h = common::continuous_path(&mut rng, 1.0, 10);
        let x = common::continuous_path(&mut rng, 1.0, 10);
        worst = worst.max(integration_by_parts_residual(&h, &x).unwrap());
    }
    check(worst <= IBP_TOL, format!("max residual over 1000 pairs = {worst:e} (tol {IBP_TOL:e})"))
}

fn remainder_machinery() -> Outcome {
    let cfg = ExperimentConfig::new(Scenario::Example11 { p: 1.0 }, vec![100], 1000, 7).with_trace(TraceParams {
        a_k: 0.5,
        level: 6,
        gamma: 0.05,
        delta: None,
        r: 10.0,
    });
    let rep = run_machinery_trace(&cfg).unwrap();
    let y_ok = !rep.rows.is_empty() && rep.rows.iter().all(|r| (r.y_at_rho - 1.0).abs() <= RECON_TOL);
    let term1 = rep.rows.iter().all(|r| r.term_sups.is_some_and(|t| t[0] == 2.0 && t[1..].iter().all(|v| *v == 0.0)));
    check(
        rep.max_reconstruction_error <= RECON_TOL && rep.bound_violations == 0 && rep.event_a_count > 0 && y_ok,
        format!(
            "{} samples, {} windows; good-event frequency {}; bound violations {}; max reconstruction error {:e}; Y(ρ) = 1: {y_ok}; term 1 carries ΔH·ΔX = 2: {term1}",
            rep.samples,
            rep.rows.len(),
            rep.event_a_frequency(),
            rep.bound_violations,
            rep.max_reconstruction_error
        ),
    )
}

fn mixture_limit() -> Outcome {
    let sc = Scenario::Example11 { p: 0.5 };
    let cfg = ExperimentConfig::new(sc, vec![1000], 10_000, 8).with_functionals(vec![Functional::Eval(2.0)]);
    let table = run_convergence_study(&cfg).unwrap();
    let ks = table.rows[0].ks_stat.unwrap();
    let pair = sc.limit_pair().unwrap();
    let base = pair.integral().unwrap();
    let corrected = |w: f64| {
        let c = CorrectionTerm::from_common_jumps(&pair.h, &pair.x, |_| vec![w]).unwrap();
        apply_correction(&base, &c).unwrap().eval1(2.0).unwrap()
    };
    let atoms: Vec<f64> = sc.limit_law().unwrap().atoms.iter().map(|(_, p)| p.eval1(2.0).unwrap()).collect();
    let weights_match = atoms == [corrected(1.0), corrected(0.0)] && atoms == [3.0, 1.0];
    check(
        ks < KS_CAP && weights_match,
        format!("KS = {ks:.5} (cap {KS_CAP}); limit atoms {atoms:?} from correction weights 1 and 0: {weights_match}"),
    )
}

fn corrected_limits() -> Outcome {
    let law = Scenario::M1J1.limit_law().unwrap();
    let limit = law.atoms[0].1.eval1(2.0).unwrap();
    let pair = Scenario::M1J1.limit_pair().unwrap();
    let closed = ito_integral(&pair.h, &pair.x).unwrap().eval1(2.0).unwrap()
        + pair.h.jump_at(1.0).unwrap()[0] * pair.x.jump_at(1.0).unwrap()[0];
    let mut m1j1_gap = (limit - closed).abs();
    for n in [4usize, 5, 10, 100, 1000] {
        m1j1_gap = m1j1_gap.max((m1_j1(n).unwrap().integral().unwrap().eval1(2.0).unwrap() - limit).abs());
    }
    let cfg = ExperimentConfig::new(Scenario::AntiAvci, vec![10, 100, 1000], 10_000, 9);
    let gaps: Vec<f64> = run_convergence_study(&cfg).unwrap().rows.iter().map(|r| r.gap).collect();
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    check(
        m1j1_gap == 0.0 && decreasing && gaps[2] < 0.05,
        format!("m1_j1 gap = {m1j1_gap} (limit {limit}); anti_avci gaps {gaps:?}, decreasing: {decreasing}"),
    )
}

fn metric_oracle() -> Outcome {
    let mut rng = rep_rng(10, 0);
    let cfg = MetricConfig::with_resolution(ORACLE_EPS);
    let (mut wj, mut wm) = (0.0f64, 0.0f64);
    for i in 0..200 {
        let (x, y) = if i % 2 == 0 {
            (common::grid_path(&mut rng, 1.0, 4), common::grid_path(&mut rng, 1.0, 4))
        } else {
            (common::continuous_path(&mut rng, 1.0, 4), common::continuous_path(&mut rng, 1.0, 4))
        };
        wj = wj.max((d_j1(&x, &y).unwrap() - common::j1_oracle(&x, &y)).abs());
        wm = wm.max((d_m1(&x, &y, &cfg).unwrap() - common::m1_oracle(&x, &y, 0.5 * ORACLE_EPS)).abs());
    }
    check(
        wj <= ORACLE_EPS && wm <= ORACLE_EPS,
        format!("max |J1 - oracle| = {wj:e}, max |M1 - oracle| = {wm:e} (tol {ORACLE_EPS})"),
    )
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria: Vec<Criterion> = vec![
        ("closed-form integrals", secs(1), closed_forms),
        ("J1 decay at rate 1/n", secs(10), j1_decay),
        ("non-compact spike", None, spike_signature),
        ("condition checkers", None, condition_checkers),
        ("monotone bridges", secs(30), bridge_suite),
        ("integration by parts", None, integration_by_parts),
        ("remainder machinery", None, remainder_machinery),
        ("mixture limit", None, mixture_limit),
        ("corrected limits", None, corrected_limits),
        ("brute-force metric oracle", secs(60), metric_oracle),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        match timed(limit, run) {
            Ok(m) => println!("PASS criterion {:>2} {name}: {m}", i + 1),
            Err(m) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {m}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned.
//
// Exits nonzero when any criterion fails, except those listed in KNOWN_RED
// whose failure is explained in the printed note. Those still print FAIL.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use hus_hill::report::{cmd_sweep, AnalysisConfig, SweepSpec};
use hus_hill::{
    cascade_residual_identity_check, composite_constant, extremal_ratio_oracle, k0_constant,
    perturb, perturb_bounded, stability_report, track, EquationSpec, Family, HusError,
    PeriodicCycle, ResidualProfile, Trajectory, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criterion 4 compares against a printed piecewise display that does not
/// agree with the constant it is meant to simplify on two of its branches.
const KNOWN_RED: &[(u32, &str)] = &[(
    4,
    "the printed K display disagrees with K0(λ)K0(-λ)^2 for h in (2/(3π), 3/(2π)) and lacks a 1/π factor \
     beyond 1/π; the generic constant is checked against corrected closed forms in tests/closed_forms.rs",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn near(x: f64, points: &[f64], tol: f64) -> bool {
    points
        .iter()
        .any(|p| (x - p).abs() <= tol * p.abs().max(1.0))
}

fn hill_constant(h: f64, lam: f64) -> f64 {
    composite_constant(&PeriodicCycle::constant(h, lam).unwrap(), Family::Hill).unwrap()
}

fn c1_constant_closed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    while checked < 50 {
        let h = rng.random_range(0.1..3.0);
        let x: f64 = if checked % 2 == 0 {
            rng.random_range(0.0..1.0)
        } else {
            rng.random_range(1.0..4.0)
        };
        if near(x, &[0.0, 1.0, 2.0], 1e-6) {
            continue;
        }
        let lam = x / h;
        let want = if x < 1.0 {
            1.0 / (lam * lam)
        } else {
            h / (lam * (2.0 - h * lam).abs())
        };
        worst = worst.max(rel(hill_constant(h, lam), want));
        checked += 1;
    }
    Outcome {
        pass: worst <= 1e-12,
        detail: format!("50 (h, λ) samples, worst relative error {worst:.2e}"),
    }
}

fn c2_three_cycle_table() -> Outcome {
    let (mut agree, mut total, mut bad_skips) = (0, 0, 0);
    let root17 = (1.0 + 17f64.sqrt()) / 2.0;
    for h in [0.5, 1.0, 2.0] {
        let mut cfg = AnalysisConfig::new(h, vec![0.0.into(), "A".into(), "-A".into()]);
        cfg.sweep = Some(SweepSpec {
            param: "A".into(),
            min: 0.0.into(),
            max: "3/h".into(),
            count: 500,
        });
        let report = cmd_sweep(&cfg).unwrap();
        for row in report.document["rows"].as_array().unwrap() {
            let a = row["value"].as_f64().unwrap();
            let x = a * h;
            if row["skipped"] == true {
                if !near(x, &[0.0, 1.0, 2f64.sqrt(), root17], 1e-6) {
                    bad_skips += 1;
                }
                continue;
            }
            total += 1;
            let pos = row["argmax_pos"].as_u64().unwrap();
            let neg = row["argmax_neg"].as_u64().unwrap();
            let want_pos = if x < root17 { 2 } else { 0 };
            let want_neg = if x < 2f64.sqrt() { 1 } else { 0 };
            if pos == want_pos && neg == want_neg {
                agree += 1;
            }
        }
    }
    Outcome {
        pass: agree == total && bad_skips == 0 && total > 0,
        detail: format!("{agree}/{total} grid points agree, {bad_skips} unexpected skips"),
    }
}

/// The four-branch selection table of the two-cycle {A, B}.
fn two_cycle_table(a: f64, b: f64, h: f64) -> (usize, usize) {
    let pos = if a < b { 0 } else { 1 };
    let mid = 2.0 / (a + b);
    let neg = if a < b {
        if h > mid {
            0
        } else {
            1
        }
    } else if h < mid {
        0
    } else {
        1
    };
    (pos, neg)
}

fn c3_two_cycle_table() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut agree, mut total) = (0, 0);
    while total < 200 {
        let a: f64 = rng.random_range(0.1..5.0);
        let b: f64 = rng.random_range(0.1..5.0);
        let h: f64 = rng.random_range(0.05..3.0);
        if (a - b).abs() <= 1e-6 * a.max(b) {
            continue;
        }
        let mut excluded = vec![1.0 / a, 1.0 / b, 2.0 / (a + b), (a + b) / (a * b)];
        // (1 - Ah)(1 - Bh) = -1
        let disc = (a + b).powi(2) - 8.0 * a * b;
        if disc >= 0.0 {
            excluded.push(((a + b) - disc.sqrt()) / (2.0 * a * b));
            excluded.push(((a + b) + disc.sqrt()) / (2.0 * a * b));
        }
        if near(h, &excluded, 1e-6) {
            continue;
        }
        let r = stability_report(&PeriodicCycle::new(h, vec![a, b]).unwrap());
        if r.verdict != Verdict::Stable {
            continue;
        }
        total += 1;
        let got = (
            r.positive.sums.as_ref().unwrap().argmax(),
            r.negative.sums.as_ref().unwrap().argmax(),
        );
        if got == two_cycle_table(a, b, h) {
            agree += 1;
        }
    }
    Outcome {
        pass: agree == total,
        detail: format!("{agree}/{total} random (A, B, h) triples agree"),
    }
}

/// The printed four-branch display for K = K0(λ)K0(-λ)^2 on {π, 2π}.
fn printed_pi_cycle_k(branch: usize, h: f64) -> f64 {
    let (p, hp) = (PI, h * PI);
    match branch {
        0 | 2 => {
            2.0 * (1.0 + hp) * (2.0 - hp).powi(2)
                / (p.powi(3) * (3.0 + 2.0 * hp) * (3.0 - 2.0 * hp).powi(2))
        }
        1 => {
            2.0 * h * h * (1.0 + hp) * (2.0 - hp).powi(2)
                / (p * (3.0 + 2.0 * hp) * (2.0 * hp * hp - 3.0 * hp + 2.0).powi(2))
        }
        _ => 8.0 * h * h * (1.0 + hp) / ((3.0 + 2.0 * hp) * (3.0 - 2.0 * hp).powi(2)),
    }
}

fn c4_pi_cycle_display() -> Outcome {
    let branches = [
        (0.0, 1.0 / (2.0 * PI)),
        (1.0 / (2.0 * PI), 1.0 / PI),
        (1.0 / PI, 3.0 / (2.0 * PI)),
        (2.0 / (3.0 * PI), 5.0 / PI),
    ];
    let excluded = [
        1.0 / (2.0 * PI),
        2.0 / (3.0 * PI),
        1.0 / PI,
        3.0 / (2.0 * PI),
    ];
    let mut k0_worst: f64 = 0.0;
    let mut per_branch = Vec::new();
    let mut all = true;
    for (i, (lo, hi)) in branches.iter().enumerate() {
        let mut ok = 0;
        let mut n = 0;
        let mut j = 0;
        while n < 20 {
            let h = lo + (hi - lo) * (j as f64 + 0.5) / 21.0;
            j += 1;
            if near(h, &excluded, 1e-6) {
                continue;
            }
            n += 1;
            let c = PeriodicCycle::new(h, vec![PI, 2.0 * PI]).unwrap();
            let k0 = k0_constant(&c).unwrap();
            k0_worst = k0_worst.max(rel(k0, 2.0 * (1.0 + h * PI) / (PI * (3.0 + 2.0 * h * PI))));
            let k = composite_constant(&c, Family::Pqr).unwrap();
            if rel(k, printed_pi_cycle_k(i, h)) <= 1e-12 {
                ok += 1;
            }
        }
        all &= ok == n;
        per_branch.push(format!("{ok}/{n}"));
    }
    Outcome {
        pass: all && k0_worst <= 1e-12,
        detail: format!(
            "K0(λ) worst relative error {k0_worst:.2e}; printed K branches matched {}",
            per_branch.join(", ")
        ),
    }
}

fn soundness_configs() -> Vec<(&'static str, PeriodicCycle)> {
    let c = |h: f64, v: Vec<f64>| PeriodicCycle::new(h, v).unwrap();
    vec![
        ("{0, A, -A} h=1 A=0.5", c(1.0, vec![0.0, 0.5, -0.5])),
        ("{0, A, -A} h=1 A=2", c(1.0, vec![0.0, 2.0, -2.0])),
        ("{A, B} h=1 A=0.3 B=0.7", c(1.0, vec![0.3, 0.7])),
        ("{A, B} h=1.2 A=1 B=0.7", c(1.2, vec![1.0, 0.7])),
        ("{π, 2π} h=0.1", c(0.1, vec![PI, 2.0 * PI])),
        ("{π, 2π} h=0.4", c(0.4, vec![PI, 2.0 * PI])),
        ("λ=0.5 h=1", c(1.0, vec![0.5])),
        ("λ=1.5 h=1", c(1.0, vec![1.5])),
        ("λ=3 h=1", c(1.0, vec![3.0])),
        ("λ=-0.8 h=0.5", c(0.5, vec![-0.8])),
    ]
}

fn c5_tracking_soundness() -> Outcome {
    let eps = 1e-3;
    let (mut runs, mut violations, mut errors) = (0, 0, Vec::new());
    let mut worst: f64 = 0.0;
    for (label, c) in soundness_configs() {
        let r = stability_report(&c);
        let contracting = r.e_pos().abs() < 1.0 && r.e_neg().abs() < 1.0;
        let steps = 64 * c.len();
        for family in Family::ALL {
            if r.verdict_for(family) != Verdict::Stable {
                continue;
            }
            let mut spec = EquationSpec::new(family, c.clone()).unwrap();
            if family.accepts_forcing() && family != Family::FirstHomog {
                let f = Trajectory::from_fn(c.step(), 0, steps + 1, |k| (0.7 * k as f64).sin())
                    .unwrap();
                spec = spec.with_forcing(f).unwrap();
            }
            for seed in 0..200u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let profile = ResidualProfile::random(eps, seed).unwrap();
                // with an expanding side, start from the bounded solution
                let psi = if contracting {
                    let init: Vec<f64> = (0..family.order())
                        .map(|_| rng.random_range(-1.0..1.0))
                        .collect();
                    perturb(&spec, &profile, &init, steps).unwrap()
                } else {
                    perturb_bounded(&spec, &profile, steps).unwrap()
                };
                runs += 1;
                match track(&spec, &psi) {
                    Ok(res) => {
                        worst = worst.max(res.ratio.unwrap_or(0.0));
                        if !res.within_bound(1e-6) {
                            violations += 1;
                        }
                    }
                    Err(e) => errors.push(format!("{label} {family}: {e}")),
                }
            }
        }
    }
    errors.dedup();
    Outcome {
        pass: violations == 0 && errors.is_empty(),
        detail: format!(
            "{runs} tracked trajectories, {violations} bound violations, {} errors, worst ratio {worst:.4}{}",
            errors.len(),
            errors.first().map(|e| format!(" (first: {e})")).unwrap_or_default()
        ),
    }
}

fn c6_cascade_identities() -> Outcome {
    let cycles = [
        PeriodicCycle::new(1.0, vec![0.0, 0.5, -0.5]).unwrap(),
        PeriodicCycle::new(1.2, vec![1.0, 0.7]).unwrap(),
        PeriodicCycle::new(0.1, vec![PI, 2.0 * PI]).unwrap(),
        PeriodicCycle::new(0.3, vec![0.4, -1.7, 2.2, 0.9]).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for family in [
        Family::Hill,
        Family::Pqr,
        Family::Pqr2,
        Family::Pqr3,
        Family::Pqr4,
    ] {
        for i in 0..100 {
            let c = &cycles[i % cycles.len()];
            let xi = Trajectory::from_fn(c.step(), 0, 64, |_| rng.random_range(-1.0..1.0)).unwrap();
            let d = cascade_residual_identity_check(c, family, &xi).unwrap();
            // magnitude of the individual terms: sup|ξ| times (max|λ| + 1/h)^order
            let coeff = c.values().iter().fold(0.0f64, |m, v| m.max(v.abs())) + 1.0 / c.h();
            let scale = xi.scale() * coeff.max(1.0).powi(family.order() as i32);
            worst = worst.max(d / scale);
            count += 1;
        }
    }
    Outcome {
        pass: worst <= 1e-10,
        detail: format!("{count} sequences, worst discrepancy / scale {worst:.2e}"),
    }
}

fn c7_sharpness() -> Outcome {
    let mut best_expanding: f64 = 0.0;
    let mut overall: f64 = 0.0;
    let mut all_exhaustive = true;
    let mut runs = 0;
    for (_, c) in soundness_configs() {
        for (family, cycle) in [
            (Family::FirstHomog, c.clone()),
            (Family::FirstNonhomog, c.negated()),
        ] {
            let Ok(est) = extremal_ratio_oracle(&c, family, 4 * c.len(), 1 << 16, 7) else {
                continue;
            };
            runs += 1;
            all_exhaustive &= est.exhaustive;
            overall = overall.max(est.best_ratio);
            if cycle.period_product().abs() > 1.0 {
                best_expanding = best_expanding.max(est.best_ratio);
            }
        }
    }
    Outcome {
        pass: best_expanding >= 0.8 && overall <= 1.0 + 1e-6 && all_exhaustive,
        detail: format!(
            "{runs} exhaustive searches at horizon 4n; best |e|>1 ratio {best_expanding:.6}, max ratio {overall:.6}"
        ),
    }
}

fn c8_non_hus() -> Outcome {
    let mut verdicts = Vec::new();
    for h in [0.5, 1.0, 2.0] {
        let a = 2f64.sqrt() / h;
        verdicts.push(stability_report(&PeriodicCycle::new(h, vec![0.0, a, -a]).unwrap()).verdict);
    }
    for (a, b) in [(1.0, 2.0), (0.3, 0.7), (3.0, 0.5)] {
        let h = (a + b) / (a * b);
        verdicts.push(stability_report(&PeriodicCycle::new(h, vec![a, b]).unwrap()).verdict);
    }
    let ok = verdicts
        .iter()
        .filter(|v| **v == Verdict::NotStableUnitModulus)
        .count();
    // tracking refuses such cycles outright
    let c = PeriodicCycle::new(1.0, vec![0.0, 2f64.sqrt(), -2f64.sqrt()]).unwrap();
    let spec = EquationSpec::new(Family::Hill, c.clone()).unwrap();
    let psi = Trajectory::zeros(c.step(), 0, 20).unwrap();
    let refused = matches!(track(&spec, &psi), Err(HusError::NotStable { .. }));
    Outcome {
        pass: ok == verdicts.len() && refused,
        detail: format!(
            "{ok}/{} cycles flagged NotStable_UnitModulus, tracking refused: {refused}",
            verdicts.len()
        ),
    }
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        (
            1,
            "constant-coefficient closed forms",
            Duration::from_secs(1),
            c1_constant_closed_forms,
        ),
        (
            2,
            "three-cycle argmax table",
            Duration::from_secs(1),
            c2_three_cycle_table,
        ),
        (
            3,
            "two-cycle selection table",
            Duration::from_secs(1),
            c3_two_cycle_table,
        ),
        (
            4,
            "{π, 2π} constants vs printed display",
            Duration::from_secs(1),
            c4_pi_cycle_display,
        ),
        (
            5,
            "tracking soundness",
            Duration::from_secs(30),
            c5_tracking_soundness,
        ),
        (
            6,
            "cascade identities",
            Duration::from_secs(5),
            c6_cascade_identities,
        ),
        (
            7,
            "first-order sharpness probe",
            Duration::from_secs(60),
            c7_sharpness,
        ),
        (8, "non-HUS detection", Duration::from_secs(1), c8_non_hus),
    ];
    let mut unexpected = 0;
    let mut passed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let pass = outcome.pass && elapsed <= limit;
        println!(
            "[{}] criterion {id}: {name}: {} ({:.3}s, limit {}s)",
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
        if pass {
            passed += 1;
        } else if let Some((_, why)) = KNOWN_RED.iter().find(|(k, _)| *k == id) {
            println!("       known red: {why}");
        } else {
            unexpected += 1;
        }
    }
    println!("acceptance: {passed}/8 criteria passed, {unexpected} unexpected failures");
    if unexpected > 0 {
        std::process::exit(1);
    }
}

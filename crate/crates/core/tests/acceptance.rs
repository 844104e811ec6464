//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::f64::consts::PI;
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tensortract::nystrom::{nystrom_eigenvalues, TREND_WINDOW};
use tensortract::validation::check_enumeration;
use tensortract::zeta::hurwitz_zeta;
use tensortract::{
    classify, head_sum, info_complexity, lower_bound_nor, minimal_error, product_trace_power, sandwich_check,
    st_wt_classify, trace_lower_bound_nor, upper_bound_abs, ComplexityQuery, ComplexityStatus, Decision,
    ErrorCriterion, ExplicitTail, KernelFamily, KernelKind, Normalization, ParamLaw, ProductProblem, SequenceRule,
    TractabilityNotion, UnivariateSpectrum,
};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn law(s: &str) -> ParamLaw {
    s.parse().unwrap()
}

fn geometric_korobov() -> SequenceRule {
    SequenceRule::korobov(ParamLaw::Const(1.0), law("geometric(0.5)")).unwrap()
}

fn trace(p: &ProductProblem) -> f64 {
    product_trace_power(p, 1.0).unwrap().value().unwrap()
}

fn exact_n(p: &ProductProblem, eps: f64, criterion: ErrorCriterion) -> usize {
    let r = info_complexity(p, &ComplexityQuery::new(eps, criterion, 10_000_000).unwrap()).unwrap();
    assert_eq!(r.status, ComplexityStatus::Exact);
    r.n
}

fn enumeration_oracle() -> Outcome {
    let start = Instant::now();
    let families = [
        KernelFamily::Korobov { r: 1.0, g: 0.5 },
        KernelFamily::AnalyticKorobov {
            a: 1.0,
            b: 1.0,
            omega: 0.5,
        },
        KernelFamily::Euler { r: 0 },
    ];
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for family in families {
        let spec = UnivariateSpectrum::new(family.clone()).unwrap().normalize().unwrap();
        for d in 1..=3 {
            let p = ProductProblem::from_spectra(vec![spec.clone(); d], Normalization::Normalized).unwrap();
            let c = check_enumeration(&p, 64, 1000, 1e-12).unwrap();
            worst = worst.max(c.max_log_difference);
            if !c.passed {
                failures.push(format!("{} d={d}", family.name()));
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && elapsed <= Duration::from_secs(10),
        format!(
            "max |Δ log| {worst:e}, {:.2}s, failures {failures:?}",
            elapsed.as_secs_f64()
        ),
    )
}

/// Smallest `n` with `trace - (λ_1 + .. + λ_n) <= target` over an explicit,
/// sorted list and the known trace.
fn cumulative_n(sorted: &[f64], trace: f64, target: f64) -> usize {
    let mut head = 0.0;
    for (i, v) in sorted.iter().enumerate() {
        if trace - head <= target {
            return i;
        }
        head += v;
    }
    sorted.len()
}

fn spot_values() -> Outcome {
    // Korobov r=1, g=1/2: 1, then each g/m^2 twice; trace 1 + ζ(2)
    let mut listed = vec![1.0];
    for m in 1..=1000 {
        let v = 0.5 / (m as f64 * m as f64);
        listed.extend([v, v]);
    }
    let oracle_trace = 1.0 + PI * PI / 6.0;
    let want_abs = cumulative_n(&listed, oracle_trace, 0.81);
    let want_nor = cumulative_n(&listed, oracle_trace, 0.25 * oracle_trace);

    let k = ProductProblem::from_rule(
        &SequenceRule::korobov(ParamLaw::Const(1.0), ParamLaw::Const(0.5)).unwrap(),
        1,
        Normalization::Raw,
    )
    .unwrap();
    let got_abs = exact_n(&k, 0.9, ErrorCriterion::Abs);
    let got_nor = exact_n(&k, 0.5, ErrorCriterion::Nor);
    let e = ProductProblem::from_rule(
        &SequenceRule::explicit(vec![1.0, 0.0], ExplicitTail::Zero).unwrap(),
        1,
        Normalization::Raw,
    )
    .unwrap();
    let got_explicit = exact_n(&e, 0.5, ErrorCriterion::Abs);
    let passed = (want_abs, want_nor) == (3, 3) && (got_abs, got_nor, got_explicit) == (3, 3, 1);
    outcome(
        passed,
        format!("oracle ({want_abs},{want_nor},1), engine ({got_abs},{got_nor},{got_explicit})"),
    )
}

struct ExactPoint {
    problem: ProductProblem,
    n: usize,
}

fn sandwich_grid(points: &mut Vec<ExactPoint>) -> Outcome {
    let start = Instant::now();
    let rule = geometric_korobov();
    let mut violations = Vec::new();
    for d in 1..=6 {
        let p = ProductProblem::from_rule(&rule, d, Normalization::Normalized).unwrap();
        for eps in [0.9, 0.5, 0.25] {
            let nor = exact_n(&p, eps, ErrorCriterion::Nor);
            let abs = exact_n(&p, eps, ErrorCriterion::Abs);
            let product_bound = lower_bound_nor(&p, eps, 1.0).unwrap();
            let tr = trace_lower_bound_nor(&p, eps).unwrap();
            let upper = upper_bound_abs(&p, eps, 0.25).unwrap().value().unwrap();
            let n_nor = nor as f64;
            for (ok, what) in [
                (product_bound <= n_nor, "lower_bound_nor"),
                (tr <= n_nor, "trace_lower_bound_nor"),
                (abs as f64 <= upper, "upper_bound_abs"),
                (abs >= nor, "abs>=nor"),
            ] {
                if !ok {
                    violations.push(format!("{what} d={d} eps={eps}"));
                }
            }
            points.push(ExactPoint {
                problem: p.clone(),
                n: nor,
            });
            points.push(ExactPoint {
                problem: p.clone(),
                n: abs,
            });
        }
    }
    let elapsed = start.elapsed();
    outcome(
        violations.is_empty() && elapsed <= Duration::from_secs(30),
        format!(
            "18 grid points, violations {violations:?}, {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn sandwich_inequality() -> Outcome {
    let rule = geometric_korobov();
    let mut violations = Vec::new();
    for d in [1, 8, 32] {
        let p = ProductProblem::from_rule(&rule, d, Normalization::Normalized).unwrap();
        for x in [0.8, 1.0] {
            let r = sandwich_check(&p, x, 0.8).unwrap();
            if !(r.left_holds && r.right_holds) {
                violations.push(format!("d={d} x={x}"));
            }
        }
    }
    outcome(violations.is_empty(), format!("6 cases, violations {violations:?}"))
}

fn conservation(points: &[ExactPoint]) -> Outcome {
    let mut worst: f64 = 0.0;
    for pt in points {
        let e = minimal_error(&pt.problem, pt.n).unwrap();
        let h = head_sum(&pt.problem, pt.n).unwrap();
        let t = trace(&pt.problem);
        worst = worst.max(((e.value * e.value + h) - t).abs() / t);
    }
    // independent tail for d = 1 Korobov at n = 3: 2 g (ζ(2) - 1)
    let k = ProductProblem::from_rule(
        &SequenceRule::korobov(ParamLaw::Const(1.0), ParamLaw::Const(0.5)).unwrap(),
        1,
        Normalization::Raw,
    )
    .unwrap();
    let tail = minimal_error(&k, 3).unwrap().tail;
    let oracle = hurwitz_zeta(2.0, 2.0).unwrap();
    let tail_err = (tail - oracle).abs() / oracle;
    outcome(
        worst <= 1e-10 && tail_err <= 1e-10,
        format!(
            "{} results, max relative defect {worst:e}, d=1 tail vs Hurwitz ζ {tail_err:e}",
            points.len() + 1
        ),
    )
}

fn nystrom_validation() -> (Outcome, Vec<String>) {
    let start = Instant::now();
    let mut notes = Vec::new();
    let brownian = nystrom_eigenvalues(KernelKind::Brownian, 256, 10).unwrap();
    let worst = (1..=10)
        .map(|j| {
            let law = (PI * (j as f64 - 0.5)).powi(-2);
            (brownian.eigenvalues[j - 1] / law - 1.0).abs()
        })
        .fold(0.0, f64::max);
    let part1 = worst <= 1e-6;
    notes.push(format!("(i) Brownian max rel err {worst:e}: {}", pass(part1)));

    let w1 = nystrom_eigenvalues(KernelKind::IntegratedWiener { r: 1 }, 256, 16).unwrap();
    let trace_err = (w1.eigenvalue_sum - 1.0 / 12.0).abs();
    let part2 = trace_err <= 1e-8;
    notes.push(format!("(ii) r=1 trace err {trace_err:e}: {}", pass(part2)));

    let mut part3 = true;
    for r in [1u32, 2] {
        let rep = nystrom_eigenvalues(KernelKind::IntegratedWiener { r }, 256, 16).unwrap();
        let s = 2 * r as i32 + 2;
        let dev: Vec<f64> = TREND_WINDOW
            .map(|j| (rep.eigenvalues[j - 1] * (PI * (j as f64 - 0.5)).powi(s) - 1.0).abs())
            .collect();
        let decreasing = dev.windows(2).all(|w| w[1] < w[0]);
        part3 &= decreasing;
        let listed: Vec<String> = dev.iter().map(|d| format!("{d:.1e}")).collect();
        notes.push(format!(
            "(iii) r={r} deviations j=3..12 [{}]: {}",
            listed.join(" "),
            pass(decreasing)
        ));
    }
    let elapsed = start.elapsed();
    let fast = elapsed <= Duration::from_secs(60);
    (
        outcome(
            part1 && part2 && part3 && fast,
            format!("{:.2}s", elapsed.as_secs_f64()),
        ),
        notes,
    )
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

const CHAIN: [TractabilityNotion; 5] = [
    TractabilityNotion::Spt,
    TractabilityNotion::Pt,
    TractabilityNotion::Qpt,
    TractabilityNotion::Uwt,
    TractabilityNotion::Wt,
];

fn random_rule(rng: &mut ChaCha8Rng) -> Option<SequenceRule> {
    let pick = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| (rng.random_range(lo..hi) * 100.0f64).round() / 100.0;
    let rule = match rng.random_range(0..4) {
        0 | 1 => {
            let r = match rng.random_range(0..2) {
                0 => format!("{}", pick(rng, 0.6, 3.0)),
                _ => format!("pow({},{})", pick(rng, 0.6, 2.0), pick(rng, 0.0, 1.0)),
            };
            let g = match rng.random_range(0..4) {
                0 => format!("pow(1,{})", -pick(rng, 0.1, 3.0)),
                1 => format!("geometric({})", pick(rng, 0.05, 0.95)),
                2 => format!("inv_log({})", pick(rng, 0.1, 1.0)),
                _ => format!("{}", pick(rng, 0.05, 1.0)),
            };
            SequenceRule::korobov(law(&r), law(&g))
        }
        2 => {
            let a = match rng.random_range(0..3) {
                0 => format!("pow({},{})", pick(rng, 0.5, 2.0), pick(rng, 0.0, 2.0)),
                1 => format!("log({})", pick(rng, 0.5, 3.0)),
                _ => format!("{}", pick(rng, 0.5, 3.0)),
            };
            let b = format!("{}", pick(rng, 0.5, 2.0));
            SequenceRule::analytic_korobov(law(&a), law(&b), pick(rng, 0.1, 0.9))
        }
        _ => {
            let r = match rng.random_range(0..3) {
                0 => format!("{}", rng.random_range(0..4)),
                1 => format!("floor_pow(1,{})", pick(rng, 0.1, 1.5)),
                _ => format!("floor_log({})", pick(rng, 0.5, 3.0)),
            };
            if rng.random_bool(0.5) {
                SequenceRule::euler(law(&r))
            } else {
                SequenceRule::wiener(law(&r))
            }
        }
    };
    rule.ok()
}

fn classifier_regression() -> Outcome {
    let mut failures = Vec::new();
    let mut expect = |what: &str, got: Decision, want: Decision| {
        if got != want {
            failures.push(format!("{what}: got {got}, want {want}"));
        }
    };
    let w_half = SequenceRule::wiener(law("floor_pow(1,0.5)")).unwrap();
    let w_quarter = SequenceRule::wiener(law("floor_pow(1,0.25)")).unwrap();
    expect(
        "wiener k^1/2 (1,0.5)-WT",
        st_wt_classify(&w_half, 1.0, 0.5, 4096).unwrap().decision,
        Decision::Holds,
    );
    expect(
        "wiener k^1/4 (1,0.5)-WT",
        st_wt_classify(&w_quarter, 1.0, 0.5, 4096).unwrap().decision,
        Decision::Fails,
    );
    let k_pow = SequenceRule::korobov(ParamLaw::Const(1.0), law("pow(1,-2)")).unwrap();
    let k_log = SequenceRule::korobov(ParamLaw::Const(1.0), law("inv_log(1)")).unwrap();
    for (name, rule) in [("wiener", &w_quarter), ("korobov", &k_log)] {
        expect(
            &format!("{name} t=1.5"),
            st_wt_classify(rule, 1.0, 1.5, 64).unwrap().decision,
            Decision::Holds,
        );
    }
    let nor = ErrorCriterion::Nor;
    expect(
        "g=j^-2 SPT",
        classify(&k_pow, TractabilityNotion::Spt, nor, 1024).unwrap().decision,
        Decision::Holds,
    );
    expect(
        "g=1/ln(j+2) SPT",
        classify(&k_log, TractabilityNotion::Spt, nor, 1024).unwrap().decision,
        Decision::Fails,
    );
    expect(
        "g=1/ln(j+2) WT",
        classify(&k_log, TractabilityNotion::Wt, nor, 1024).unwrap().decision,
        Decision::Holds,
    );

    let mut rng = ChaCha8Rng::seed_from_u64(0x7e5a);
    let mut battery = 0;
    let mut chain_breaks = Vec::new();
    while battery < 50 {
        let Some(rule) = random_rule(&mut rng) else { continue };
        let verdicts: Vec<Decision> = CHAIN
            .iter()
            .map(|n| classify(&rule, *n, nor, 256).unwrap().decision)
            .collect();
        if !verdicts.iter().any(|d| *d != Decision::Inconclusive) {
            continue;
        }
        battery += 1;
        for i in 0..CHAIN.len() {
            for j in i + 1..CHAIN.len() {
                if verdicts[i] == Decision::Holds && verdicts[j] == Decision::Fails {
                    chain_breaks.push(format!("{rule:?}: {} holds but {} fails", CHAIN[i], CHAIN[j]));
                }
            }
        }
    }
    let passed = failures.is_empty() && chain_breaks.is_empty();
    outcome(
        passed,
        format!("spot failures {failures:?}; {battery} random rules, chain breaks {chain_breaks:?}"),
    )
}

fn run_cli(args: &[&str], out: &std::path::Path) -> (Duration, Vec<u8>) {
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_tensortract"))
        .args(args)
        .arg("--out")
        .arg(out)
        .stderr(std::process::Stdio::null())
        .status()
        .unwrap();
    let elapsed = start.elapsed();
    assert!(status.success(), "{args:?} exited with {status}");
    (elapsed, fs::read(out).unwrap())
}

fn determinism_and_scale() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let rule = ["--family", "korobov", "--r", "1", "--g", "geometric(0.5)"];
    let curve: Vec<&str> = ["curve"]
        .iter()
        .chain(&rule)
        .chain(&["--d", "1,2,3", "--epsilon", "0.9,0.5,0.25", "--criterion", "nor"])
        .copied()
        .collect();
    let complexity: Vec<&str> = ["complexity"]
        .iter()
        .chain(&rule)
        .chain(&[
            "--d",
            "10",
            "--epsilon",
            "0.1",
            "--cap",
            "1000000",
            "--criterion",
            "nor",
        ])
        .copied()
        .collect();
    let mut detail = Vec::new();
    let mut passed = true;
    for (name, args) in [("curve", &curve), ("complexity", &complexity)] {
        let (t1, a) = run_cli(args, &dir.path().join(format!("{name}-1.csv")));
        let (t2, b) = run_cli(args, &dir.path().join(format!("{name}-2.csv")));
        let same = a == b;
        let slowest = t1.max(t2);
        let rows = String::from_utf8_lossy(&a).lines().count() - 1;
        passed &= same && slowest <= Duration::from_secs(5);
        detail.push(format!(
            "{name}: {rows} rows, identical={same}, {:.2}s",
            slowest.as_secs_f64()
        ));
    }
    outcome(passed, detail.join("; "))
}

fn main() {
    let mut exact_points = Vec::new();
    let mut results: Vec<(usize, &str, Outcome)> = vec![
        (1, "enumeration oracle equivalence", enumeration_oracle()),
        (2, "exact complexity spot values", spot_values()),
        (3, "bound sandwich suite", sandwich_grid(&mut exact_points)),
        (4, "sandwich inequality", sandwich_inequality()),
    ];
    results.push((5, "conservation", conservation(&exact_points)));
    let (nystrom, notes) = nystrom_validation();
    results.push((6, "nystrom validation", nystrom));
    results.push((7, "classifier regression", classifier_regression()));
    results.push((8, "determinism and scale", determinism_and_scale()));

    let mut failed = 0;
    for (id, name, o) in &results {
        println!("criterion {id} {}: {name}: {}", pass(o.passed), o.detail);
        if *id == 6 {
            for n in &notes {
                println!("    {n}");
            }
        }
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

use std::f64::consts::PI;

use approx::assert_relative_eq;
use tensortract::spectra::{PowerSum, UnivariateSpectrum};
use tensortract::zeta::zeta;
use tensortract::{property_p_report, ExplicitTail, KernelFamily, ParamLaw, SequenceRule};

fn spec(family: KernelFamily) -> UnivariateSpectrum {
    UnivariateSpectrum::new(family).unwrap()
}

fn korobov() -> UnivariateSpectrum {
    spec(KernelFamily::Korobov { r: 1.0, g: 0.5 })
}

fn analytic(a: f64) -> UnivariateSpectrum {
    spec(KernelFamily::AnalyticKorobov { a, b: 1.0, omega: 0.5 })
}

fn value(p: PowerSum) -> f64 {
    p.value().expect("converged")
}

#[test]
fn eigenvalue_examples() {
    let e = spec(KernelFamily::Euler { r: 0 });
    assert_relative_eq!(e.eigenvalue(1), 0.405_284_734_6, max_relative = 1e-10);
    assert_eq!(korobov().eigenvalue(2), 0.5);
    assert_eq!(korobov().eigenvalue(4), 0.125);
    assert_eq!(analytic(1.0).eigenvalue(1), 1.0);
}

#[test]
fn normalization_examples() {
    let e = spec(KernelFamily::Euler { r: 0 }).normalize().unwrap();
    assert_eq!(e.eigenvalue(1), 1.0);
    assert_relative_eq!(e.eigenvalue(2), 1.0 / 9.0, max_relative = 1e-15);
    let k = korobov();
    let kn = k.normalize().unwrap();
    for j in 1..50 {
        assert_eq!(k.eigenvalue(j), kn.eigenvalue(j));
    }
    let x = spec(KernelFamily::Explicit {
        values: vec![2.0, 1.0, 0.5],
        tail: ExplicitTail::Zero,
    })
    .normalize()
    .unwrap();
    assert_eq!(
        (x.eigenvalue(1), x.eigenvalue(2), x.eigenvalue(3), x.eigenvalue(4)),
        (1.0, 0.5, 0.25, 0.0)
    );
}

#[test]
fn power_sum_examples() {
    let direct: f64 = 1.0
        + (1..=10_000_000u64)
            .rev()
            .map(|m| 1.0 / (m as f64 * m as f64))
            .sum::<f64>();
    // remaining tail Σ_{m > N} m^-2 ≈ 1/N
    assert_relative_eq!(
        value(korobov().power_sum(1.0).unwrap()),
        direct + 1e-7,
        max_relative = 1e-12
    );
    assert_relative_eq!(
        value(korobov().power_sum(1.0).unwrap()),
        2.644_934_066_8,
        max_relative = 1e-10
    );
    assert_eq!(value(analytic(1.0).power_sum(1.0).unwrap()), 3.0);
    assert!(korobov().power_sum(0.5).unwrap().is_divergent());
}

#[test]
fn euler_power_sum_against_odd_zeta() {
    // Σ (π(j-1/2))^{-s} = π^{-s} (2^s - 1) ζ(s)
    for r in 0..3u32 {
        let s = (2 * r + 2) as f64;
        let e = spec(KernelFamily::Euler { r });
        let n = 100_000;
        let head: f64 = (1..=n).rev().map(|j| (PI * (j as f64 - 0.5)).powf(-s)).sum();
        // midpoint rule: Σ_{j>N} (π(j-1/2))^{-s} ≈ ∫_N^∞ (πx)^{-s} dx
        let direct = head + PI.powf(-s) * (n as f64).powf(1.0 - s) / (s - 1.0);
        assert_relative_eq!(value(e.power_sum(1.0).unwrap()), direct, max_relative = 1e-9);
        let closed = PI.powf(-s) * (2f64.powf(s) - 1.0) * zeta(s).unwrap();
        assert_relative_eq!(value(e.power_sum(1.0).unwrap()), closed, max_relative = 1e-13);
    }
}

#[test]
fn zeta_examples() {
    assert_relative_eq!(zeta(2.0).unwrap(), PI * PI / 6.0, max_relative = 1e-14);
    assert_relative_eq!(zeta(4.0).unwrap(), PI.powi(4) / 90.0, max_relative = 1e-14);
    assert!((zeta(1.5).unwrap() - 2.612_375_348_685_488).abs() < 1e-12);
    assert!(zeta(1.0).is_err());
}

#[test]
fn second_ratio_examples() {
    assert_eq!(korobov().second_ratio().unwrap(), 0.5);
    let e = spec(KernelFamily::Euler { r: 1 }).normalize().unwrap();
    assert_relative_eq!(e.second_ratio().unwrap(), 1.0 / 81.0, max_relative = 1e-15);
    assert_eq!(analytic(2.0).second_ratio().unwrap(), 0.25);
}

#[test]
fn tail_function_examples() {
    assert_relative_eq!(
        value(korobov().tail_function_h(1.0).unwrap()),
        PI * PI / 3.0,
        max_relative = 1e-13
    );
    assert_eq!(value(analytic(1.0).tail_function_h(1.0).unwrap()), 4.0);
    let h = value(korobov().tail_function_h(50.0).unwrap());
    assert!((1.0..2.0 + 1e-12).contains(&h));
}

#[test]
fn wiener_spectrum_is_monotone_with_trace() {
    for r in 1..=2u32 {
        let w = spec(KernelFamily::Wiener { r });
        for j in 1..2000 {
            assert!(w.eigenvalue(j + 1) <= w.eigenvalue(j), "r={r} j={j}");
        }
        let fact = (1..=r).product::<u32>() as f64;
        let exact = 1.0 / ((2 * r + 2) as f64 * (2 * r + 1) as f64 * fact * fact);
        match w.power_sum(1.0).unwrap() {
            PowerSum::Converged { value, error_bound } => {
                assert!((value - exact).abs() <= 1e-8 + error_bound, "r={r}: {value} vs {exact}");
            }
            PowerSum::Divergent => panic!(),
        }
    }
}

#[test]
fn property_p_examples() {
    let rule = SequenceRule::korobov(ParamLaw::Const(1.0), "geometric(0.5)".parse().unwrap()).unwrap();
    let p = property_p_report(&rule, 0.8, 16).unwrap();
    assert!(p.holds());
    assert_eq!((p.a1, p.a2), (1.0, 1.0));
    let m = 2.0 * (1..=2_000_000u64).rev().map(|j| (j as f64).powf(-1.6)).sum::<f64>();
    // tail Σ_{j>N} j^-1.6 ≈ N^-0.6 / 0.6
    let m = m + 2.0 * (2e6f64).powf(-0.6) / 0.6;
    assert_relative_eq!(p.m_tau0.unwrap(), m, max_relative = 1e-6);
    for (h, f) in p.h_sequence.iter().zip(&p.f_sequence) {
        assert!(p.a2 * f <= *h && *h <= p.a1 * f);
    }

    let euler = SequenceRule::euler(ParamLaw::Const(1.0)).unwrap();
    assert!(!property_p_report(&euler, 0.8, 4).unwrap().condition1.holds);
}

#[test]
fn slowly_decaying_analytic_traces() {
    // references from 40-digit Euler–Maclaurin summation
    for (a, b, omega, want) in [
        (0.2, 0.3, 0.909_963_474_364_214_4, 10_353_333.444_438_052),
        (0.7, 0.5, 0.3, 5.927_831_653_300_248),
        (1.0, 0.15, 0.5, 59_716.439_515_574_675),
    ] {
        let s = spec(KernelFamily::AnalyticKorobov { a, b, omega });
        assert_relative_eq!(value(s.power_sum(1.0).unwrap()), want, max_relative = 1e-12);
    }
}

#[test]
fn geometric_analytic_trace_in_closed_form() {
    // b = 1: Σ_{m≥1} q^m = q / (1 - q) with q = ω^a
    for (a, omega) in [(1e-3, 0.5), (1.0, 0.999_99), (2.0, 0.3)] {
        let s = spec(KernelFamily::AnalyticKorobov { a, b: 1.0, omega });
        let q: f64 = omega.powf(a);
        assert_relative_eq!(
            value(s.power_sum(1.0).unwrap()),
            1.0 + 2.0 * q / (1.0 - q),
            max_relative = 1e-12
        );
    }
}

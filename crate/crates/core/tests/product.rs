use tensortract::validation::{brute_force_logs, check_enumeration};
use tensortract::{
    enumerate_top, head_sum, product_trace_power, ExplicitTail, KernelFamily, Normalization, ParamLaw, ProductProblem,
    SequenceRule, TracePower, UnivariateSpectrum,
};

fn korobov(d: usize) -> ProductProblem {
    let rule = SequenceRule::korobov(ParamLaw::Const(1.0), ParamLaw::Const(0.5)).unwrap();
    ProductProblem::from_rule(&rule, d, Normalization::Raw).unwrap()
}

#[test]
fn one_dimension_is_the_sequence() {
    let p = korobov(1);
    let top = enumerate_top(&p, 3).unwrap();
    let values: Vec<f64> = top.iter().map(|r| r.value()).collect();
    assert_eq!(values, vec![1.0, 0.5, 0.5]);
}

#[test]
fn two_dimensional_head_and_indices() {
    let top = enumerate_top(&korobov(2), 5).unwrap();
    let values: Vec<f64> = top.iter().map(|r| r.value()).collect();
    assert_eq!(values, vec![1.0, 0.5, 0.5, 0.5, 0.5]);
    let mut idx: Vec<Vec<u32>> = top.iter().map(|r| r.index.clone()).collect();
    idx.sort();
    assert_eq!(idx, vec![vec![1, 1], vec![1, 2], vec![1, 3], vec![2, 1], vec![3, 1]]);
    let ranks: Vec<usize> = top.iter().map(|r| r.rank).collect();
    assert_eq!(ranks, vec![1, 2, 3, 4, 5]);
}

#[test]
fn first_value_is_the_componentwise_maximum() {
    let rule = SequenceRule::euler(ParamLaw::Const(1.0)).unwrap();
    let p = ProductProblem::from_rule(&rule, 7, Normalization::Raw).unwrap();
    let top = enumerate_top(&p, 1).unwrap();
    assert_eq!(top[0].index, vec![1; 7]);
    let want: f64 = p.spectra().iter().map(|s| s.eigenvalue(1).ln()).sum();
    assert!((top[0].log_value - want).abs() < 1e-13);
}

#[test]
fn head_sum_examples() {
    assert_eq!(head_sum(&korobov(2), 0).unwrap(), 0.0);
    assert_eq!(head_sum(&korobov(2), 5).unwrap(), 3.0);
    let s = UnivariateSpectrum::new(KernelFamily::Explicit {
        values: vec![1.0, 0.5, 0.25],
        tail: ExplicitTail::Zero,
    })
    .unwrap();
    let p = ProductProblem::from_spectra(vec![s], Normalization::Raw).unwrap();
    assert_eq!(head_sum(&p, 3).unwrap(), 1.75);
}

#[test]
fn trace_power_examples() {
    let t = product_trace_power(&korobov(2), 1.0).unwrap().value().unwrap();
    assert!((t - 6.995_676_2).abs() < 1e-7);
    let a = UnivariateSpectrum::new(KernelFamily::AnalyticKorobov {
        a: 1.0,
        b: 1.0,
        omega: 0.5,
    })
    .unwrap();
    let p = ProductProblem::from_spectra(vec![a; 3], Normalization::Raw).unwrap();
    assert_eq!(product_trace_power(&p, 1.0).unwrap().value().unwrap(), 27.0);
    assert_eq!(
        product_trace_power(&korobov(1), 0.5).unwrap(),
        TracePower::Divergent { coordinate: 1 }
    );
}

#[test]
fn large_dimension_stays_in_log_domain() {
    let rule = SequenceRule::analytic_korobov(ParamLaw::Const(1.0), ParamLaw::Const(1.0), 1e-3).unwrap();
    let p = ProductProblem::from_rule(&rule, 100, Normalization::Raw).unwrap();
    let top = enumerate_top(&p, 300).unwrap();
    let last = top.last().unwrap();
    assert_eq!(last.value(), (last.log_value).exp());
    assert!(top.windows(2).all(|w| w[1].log_value <= w[0].log_value));
}

#[test]
fn enumeration_matches_brute_force_on_mixed_coordinates() {
    let spectra = vec![
        UnivariateSpectrum::new(KernelFamily::Korobov { r: 1.0, g: 0.3 }).unwrap(),
        UnivariateSpectrum::new(KernelFamily::Euler { r: 0 })
            .unwrap()
            .normalize()
            .unwrap(),
        UnivariateSpectrum::new(KernelFamily::AnalyticKorobov {
            a: 0.7,
            b: 1.5,
            omega: 0.5,
        })
        .unwrap(),
    ];
    let p = ProductProblem::from_spectra(spectra, Normalization::Normalized).unwrap();
    let c = check_enumeration(&p, 24, 2000, 1e-12).unwrap();
    assert!(c.passed, "{c:?}");
}

#[test]
fn each_index_vector_above_the_cut_appears_once() {
    let p = korobov(3);
    let m = 500;
    let top = enumerate_top(&validation_truncated(&p), m).unwrap();
    let mut seen: Vec<&Vec<u32>> = top.iter().map(|r| &r.index).collect();
    seen.sort();
    seen.dedup();
    assert_eq!(seen.len(), m);
    let cut = top.last().unwrap().log_value;
    let above = brute_force_logs(&p, 32).iter().filter(|l| **l > cut + 1e-12).count();
    let produced = top.iter().filter(|r| r.log_value > cut + 1e-12).count();
    assert_eq!(above, produced);
}

fn validation_truncated(p: &ProductProblem) -> ProductProblem {
    tensortract::validation::truncated(p, 32).unwrap()
}

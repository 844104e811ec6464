//! Brute-force cross-checks used by the `validate` command and the tests.

use serde::Serialize;

use crate::error::Result;
use crate::nystrom::{self, KernelKind, ValidationCheck};
use crate::product::{enumerate_top, Normalization, ProductProblem};
use crate::spectra::{ExplicitTail, KernelFamily, UnivariateSpectrum};

/// The problem restricted to the first `j` eigenvalues of every coordinate.
pub fn truncated(problem: &ProductProblem, j: usize) -> Result<ProductProblem> {
    let spectra = problem
        .spectra()
        .iter()
        .map(|s| {
            UnivariateSpectrum::new(KernelFamily::Explicit {
                values: (1..=j).map(|i| s.eigenvalue(i)).collect(),
                tail: ExplicitTail::Zero,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ProductProblem::from_spectra(spectra, Normalization::Raw)
}

/// Logarithms of all `j^d` products of the first `j` eigenvalues per
/// coordinate, sorted non-increasingly. Zero products are dropped.
pub fn brute_force_logs(problem: &ProductProblem, j: usize) -> Vec<f64> {
    let tables: Vec<Vec<f64>> = problem
        .spectra()
        .iter()
        .map(|s| (1..=j).map(|i| s.ln_eigenvalue(i)).collect())
        .collect();
    let mut logs = vec![0.0];
    for table in &tables {
        logs = logs.iter().flat_map(|l| table.iter().map(move |t| l + t)).collect();
    }
    logs.retain(|l| *l > f64::NEG_INFINITY);
    logs.sort_by(|a, b| b.total_cmp(a));
    logs
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnumerationCheck {
    pub d: usize,
    pub m: usize,
    pub truncation: usize,
    pub max_log_difference: f64,
    pub passed: bool,
}

/// Compares the top `m` products of the `j`-truncated problem with the
/// sorted full grid.
pub fn check_enumeration(problem: &ProductProblem, j: usize, m: usize, tolerance: f64) -> Result<EnumerationCheck> {
    let small = truncated(problem, j)?;
    let mut got: Vec<f64> = enumerate_top(&small, m)?.iter().map(|r| r.log_value).collect();
    got.sort_by(|a, b| b.total_cmp(a));
    let want = brute_force_logs(problem, j);
    let want = &want[..m.min(want.len())];
    let max_log_difference = if got.len() == want.len() {
        got.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    Ok(EnumerationCheck {
        d: problem.dim(),
        m,
        truncation: j,
        max_log_difference,
        passed: max_log_difference <= tolerance,
    })
}

/// Brownian quadrature against its closed law, the integrated Wiener trace
/// identity, and product enumeration against brute force for `d <= 3`.
pub fn run_suite() -> Result<Vec<ValidationCheck>> {
    let mut checks = Vec::new();
    checks.extend(nystrom::cross_validate(KernelKind::Brownian, 1e-6)?.checks);
    let wiener = nystrom::cross_validate(KernelKind::IntegratedWiener { r: 1 }, 1e-8)?;
    checks.extend(wiener.checks.into_iter().filter(|c| c.name == "trace_identity"));
    let families = [
        KernelFamily::Korobov { r: 1.0, g: 0.5 },
        KernelFamily::AnalyticKorobov {
            a: 1.0,
            b: 1.0,
            omega: 0.5,
        },
        KernelFamily::Euler { r: 0 },
    ];
    for family in families {
        let spec = UnivariateSpectrum::new(family.clone())?.normalize()?;
        for d in 1..=3 {
            let problem = ProductProblem::from_spectra(vec![spec.clone(); d], Normalization::Normalized)?;
            let check = check_enumeration(&problem, 64, 1000, 1e-12)?;
            checks.push(ValidationCheck {
                name: format!("enumeration_{}_d{d}", family.name()),
                passed: check.passed,
                detail: format!("max |Δ log| {:e} over {} values", check.max_log_difference, check.m),
            });
        }
    }
    Ok(checks)
}

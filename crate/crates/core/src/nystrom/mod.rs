//! Quadrature (Nyström) eigenvalues of the Brownian-motion and integrated
//! Wiener covariance kernels on `[0, 1]`.
//!
//! The covariance operator is discretised on Gauss–Legendre nodes and
//! symmetrised with the square roots of the weights,
//! `M_pq = √w_p K(x_p, x_q) √w_q`. Because the kernels have a derivative
//! jump on the diagonal the plain rule converges slowly, so the default
//! scheme subtracts the singular part: each row gets the diagonal correction
//! `∫_0^1 K(x_p, y) dy - Σ_q w_q K(x_p, x_q)`, which keeps the matrix
//! symmetric. The leading eigenvalues are then Richardson-extrapolated from
//! the `order / 2` and `order` matrices using the observed `order^-(2r+4)`
//! error law.

mod jacobi;
mod quadrature;

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub use jacobi::{jacobi_eigenvalues, JacobiEigen, SymmetricMatrix, MAX_SWEEPS};
pub use quadrature::GaussLegendre;

/// Off-diagonal stopping threshold relative to the Frobenius norm.
pub const JACOBI_TOLERANCE: f64 = 1e-14;
pub const DEFAULT_ORDER: usize = 256;
pub const DEFAULT_COUNT: usize = 64;

/// Covariance kernels with an `r`-fold integrated Wiener structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelKind {
    /// `K(x, y) = min(x, y)`.
    Brownian,
    /// `K(x, y) = ∫_0^{min(x,y)} (x-u)^r (y-u)^r du / (r!)^2`, `r >= 1`.
    IntegratedWiener { r: u32 },
}

impl KernelKind {
    /// `r = 0` maps to [`KernelKind::Brownian`].
    pub fn wiener(r: u32) -> Self {
        if r == 0 {
            KernelKind::Brownian
        } else {
            KernelKind::IntegratedWiener { r }
        }
    }

    pub fn smoothness(&self) -> u32 {
        match *self {
            KernelKind::Brownian => 0,
            KernelKind::IntegratedWiener { r } => r,
        }
    }

    /// `∫_0^1 K(x, x) dx = 1 / ((2r+2)(2r+1)(r!)^2)`.
    pub fn analytic_trace(&self) -> f64 {
        let r = self.smoothness() as f64;
        let fact = factorial(self.smoothness());
        1.0 / ((2.0 * r + 2.0) * (2.0 * r + 1.0) * fact * fact)
    }

    fn validate(&self) -> Result<()> {
        if let KernelKind::IntegratedWiener { r: 0 } = self {
            return domain("integrated Wiener kernel needs r >= 1; use Brownian for r = 0");
        }
        Ok(())
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelKind::Brownian => write!(f, "brownian"),
            KernelKind::IntegratedWiener { r } => write!(f, "integrated_wiener(r={r})"),
        }
    }
}

fn factorial(r: u32) -> f64 {
    (1..=r).map(f64::from).product()
}

/// `(π (j - 1/2))^{-(2r+2)}`, the large-`j` law of the Wiener spectra and
/// the exact Euler spectrum.
pub fn asymptotic_law(r: u32, j: usize) -> f64 {
    (PI * (j as f64 - 0.5)).powi(-(2 * r as i32 + 2))
}

/// Reusable kernel evaluator. The integrand of the integrated Wiener kernel
/// is a polynomial of degree `2r`, so an `(r+1)`-point Gauss rule on
/// `[0, min(x, y)]` is exact.
#[derive(Debug, Clone)]
pub struct KernelFunction {
    kind: KernelKind,
    rule: GaussLegendre,
    scale: f64,
}

impl KernelFunction {
    pub fn new(kind: KernelKind) -> Result<Self> {
        kind.validate()?;
        let r = kind.smoothness();
        let fact = factorial(r);
        Ok(Self {
            kind,
            rule: GaussLegendre::new(r as usize + 1),
            scale: 1.0 / (fact * fact),
        })
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    #[inline]
    fn eval_unchecked(&self, x: f64, y: f64) -> f64 {
        let m = x.min(y);
        match self.kind {
            KernelKind::Brownian => m,
            KernelKind::IntegratedWiener { r } => {
                let half = 0.5 * m;
                let mut s = 0.0;
                for (t, w) in self.rule.nodes.iter().zip(&self.rule.weights) {
                    let u = half * (t + 1.0);
                    // grouped so that swapping x and y is exact
                    s += w * ((x - u).powi(r as i32) * (y - u).powi(r as i32));
                }
                s * half * self.scale
            }
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
            return domain(format!("kernel arguments must lie in [0,1], got ({x}, {y})"));
        }
        Ok(self.eval_unchecked(x, y))
    }

    /// `∫_0^1 K(x, y) dy`, exact: the kernel is a polynomial in `y` of degree
    /// at most `2r + 1` on each side of the diagonal.
    pub fn row_integral(&self, x: f64) -> f64 {
        let order = self.kind.smoothness() as usize + 2;
        let left = GaussLegendre::on_interval(order, 0.0, x);
        let right = GaussLegendre::on_interval(order, x, 1.0);
        left.integrate(|y| self.eval_unchecked(x, y)) + right.integrate(|y| self.eval_unchecked(x, y))
    }
}

/// Evaluates the kernel at `(x, y)`, both in `[0, 1]`.
pub fn kernel_eval(kind: KernelKind, x: f64, y: f64) -> Result<f64> {
    KernelFunction::new(kind)?.eval(x, y)
}

/// Discretisation variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NystromScheme {
    /// `√w_p K(x_p, x_q) √w_q` as is.
    Plain,
    /// Plain matrix plus the singularity-subtraction diagonal.
    Subtracted,
    /// Subtracted scheme, leading eigenvalues extrapolated from `order / 2`.
    Extrapolated,
}

impl fmt::Display for NystromScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NystromScheme::Plain => "plain",
            NystromScheme::Subtracted => "subtracted",
            NystromScheme::Extrapolated => "extrapolated",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NystromOptions {
    pub order: usize,
    pub count: usize,
    pub scheme: NystromScheme,
}

impl Default for NystromOptions {
    fn default() -> Self {
        Self {
            order: DEFAULT_ORDER,
            count: DEFAULT_COUNT,
            scheme: NystromScheme::Extrapolated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NystromReport {
    pub kind: KernelKind,
    pub scheme: NystromScheme,
    pub quadrature_order: usize,
    /// Leading `count` eigenvalues, non-increasing.
    pub eigenvalues: Vec<f64>,
    /// Sum of all eigenvalues of the order-`quadrature_order` matrix.
    pub eigenvalue_sum: f64,
    /// Trace of the assembled matrix. Equals `Σ w_p K(x_p, x_p)` for the
    /// plain scheme; the subtracted schemes add the correction diagonal.
    pub trace_quadrature: f64,
    /// Smallest eigenvalue of the finest matrix.
    pub min_eigenvalue: f64,
    pub reference_law: Vec<f64>,
    /// `λ_j / law_j - 1`.
    pub deviations: Vec<f64>,
    /// Size of the extrapolation step `|λ_j - λ_j(order)|`, an a-posteriori
    /// error estimate. Empty unless the scheme is extrapolated.
    pub error_estimates: Vec<f64>,
    pub sweeps: usize,
}

struct Spectrum {
    eigenvalues: Vec<f64>,
    trace: f64,
    sweeps: usize,
}

fn assemble(kernel: &KernelFunction, order: usize, subtract: bool) -> SymmetricMatrix {
    let rule = GaussLegendre::on_interval(order, 0.0, 1.0);
    let sqrt_w: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
    let mut m = SymmetricMatrix::from_fn(order, |p, q| {
        sqrt_w[p] * kernel.eval_unchecked(rule.nodes[p], rule.nodes[q]) * sqrt_w[q]
    });
    if subtract {
        let correction: Vec<f64> = (0..order)
            .map(|p| {
                let x = rule.nodes[p];
                let discrete: f64 = (0..order)
                    .map(|q| rule.weights[q] * kernel.eval_unchecked(x, rule.nodes[q]))
                    .sum();
                kernel.row_integral(x) - discrete
            })
            .collect();
        m = SymmetricMatrix::from_fn(order, |p, q| {
            let v = m.get(p, q);
            if p == q {
                v + correction[p]
            } else {
                v
            }
        });
    }
    m
}

fn solve(kernel: &KernelFunction, order: usize, subtract: bool) -> Result<Spectrum> {
    let m = assemble(kernel, order, subtract);
    let trace = m.trace();
    let eig = jacobi_eigenvalues(&m, JACOBI_TOLERANCE)?;
    Ok(Spectrum {
        eigenvalues: eig.eigenvalues,
        trace,
        sweeps: eig.sweeps,
    })
}

/// Nyström eigenvalues with the default (extrapolated) scheme.
pub fn nystrom_eigenvalues(kind: KernelKind, quadrature_order: usize, count: usize) -> Result<NystromReport> {
    nystrom_eigenvalues_with(
        kind,
        &NystromOptions {
            order: quadrature_order,
            count,
            scheme: NystromScheme::Extrapolated,
        },
    )
}

pub fn nystrom_eigenvalues_with(kind: KernelKind, options: &NystromOptions) -> Result<NystromReport> {
    let NystromOptions { order, count, scheme } = *options;
    if order == 0 || count == 0 {
        return domain("quadrature order and count must be positive");
    }
    if count > order {
        return domain(format!("count {count} exceeds quadrature order {order}"));
    }
    if scheme == NystromScheme::Extrapolated && (order < 4 || count > order / 2) {
        return domain(format!(
            "extrapolation needs order >= 4 and count <= order/2 (order {order}, count {count})"
        ));
    }
    let kernel = KernelFunction::new(kind)?;
    let fine = solve(&kernel, order, scheme != NystromScheme::Plain)?;

    let mut eigenvalues: Vec<f64> = fine.eigenvalues[..count].to_vec();
    let mut error_estimates = Vec::new();
    let mut sweeps = fine.sweeps;
    if scheme == NystromScheme::Extrapolated {
        let coarse = solve(&kernel, order / 2, true)?;
        sweeps += coarse.sweeps;
        let ratio = 2f64.powi(2 * kind.smoothness() as i32 + 4);
        for (fine_j, coarse_j) in eigenvalues.iter_mut().zip(&coarse.eigenvalues) {
            let step = (*fine_j - coarse_j) / (ratio - 1.0);
            *fine_j += step;
            error_estimates.push(step.abs());
        }
    }

    let r = kind.smoothness();
    let reference_law: Vec<f64> = (1..=count).map(|j| asymptotic_law(r, j)).collect();
    let deviations = eigenvalues
        .iter()
        .zip(&reference_law)
        .map(|(l, law)| l / law - 1.0)
        .collect();
    Ok(NystromReport {
        kind,
        scheme,
        quadrature_order: order,
        eigenvalues,
        eigenvalue_sum: fine.eigenvalues.iter().sum(),
        trace_quadrature: fine.trace,
        min_eigenvalue: *fine.eigenvalues.last().unwrap_or(&0.0),
        reference_law,
        deviations,
        error_estimates,
        sweeps,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossValidation {
    pub kind: KernelKind,
    pub checks: Vec<ValidationCheck>,
}

impl CrossValidation {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Window over which the scaled Wiener deviations must shrink.
pub const TREND_WINDOW: std::ops::RangeInclusive<usize> = 3..=12;

/// Cross-checks the oracle against what is known in closed form.
///
/// Brownian: the first ten eigenvalues against `(π(j-1/2))^{-2}` within the
/// relative `tolerance`. Integrated Wiener: the eigenvalue sum against the
/// analytic trace within the absolute `tolerance`, and the scaled deviations
/// `|λ_j (π(j-1/2))^{2r+2} - 1|` strictly decreasing over [`TREND_WINDOW`].
pub fn cross_validate(kind: KernelKind, tolerance: f64) -> Result<CrossValidation> {
    let report = nystrom_eigenvalues(kind, DEFAULT_ORDER, 16)?;
    let mut checks = Vec::new();
    match kind {
        KernelKind::Brownian => {
            let worst = report.deviations[..10].iter().map(|d| d.abs()).fold(0.0, f64::max);
            checks.push(ValidationCheck {
                name: "closed_law_j<=10".into(),
                passed: worst <= tolerance,
                detail: format!("max relative deviation {worst:e}, tolerance {tolerance:e}"),
            });
        }
        KernelKind::IntegratedWiener { .. } => {
            let exact = kind.analytic_trace();
            let err = (report.eigenvalue_sum - exact).abs();
            checks.push(ValidationCheck {
                name: "trace_identity".into(),
                passed: err <= tolerance,
                detail: format!("|Σλ - {exact:e}| = {err:e}, tolerance {tolerance:e}"),
            });
            let (passed, detail) = deviation_trend(&report);
            checks.push(ValidationCheck {
                name: "scaled_deviation_trend".into(),
                passed,
                detail,
            });
        }
    }
    let psd = report.min_eigenvalue >= -1e-12;
    checks.push(ValidationCheck {
        name: "positive_semidefinite".into(),
        passed: psd,
        detail: format!("min eigenvalue {:e}", report.min_eigenvalue),
    });
    Ok(CrossValidation { kind, checks })
}

fn deviation_trend(report: &NystromReport) -> (bool, String) {
    let window: Vec<(usize, f64)> = TREND_WINDOW.map(|j| (j, report.deviations[j - 1].abs())).collect();
    let violations: Vec<usize> = window.windows(2).filter(|w| w[1].1 >= w[0].1).map(|w| w[1].0).collect();
    let values = window
        .iter()
        .map(|(j, d)| format!("{j}:{d:.2e}"))
        .collect::<Vec<_>>()
        .join(" ");
    if violations.is_empty() {
        (true, format!("decreasing: {values}"))
    } else {
        (false, format!("not decreasing at j={violations:?}: {values}"))
    }
}

/// Leading Wiener eigenvalues for one smoothness and resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct WienerTable {
    pub r: u32,
    pub order: usize,
    pub eigenvalues: Vec<f64>,
    /// Absolute error estimates, zero for the exact `r = 0` law.
    pub error_estimates: Vec<f64>,
}

type CacheKey = (u32, usize, usize);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<WienerTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<WienerTable>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Leading Wiener eigenvalues for smoothness `r`, memoised per
/// `(r, order, count)`. `r = 0` returns the exact Brownian law.
pub fn wiener_eigenvalues(r: u32, order: usize, count: usize) -> Result<Arc<WienerTable>> {
    let key = (r, order, count);
    if let Some(t) = cache().lock().expect("wiener cache poisoned").get(&key) {
        return Ok(Arc::clone(t));
    }
    let table = if r == 0 {
        WienerTable {
            r,
            order,
            eigenvalues: (1..=count).map(|j| asymptotic_law(0, j)).collect(),
            error_estimates: vec![0.0; count],
        }
    } else {
        let report = nystrom_eigenvalues(KernelKind::IntegratedWiener { r }, order, count)?;
        WienerTable {
            r,
            order,
            eigenvalues: report.eigenvalues,
            error_estimates: report.error_estimates,
        }
    };
    let mut guard = cache().lock().expect("wiener cache poisoned");
    // concurrent callers compute identical tables; keep whichever landed first
    let entry = guard.entry(key).or_insert_with(|| Arc::new(table));
    Ok(Arc::clone(entry))
}

const SIDECAR_HEADER: &str = "# tensortract wiener cache v1";

fn join(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(" ")
}

/// Writes every memoised Wiener table to a text sidecar, one table per line:
/// `r order count`, the eigenvalues, then the error estimates.
pub fn save_wiener_cache(path: impl AsRef<Path>) -> Result<()> {
    let guard = cache().lock().expect("wiener cache poisoned");
    let mut keys: Vec<&CacheKey> = guard.keys().collect();
    keys.sort();
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "{SIDECAR_HEADER}")?;
    for key in keys {
        let t = &guard[key];
        writeln!(
            out,
            "{} {} {} {} {}",
            key.0,
            key.1,
            key.2,
            join(&t.eigenvalues),
            join(&t.error_estimates)
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Loads a sidecar written by [`save_wiener_cache`]; returns the number of
/// tables added. Tables already in memory are kept.
pub fn load_wiener_cache(path: impl AsRef<Path>) -> Result<usize> {
    let file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut lines = file.lines();
    match lines.next() {
        Some(Ok(h)) if h.trim() == SIDECAR_HEADER => {}
        _ => {
            return Err(Error::Config(vec![
                "wiener cache: missing or unknown version header".into()
            ]))
        }
    }
    let mut parsed = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = || Error::Config(vec![format!("wiener cache: malformed line {}", lineno + 2)]);
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 3 {
            return Err(bad());
        }
        let r: u32 = fields[0].parse().map_err(|_| bad())?;
        let order: usize = fields[1].parse().map_err(|_| bad())?;
        let count: usize = fields[2].parse().map_err(|_| bad())?;
        let numbers: Vec<f64> = fields[3..]
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        if numbers.len() != 2 * count {
            return Err(bad());
        }
        let (eigenvalues, errors) = numbers.split_at(count);
        parsed.push(WienerTable {
            r,
            order,
            eigenvalues: eigenvalues.to_vec(),
            error_estimates: errors.to_vec(),
        });
    }
    let mut guard = cache().lock().expect("wiener cache poisoned");
    let mut loaded = 0;
    for table in parsed {
        let key = (table.r, table.order, table.eigenvalues.len());
        guard.entry(key).or_insert_with(|| {
            loaded += 1;
            Arc::new(table)
        });
    }
    Ok(loaded)
}

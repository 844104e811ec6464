//! Initial and minimal errors, information complexity and its bounds.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::product::{product_trace_power, Enumerator, Normalization, ProductProblem, TracePower, DEFAULT_NODE_BUDGET};
use crate::spectra::PowerSum;
use crate::summation::NeumaierSum;

/// Tails below this fraction of the trace are lost to cancellation.
pub const CANCELLATION_FLOOR: f64 = 1e-12;
/// `τ` used for the in-band upper bound.
pub const DEFAULT_TAU: f64 = 0.25;
/// `x` used for the in-band lower bound.
pub const DEFAULT_X: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorCriterion {
    /// Absolute error, `CRI_d = 1`.
    #[serde(alias = "ABS")]
    Abs,
    /// Normalised error, `CRI_d = e(0, d)`.
    #[serde(alias = "NOR")]
    Nor,
}

impl fmt::Display for ErrorCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorCriterion::Abs => "ABS",
            ErrorCriterion::Nor => "NOR",
        })
    }
}

impl FromStr for ErrorCriterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "abs" => Ok(ErrorCriterion::Abs),
            "nor" => Ok(ErrorCriterion::Nor),
            _ => Err(Error::Config(vec![format!("criterion must be abs or nor, got `{s}`")])),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexityQuery {
    pub epsilon: f64,
    pub criterion: ErrorCriterion,
    /// Largest `n` that is resolved exactly.
    pub cap: usize,
}

impl ComplexityQuery {
    pub fn new(epsilon: f64, criterion: ErrorCriterion, cap: usize) -> Result<Self> {
        check_epsilon(epsilon)?;
        if cap == 0 {
            return domain("cap must be positive");
        }
        Ok(Self {
            epsilon,
            criterion,
            cap,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexityStatus {
    Exact,
    ExceedsCap,
}

impl fmt::Display for ComplexityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComplexityStatus::Exact => "exact",
            ComplexityStatus::ExceedsCap => "exceeds_cap",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityResult {
    pub status: ComplexityStatus,
    /// `n^X(ε, d)` when exact; the number of resolved terms otherwise.
    pub n: usize,
    /// `e(n, d)^2`, the squared error after `n` terms.
    pub tail_at_n: f64,
    /// `ε^2 CRI_d^2`.
    pub threshold: f64,
    pub initial_error: f64,
    pub certified_lower: f64,
    pub certified_upper: Option<f64>,
    pub resolution_warning: bool,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return domain(format!("epsilon must lie in (0,1), got {epsilon}"));
    }
    Ok(())
}

fn trace(problem: &ProductProblem) -> Result<f64> {
    Ok(product_trace_power(problem, 1.0)?.require()?.0)
}

/// `e(0, d) = (Σ_j λ_{d,j})^{1/2}`.
pub fn initial_error(problem: &ProductProblem) -> Result<f64> {
    let (_, log_trace) = product_trace_power(problem, 1.0)?.require()?;
    Ok((0.5 * log_trace).exp())
}

/// `e(n, d)` together with the quantities it is built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimalError {
    pub value: f64,
    /// `trace - head`, clamped at zero.
    pub tail: f64,
    pub head: f64,
    pub trace: f64,
    pub resolution_warning: bool,
}

/// `e(n, d) = (trace - Σ_{j<=n} λ_{d,j})^{1/2}`.
pub fn minimal_error(problem: &ProductProblem, n: usize) -> Result<MinimalError> {
    let trace = trace(problem)?;
    let mut e = problem.enumerator();
    let head: NeumaierSum = e.by_ref().take(n).map(|r| r.value()).collect();
    if e.budget_exhausted() {
        return Err(Error::Cap {
            budget: DEFAULT_NODE_BUDGET,
            partial: Vec::new(),
        });
    }
    let head = head.value();
    let tail = (trace - head).max(0.0);
    Ok(MinimalError {
        value: tail.sqrt(),
        tail,
        head,
        trace,
        resolution_warning: tail < CANCELLATION_FLOOR * trace,
    })
}

/// `n^X(ε, d)`: the smallest `n` with `e(n, d)^2 <= ε^2 CRI_d^2`.
///
/// Ranked eigenvalues are accumulated until the complement `trace - head`
/// crosses the threshold. Past `query.cap` terms the result reports
/// `exceeds_cap` with the certified interval `[max(cap + 1, lower), upper]`.
pub fn info_complexity(problem: &ProductProblem, query: &ComplexityQuery) -> Result<ComplexityResult> {
    check_epsilon(query.epsilon)?;
    let (trace, log_trace) = product_trace_power(problem, 1.0)?.require()?;
    let initial = (0.5 * log_trace).exp();
    let threshold = match query.criterion {
        ErrorCriterion::Abs => query.epsilon * query.epsilon,
        ErrorCriterion::Nor => query.epsilon * query.epsilon * trace,
    };
    let floor = CANCELLATION_FLOOR * trace;
    if threshold < floor {
        return Err(Error::Resolution {
            target: threshold,
            floor,
        });
    }

    let mut head = NeumaierSum::new();
    let mut n = 0;
    let mut tail = trace;
    let mut enumerator = Enumerator::new(problem, DEFAULT_NODE_BUDGET);
    while tail > threshold && n < query.cap {
        let Some(next) = enumerator.next() else {
            if enumerator.budget_exhausted() {
                break;
            }
            // finite spectrum: everything has been summed
            tail = 0.0;
            break;
        };
        head.add(next.value());
        n += 1;
        tail = (trace - head.value()).max(0.0);
    }

    let status = if tail <= threshold {
        ComplexityStatus::Exact
    } else {
        ComplexityStatus::ExceedsCap
    };
    let (lower, upper) = certified_bounds(problem, query, initial)?;
    let certified_lower = match status {
        ComplexityStatus::Exact => lower,
        ComplexityStatus::ExceedsCap => lower.max(n as f64 + 1.0),
    };
    Ok(ComplexityResult {
        status,
        n,
        tail_at_n: tail,
        threshold,
        initial_error: initial,
        certified_lower,
        certified_upper: upper,
        resolution_warning: tail < floor,
    })
}

/// Lower and upper bounds for `n^X(ε, d)` from the closed-form estimates,
/// using `n^ABS(ε) = n^NOR(ε / e(0,d))`.
fn certified_bounds(problem: &ProductProblem, query: &ComplexityQuery, initial: f64) -> Result<(f64, Option<f64>)> {
    let nor_epsilon = match query.criterion {
        ErrorCriterion::Nor => query.epsilon,
        ErrorCriterion::Abs => query.epsilon / initial,
    };
    let abs_epsilon = match query.criterion {
        ErrorCriterion::Abs => query.epsilon,
        ErrorCriterion::Nor => query.epsilon * initial,
    };
    let lower = if nor_epsilon < 1.0 {
        // n^NOR is unchanged by normalising each coordinate
        let normalized = problem.normalized()?;
        let product_bound = lower_bound_nor_unchecked(&normalized, nor_epsilon, DEFAULT_X)?;
        let trace_bound = (1.0 - nor_epsilon * nor_epsilon) * trace(&normalized)?;
        product_bound.max(trace_bound).max(0.0)
    } else {
        0.0
    };
    let upper = match upper_bound_abs_unchecked(problem, abs_epsilon, DEFAULT_TAU)? {
        UpperBound::Value(v) => Some(v),
        UpperBound::Divergent { .. } => None,
    };
    Ok((lower, upper))
}

/// `(1-ε^2)^{(x+1)/x} (Π_k (1+h_k) / (1+h_k^{x+1}))^{1/x} <= n^NOR(ε, d)`.
pub fn lower_bound_nor(problem: &ProductProblem, epsilon: f64, x: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    lower_bound_nor_unchecked(problem, epsilon, x)
}

fn lower_bound_nor_unchecked(problem: &ProductProblem, epsilon: f64, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return domain(format!("x must be positive, got {x}"));
    }
    let mut log_product = NeumaierSum::new();
    for h in problem.second_ratios()? {
        log_product.add(h.ln_1p() - h.powf(x + 1.0).ln_1p());
    }
    let log_bound = (x + 1.0) / x * (-epsilon * epsilon).ln_1p() + log_product.value() / x;
    Ok(log_bound.exp())
}

/// `(1-ε^2) Σ_j λ_{d,j} <= n^NOR(ε, d)`; needs `λ_{d,1} = 1`.
pub fn trace_lower_bound_nor(problem: &ProductProblem, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if problem.normalization() != Normalization::Normalized {
        return Err(Error::Precondition(
            "the trace lower bound needs λ_{d,1} = 1; normalise the problem first".into(),
        ));
    }
    Ok((1.0 - epsilon * epsilon) * trace(problem)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum UpperBound {
    Value(f64),
    Divergent { coordinate: usize },
}

impl UpperBound {
    pub fn value(&self) -> Option<f64> {
        match *self {
            UpperBound::Value(v) => Some(v),
            UpperBound::Divergent { .. } => None,
        }
    }
}

/// `n^ABS(ε, d) <= ε^{-2(1-τ)/τ} (Σ_j λ_{d,j}^{1-τ})^{1/τ}`.
pub fn upper_bound_abs(problem: &ProductProblem, epsilon: f64, tau: f64) -> Result<UpperBound> {
    check_epsilon(epsilon)?;
    upper_bound_abs_unchecked(problem, epsilon, tau)
}

fn upper_bound_abs_unchecked(problem: &ProductProblem, epsilon: f64, tau: f64) -> Result<UpperBound> {
    if !(tau > 0.0 && tau < 1.0) {
        return domain(format!("tau must lie in (0,1), got {tau}"));
    }
    Ok(match product_trace_power(problem, 1.0 - tau)? {
        TracePower::Divergent { coordinate } => UpperBound::Divergent { coordinate },
        TracePower::Converged { log_value, .. } => {
            let log_bound = -2.0 * (1.0 - tau) / tau * epsilon.ln() + log_value / tau;
            UpperBound::Value(log_bound.exp())
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub x: f64,
    pub tau0: f64,
    /// `max_k H(k, τ0)`.
    pub m_tau0: f64,
    /// `Σ_k h_k^x`.
    pub sum_h_pow: f64,
    /// `ln 2 · Σ_k h_k^x`.
    pub left: f64,
    /// `Σ_k ln(1 + h_k^x H(k, x)) = ln Σ_j λ_{d,j}^x`.
    pub middle: f64,
    /// `M_{τ0} · Σ_k h_k^x`.
    pub right: f64,
    pub left_holds: bool,
    pub right_holds: bool,
}

/// Relative slack for the sandwich comparisons.
const SANDWICH_SLACK: f64 = 1e-12;

/// Evaluates `ln 2 Σ h_k^x <= ln Σ_j λ_{d,j}^x <= M_{τ0} Σ h_k^x` for
/// `x >= τ0` on a normalised problem. Coordinates with `h_k = 0` contribute
/// nothing to any of the three sides.
pub fn sandwich_check(problem: &ProductProblem, x: f64, tau0: f64) -> Result<SandwichReport> {
    if problem.normalization() != Normalization::Normalized {
        return Err(Error::Precondition(
            "the sandwich check needs a normalised problem".into(),
        ));
    }
    if !(tau0 > 0.0) || !(x >= tau0) {
        return domain(format!("need x >= tau0 > 0, got x={x}, tau0={tau0}"));
    }
    let mut m_tau0: f64 = 1.0;
    let mut sum_h = NeumaierSum::new();
    let mut middle = NeumaierSum::new();
    for (k, spec) in problem.spectra().iter().enumerate() {
        let h = spec.second_ratio()?;
        if h == 0.0 {
            continue;
        }
        let h_tau = match spec.tail_function_h(tau0)? {
            PowerSum::Converged { value, .. } => value,
            PowerSum::Divergent => return Err(Error::Divergent { coordinate: k + 1 }),
        };
        let h_x = match spec.tail_function_h(x)? {
            PowerSum::Converged { value, .. } => value,
            PowerSum::Divergent => return Err(Error::Divergent { coordinate: k + 1 }),
        };
        m_tau0 = m_tau0.max(h_tau);
        let hx = h.powf(x);
        sum_h.add(hx);
        middle.add((hx * h_x).ln_1p());
    }
    let sum_h_pow = sum_h.value();
    let middle = middle.value();
    let left = std::f64::consts::LN_2 * sum_h_pow;
    let right = m_tau0 * sum_h_pow;
    let slack = SANDWICH_SLACK * middle.abs().max(f64::MIN_POSITIVE);
    Ok(SandwichReport {
        x,
        tau0,
        m_tau0,
        sum_h_pow,
        left,
        middle,
        right,
        left_holds: left <= middle + slack,
        right_holds: middle <= right + slack,
    })
}

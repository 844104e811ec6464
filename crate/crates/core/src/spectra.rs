//! Univariate eigenvalue sequences of the supported covariance kernels.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use statrs::function::gamma;

use crate::error::{domain, Error, Result};
use crate::nystrom::{self, WienerTable};
use crate::summation::NeumaierSum;
use crate::zeta::{hurwitz_zeta, zeta};

/// A series stops once its remainder is below this fraction of the sum.
pub const SERIES_CUTOFF: f64 = 1e-18;
/// Hard stop for slowly decaying analytic Korobov series.
pub const MAX_SERIES_TERMS: usize = 10_000_000;

/// Tail rule of an explicit eigenvalue list.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExplicitTail {
    Zero,
    /// `λ_{n+i} = λ_n ratio^i` for `i >= 1`, `ratio` in `(0, 1)`.
    Geometric {
        ratio: f64,
    },
}

/// One coordinate's kernel and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum KernelFamily {
    /// `λ_j = (π(j - 1/2))^{-(2r+2)}`.
    Euler {
        r: u32,
    },
    /// `r`-fold integrated Wiener process, eigenvalues from quadrature.
    Wiener {
        r: u32,
    },
    /// `λ_1 = 1`, `λ_{2m} = λ_{2m+1} = g m^{-2r}`.
    Korobov {
        r: f64,
        g: f64,
    },
    /// `λ_1 = 1`, `λ_{2m} = λ_{2m+1} = ω^{a m^b}`.
    AnalyticKorobov {
        a: f64,
        b: f64,
        omega: f64,
    },
    Explicit {
        values: Vec<f64>,
        tail: ExplicitTail,
    },
}

impl KernelFamily {
    pub fn validate(&self) -> Result<()> {
        match self {
            KernelFamily::Euler { .. } | KernelFamily::Wiener { .. } => Ok(()),
            &KernelFamily::Korobov { r, g } => {
                if !(r > 0.5 && r.is_finite()) {
                    return domain(format!("korobov smoothness r must exceed 1/2, got {r}"));
                }
                if !(g > 0.0 && g <= 1.0) {
                    return domain(format!("korobov scale g must lie in (0,1], got {g}"));
                }
                Ok(())
            }
            &KernelFamily::AnalyticKorobov { a, b, omega } => {
                if !(a > 0.0 && a.is_finite()) || !(b > 0.0 && b.is_finite()) {
                    return domain(format!("analytic korobov needs a > 0 and b > 0, got a={a}, b={b}"));
                }
                if !(omega > 0.0 && omega < 1.0) {
                    return domain(format!("analytic korobov omega must lie in (0,1), got {omega}"));
                }
                Ok(())
            }
            KernelFamily::Explicit { values, tail } => {
                if values.is_empty() {
                    return domain("explicit spectrum needs at least one value");
                }
                if !(values[0] > 0.0) {
                    return domain("explicit spectrum needs a positive leading value");
                }
                if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return domain("explicit eigenvalues must be finite and non-negative");
                }
                if values.windows(2).any(|w| w[1] > w[0]) {
                    return domain("explicit eigenvalues must be non-increasing");
                }
                if let ExplicitTail::Geometric { ratio } = *tail {
                    if !(ratio > 0.0 && ratio < 1.0) {
                        return domain(format!("geometric tail ratio must lie in (0,1), got {ratio}"));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelFamily::Euler { .. } => "euler",
            KernelFamily::Wiener { .. } => "wiener",
            KernelFamily::Korobov { .. } => "korobov",
            KernelFamily::AnalyticKorobov { .. } => "analytic_korobov",
            KernelFamily::Explicit { .. } => "explicit",
        }
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelFamily::Euler { r } => write!(f, "euler(r={r})"),
            KernelFamily::Wiener { r } => write!(f, "wiener(r={r})"),
            KernelFamily::Korobov { r, g } => write!(f, "korobov(r={r}, g={g})"),
            KernelFamily::AnalyticKorobov { a, b, omega } => {
                write!(f, "analytic_korobov(a={a}, b={b}, omega={omega})")
            }
            KernelFamily::Explicit { values, .. } => write!(f, "explicit({} values)", values.len()),
        }
    }
}

/// Result of a power sum `Σ_j λ_j^x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PowerSum {
    /// `error_bound` is zero for closed forms and carries the tail estimate
    /// for quadrature-backed spectra.
    Converged {
        value: f64,
        error_bound: f64,
    },
    Divergent,
}

impl PowerSum {
    pub fn value(&self) -> Option<f64> {
        match *self {
            PowerSum::Converged { value, .. } => Some(value),
            PowerSum::Divergent => None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, PowerSum::Divergent)
    }

    fn exact(value: f64) -> Self {
        PowerSum::Converged {
            value,
            error_bound: 0.0,
        }
    }
}

pub const WIENER_ORDER: usize = nystrom::DEFAULT_ORDER;
pub const WIENER_COUNT: usize = nystrom::DEFAULT_COUNT;
/// Quadrature values below this fraction of `λ_1` are replaced by the tail law.
pub const WIENER_HEAD_FLOOR: f64 = 1e-10;
/// Quadrature values whose relative error estimate exceeds this are replaced
/// by the tail law.
pub const WIENER_HEAD_ACCURACY: f64 = 1e-8;

/// Materialised head of a Wiener spectrum. Beyond the head the eigenvalues
/// follow `λ_j = λ_J ((J - 1/2) / (j - 1/2))^{2r+2}`, anchored at the last
/// head value `λ_J`.
#[derive(Debug, Clone, PartialEq)]
struct WienerHead {
    table: Arc<WienerTable>,
    len: usize,
}

impl WienerHead {
    fn values(&self) -> &[f64] {
        &self.table.eigenvalues[..self.len]
    }

    fn relative_error(&self, j: usize) -> f64 {
        self.table.error_estimates[j - 1] / self.table.eigenvalues[j - 1]
    }
}

/// A coordinate's eigenvalue sequence, raw or divided by its leading value.
#[derive(Debug, Clone, PartialEq)]
pub struct UnivariateSpectrum {
    family: KernelFamily,
    normalized: bool,
    lambda1: f64,
    wiener: Option<WienerHead>,
}

impl UnivariateSpectrum {
    /// Raw spectrum of `family`. Wiener spectra are resolved by quadrature
    /// of order [`WIENER_ORDER`] with [`WIENER_COUNT`] eigenvalues.
    pub fn new(family: KernelFamily) -> Result<Self> {
        Self::with_wiener_resolution(family, WIENER_ORDER, WIENER_COUNT)
    }

    pub fn with_wiener_resolution(family: KernelFamily, order: usize, count: usize) -> Result<Self> {
        family.validate()?;
        let wiener = match family {
            KernelFamily::Wiener { r } => {
                let table = nystrom::wiener_eigenvalues(r, order, count)?;
                Some(wiener_head(table)?)
            }
            _ => None,
        };
        let mut spec = Self {
            family,
            normalized: false,
            lambda1: 1.0,
            wiener,
        };
        spec.lambda1 = spec.raw_eigenvalue(1);
        Ok(spec)
    }

    pub fn family(&self) -> &KernelFamily {
        &self.family
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Leading raw eigenvalue `λ(k, 1)`.
    pub fn leading_raw(&self) -> f64 {
        self.lambda1
    }

    /// Number of quadrature-resolved eigenvalues for Wiener spectra.
    pub fn truncation(&self) -> Option<usize> {
        self.wiener.as_ref().map(|w| w.len)
    }

    /// Divides every eigenvalue by `λ(k, 1)`.
    pub fn normalize(&self) -> Result<Self> {
        if !(self.lambda1 > 0.0) {
            return Err(Error::DegenerateSpectrum("leading eigenvalue is zero".into()));
        }
        Ok(Self {
            normalized: true,
            ..self.clone()
        })
    }

    fn smoothness_exponent(&self) -> f64 {
        match self.family {
            KernelFamily::Euler { r } | KernelFamily::Wiener { r } => 2.0 * r as f64 + 2.0,
            _ => unreachable!("only Euler and Wiener spectra have a polynomial law"),
        }
    }

    fn raw_eigenvalue(&self, j: usize) -> f64 {
        match &self.family {
            KernelFamily::Euler { .. } => (PI * (j as f64 - 0.5)).powf(-self.smoothness_exponent()),
            KernelFamily::Wiener { .. } => {
                let head = self.wiener.as_ref().expect("wiener head");
                let values = head.values();
                if j <= values.len() {
                    values[j - 1]
                } else {
                    let big_j = values.len() as f64;
                    values[values.len() - 1] * ((big_j - 0.5) / (j as f64 - 0.5)).powf(self.smoothness_exponent())
                }
            }
            &KernelFamily::Korobov { r, g } => {
                if j == 1 {
                    1.0
                } else {
                    g * ((j / 2) as f64).powf(-2.0 * r)
                }
            }
            &KernelFamily::AnalyticKorobov { a, b, omega } => {
                if j == 1 {
                    1.0
                } else {
                    omega.powf(a * ((j / 2) as f64).powf(b))
                }
            }
            KernelFamily::Explicit { values, tail } => {
                if j <= values.len() {
                    values[j - 1]
                } else {
                    match *tail {
                        ExplicitTail::Zero => 0.0,
                        ExplicitTail::Geometric { ratio } => {
                            values[values.len() - 1] * ratio.powi((j - values.len()) as i32)
                        }
                    }
                }
            }
        }
    }

    /// `λ(k, j)` for `j >= 1`, divided by `λ(k, 1)` when normalised.
    ///
    /// # Panics
    /// If `j == 0`.
    pub fn eigenvalue(&self, j: usize) -> f64 {
        assert!(j >= 1, "eigenvalue index starts at 1");
        if !self.normalized {
            return self.raw_eigenvalue(j);
        }
        match self.family {
            // exact closed form keeps λ̃_1 = 1 and avoids a rounding step
            KernelFamily::Euler { .. } => ((2 * j - 1) as f64).powf(-self.smoothness_exponent()),
            _ if j == 1 => 1.0,
            _ => self.raw_eigenvalue(j) / self.lambda1,
        }
    }

    /// `ln λ(k, j)`, computed without forming tiny values where possible.
    pub fn ln_eigenvalue(&self, j: usize) -> f64 {
        assert!(j >= 1, "eigenvalue index starts at 1");
        let shift = if self.normalized { self.lambda1.ln() } else { 0.0 };
        match self.family {
            KernelFamily::Euler { .. } if self.normalized => -self.smoothness_exponent() * ((2 * j - 1) as f64).ln(),
            KernelFamily::Euler { .. } => -self.smoothness_exponent() * (PI * (j as f64 - 0.5)).ln(),
            KernelFamily::Korobov { r, g } => {
                if j == 1 {
                    0.0
                } else {
                    g.ln() - 2.0 * r * ((j / 2) as f64).ln()
                }
            }
            KernelFamily::AnalyticKorobov { a, b, omega } => {
                if j == 1 {
                    0.0
                } else {
                    a * ((j / 2) as f64).powf(b) * omega.ln()
                }
            }
            KernelFamily::Wiener { .. } => {
                let head = self.wiener.as_ref().expect("wiener head");
                let values = head.values();
                let raw = if j <= values.len() {
                    values[j - 1].ln()
                } else {
                    let big_j = values.len() as f64;
                    values[values.len() - 1].ln() + self.smoothness_exponent() * ((big_j - 0.5) / (j as f64 - 0.5)).ln()
                };
                raw - shift
            }
            KernelFamily::Explicit { .. } => {
                if self.normalized && j == 1 {
                    0.0
                } else {
                    self.raw_eigenvalue(j).ln() - shift
                }
            }
        }
    }

    /// `h_k = λ(k, 2) / λ(k, 1)`.
    pub fn second_ratio(&self) -> Result<f64> {
        if !(self.lambda1 > 0.0) {
            return Err(Error::DegenerateSpectrum("leading eigenvalue is zero".into()));
        }
        Ok(match self.family {
            KernelFamily::Euler { .. } => 3f64.powf(-self.smoothness_exponent()),
            KernelFamily::Korobov { g, .. } => g,
            KernelFamily::AnalyticKorobov { a, omega, .. } => omega.powf(a),
            _ => self.raw_eigenvalue(2) / self.lambda1,
        })
    }

    /// Multiplier `c` with `eigenvalue(j) = c · raw(j)`.
    fn scale(&self) -> f64 {
        if self.normalized {
            1.0 / self.lambda1
        } else {
            1.0
        }
    }

    /// `Σ_j λ(k, j)^x` for `x > 0`.
    pub fn power_sum(&self, x: f64) -> Result<PowerSum> {
        if !(x > 0.0 && x.is_finite()) {
            return domain(format!("power sum exponent must be positive, got {x}"));
        }
        let scale_x = self.scale().powf(x);
        let sum = match &self.family {
            KernelFamily::Euler { .. } => {
                let p = self.smoothness_exponent() * x;
                if p <= 1.0 {
                    return Ok(PowerSum::Divergent);
                }
                // Σ (2j-1)^{-p} = (1 - 2^{-p}) ζ(p)
                let odd = (1.0 - 2f64.powf(-p)) * zeta(p)?;
                if self.normalized {
                    PowerSum::exact(odd)
                } else {
                    PowerSum::exact((2.0 / PI).powf(p) * odd)
                }
            }
            &KernelFamily::Korobov { r, g } => {
                let p = 2.0 * r * x;
                if p <= 1.0 {
                    return Ok(PowerSum::Divergent);
                }
                PowerSum::exact(1.0 + 2.0 * g.powf(x) * zeta(p)?)
            }
            &KernelFamily::AnalyticKorobov { a, b, omega } => {
                PowerSum::exact(1.0 + 2.0 * analytic_series(x * a, b, omega, 0.0)?)
            }
            KernelFamily::Explicit { values, tail } => {
                let mut acc: NeumaierSum = values.iter().map(|v| v.powf(x)).collect();
                if let ExplicitTail::Geometric { ratio } = *tail {
                    let q = ratio.powf(x);
                    acc.add(values[values.len() - 1].powf(x) * q / (1.0 - q));
                }
                PowerSum::exact(acc.value() * scale_x)
            }
            KernelFamily::Wiener { .. } => return Ok(self.wiener_sum(x, 1, scale_x)),
        };
        Ok(sum)
    }

    /// Like [`Self::power_sum`] but fails when the reported error bound
    /// exceeds `tolerance` (relative to the sum).
    pub fn power_sum_checked(&self, x: f64, tolerance: f64) -> Result<PowerSum> {
        let sum = self.power_sum(x)?;
        if let PowerSum::Converged { value, error_bound } = sum {
            if error_bound > tolerance * value {
                return Err(Error::Precision {
                    achieved: error_bound / value,
                    requested: tolerance,
                });
            }
        }
        Ok(sum)
    }

    /// `Σ_{j >= from} (c λ_j)^x` for a Wiener spectrum, with the tail
    /// `Σ_{j>J} (j - 1/2)^{-sx} = ζ(sx, J + 1/2)`.
    fn wiener_sum(&self, x: f64, from: usize, scale_x: f64) -> PowerSum {
        let head = self.wiener.as_ref().expect("wiener head");
        let values = head.values();
        let s = self.smoothness_exponent();
        let p = s * x;
        if p <= 1.0 {
            return PowerSum::Divergent;
        }
        let big_j = values.len();
        let mut acc = NeumaierSum::new();
        let mut err = 0.0;
        for j in from..=big_j {
            let term = values[j - 1].powf(x);
            acc.add(term);
            err += x * head.relative_error(j) * term;
        }
        let anchor = values[big_j - 1].powf(x) * (big_j as f64 - 0.5).powf(p);
        let first_tail = from.max(big_j + 1) as f64 - 0.5;
        let tail = anchor * hurwitz_zeta(p, first_tail).expect("p > 1");
        acc.add(tail);
        err += x * head.relative_error(big_j) * tail;
        PowerSum::Converged {
            value: acc.value() * scale_x,
            error_bound: err * scale_x,
        }
    }

    /// `H(k, x) = Σ_{j>=2} (λ(k, j) / λ(k, 2))^x`, always at least 1.
    pub fn tail_function_h(&self, x: f64) -> Result<PowerSum> {
        if !(x > 0.0 && x.is_finite()) {
            return domain(format!("H exponent must be positive, got {x}"));
        }
        let lambda2 = self.raw_eigenvalue(2);
        if !(lambda2 > 0.0) {
            return Err(Error::DegenerateSpectrum(
                "H(k,x) is undefined when the second eigenvalue vanishes".into(),
            ));
        }
        let sum = match &self.family {
            KernelFamily::Euler { .. } => {
                // λ_j / λ_2 = (3 / (2j-1))^s, so H = (3/2)^p ζ(p, 3/2)
                let p = self.smoothness_exponent() * x;
                if p <= 1.0 {
                    return Ok(PowerSum::Divergent);
                }
                PowerSum::exact(1.5f64.powf(p) * hurwitz_zeta(p, 1.5)?)
            }
            &KernelFamily::Korobov { r, .. } => {
                let p = 2.0 * r * x;
                if p <= 1.0 {
                    return Ok(PowerSum::Divergent);
                }
                PowerSum::exact(2.0 * zeta(p)?)
            }
            &KernelFamily::AnalyticKorobov { a, b, omega } => {
                PowerSum::exact(2.0 * analytic_series(x * a, b, omega, 1.0)?)
            }
            KernelFamily::Explicit { values, tail } => {
                let mut acc: NeumaierSum = values[1..].iter().map(|v| (v / lambda2).powf(x)).collect();
                if let ExplicitTail::Geometric { ratio } = *tail {
                    let q = ratio.powf(x);
                    acc.add((values[values.len() - 1] / lambda2).powf(x) * q / (1.0 - q));
                }
                PowerSum::exact(acc.value())
            }
            KernelFamily::Wiener { .. } => self.wiener_sum(x, 2, lambda2.powf(-x)),
        };
        Ok(sum)
    }
}

/// `Σ_{m>=1} ω^{c (m^b - shift)}`.
///
/// Terms are summed directly until either the remainder, bounded by
/// `∫_m^∞ f`, drops below [`SERIES_CUTOFF`] of the sum, or the terms vary
/// slowly enough for an Euler–Maclaurin tail to be accurate to rounding.
fn analytic_series(c: f64, b: f64, omega: f64, shift: f64) -> Result<f64> {
    let f = StretchedExp {
        kappa: -c * omega.ln(),
        b,
        shift,
    };
    let mut acc = NeumaierSum::new();
    for m in 1..=MAX_SERIES_TERMS {
        let x = m as f64;
        let term = f.value(x);
        acc.add(term);
        let sum = acc.value();
        if m >= EM_MIN_START && f.log_slope(x) <= EM_MAX_SLOPE {
            acc.add(f.em_tail(x + 1.0)?);
            return Ok(acc.value());
        }
        let check = m.is_power_of_two() || m % 4096 == 0 || term < SERIES_CUTOFF * sum;
        if check && f.integral_from(x)? <= SERIES_CUTOFF * sum {
            return Ok(sum);
        }
    }
    Err(Error::NumericalFailure(format!(
        "analytic series did not settle within {MAX_SERIES_TERMS} terms"
    )))
}

/// Below this log-derivative, and from [`EM_MIN_START`] on, the first
/// neglected Euler–Maclaurin term is under `1e-15 f(M)`.
const EM_MAX_SLOPE: f64 = 1e-2;
const EM_MIN_START: usize = 100;

/// `f(x) = exp(-κ (x^b - shift))` with `κ, b > 0`.
struct StretchedExp {
    kappa: f64,
    b: f64,
    shift: f64,
}

impl StretchedExp {
    fn value(&self, x: f64) -> f64 {
        (-self.kappa * (x.powf(self.b) - self.shift)).exp()
    }

    /// `|f'(x) / f(x)| = κ b x^{b-1}`.
    fn log_slope(&self, x: f64) -> f64 {
        self.kappa * self.b * x.powf(self.b - 1.0)
    }

    /// `∫_x^∞ f = e^{κ shift} κ^{-1/b} Γ(1/b, κ x^b) / b`.
    fn integral_from(&self, x: f64) -> Result<f64> {
        let s = 1.0 / self.b;
        let q = gamma::gamma_ur(s, self.kappa * x.powf(self.b));
        if q == 0.0 {
            return Ok(0.0);
        }
        let log = self.kappa * self.shift - s * self.kappa.ln() - self.b.ln() + gamma::ln_gamma(s) + q.ln();
        let v = log.exp();
        if !v.is_finite() {
            return Err(Error::NumericalFailure(format!(
                "analytic series tail overflows (κ = {}, b = {})",
                self.kappa, self.b
            )));
        }
        Ok(v)
    }

    /// `Σ_{m>=M} f(m) ≈ ∫_M^∞ f + f(M)/2 - f'(M)/12 + f'''(M)/720`.
    fn em_tail(&self, m: f64) -> Result<f64> {
        let (k, b) = (self.kappa, self.b);
        let h1 = -k * b * m.powf(b - 1.0);
        let h2 = -k * b * (b - 1.0) * m.powf(b - 2.0);
        let h3 = -k * b * (b - 1.0) * (b - 2.0) * m.powf(b - 3.0);
        let f = self.value(m);
        let d1 = h1 * f;
        let d3 = (h3 + 3.0 * h1 * h2 + h1 * h1 * h1) * f;
        Ok(self.integral_from(m)? + 0.5 * f - d1 / 12.0 + d3 / 720.0)
    }
}

fn wiener_head(table: Arc<WienerTable>) -> Result<WienerHead> {
    let values = &table.eigenvalues;
    if values.is_empty() || !(values[0] > 0.0) {
        return Err(Error::NumericalFailure(
            "quadrature returned no positive leading Wiener eigenvalue".into(),
        ));
    }
    let floor = WIENER_HEAD_FLOOR * values[0];
    let mut len = 1;
    while len < values.len() {
        let v = values[len];
        let rel = table.error_estimates[len] / v;
        if !(v >= floor && v <= values[len - 1] && rel <= WIENER_HEAD_ACCURACY) {
            break;
        }
        len += 1;
    }
    Ok(WienerHead { table, len })
}

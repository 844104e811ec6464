//! Tractability verdicts for closed-form sequence rules.
//!
//! Each closed-form parameter law is reduced to an asymptotic shape
//! ([`Growth`]). The quantities entering the conditions, such as
//! `(1+r_k) 3^{-2r_k}` or `g_k ln⁺(1/g_k)`, are then described up to
//! constant factors by a [`Scale`], which decides limits and the
//! boundedness of `Σ_{k<=d} s_k / ln⁺ d` exactly. Floors change a law by at
//! most one, which only moves these quantities by bounded factors.
//!
//! Shapes per law:
//!
//! | law | shape |
//! |-----|-------|
//! | `c`, `c k^0`, `c 1^k` | bounded, limit `c` |
//! | `⌊c k^β⌋`, `c k^β` with `β > 0` | power `k^β` |
//! | `⌊c ln(k+1)⌋`, `c ln(k+1)` | logarithmic `c ln k` |
//! | `c q^k`, `q > 1` | exponential |
//! | `c k^{-γ}` | power decay `k^{-γ}` |
//! | `c q^k`, `q < 1` | geometric decay |
//! | `c / ln(k+2)` | inverse-log decay |
//!
//! Table rules never receive a decisive verdict: a finite table cannot
//! witness a limit, so they report the evidence and its trend instead.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::complexity::ErrorCriterion;
use crate::error::{domain, Error, Result};
use crate::rule::{explicit_h, ParamLaw, SequenceRule};

/// Two limit values closer than this (relative) are treated as equal.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// `ln⁺ x = max(ln x, 1)`.
pub fn ln_plus(x: f64) -> f64 {
    x.ln().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TractabilityNotion {
    Spt,
    Pt,
    Qpt,
    Uwt,
    Wt,
    StWt { s: f64, t: f64 },
}

impl fmt::Display for TractabilityNotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TractabilityNotion::Spt => f.write_str("SPT"),
            TractabilityNotion::Pt => f.write_str("PT"),
            TractabilityNotion::Qpt => f.write_str("QPT"),
            TractabilityNotion::Uwt => f.write_str("UWT"),
            TractabilityNotion::Wt => f.write_str("WT"),
            TractabilityNotion::StWt { s, t } => write!(f, "({s},{t})-WT"),
        }
    }
}

impl Serialize for TractabilityNotion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for TractabilityNotion {
    type Err = Error;

    /// Parses `spt`, `pt`, `qpt`, `uwt` or `wt`. `(s,t)`-WT needs its
    /// parameters and is built directly.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "spt" => TractabilityNotion::Spt,
            "pt" => TractabilityNotion::Pt,
            "qpt" => TractabilityNotion::Qpt,
            "uwt" => TractabilityNotion::Uwt,
            "wt" => TractabilityNotion::Wt,
            _ => return Err(Error::Config(vec![format!("unknown notion `{s}`")])),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Holds,
    Fails,
    Inconclusive,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Holds => "holds",
            Decision::Fails => "fails",
            Decision::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Constant,
    Mixed,
}

/// Shape of the last quarter of an evidence sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Trend {
    pub last_quartile: Monotonicity,
    pub last_value: f64,
    /// Last value over the value at the start of the last quarter.
    pub quartile_ratio: f64,
}

impl Trend {
    pub fn of(evidence: &[(usize, f64)]) -> Option<Self> {
        let (_, last_value) = *evidence.last()?;
        let tail = &evidence[evidence.len() * 3 / 4..];
        let up = tail.windows(2).all(|w| w[1].1 >= w[0].1);
        let down = tail.windows(2).all(|w| w[1].1 <= w[0].1);
        let last_quartile = match (up, down) {
            (true, true) => Monotonicity::Constant,
            (true, false) => Monotonicity::Increasing,
            (false, true) => Monotonicity::Decreasing,
            (false, false) => Monotonicity::Mixed,
        };
        Some(Trend {
            last_quartile,
            last_value,
            quartile_ratio: last_value / tail[0].1,
        })
    }
}

fn serialize_extended<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(&format!("{v}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TractabilityVerdict {
    pub notion: TractabilityNotion,
    pub criterion: ErrorCriterion,
    /// The condition that was evaluated.
    pub criterion_used: String,
    pub decision: Decision,
    /// `(k, c_k)` samples of the sequence behind the condition.
    pub evidence: Vec<(usize, f64)>,
    #[serde(serialize_with = "serialize_extended")]
    pub limit_estimate: f64,
    pub trend: Option<Trend>,
}

/// Asymptotic shape of a closed-form parameter law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Growth {
    Bounded {
        limit: f64,
    },
    /// `c ln k + O(1)`, `c > 0`.
    Log {
        c: f64,
    },
    /// `≍ k^β`, `β > 0`.
    Power {
        beta: f64,
    },
    /// Faster than any power.
    Exponential,
    /// `≍ k^{-γ}`, `γ > 0`.
    PowerDecay {
        gamma: f64,
    },
    /// `≍ q^k`, `q < 1`.
    GeometricDecay,
    /// `≍ 1 / ln k`.
    InvLogDecay,
}

impl Growth {
    /// `None` for tables.
    pub fn of(law: &ParamLaw) -> Option<Self> {
        let bounded = |limit: f64| Growth::Bounded { limit };
        Some(match *law {
            ParamLaw::Table(_) => return None,
            ParamLaw::Const(c) => bounded(c),
            ParamLaw::FloorPow { c, beta } if beta > 0.0 && c > 0.0 => Growth::Power { beta },
            ParamLaw::FloorLog { c } | ParamLaw::Log { c } if c > 0.0 => Growth::Log { c },
            ParamLaw::Pow { c, exponent } if c > 0.0 && exponent > 0.0 => Growth::Power { beta: exponent },
            ParamLaw::Pow { c, exponent } if c > 0.0 && exponent < 0.0 => Growth::PowerDecay { gamma: -exponent },
            ParamLaw::Geometric { c, q } if c > 0.0 && q > 1.0 => Growth::Exponential,
            ParamLaw::Geometric { c, q } if c > 0.0 && q < 1.0 => Growth::GeometricDecay,
            ParamLaw::InvLog { c } if c > 0.0 => Growth::InvLogDecay,
            _ => bounded(law.limit()),
        })
    }

    fn tends_to_infinity(&self) -> bool {
        matches!(self, Growth::Log { .. } | Growth::Power { .. } | Growth::Exponential)
    }

    fn tends_to_zero(&self) -> bool {
        match *self {
            Growth::Bounded { limit } => limit == 0.0,
            Growth::PowerDecay { .. } | Growth::GeometricDecay | Growth::InvLogDecay => true,
            _ => false,
        }
    }
}

/// A positive sequence up to constant factors:
/// `s_k ≍ E_k k^p (ln k)^q (ln ln k)^u`, where `E_k` is `1` (`exp = 0`),
/// grows faster than any power (`exp = 1`) or decays faster than any power
/// (`exp = -1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scale {
    pub exp: i8,
    pub p: f64,
    pub q: f64,
    pub u: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    Zero,
    Positive,
    Infinite,
}

impl Scale {
    pub const ONE: Scale = Scale {
        exp: 0,
        p: 0.0,
        q: 0.0,
        u: 0.0,
    };

    pub fn new(p: f64, q: f64, u: f64) -> Self {
        Scale { exp: 0, p, q, u }
    }

    pub fn decaying() -> Self {
        Scale { exp: -1, ..Scale::ONE }
    }

    /// Multiplies by `k^e`.
    pub fn times_power(self, e: f64) -> Self {
        Scale { p: self.p + e, ..self }
    }

    fn lexicographic_sign(&self) -> f64 {
        if self.exp != 0 {
            return self.exp as f64;
        }
        for v in [self.p, self.q, self.u] {
            if v.abs() > BOUNDARY_TOLERANCE {
                return v.signum();
            }
        }
        0.0
    }

    pub fn limit(&self) -> Limit {
        let s = self.lexicographic_sign();
        if s < 0.0 {
            Limit::Zero
        } else if s > 0.0 {
            Limit::Infinite
        } else {
            Limit::Positive
        }
    }

    /// Whether `sup_d Σ_{k<=d} s_k / ln⁺ d` is finite.
    pub fn log_normalized_sums_bounded(&self) -> bool {
        if self.exp != 0 {
            return self.exp < 0;
        }
        let shifted = Scale {
            p: self.p + 1.0,
            ..*self
        };
        // Σ k^p (ln k)^q (ln ln k)^u: converges when the shifted sequence
        // tends to zero, and for p = -1 grows like (ln d)^{q+1} (ln ln d)^u
        match shifted.limit() {
            Limit::Zero => true,
            Limit::Infinite => false,
            Limit::Positive => true,
        }
    }
}

/// Per-family quantities entering the tractability conditions.
struct FamilyConditions {
    /// Threshold `θ` in `liminf ψ_k / ln k > θ` (SPT) and `>= θ` (UWT).
    threshold: f64,
    /// Text of the liminf quantity.
    liminf_text: &'static str,
    /// Text of the QPT summand.
    qpt_text: &'static str,
    /// Text of the WT condition.
    wt_text: &'static str,
    /// Text of the `(s,t)` summand without the `k^{1-t}` factor.
    st_text: &'static str,
}

fn conditions(rule: &SequenceRule) -> FamilyConditions {
    match rule {
        SequenceRule::Euler { .. } => FamilyConditions {
            threshold: 1.0 / (2.0 * 3f64.ln()),
            liminf_text: "liminf r_k / ln k",
            qpt_text: "(1+r_k) 3^{-2r_k}",
            wt_text: "lim r_k = inf",
            st_text: "3^{-2r_k} (1+r_k)",
        },
        SequenceRule::Wiener { .. } => FamilyConditions {
            threshold: 0.5,
            liminf_text: "liminf ln r_k / ln k",
            qpt_text: "(1+r_k)^{-2} ln+ r_k",
            wt_text: "lim r_k = inf",
            st_text: "(1+r_k)^{-2} ln+(1+r_k)",
        },
        SequenceRule::Korobov { .. } => FamilyConditions {
            threshold: 1.0,
            liminf_text: "liminf ln(1/g_k) / ln k",
            qpt_text: "g_k ln+(1/g_k)",
            wt_text: "lim g_k = 0",
            st_text: "g_k ln+(1/g_k)",
        },
        SequenceRule::AnalyticKorobov { omega, .. } => FamilyConditions {
            threshold: 1.0 / (1.0 / omega).ln(),
            liminf_text: "liminf a_k / ln k",
            qpt_text: "a_k omega^{a_k}",
            wt_text: "lim a_k = inf",
            st_text: "a_k omega^{a_k}",
        },
        SequenceRule::Explicit { .. } => FamilyConditions {
            threshold: f64::NAN,
            liminf_text: "h = lambda_2 / lambda_1",
            qpt_text: "h ln+(1/h)",
            wt_text: "lim h = 0",
            st_text: "h ln+(1/h)",
        },
    }
}

/// The governing law of a rule (`r`, `g` or `a`).
fn governing_law(rule: &SequenceRule) -> Option<&ParamLaw> {
    match rule {
        SequenceRule::Euler { r } | SequenceRule::Wiener { r } => Some(r),
        SequenceRule::Korobov { g, .. } => Some(g),
        SequenceRule::AnalyticKorobov { a, .. } => Some(a),
        SequenceRule::Explicit { .. } => None,
    }
}

fn param(rule: &SequenceRule, k: usize) -> f64 {
    governing_law(rule).and_then(|l| l.value(k)).unwrap_or(f64::NAN)
}

fn explicit_ratio(rule: &SequenceRule) -> Option<f64> {
    match rule {
        SequenceRule::Explicit { values, tail } => Some(explicit_h(values, *tail)),
        _ => None,
    }
}

/// `f ln⁺(1/f)`, zero at `f = 0`.
fn f_log_term(f: f64) -> f64 {
    if f == 0.0 {
        0.0
    } else {
        f * ln_plus(1.0 / f)
    }
}

/// Summand of the `(s,t)` condition at `k`, without `k^{1-t}`.
fn st_term(rule: &SequenceRule, k: usize) -> f64 {
    let v = param(rule, k);
    match rule {
        SequenceRule::Euler { .. } => 3f64.powf(-2.0 * v) * (1.0 + v),
        SequenceRule::Wiener { .. } => (1.0 + v).powi(-2) * ln_plus(1.0 + v),
        SequenceRule::Korobov { .. } => f_log_term(v),
        SequenceRule::AnalyticKorobov { omega, .. } => v * omega.powf(v),
        SequenceRule::Explicit { .. } => f_log_term(explicit_ratio(rule).unwrap_or(0.0)),
    }
}

/// Summand of the QPT condition at `k`.
fn qpt_term(rule: &SequenceRule, k: usize) -> f64 {
    match rule {
        SequenceRule::Wiener { .. } => {
            let r = param(rule, k);
            (1.0 + r).powi(-2) * ln_plus(r)
        }
        _ => st_term(rule, k),
    }
}

/// `ψ_k / ln k` with the family's `ψ`.
fn liminf_term(rule: &SequenceRule, k: usize) -> f64 {
    let v = param(rule, k);
    let lk = (k as f64).ln();
    match rule {
        SequenceRule::Euler { .. } | SequenceRule::AnalyticKorobov { .. } => v / lk,
        SequenceRule::Wiener { .. } => v.ln() / lk,
        SequenceRule::Korobov { .. } => (1.0 / v).ln() / lk,
        SequenceRule::Explicit { .. } => explicit_ratio(rule).unwrap_or(0.0),
    }
}

/// Asymptotic scale of the `(s,t)` summand (which also governs QPT).
fn summand_scale(rule: &SequenceRule, growth: Growth) -> Scale {
    match (rule, growth) {
        (_, Growth::Bounded { .. }) => Scale::ONE,
        (SequenceRule::Euler { .. }, Growth::Log { c }) => Scale::new(-2.0 * c * 3f64.ln(), 1.0, 0.0),
        (SequenceRule::Euler { .. }, _) => Scale::decaying(),
        (SequenceRule::Wiener { .. }, Growth::Log { .. }) => Scale::new(0.0, -2.0, 1.0),
        (SequenceRule::Wiener { .. }, Growth::Power { beta }) => Scale::new(-2.0 * beta, 1.0, 0.0),
        (SequenceRule::Wiener { .. }, _) => Scale::decaying(),
        (SequenceRule::Korobov { .. }, Growth::PowerDecay { gamma }) => Scale::new(-gamma, 1.0, 0.0),
        (SequenceRule::Korobov { .. }, Growth::InvLogDecay) => Scale::new(0.0, -1.0, 1.0),
        (SequenceRule::Korobov { .. }, _) => Scale::decaying(),
        (SequenceRule::AnalyticKorobov { omega, .. }, Growth::Log { c }) => {
            Scale::new(-c * (1.0 / omega).ln(), 1.0, 0.0)
        }
        (SequenceRule::AnalyticKorobov { .. }, _) => Scale::decaying(),
        (SequenceRule::Explicit { .. }, _) => Scale::ONE,
    }
}

/// Exact value of `liminf ψ_k / ln k`.
fn liminf_value(rule: &SequenceRule, growth: Growth) -> f64 {
    match (rule, growth) {
        (SequenceRule::Wiener { .. }, Growth::Bounded { limit }) if limit < 1.0 => f64::NEG_INFINITY,
        (_, Growth::Bounded { .. }) => 0.0,
        (SequenceRule::Wiener { .. }, Growth::Log { .. }) => 0.0,
        (SequenceRule::Wiener { .. }, Growth::Power { beta }) => beta,
        (_, Growth::Log { c }) => c,
        (SequenceRule::Korobov { .. }, Growth::PowerDecay { gamma }) => gamma,
        (SequenceRule::Korobov { .. }, Growth::InvLogDecay) => 0.0,
        _ => f64::INFINITY,
    }
}

fn wt_holds(rule: &SequenceRule, growth: Growth) -> bool {
    match rule {
        SequenceRule::Korobov { .. } => growth.tends_to_zero(),
        _ => growth.tends_to_infinity(),
    }
}

fn approx_eq(a: f64, b: f64) -> bool {
    a.is_finite() && b.is_finite() && (a - b).abs() <= BOUNDARY_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

fn check_horizon(k_max: usize) -> Result<()> {
    if k_max == 0 {
        return domain("K must be positive");
    }
    Ok(())
}

/// `c_k = k^{1-t} f_k ln⁺(1/f_k)` for `k = 1..=K`, with the family's `f_k`.
pub fn criterion_sequence(rule: &SequenceRule, t: f64, k_max: usize) -> Result<Vec<(usize, f64)>> {
    rule.validate()?;
    check_horizon(k_max)?;
    if !(t > 0.0 && t.is_finite()) {
        return domain(format!("t must be positive, got {t}"));
    }
    let upto = rule.max_dim().map_or(k_max, |m| m.min(k_max));
    (1..=upto)
        .map(|k| Ok((k, (k as f64).powf(1.0 - t) * f_log_term(rule.f_value(k)?))))
        .collect()
}

fn horizon(rule: &SequenceRule, k_max: usize) -> usize {
    rule.max_dim().map_or(k_max, |m| m.min(k_max))
}

struct Assessment {
    decision: Decision,
    limit: f64,
}

/// `(s,t)`-WT under NOR.
///
/// `t > 1` always holds and `t = 1` is WT. For `t` in `(0, 1)` the condition
/// is `k^{1-t} s_k → 0` with the family's summand: `3^{-2r_k}(1+r_k)`
/// (Euler), `(1+r_k)^{-2} ln⁺(1+r_k)` (Wiener), `g_k ln⁺(1/g_k)` (Korobov),
/// `a_k ω^{a_k}` (analytic Korobov).
pub fn st_wt_classify(rule: &SequenceRule, s: f64, t: f64, k_max: usize) -> Result<TractabilityVerdict> {
    classify(rule, TractabilityNotion::StWt { s, t }, ErrorCriterion::Nor, k_max)
}

/// Evaluates the condition for `notion` under `criterion`.
///
/// Euler and Wiener conditions are known for NOR only, and QPT for the
/// Korobov families only under NOR; other combinations are rejected.
pub fn classify(
    rule: &SequenceRule,
    notion: TractabilityNotion,
    criterion: ErrorCriterion,
    k_max: usize,
) -> Result<TractabilityVerdict> {
    rule.validate()?;
    check_horizon(k_max)?;
    if let TractabilityNotion::StWt { s, t } = notion {
        if !(s > 0.0 && t > 0.0 && s.is_finite() && t.is_finite()) {
            return domain(format!("(s,t)-WT needs s > 0 and t > 0, got s={s}, t={t}"));
        }
    }
    check_supported(rule, notion, criterion)?;

    let cond = conditions(rule);
    let n = horizon(rule, k_max);
    let growth = governing_law(rule).and_then(Growth::of);
    let constant_h = explicit_ratio(rule);

    let verdict = |criterion_used: String, evidence: Vec<(usize, f64)>, a: Option<Assessment>| {
        let (decision, limit_estimate, trend) = match a {
            Some(a) => (a.decision, a.limit, None),
            None => (Decision::Inconclusive, f64::NAN, Trend::of(&evidence)),
        };
        TractabilityVerdict {
            notion,
            criterion,
            criterion_used,
            decision,
            evidence,
            limit_estimate,
            trend,
        }
    };
    let decided = |holds: bool, limit: f64| Assessment {
        decision: if holds { Decision::Holds } else { Decision::Fails },
        limit,
    };

    match notion {
        TractabilityNotion::StWt { t, .. } if t > 1.0 => Ok(verdict(
            "(s,t)-WT with t > 1 always holds".into(),
            Vec::new(),
            Some(decided(true, 0.0)),
        )),
        TractabilityNotion::Spt | TractabilityNotion::Pt | TractabilityNotion::Uwt => {
            let strict = notion != TractabilityNotion::Uwt;
            let used = match constant_h {
                Some(_) => format!("{} = 0", cond.liminf_text),
                None => format!(
                    "{} {} {}",
                    cond.liminf_text,
                    if strict { ">" } else { ">=" },
                    cond.threshold
                ),
            };
            let evidence: Vec<(usize, f64)> = if constant_h.is_some() {
                (1..=n).map(|k| (k, liminf_term(rule, k))).collect()
            } else {
                (2..=n).map(|k| (k, liminf_term(rule, k))).collect()
            };
            let assessment = if let Some(h) = constant_h {
                Some(decided(h == 0.0, h))
            } else {
                growth.map(|g| {
                    let value = liminf_value(rule, g);
                    let holds = if approx_eq(value, cond.threshold) {
                        !strict
                    } else {
                        value > cond.threshold
                    };
                    decided(holds, value)
                })
            };
            Ok(verdict(used, evidence, assessment))
        }
        TractabilityNotion::Qpt => {
            let used = format!("sup_d sum_(k<=d) {} / ln+ d < inf", cond.qpt_text);
            let mut acc = 0.0;
            let evidence: Vec<(usize, f64)> = (1..=n)
                .map(|d| {
                    acc += qpt_term(rule, d);
                    (d, acc / ln_plus(d as f64))
                })
                .collect();
            let sup = evidence.iter().map(|e| e.1).fold(0.0, f64::max);
            let assessment = match (constant_h, growth) {
                (Some(h), _) => Some(decided(h == 0.0, if h == 0.0 { 0.0 } else { f64::INFINITY })),
                (None, Some(g)) => {
                    let holds = summand_scale(rule, g).log_normalized_sums_bounded();
                    Some(decided(holds, if holds { sup } else { f64::INFINITY }))
                }
                (None, None) => None,
            };
            Ok(verdict(used, evidence, assessment))
        }
        TractabilityNotion::Wt | TractabilityNotion::StWt { .. } => {
            let st_t = match notion {
                TractabilityNotion::StWt { t, .. } if t < 1.0 => Some(t),
                _ => None,
            };
            match st_t {
                None => {
                    let used = match notion {
                        TractabilityNotion::Wt => cond.wt_text.to_string(),
                        _ => format!("(s,1)-WT iff WT iff {}", cond.wt_text),
                    };
                    let evidence: Vec<(usize, f64)> = (1..=n)
                        .map(|k| (k, constant_h.unwrap_or_else(|| param(rule, k))))
                        .collect();
                    let assessment = match (constant_h, growth) {
                        (Some(h), _) => Some(decided(h == 0.0, h)),
                        (None, Some(g)) => {
                            let limit = match g {
                                Growth::Bounded { limit } => limit,
                                _ if g.tends_to_zero() => 0.0,
                                _ => f64::INFINITY,
                            };
                            Some(decided(wt_holds(rule, g), limit))
                        }
                        (None, None) => None,
                    };
                    Ok(verdict(used, evidence, assessment))
                }
                Some(t) => {
                    let used = format!("lim k^(1-t) {} = 0 with t = {t}", cond.st_text);
                    let evidence: Vec<(usize, f64)> = (1..=n)
                        .map(|k| (k, (k as f64).powf(1.0 - t) * st_term(rule, k)))
                        .collect();
                    let assessment = match (constant_h, growth) {
                        (Some(h), _) => Some(decided(h == 0.0, if h == 0.0 { 0.0 } else { f64::INFINITY })),
                        (None, Some(g)) => {
                            let scale = summand_scale(rule, g).times_power(1.0 - t);
                            Some(match scale.limit() {
                                Limit::Zero => decided(true, 0.0),
                                Limit::Infinite => decided(false, f64::INFINITY),
                                Limit::Positive => decided(false, evidence.last().map_or(f64::NAN, |e| e.1)),
                            })
                        }
                        (None, None) => None,
                    };
                    Ok(verdict(used, evidence, assessment))
                }
            }
        }
    }
}

fn check_supported(rule: &SequenceRule, notion: TractabilityNotion, criterion: ErrorCriterion) -> Result<()> {
    if criterion == ErrorCriterion::Nor {
        return Ok(());
    }
    match rule {
        SequenceRule::Euler { .. } | SequenceRule::Wiener { .. } => Err(Error::Unsupported(format!(
            "{} conditions are known under NOR only",
            rule.name()
        ))),
        SequenceRule::Explicit { .. } => Err(Error::Unsupported(
            "explicit spectra are classified under NOR only".into(),
        )),
        _ if notion == TractabilityNotion::Qpt => Err(Error::Unsupported(format!(
            "QPT under ABS is open for the {} family",
            rule.name()
        ))),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::ExplicitTail;
    use std::f64::consts::LN_2 as LN2;

    fn wiener(beta: f64) -> SequenceRule {
        SequenceRule::wiener(ParamLaw::FloorPow { c: 1.0, beta }).unwrap()
    }

    fn korobov(g: ParamLaw) -> SequenceRule {
        SequenceRule::korobov(ParamLaw::Const(1.0), g).unwrap()
    }

    #[test]
    fn ln_plus_floor() {
        assert_eq!(ln_plus(1.0), 1.0);
        assert_eq!(ln_plus(2.0), 1.0);
        assert!((ln_plus(9.0) - 9f64.ln()).abs() < 1e-16);
    }

    #[test]
    fn criterion_sequence_examples() {
        let euler = SequenceRule::euler(ParamLaw::Const(0.0)).unwrap();
        let seq = criterion_sequence(&euler, 0.5, 4).unwrap();
        for (k, c) in &seq {
            let want = (*k as f64).sqrt() / 9.0 * 9f64.ln();
            assert!((c - want).abs() < 1e-15);
        }
        let geo = korobov(ParamLaw::Geometric { c: 1.0, q: 0.5 });
        let seq = criterion_sequence(&geo, 0.5, 60).unwrap();
        let (k, c) = seq[59];
        let want = (k as f64).sqrt() * 0.5f64.powi(k as i32) * (k as f64 * LN2);
        assert!((c / want - 1.0).abs() < 1e-12);
        let unit = SequenceRule::explicit(vec![1.0, 1.0], ExplicitTail::Zero).unwrap();
        let seq = criterion_sequence(&unit, 0.25, 3).unwrap();
        assert_eq!(seq[2].1, 3f64.powf(0.75));
    }

    #[test]
    fn st_wt_examples() {
        let v = st_wt_classify(&wiener(0.5), 1.0, 0.5, 10_000).unwrap();
        assert_eq!(v.decision, Decision::Holds);
        assert_eq!(v.limit_estimate, 0.0);
        let v = st_wt_classify(&wiener(0.25), 1.0, 0.5, 10_000).unwrap();
        assert_eq!(v.decision, Decision::Fails);
        let v = st_wt_classify(&wiener(0.25), 1.0, 1.5, 10).unwrap();
        assert_eq!(v.decision, Decision::Holds);
        assert!(st_wt_classify(&wiener(0.5), 0.0, 0.5, 10).is_err());
        assert!(st_wt_classify(&wiener(0.5), 1.0, -1.0, 10).is_err());
    }

    #[test]
    fn korobov_examples() {
        let quad = korobov(ParamLaw::Pow { c: 1.0, exponent: -2.0 });
        let v = classify(&quad, TractabilityNotion::Spt, ErrorCriterion::Nor, 1000).unwrap();
        assert_eq!(v.decision, Decision::Holds);
        assert_eq!(v.limit_estimate, 2.0);
        let inv_log = korobov(ParamLaw::InvLog { c: 1.0 });
        let spt = classify(&inv_log, TractabilityNotion::Spt, ErrorCriterion::Nor, 1000).unwrap();
        assert_eq!(spt.decision, Decision::Fails);
        let wt = classify(&inv_log, TractabilityNotion::Wt, ErrorCriterion::Nor, 1000).unwrap();
        assert_eq!(wt.decision, Decision::Holds);
        // the transfer to ABS holds for SPT
        let abs = classify(&quad, TractabilityNotion::Spt, ErrorCriterion::Abs, 100).unwrap();
        assert_eq!(abs.decision, Decision::Holds);
        assert!(matches!(
            classify(&quad, TractabilityNotion::Qpt, ErrorCriterion::Abs, 100),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn euler_examples() {
        let lin = SequenceRule::euler(ParamLaw::FloorPow { c: 1.0, beta: 1.0 }).unwrap();
        let v = classify(&lin, TractabilityNotion::Qpt, ErrorCriterion::Nor, 2000).unwrap();
        assert_eq!(v.decision, Decision::Holds);
        let total: f64 = (1..200).map(|k| (1.0 + k as f64) * 3f64.powi(-2 * k)).sum();
        assert!(v.limit_estimate <= total + 1e-12);
        assert!(matches!(
            classify(&lin, TractabilityNotion::Wt, ErrorCriterion::Abs, 10),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn boundary_cases() {
        // liminf r_k / ln k = 1/(2 ln 3) exactly: UWT holds, PT fails
        let c = 1.0 / (2.0 * 3f64.ln());
        let rule = SequenceRule::euler(ParamLaw::FloorLog { c }).unwrap();
        let pt = classify(&rule, TractabilityNotion::Pt, ErrorCriterion::Nor, 100).unwrap();
        let uwt = classify(&rule, TractabilityNotion::Uwt, ErrorCriterion::Nor, 100).unwrap();
        let qpt = classify(&rule, TractabilityNotion::Qpt, ErrorCriterion::Nor, 100).unwrap();
        assert_eq!(pt.decision, Decision::Fails);
        assert_eq!(qpt.decision, Decision::Fails);
        assert_eq!(uwt.decision, Decision::Holds);
    }

    #[test]
    fn constant_rules_fail() {
        let rule = korobov(ParamLaw::Const(0.3));
        for notion in [
            TractabilityNotion::Spt,
            TractabilityNotion::Qpt,
            TractabilityNotion::Uwt,
            TractabilityNotion::Wt,
            TractabilityNotion::StWt { s: 1.0, t: 0.5 },
            TractabilityNotion::StWt { s: 1.0, t: 1.0 },
        ] {
            let v = classify(&rule, notion, ErrorCriterion::Nor, 100).unwrap();
            assert_eq!(v.decision, Decision::Fails, "{notion}");
        }
    }

    #[test]
    fn explicit_rules() {
        let zero = SequenceRule::explicit(vec![1.0], ExplicitTail::Zero).unwrap();
        let one = SequenceRule::explicit(vec![1.0, 0.5], ExplicitTail::Zero).unwrap();
        for notion in [TractabilityNotion::Spt, TractabilityNotion::Qpt, TractabilityNotion::Wt] {
            assert_eq!(
                classify(&zero, notion, ErrorCriterion::Nor, 10).unwrap().decision,
                Decision::Holds
            );
            assert_eq!(
                classify(&one, notion, ErrorCriterion::Nor, 10).unwrap().decision,
                Decision::Fails
            );
        }
    }

    #[test]
    fn tables_are_inconclusive() {
        let rule = SequenceRule::wiener(ParamLaw::Table((0..100).map(|k| k as f64).collect())).unwrap();
        let v = st_wt_classify(&rule, 1.0, 0.5, 1000).unwrap();
        assert_eq!(v.decision, Decision::Inconclusive);
        assert_eq!(v.evidence.len(), 100);
        let trend = v.trend.unwrap();
        assert_eq!(trend.last_quartile, Monotonicity::Decreasing);
    }

    #[test]
    fn scale_sums() {
        assert!(Scale::new(-1.0, 0.0, 0.0).log_normalized_sums_bounded());
        assert!(!Scale::new(-1.0, 1.0, 0.0).log_normalized_sums_bounded());
        assert!(Scale::new(-1.0, -0.5, 0.0).log_normalized_sums_bounded());
        assert!(!Scale::new(-1.0, 0.0, 1.0).log_normalized_sums_bounded());
        assert!(!Scale::new(-0.9, -5.0, 0.0).log_normalized_sums_bounded());
        assert!(Scale::new(-1.1, 5.0, 0.0).log_normalized_sums_bounded());
        assert!(Scale::decaying().log_normalized_sums_bounded());
    }
}

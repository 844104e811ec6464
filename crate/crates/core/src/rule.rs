//! Per-coordinate parameter laws and the sequence rules built from them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::spectra::{ExplicitTail, KernelFamily};

/// Number of leading coordinates on which formula laws are checked
/// numerically in addition to the structural checks.
const CHECK_DEPTH: usize = 4096;

/// A parameter as a function of the coordinate index `k >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamLaw {
    Const(f64),
    /// Explicit values for `k = 1..=len`.
    Table(Vec<f64>),
    /// `⌊c k^β⌋`.
    FloorPow {
        c: f64,
        beta: f64,
    },
    /// `⌊c ln(k+1)⌋`.
    FloorLog {
        c: f64,
    },
    /// `c k^e`.
    Pow {
        c: f64,
        exponent: f64,
    },
    /// `c q^k`.
    Geometric {
        c: f64,
        q: f64,
    },
    /// `c ln(k+1)`.
    Log {
        c: f64,
    },
    /// `c / ln(k+2)`.
    InvLog {
        c: f64,
    },
}

/// Floors `v`, treating values within rounding of an integer as that integer
/// so that e.g. `16^{1/4}` floors to 2.
fn robust_floor(v: f64) -> f64 {
    let rounded = v.round();
    if (v - rounded).abs() <= 1e-12 * v.abs().max(1.0) {
        rounded
    } else {
        v.floor()
    }
}

impl ParamLaw {
    /// Value at coordinate `k >= 1`; `None` past the end of a table.
    pub fn value(&self, k: usize) -> Option<f64> {
        let kf = k as f64;
        Some(match *self {
            ParamLaw::Const(c) => c,
            ParamLaw::Table(ref t) => return t.get(k.checked_sub(1)?).copied(),
            ParamLaw::FloorPow { c, beta } => robust_floor(c * kf.powf(beta)),
            ParamLaw::FloorLog { c } => robust_floor(c * (kf + 1.0).ln()),
            ParamLaw::Pow { c, exponent } => c * kf.powf(exponent),
            ParamLaw::Geometric { c, q } => c * q.powi(k as i32),
            ParamLaw::Log { c } => c * (kf + 1.0).ln(),
            ParamLaw::InvLog { c } => c / (kf + 2.0).ln(),
        })
    }

    /// Largest dimension the law can serve.
    pub fn max_dim(&self) -> Option<usize> {
        match self {
            ParamLaw::Table(t) => Some(t.len()),
            _ => None,
        }
    }

    pub fn is_table(&self) -> bool {
        matches!(self, ParamLaw::Table(_))
    }

    /// `lim_{k→∞}` of the law; tables report their last entry.
    pub fn limit(&self) -> f64 {
        let signed_inf = |c: f64| {
            if c > 0.0 {
                f64::INFINITY
            } else if c < 0.0 {
                f64::NEG_INFINITY
            } else {
                0.0
            }
        };
        match *self {
            ParamLaw::Const(c) => c,
            ParamLaw::Table(ref t) => t.last().copied().unwrap_or(f64::NAN),
            ParamLaw::FloorPow { c, beta } => {
                if beta > 0.0 {
                    signed_inf(c)
                } else if beta == 0.0 {
                    robust_floor(c)
                } else if c >= 0.0 {
                    0.0
                } else {
                    -1.0
                }
            }
            ParamLaw::FloorLog { c } | ParamLaw::Log { c } => signed_inf(c),
            ParamLaw::Pow { c, exponent } => {
                if exponent > 0.0 {
                    signed_inf(c)
                } else if exponent == 0.0 {
                    c
                } else {
                    0.0
                }
            }
            ParamLaw::Geometric { c, q } => {
                if q > 1.0 {
                    signed_inf(c)
                } else if q == 1.0 {
                    c
                } else {
                    0.0
                }
            }
            ParamLaw::InvLog { .. } => 0.0,
        }
    }

    /// `inf_k` of the law. Formula laws are monotone, so this is the smaller
    /// of the first value and the limit.
    pub fn infimum(&self) -> f64 {
        match self {
            ParamLaw::Table(t) => t.iter().copied().fold(f64::INFINITY, f64::min),
            _ => self.value(1).unwrap_or(f64::NAN).min(self.limit()),
        }
    }

    /// Whether every value is strictly positive.
    fn is_positive(&self) -> bool {
        match *self {
            ParamLaw::Table(ref t) => t.iter().all(|v| *v > 0.0),
            ParamLaw::Const(c) | ParamLaw::Pow { c, .. } | ParamLaw::Log { c } | ParamLaw::InvLog { c } => c > 0.0,
            ParamLaw::Geometric { c, q } => c > 0.0 && q > 0.0,
            ParamLaw::FloorPow { .. } | ParamLaw::FloorLog { .. } => self.infimum() > 0.0,
        }
    }

    fn is_integer_valued(&self) -> bool {
        match self {
            ParamLaw::Const(c) => c.fract() == 0.0,
            ParamLaw::Table(t) => t.iter().all(|v| v.fract() == 0.0),
            ParamLaw::FloorPow { .. } | ParamLaw::FloorLog { .. } => true,
            _ => false,
        }
    }

    fn parameters_finite(&self) -> bool {
        match self {
            ParamLaw::Const(c) | ParamLaw::FloorLog { c } | ParamLaw::Log { c } | ParamLaw::InvLog { c } => {
                c.is_finite()
            }
            ParamLaw::Table(t) => !t.is_empty() && t.iter().all(|v| v.is_finite()),
            ParamLaw::FloorPow { c, beta } => c.is_finite() && beta.is_finite(),
            ParamLaw::Pow { c, exponent } => c.is_finite() && exponent.is_finite(),
            ParamLaw::Geometric { c, q } => c.is_finite() && q.is_finite() && *q > 0.0,
        }
    }

    fn sample(&self) -> Vec<f64> {
        let depth = self.max_dim().unwrap_or(CHECK_DEPTH);
        (1..=depth).map_while(|k| self.value(k)).collect()
    }

    fn check_monotone(&self, name: &str, non_decreasing: bool) -> Result<()> {
        let s = self.sample();
        let bad = s
            .windows(2)
            .position(|w| if non_decreasing { w[1] < w[0] } else { w[1] > w[0] });
        match bad {
            Some(i) => domain(format!(
                "{name}_k = {self} must be {} (violated at k={})",
                if non_decreasing {
                    "non-decreasing"
                } else {
                    "non-increasing"
                },
                i + 2
            )),
            None => Ok(()),
        }
    }
}

fn fmt_num(v: f64) -> String {
    format!("{v:?}")
}

impl fmt::Display for ParamLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamLaw::Const(c) => write!(f, "{}", fmt_num(*c)),
            ParamLaw::Table(t) => {
                let items: Vec<String> = t.iter().map(|v| fmt_num(*v)).collect();
                write!(f, "table({})", items.join(","))
            }
            ParamLaw::FloorPow { c, beta } => write!(f, "floor_pow({},{})", fmt_num(*c), fmt_num(*beta)),
            ParamLaw::FloorLog { c } => write!(f, "floor_log({})", fmt_num(*c)),
            ParamLaw::Pow { c, exponent } => write!(f, "pow({},{})", fmt_num(*c), fmt_num(*exponent)),
            ParamLaw::Geometric { c, q } => write!(f, "geometric({},{})", fmt_num(*c), fmt_num(*q)),
            ParamLaw::Log { c } => write!(f, "log({})", fmt_num(*c)),
            ParamLaw::InvLog { c } => write!(f, "inv_log({})", fmt_num(*c)),
        }
    }
}

impl FromStr for ParamLaw {
    type Err = Error;

    /// Accepts a number or one of `table(v1,v2,..)`, `floor_pow(c,β)`,
    /// `floor_log(c)`, `pow(c,e)`, `geometric(q)`, `geometric(c,q)`,
    /// `log(c)`, `inv_log(c)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(v) = s.parse::<f64>() {
            return Ok(ParamLaw::Const(v));
        }
        let bad = |msg: &str| Error::Config(vec![format!("law `{s}`: {msg}")]);
        let open = s.find('(').ok_or_else(|| bad("expected a number or name(args)"))?;
        let inner = s[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| bad("missing closing parenthesis"))?;
        let name = s[..open].trim();
        let args: Vec<f64> = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|a| a.trim().parse::<f64>().map_err(|_| bad("arguments must be numbers")))
                .collect::<Result<_>>()?
        };
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(bad(&format!("{name} takes {n} argument(s)")))
            }
        };
        Ok(match name {
            "table" => {
                if args.is_empty() {
                    return Err(bad("table needs at least one value"));
                }
                ParamLaw::Table(args)
            }
            "floor_pow" => {
                arity(2)?;
                ParamLaw::FloorPow {
                    c: args[0],
                    beta: args[1],
                }
            }
            "floor_log" => {
                arity(1)?;
                ParamLaw::FloorLog { c: args[0] }
            }
            "pow" => {
                arity(2)?;
                ParamLaw::Pow {
                    c: args[0],
                    exponent: args[1],
                }
            }
            "geometric" => match args.len() {
                1 => ParamLaw::Geometric { c: 1.0, q: args[0] },
                2 => ParamLaw::Geometric { c: args[0], q: args[1] },
                _ => return Err(bad("geometric takes (q) or (c,q)")),
            },
            "log" => {
                arity(1)?;
                ParamLaw::Log { c: args[0] }
            }
            "inv_log" => {
                arity(1)?;
                ParamLaw::InvLog { c: args[0] }
            }
            other => return Err(bad(&format!("unknown law `{other}`"))),
        })
    }
}

impl Serialize for ParamLaw {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ParamLaw::Const(c) => s.serialize_f64(*c),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for ParamLaw {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(ParamLaw::Const(v as f64)),
            Raw::Num(v) => Ok(ParamLaw::Const(v)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Family selector plus the per-coordinate parameter laws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SequenceRule {
    /// Integer smoothness `r_k`, non-decreasing.
    Euler { r: ParamLaw },
    /// Integer smoothness `r_k`, non-decreasing.
    Wiener { r: ParamLaw },
    /// `inf r_k > 1/2`; `g_k` in `(0, 1]`, non-increasing.
    Korobov { r: ParamLaw, g: ParamLaw },
    /// `a_k > 0` non-decreasing, `inf b_k > 0`, `ω` in `(0, 1)`.
    AnalyticKorobov { a: ParamLaw, b: ParamLaw, omega: f64 },
    /// The same explicit spectrum in every coordinate.
    Explicit { values: Vec<f64>, tail: ExplicitTail },
}

impl SequenceRule {
    pub fn euler(r: ParamLaw) -> Result<Self> {
        Self::validated(SequenceRule::Euler { r })
    }

    pub fn wiener(r: ParamLaw) -> Result<Self> {
        Self::validated(SequenceRule::Wiener { r })
    }

    pub fn korobov(r: ParamLaw, g: ParamLaw) -> Result<Self> {
        Self::validated(SequenceRule::Korobov { r, g })
    }

    pub fn analytic_korobov(a: ParamLaw, b: ParamLaw, omega: f64) -> Result<Self> {
        Self::validated(SequenceRule::AnalyticKorobov { a, b, omega })
    }

    pub fn explicit(values: Vec<f64>, tail: ExplicitTail) -> Result<Self> {
        Self::validated(SequenceRule::Explicit { values, tail })
    }

    fn validated(rule: Self) -> Result<Self> {
        rule.validate()?;
        Ok(rule)
    }

    pub fn name(&self) -> &'static str {
        match self {
            SequenceRule::Euler { .. } => "euler",
            SequenceRule::Wiener { .. } => "wiener",
            SequenceRule::Korobov { .. } => "korobov",
            SequenceRule::AnalyticKorobov { .. } => "analytic_korobov",
            SequenceRule::Explicit { .. } => "explicit",
        }
    }

    fn laws(&self) -> Vec<(&'static str, &ParamLaw)> {
        match self {
            SequenceRule::Euler { r } | SequenceRule::Wiener { r } => vec![("r", r)],
            SequenceRule::Korobov { r, g } => vec![("r", r), ("g", g)],
            SequenceRule::AnalyticKorobov { a, b, .. } => vec![("a", a), ("b", b)],
            SequenceRule::Explicit { .. } => Vec::new(),
        }
    }

    /// Checks the monotonicity and range assumptions of the family.
    pub fn validate(&self) -> Result<()> {
        for (name, law) in self.laws() {
            if !law.parameters_finite() {
                return domain(format!("{name}_k = {law} has invalid parameters"));
            }
        }
        match self {
            SequenceRule::Euler { r } | SequenceRule::Wiener { r } => {
                if !r.is_integer_valued() {
                    return domain(format!(
                        "smoothness r_k = {r} must be integer valued (constant, table, floor_pow or floor_log)"
                    ));
                }
                if r.infimum() < 0.0 {
                    return domain(format!("smoothness r_k = {r} must be non-negative"));
                }
                if r.infimum() > u32::MAX as f64 {
                    return domain(format!("smoothness r_k = {r} is too large"));
                }
                r.check_monotone("r", true)
            }
            SequenceRule::Korobov { r, g } => {
                if !(r.infimum() > 0.5) {
                    return domain(format!("korobov smoothness needs inf r_k > 1/2, got r_k = {r}"));
                }
                if matches!(g, ParamLaw::FloorPow { .. } | ParamLaw::FloorLog { .. }) {
                    return domain(format!("korobov scale g_k = {g} cannot be a floor law"));
                }
                let first = g.value(1).unwrap_or(f64::NAN);
                if !(first <= 1.0) || !g.is_positive() {
                    return domain(format!("korobov scale g_k = {g} must lie in (0,1]"));
                }
                g.check_monotone("g", false)
            }
            SequenceRule::AnalyticKorobov { a, b, omega } => {
                if !(*omega > 0.0 && *omega < 1.0) {
                    return domain(format!("omega must lie in (0,1), got {omega}"));
                }
                if !(a.infimum() > 0.0) {
                    return domain(format!("a_k = {a} must be positive"));
                }
                if !(b.infimum() > 0.0) {
                    return domain(format!("b_k = {b} needs a positive infimum"));
                }
                a.check_monotone("a", true)
            }
            SequenceRule::Explicit { values, tail } => KernelFamily::Explicit {
                values: values.clone(),
                tail: *tail,
            }
            .validate(),
        }
    }

    /// Largest dimension the rule can generate (`None` for unbounded).
    pub fn max_dim(&self) -> Option<usize> {
        self.laws().iter().filter_map(|(_, l)| l.max_dim()).min()
    }

    /// The kernel of coordinate `k >= 1`.
    pub fn family_at(&self, k: usize) -> Result<KernelFamily> {
        if k == 0 {
            return domain("coordinates are numbered from 1");
        }
        let get = |name: &str, law: &ParamLaw| {
            law.value(k)
                .ok_or_else(|| Error::ParameterDomain(format!("{name}_k table has no entry for k={k}")))
        };
        let family = match self {
            SequenceRule::Euler { r } => KernelFamily::Euler { r: get("r", r)? as u32 },
            SequenceRule::Wiener { r } => KernelFamily::Wiener { r: get("r", r)? as u32 },
            SequenceRule::Korobov { r, g } => KernelFamily::Korobov {
                r: get("r", r)?,
                g: get("g", g)?,
            },
            SequenceRule::AnalyticKorobov { a, b, omega } => KernelFamily::AnalyticKorobov {
                a: get("a", a)?,
                b: get("b", b)?,
                omega: *omega,
            },
            SequenceRule::Explicit { values, tail } => KernelFamily::Explicit {
                values: values.clone(),
                tail: *tail,
            },
        };
        family.validate()?;
        Ok(family)
    }

    /// The family's comparison value `f_k`: `3^{-(2r+2)}` (Euler),
    /// `(1+r)^{-2}` (Wiener), `g` (Korobov), `ω^a` (analytic Korobov) and
    /// `λ_2/λ_1` for explicit spectra.
    pub fn f_value(&self, k: usize) -> Result<f64> {
        Ok(match self.family_at(k)? {
            KernelFamily::Euler { r } => 3f64.powf(-(2.0 * r as f64 + 2.0)),
            KernelFamily::Wiener { r } => (1.0 + r as f64).powi(-2),
            KernelFamily::Korobov { g, .. } => g,
            KernelFamily::AnalyticKorobov { a, omega, .. } => omega.powf(a),
            KernelFamily::Explicit { values, tail } => explicit_h(&values, tail),
        })
    }
}

pub(crate) fn explicit_h(values: &[f64], tail: ExplicitTail) -> f64 {
    let second = match (values.get(1), tail) {
        (Some(v), _) => *v,
        (None, ExplicitTail::Zero) => 0.0,
        (None, ExplicitTail::Geometric { ratio }) => values[0] * ratio,
    };
    second / values[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn law_values() {
        assert_eq!(ParamLaw::FloorPow { c: 1.0, beta: 0.25 }.value(16), Some(2.0));
        assert_eq!(ParamLaw::FloorPow { c: 1.0, beta: 0.5 }.value(15), Some(3.0));
        assert_eq!(ParamLaw::FloorLog { c: 1.0 }.value(1), Some(0.0));
        assert_eq!(ParamLaw::Geometric { c: 1.0, q: 0.5 }.value(3), Some(0.125));
        assert_eq!(ParamLaw::Table(vec![1.0, 2.0]).value(3), None);
        assert!((ParamLaw::InvLog { c: 1.0 }.value(1).unwrap() - 1.0 / 3f64.ln()).abs() < 1e-16);
    }

    #[test]
    fn law_text_round_trip() {
        for text in [
            "0.5",
            "table(1.0,2.0,3.5)",
            "floor_pow(1.0,0.5)",
            "floor_log(2.0)",
            "pow(1.0,-2.0)",
            "geometric(1.0,0.5)",
            "log(3.0)",
            "inv_log(1.0)",
        ] {
            let law: ParamLaw = text.parse().unwrap();
            assert_eq!(law.to_string(), text);
            assert_eq!(law.to_string().parse::<ParamLaw>().unwrap(), law);
        }
        assert_eq!(
            "geometric(0.5)".parse::<ParamLaw>().unwrap(),
            ParamLaw::Geometric { c: 1.0, q: 0.5 }
        );
        assert!("sqrt(2)".parse::<ParamLaw>().is_err());
        assert!("pow(1)".parse::<ParamLaw>().is_err());
    }

    #[test]
    fn accepts_closed_form_rules() {
        SequenceRule::korobov(ParamLaw::Const(1.0), ParamLaw::Geometric { c: 1.0, q: 0.5 }).unwrap();
        SequenceRule::korobov(ParamLaw::Const(1.0), ParamLaw::Pow { c: 1.0, exponent: -2.0 }).unwrap();
        SequenceRule::korobov(ParamLaw::Const(1.0), ParamLaw::InvLog { c: 1.0 }).unwrap();
        SequenceRule::wiener(ParamLaw::FloorPow { c: 1.0, beta: 0.5 }).unwrap();
        SequenceRule::euler(ParamLaw::FloorLog { c: 0.5 }).unwrap();
        SequenceRule::analytic_korobov(ParamLaw::Pow { c: 1.0, exponent: 1.0 }, ParamLaw::Const(1.0), 0.5).unwrap();
    }

    #[test]
    fn rejects_assumption_violations() {
        // decreasing smoothness
        assert!(SequenceRule::euler(ParamLaw::Table(vec![2.0, 1.0])).is_err());
        // non-integer smoothness
        assert!(SequenceRule::euler(ParamLaw::Const(1.5)).is_err());
        // increasing scale
        assert!(SequenceRule::korobov(ParamLaw::Const(1.0), ParamLaw::Pow { c: 0.5, exponent: 1.0 }).is_err());
        // scale above one
        assert!(SequenceRule::korobov(ParamLaw::Const(1.0), ParamLaw::Const(2.0)).is_err());
        // smoothness too small
        assert!(SequenceRule::korobov(ParamLaw::Const(0.5), ParamLaw::Const(0.5)).is_err());
        assert!(SequenceRule::korobov(ParamLaw::Pow { c: 1.0, exponent: -1.0 }, ParamLaw::Const(0.5)).is_err());
        // decreasing a
        assert!(SequenceRule::analytic_korobov(ParamLaw::Table(vec![2.0, 1.0]), ParamLaw::Const(1.0), 0.5).is_err());
        assert!(SequenceRule::analytic_korobov(ParamLaw::Const(1.0), ParamLaw::Const(1.0), 1.0).is_err());
    }

    #[test]
    fn family_at_and_f_values() {
        let rule = SequenceRule::korobov(ParamLaw::Const(1.0), ParamLaw::Geometric { c: 1.0, q: 0.5 }).unwrap();
        assert_eq!(rule.family_at(2).unwrap(), KernelFamily::Korobov { r: 1.0, g: 0.25 });
        assert_eq!(rule.f_value(3).unwrap(), 0.125);
        let euler = SequenceRule::euler(ParamLaw::Const(0.0)).unwrap();
        assert!((euler.f_value(1).unwrap() - 1.0 / 9.0).abs() < 1e-17);
        let table = SequenceRule::wiener(ParamLaw::Table(vec![1.0, 2.0])).unwrap();
        assert_eq!(table.max_dim(), Some(2));
        assert!(table.family_at(3).is_err());
    }

    #[test]
    fn serde_uses_law_text() {
        let rule = SequenceRule::korobov(ParamLaw::Const(1.0), ParamLaw::Geometric { c: 1.0, q: 0.5 }).unwrap();
        let json = serde_json::to_string(&rule).unwrap();
        assert_eq!(json, r#"{"family":"korobov","r":1.0,"g":"geometric(1.0,0.5)"}"#);
        let back: SequenceRule = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rule);
    }
}

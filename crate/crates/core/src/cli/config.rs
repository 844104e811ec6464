//! Problem configuration: a flat TOML document with a nested `[rule]` table.
//!
//! ```toml
//! family = "korobov"
//! d = [1, 2, 3]
//! criterion = "nor"
//! epsilon = { start = 0.9, stop = 0.1, count = 5, spacing = "log" }
//!
//! [rule]
//! r = 1
//! g = "geometric(0.5)"
//! ```

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::complexity::ErrorCriterion;
use crate::error::{Error, Result};
use crate::product::{Normalization, ProductProblem, DEFAULT_NODE_BUDGET};
use crate::rule::{ParamLaw, SequenceRule};
use crate::spectra::ExplicitTail;

pub const FAMILIES: [&str; 5] = ["euler", "wiener", "korobov", "analytic_korobov", "explicit"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default = "default_spacing")]
    pub spacing: Spacing,
}

fn default_spacing() -> Spacing {
    Spacing::Linear
}

impl Grid {
    /// `count` points from `start` to `stop`, both included.
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    return self.stop;
                }
                let f = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * f,
                    Spacing::Log => self.start * (self.stop / self.start).powf(f),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsilonSpec {
    Value(f64),
    List(Vec<f64>),
    Grid(Grid),
}

impl EpsilonSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            EpsilonSpec::Value(v) => vec![*v],
            EpsilonSpec::List(v) => v.clone(),
            EpsilonSpec::Grid(g) => g.points(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DimSpec {
    Value(usize),
    List(Vec<usize>),
}

impl DimSpec {
    pub fn values(&self) -> Vec<usize> {
        match self {
            DimSpec::Value(v) => vec![*v],
            DimSpec::List(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Parameters of the `[rule]` table. Which keys apply depends on `family`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<ParamLaw>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<ParamLaw>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<ParamLaw>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<ParamLaw>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    /// Geometric tail ratio of an explicit list; absent means a zero tail.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_ratio: Option<f64>,
}

impl RuleParams {
    fn is_empty(&self) -> bool {
        *self == RuleParams::default()
    }

    fn present(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        let mut mark = |set: bool, key| {
            if set {
                keys.push(key)
            }
        };
        mark(self.r.is_some(), "r");
        mark(self.g.is_some(), "g");
        mark(self.a.is_some(), "a");
        mark(self.b.is_some(), "b");
        mark(self.omega.is_some(), "omega");
        mark(self.values.is_some(), "values");
        mark(self.tail_ratio.is_some(), "tail_ratio");
        keys
    }

    /// Builds the rule for `family`, collecting every problem into `errors`.
    fn build(&self, family: &str, errors: &mut Vec<String>) -> Option<SequenceRule> {
        let allowed: &[&str] = match family {
            "euler" | "wiener" => &["r"],
            "korobov" => &["r", "g"],
            "analytic_korobov" => &["a", "b", "omega"],
            "explicit" => &["values", "tail_ratio"],
            _ => return None,
        };
        let before = errors.len();
        for key in self.present() {
            if !allowed.contains(&key) {
                errors.push(format!("rule.{key}: not a parameter of the {family} family"));
            }
        }
        let mut need = |key: &str, set: bool| {
            if !set {
                errors.push(format!("rule.{key}: required for the {family} family"));
            }
        };
        match family {
            "euler" | "wiener" => need("r", self.r.is_some()),
            "korobov" => {
                need("r", self.r.is_some());
                need("g", self.g.is_some());
            }
            "analytic_korobov" => {
                need("a", self.a.is_some());
                need("b", self.b.is_some());
                need("omega", self.omega.is_some());
            }
            _ => need("values", self.values.is_some()),
        }
        if errors.len() > before {
            return None;
        }
        let built = match family {
            "euler" => SequenceRule::euler(self.r.clone()?),
            "wiener" => SequenceRule::wiener(self.r.clone()?),
            "korobov" => SequenceRule::korobov(self.r.clone()?, self.g.clone()?),
            "analytic_korobov" => SequenceRule::analytic_korobov(self.a.clone()?, self.b.clone()?, self.omega?),
            _ => {
                let tail = match self.tail_ratio {
                    Some(ratio) => ExplicitTail::Geometric { ratio },
                    None => ExplicitTail::Zero,
                };
                SequenceRule::explicit(self.values.clone()?, tail)
            }
        };
        match built {
            Ok(rule) => Some(rule),
            Err(e) => {
                errors.push(format!("rule: {e}"));
                None
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

impl OutputSpec {
    fn is_empty(&self) -> bool {
        *self == OutputSpec::default()
    }
}

/// Everything a subcommand may read. Unset keys take subcommand defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    /// Divide every coordinate by its leading eigenvalue.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalized: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<DimSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<EpsilonSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion: Option<ErrorCriterion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notion: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    /// Coordinate horizon `K` of the classifier.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Number of ranked eigenvalues listed by `spectrum`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Quadrature order of `nystrom`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    /// Number of eigenvalues listed by `nystrom`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "RuleParams::is_empty")]
    pub rule: RuleParams,
    #[serde(default, skip_serializing_if = "OutputSpec::is_empty")]
    pub output: OutputSpec,
}

pub const DEFAULT_CAP: usize = DEFAULT_NODE_BUDGET;
pub const DEFAULT_M: usize = 20;
pub const DEFAULT_K: usize = 1000;

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<ProblemConfig> {
    let config: ProblemConfig = toml::from_str(text).map_err(|e| Error::Config(vec![e.message().to_string()]))?;
    config.validate()?;
    Ok(config)
}

impl FromStr for ProblemConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_config(s)
    }
}

impl ProblemConfig {
    /// The document form; `parse_config(&c.emit())` reproduces `c`.
    pub fn emit(&self) -> String {
        toml::to_string(self).expect("configuration serialises")
    }

    /// Reports every invalid field, not only the first.
    pub fn validate(&self) -> Result<()> {
        let mut errors = Vec::new();
        self.check(&mut errors);
        if errors.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errors))
        }
    }

    fn check(&self, errors: &mut Vec<String>) -> Option<SequenceRule> {
        let mut rule = None;
        match self.family.as_deref() {
            Some(f) if FAMILIES.contains(&f) => rule = self.rule.build(f, errors),
            Some(f) => errors.push(format!(
                "family: unknown family `{f}` (expected one of {})",
                FAMILIES.join(", ")
            )),
            None => {}
        }
        if let Some(d) = &self.d {
            let v = d.values();
            if v.is_empty() {
                errors.push("d: grid must not be empty".into());
            }
            if v.contains(&0) {
                errors.push("d: dimensions must be positive".into());
            }
            if let (Some(rule), Some(max)) = (&rule, v.iter().max()) {
                if let Some(limit) = rule.max_dim() {
                    if *max > limit {
                        errors.push(format!(
                            "d: the rule defines only {limit} coordinates, d={max} requested"
                        ));
                    }
                }
            }
        }
        if let Some(eps) = &self.epsilon {
            if let EpsilonSpec::Grid(g) = eps {
                if g.count == 0 {
                    errors.push("epsilon.count: grid must not be empty".into());
                }
                if g.spacing == Spacing::Log && !(g.start > 0.0 && g.stop > 0.0) {
                    errors.push("epsilon: log spacing needs positive endpoints".into());
                }
            }
            let v = eps.values();
            if v.is_empty() && !matches!(eps, EpsilonSpec::Grid(_)) {
                errors.push("epsilon: grid must not be empty".into());
            }
            if v.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
                errors.push("epsilon must lie in (0,1)".into());
            }
        }
        if self.cap == Some(0) {
            errors.push("cap: must be positive".into());
        }
        if let Some(tau) = self.tau {
            if !(tau > 0.0 && tau < 1.0) {
                errors.push(format!("tau: must lie in (0,1), got {tau}"));
            }
        }
        if let Some(x) = self.x {
            if !(x > 0.0 && x.is_finite()) {
                errors.push(format!("x: must be positive, got {x}"));
            }
        }
        if let Some(n) = &self.notion {
            if !is_st_wt(n) {
                if let Err(e) = n.parse::<crate::tractability::TractabilityNotion>() {
                    errors.push(format!("notion: {e}"));
                }
            }
        }
        for (key, v) in [("s", self.s), ("t", self.t)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    errors.push(format!("{key}: must be positive, got {v}"));
                }
            }
        }
        for (key, v) in [
            ("k", self.k),
            ("m", self.m),
            ("order", self.order),
            ("count", self.count),
        ] {
            if v == Some(0) {
                errors.push(format!("{key}: must be positive"));
            }
        }
        rule
    }

    /// The validated sequence rule; `family` is required.
    pub fn sequence_rule(&self) -> Result<SequenceRule> {
        if self.family.is_none() {
            return Err(Error::Config(vec!["family: required by this subcommand".into()]));
        }
        let mut errors = Vec::new();
        match self.check(&mut errors) {
            Some(rule) if errors.is_empty() => Ok(rule),
            _ => Err(Error::Config(errors)),
        }
    }

    pub fn normalization(&self) -> Normalization {
        if self.normalized.unwrap_or(false) {
            Normalization::Normalized
        } else {
            Normalization::Raw
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.d.as_ref().map_or(vec![1], DimSpec::values)
    }

    pub fn epsilons(&self) -> Vec<f64> {
        self.epsilon.as_ref().map_or(vec![0.5], EpsilonSpec::values)
    }

    pub fn criterion(&self) -> ErrorCriterion {
        self.criterion.unwrap_or(ErrorCriterion::Nor)
    }

    pub fn problem(&self, d: usize) -> Result<ProductProblem> {
        ProductProblem::from_rule(&self.sequence_rule()?, d, self.normalization())
    }
}

pub(crate) fn is_st_wt(notion: &str) -> bool {
    matches!(notion.to_ascii_lowercase().as_str(), "st_wt" | "stwt" | "(s,t)-wt")
}

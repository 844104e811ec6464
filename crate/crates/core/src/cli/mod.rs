//! Command-line front end.
//!
//! Every subcommand reads a [`ProblemConfig`], assembled from an optional
//! `--config` file with flags taking precedence, and writes one artifact to
//! `--out` (or stdout). A JSON [`RunReport`] goes to stderr. Failures print
//! `{"error": {"kind": .., "message": ..}}` to stderr and exit with status 2;
//! a `validate` run with a failing check exits with status 1.

pub mod config;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::complexity::{
    info_complexity, lower_bound_nor, trace_lower_bound_nor, upper_bound_abs, ComplexityQuery, ErrorCriterion,
    UpperBound, DEFAULT_TAU, DEFAULT_X,
};
use crate::error::{Error, Result};
use crate::nystrom::{self, KernelKind};
use crate::product::{enumerate_top_with_budget, RankedEigenvalue, DEFAULT_NODE_BUDGET};
use crate::rule::ParamLaw;
use crate::tractability::{classify, TractabilityNotion};
use crate::validation;

pub use config::{parse_config, DimSpec, EpsilonSpec, Format, Grid, ProblemConfig, RuleParams, Spacing};
use output::{fmt_float, Cell, Table};

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "tensortract",
    version,
    about = "Average-case complexity and tractability of tensor product problems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Name {
    Spectrum,
    Complexity,
    Curve,
    Classify,
    Bounds,
    Nystrom,
    Validate,
}

impl Name {
    pub fn as_str(&self) -> &'static str {
        match self {
            Name::Spectrum => "spectrum",
            Name::Complexity => "complexity",
            Name::Curve => "curve",
            Name::Classify => "classify",
            Name::Bounds => "bounds",
            Name::Nystrom => "nystrom",
            Name::Validate => "validate",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Largest products of the d-variate spectrum
    Spectrum(Flags),
    /// Information complexity at one (ε, d)
    Complexity(Flags),
    /// Information complexity over an (ε, d) grid
    Curve(Flags),
    /// Tractability verdict for a sequence rule
    Classify(Flags),
    /// Closed-form complexity bounds over an (ε, d) grid
    Bounds(Flags),
    /// Quadrature eigenvalues of the Brownian or integrated Wiener kernel
    Nystrom(Flags),
    /// Oracle cross-check suites
    Validate(Flags),
}

impl Command {
    pub fn split(self) -> (Name, Flags) {
        match self {
            Command::Spectrum(f) => (Name::Spectrum, f),
            Command::Complexity(f) => (Name::Complexity, f),
            Command::Curve(f) => (Name::Curve, f),
            Command::Classify(f) => (Name::Classify, f),
            Command::Bounds(f) => (Name::Bounds, f),
            Command::Nystrom(f) => (Name::Nystrom, f),
            Command::Validate(f) => (Name::Validate, f),
        }
    }
}

/// Flags shared by all subcommands; each overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TOML configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// euler, wiener, korobov, analytic_korobov or explicit
    #[arg(long)]
    pub family: Option<String>,
    /// Smoothness law r_k, e.g. `1` or `floor_pow(1,0.5)`
    #[arg(long)]
    pub r: Option<String>,
    /// Korobov scale law g_k, e.g. `geometric(0.5)`
    #[arg(long)]
    pub g: Option<String>,
    /// Analytic Korobov law a_k
    #[arg(long)]
    pub a: Option<String>,
    /// Analytic Korobov law b_k
    #[arg(long)]
    pub b: Option<String>,
    /// Analytic Korobov base ω in (0,1)
    #[arg(long)]
    pub omega: Option<f64>,
    /// Explicit eigenvalues, comma separated
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
    /// Geometric tail ratio of an explicit list
    #[arg(long)]
    pub tail_ratio: Option<f64>,
    /// Divide each coordinate by its leading eigenvalue
    #[arg(long, conflicts_with = "raw")]
    pub normalized: bool,
    /// Use the raw eigenvalues
    #[arg(long)]
    pub raw: bool,
    /// Dimension or comma-separated list of dimensions
    #[arg(long, value_delimiter = ',')]
    pub d: Option<Vec<usize>>,
    /// ε value or comma-separated list
    #[arg(long, value_delimiter = ',', conflicts_with = "eps_start")]
    pub epsilon: Option<Vec<f64>>,
    /// First point of an ε grid
    #[arg(long, requires_all = ["eps_stop", "eps_count"])]
    pub eps_start: Option<f64>,
    /// Last point of an ε grid
    #[arg(long)]
    pub eps_stop: Option<f64>,
    /// Number of ε grid points
    #[arg(long)]
    pub eps_count: Option<usize>,
    /// linear or log
    #[arg(long)]
    pub eps_spacing: Option<String>,
    /// abs or nor
    #[arg(long)]
    pub criterion: Option<String>,
    /// Exponent s of (s,t)-weak tractability
    #[arg(long)]
    pub s: Option<f64>,
    /// Exponent t of (s,t)-weak tractability
    #[arg(long)]
    pub t: Option<f64>,
    /// spt, pt, qpt, uwt, wt or st_wt
    #[arg(long)]
    pub notion: Option<String>,
    /// Coordinate horizon K of the classifier
    #[arg(long)]
    pub k: Option<usize>,
    /// Number of ranked eigenvalues for `spectrum`
    #[arg(long)]
    pub m: Option<usize>,
    /// Largest n resolved exactly
    #[arg(long)]
    pub cap: Option<usize>,
    /// Exponent τ of the absolute upper bound
    #[arg(long)]
    pub tau: Option<f64>,
    /// Exponent x of the normalised lower bound
    #[arg(long)]
    pub x: Option<f64>,
    /// Quadrature order for `nystrom`
    #[arg(long)]
    pub order: Option<usize>,
    /// Number of eigenvalues for `nystrom`
    #[arg(long)]
    pub count: Option<usize>,
    /// Output file, written atomically (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Artifact format (default: csv, json for classify)
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for grid sweeps (default: available parallelism)
    #[arg(long)]
    pub jobs: Option<usize>,
}

fn law(key: &str, text: &Option<String>, errors: &mut Vec<String>) -> Option<ParamLaw> {
    let text = text.as_ref()?;
    match text.parse() {
        Ok(l) => Some(l),
        Err(e) => {
            errors.push(format!("--{key}: {e}"));
            None
        }
    }
}

impl Flags {
    /// The config file (if any) with every given flag applied on top.
    pub fn to_config(&self) -> Result<ProblemConfig> {
        let mut c = match &self.config {
            Some(path) => toml::from_str::<ProblemConfig>(&fs::read_to_string(path)?)
                .map_err(|e| Error::Config(vec![format!("{}: {}", path.display(), e.message())]))?,
            None => ProblemConfig::default(),
        };
        let mut errors = Vec::new();
        if self.family.is_some() {
            c.family = self.family.clone();
        }
        if let Some(l) = law("r", &self.r, &mut errors) {
            c.rule.r = Some(l);
        }
        if let Some(l) = law("g", &self.g, &mut errors) {
            c.rule.g = Some(l);
        }
        if let Some(l) = law("a", &self.a, &mut errors) {
            c.rule.a = Some(l);
        }
        if let Some(l) = law("b", &self.b, &mut errors) {
            c.rule.b = Some(l);
        }
        if self.omega.is_some() {
            c.rule.omega = self.omega;
        }
        if self.values.is_some() {
            c.rule.values = self.values.clone();
        }
        if self.tail_ratio.is_some() {
            c.rule.tail_ratio = self.tail_ratio;
        }
        if self.normalized {
            c.normalized = Some(true);
        }
        if self.raw {
            c.normalized = Some(false);
        }
        if let Some(d) = &self.d {
            c.d = Some(if d.len() == 1 {
                DimSpec::Value(d[0])
            } else {
                DimSpec::List(d.clone())
            });
        }
        if let Some(e) = &self.epsilon {
            c.epsilon = Some(if e.len() == 1 {
                EpsilonSpec::Value(e[0])
            } else {
                EpsilonSpec::List(e.clone())
            });
        }
        if let (Some(start), Some(stop), Some(count)) = (self.eps_start, self.eps_stop, self.eps_count) {
            let spacing = match self.eps_spacing.as_deref().map(str::to_ascii_lowercase).as_deref() {
                None | Some("linear") => Spacing::Linear,
                Some("log") => Spacing::Log,
                Some(other) => {
                    errors.push(format!("--eps-spacing: expected linear or log, got `{other}`"));
                    Spacing::Linear
                }
            };
            c.epsilon = Some(EpsilonSpec::Grid(Grid {
                start,
                stop,
                count,
                spacing,
            }));
        }
        if let Some(text) = &self.criterion {
            match text.parse::<ErrorCriterion>() {
                Ok(v) => c.criterion = Some(v),
                Err(e) => errors.push(format!("--criterion: {e}")),
            }
        }
        macro_rules! copy {
            ($($field:ident),*) => {
                $(if self.$field.is_some() {
                    c.$field = self.$field.clone();
                })*
            };
        }
        copy!(s, t, notion, k, m, cap, tau, x, order, count);
        if self.out.is_some() {
            c.output.path = self.out.clone();
        }
        if self.format.is_some() {
            c.output.format = self.format;
        }
        if !errors.is_empty() {
            return Err(Error::Config(errors));
        }
        c.validate()?;
        Ok(c)
    }
}

/// What a run produced, echoed to stderr.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub config: ProblemConfig,
    pub wall_time_s: f64,
    pub warnings: Vec<String>,
    pub rows: usize,
    pub output: Option<PathBuf>,
    pub passed: bool,
}

/// The single artifact of a subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub text: String,
    pub rows: usize,
    pub warnings: Vec<String>,
    /// False when a `validate` check failed.
    pub passed: bool,
}

struct Output {
    table: Table,
    warnings: Vec<String>,
    /// Replaces the table in JSON mode.
    json: Option<Value>,
    passed: bool,
}

impl Output {
    fn table(table: Table, warnings: Vec<String>) -> Self {
        Self {
            table,
            warnings,
            json: None,
            passed: true,
        }
    }
}

fn metadata(name: Name, config: &ProblemConfig, columns: &[&str]) -> Value {
    json!({
        "tool": TOOL,
        "version": VERSION,
        "subcommand": name.as_str(),
        "columns": columns,
        "config": config,
    })
}

/// Runs `name` on `config` and renders its artifact. `jobs` sizes the
/// worker pool of grid sweeps and never changes the output.
pub fn run_subcommand(name: Name, config: &ProblemConfig, jobs: Option<usize>) -> Result<Artifact> {
    config.validate()?;
    let default_format = if name == Name::Classify {
        Format::Json
    } else {
        Format::Csv
    };
    let format = config.output.format.unwrap_or(default_format);
    let out = match name {
        Name::Spectrum => spectrum(config)?,
        Name::Complexity => {
            let (d, eps) = single_point(config)?;
            let mut t = Table::new(&COMPLEXITY_COLUMNS);
            let (row, warning) = complexity_row(config, d, eps)?;
            t.push(row);
            Output::table(t, warning.into_iter().collect())
        }
        Name::Curve => in_pool(jobs, || curve(config))??,
        Name::Classify => classify_cmd(config)?,
        Name::Bounds => in_pool(jobs, || bounds(config))??,
        Name::Nystrom => nystrom_cmd(config)?,
        Name::Validate => validate_cmd()?,
    };
    let text = match (format, &out.json) {
        (Format::Csv, _) => out.table.to_csv(),
        (Format::Json, Some(v)) => {
            let doc = json!({ "metadata": metadata(name, config, &out.table.columns), "verdict": v });
            let mut s = serde_json::to_string_pretty(&doc).expect("json serialises");
            s.push('\n');
            s
        }
        (Format::Json, None) => {
            let mut meta = metadata(name, config, &out.table.columns);
            if !out.table.comments.is_empty() {
                meta["comments"] = json!(out.table.comments);
            }
            out.table.to_json(meta)
        }
    };
    Ok(Artifact {
        text,
        rows: out.table.rows.len(),
        warnings: out.warnings,
        passed: out.passed,
    })
}

fn in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        if n == 0 {
            return Err(Error::Config(vec!["jobs: must be positive".into()]));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::NumericalFailure(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn single_point(config: &ProblemConfig) -> Result<(usize, f64)> {
    match (config.dims().as_slice(), config.epsilons().as_slice()) {
        ([d], [e]) => Ok((*d, *e)),
        _ => Err(Error::Config(vec![
            "complexity takes a single d and epsilon; use `curve` for grids".into(),
        ])),
    }
}

fn index_vector(r: &RankedEigenvalue) -> String {
    r.index.iter().map(u32::to_string).collect::<Vec<_>>().join(";")
}

fn spectrum(config: &ProblemConfig) -> Result<Output> {
    let d = match config.dims().as_slice() {
        [d] => *d,
        _ => return Err(Error::Config(vec!["spectrum takes a single d".into()])),
    };
    let problem = config.problem(d)?;
    let m = config.m.unwrap_or(config::DEFAULT_M);
    let budget = config.cap.unwrap_or(DEFAULT_NODE_BUDGET);
    let mut warnings = Vec::new();
    let ranked = match enumerate_top_with_budget(&problem, m, budget) {
        Ok(r) => r,
        Err(Error::Cap { budget, partial }) => {
            warnings.push(format!(
                "cap: node budget {budget} exhausted after {} values",
                partial.len()
            ));
            partial
        }
        Err(e) => return Err(e),
    };
    if ranked.len() < m && warnings.is_empty() {
        warnings.push(format!("finite spectrum: only {} non-zero products", ranked.len()));
    }
    let mut t = Table::new(&["rank", "log_value", "value", "index_vector"]);
    for r in &ranked {
        t.push(vec![
            r.rank.into(),
            r.log_value.into(),
            r.value().into(),
            index_vector(r).into(),
        ]);
    }
    Ok(Output::table(t, warnings))
}

pub const COMPLEXITY_COLUMNS: [&str; 10] = [
    "d",
    "epsilon",
    "criterion",
    "status",
    "n",
    "tail_at_n",
    "lower_bound",
    "upper_bound",
    "initial_error",
    "warning",
];

/// One complexity row. Divergent traces and unresolvable targets become
/// status rows rather than failures.
fn complexity_row(config: &ProblemConfig, d: usize, epsilon: f64) -> Result<(Vec<Cell>, Option<String>)> {
    let criterion = config.criterion();
    let problem = config.problem(d)?;
    let query = ComplexityQuery::new(epsilon, criterion, config.cap.unwrap_or(config::DEFAULT_CAP))?;
    let lead =
        |status: &str| -> Vec<Cell> { vec![d.into(), epsilon.into(), criterion.to_string().into(), status.into()] };
    let (row, warning) = match info_complexity(&problem, &query) {
        Ok(r) => {
            let warning = if r.resolution_warning {
                Some("resolution_floor".to_string())
            } else if r.status == crate::complexity::ComplexityStatus::ExceedsCap {
                Some("cap".to_string())
            } else {
                None
            };
            let mut row = lead(&r.status.to_string());
            row.extend([
                r.n.into(),
                r.tail_at_n.into(),
                r.certified_lower.into(),
                r.certified_upper.into(),
                r.initial_error.into(),
                warning.clone().map_or(Cell::Empty, Cell::from),
            ]);
            (row, warning)
        }
        Err(Error::Divergent { coordinate }) => {
            let w = format!("divergent at coordinate {coordinate}");
            let mut row = lead("divergent");
            row.extend([
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                w.clone().into(),
            ]);
            (row, Some(w))
        }
        Err(Error::Resolution { target, floor }) => {
            let w = format!(
                "target {} below resolution floor {}",
                fmt_float(target),
                fmt_float(floor)
            );
            let mut row = lead("unresolvable");
            row.extend([
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                w.clone().into(),
            ]);
            (row, Some(w))
        }
        Err(e) => return Err(e),
    };
    let warning = warning.map(|w| format!("d={d} epsilon={}: {w}", fmt_float(epsilon)));
    Ok((row, warning))
}

fn grid(config: &ProblemConfig) -> Vec<(usize, f64)> {
    let eps = config.epsilons();
    config
        .dims()
        .into_iter()
        .flat_map(|d| eps.iter().map(move |e| (d, *e)))
        .collect()
}

fn gather(rows: Vec<Result<(Vec<Cell>, Option<String>)>>, columns: &[&'static str]) -> Result<Output> {
    let mut t = Table::new(columns);
    let mut warnings = Vec::new();
    for r in rows {
        let (row, w) = r?;
        t.push(row);
        warnings.extend(w);
    }
    Ok(Output::table(t, warnings))
}

fn curve(config: &ProblemConfig) -> Result<Output> {
    // indexed parallel collect keeps the (d, ε) grid order
    let rows: Vec<_> = grid(config)
        .into_par_iter()
        .map(|(d, e)| complexity_row(config, d, e))
        .collect();
    gather(rows, &COMPLEXITY_COLUMNS)
}

pub const BOUNDS_COLUMNS: [&str; 9] = [
    "d",
    "epsilon",
    "x",
    "tau",
    "lower_bound_nor",
    "trace_lower_bound_nor",
    "upper_bound_abs",
    "initial_error",
    "warning",
];

fn bounds_row(config: &ProblemConfig, d: usize, epsilon: f64) -> Result<(Vec<Cell>, Option<String>)> {
    let x = config.x.unwrap_or(DEFAULT_X);
    let tau = config.tau.unwrap_or(DEFAULT_TAU);
    let problem = config.problem(d)?;
    let normalized = problem.normalized()?;
    let lower = lower_bound_nor(&normalized, epsilon, x)?;
    let (trace_lower, initial, mut warning) = match trace_lower_bound_nor(&normalized, epsilon) {
        Ok(v) => (Some(v), Some(crate::complexity::initial_error(&problem)?), None),
        Err(Error::Divergent { coordinate }) => {
            (None, None, Some(format!("trace diverges at coordinate {coordinate}")))
        }
        Err(e) => return Err(e),
    };
    let upper = match upper_bound_abs(&problem, epsilon, tau)? {
        UpperBound::Value(v) => Some(v),
        UpperBound::Divergent { coordinate } => {
            warning.get_or_insert(format!("power sum at 1-tau diverges at coordinate {coordinate}"));
            None
        }
    };
    let row = vec![
        d.into(),
        epsilon.into(),
        x.into(),
        tau.into(),
        lower.into(),
        trace_lower.into(),
        upper.into(),
        initial.into(),
        warning.clone().map_or(Cell::Empty, Cell::from),
    ];
    Ok((
        row,
        warning.map(|w| format!("d={d} epsilon={}: {w}", fmt_float(epsilon))),
    ))
}

fn bounds(config: &ProblemConfig) -> Result<Output> {
    let rows: Vec<_> = grid(config)
        .into_par_iter()
        .map(|(d, e)| bounds_row(config, d, e))
        .collect();
    gather(rows, &BOUNDS_COLUMNS)
}

fn notion(config: &ProblemConfig) -> Result<TractabilityNotion> {
    let st = || match (config.s, config.t) {
        (Some(s), Some(t)) => Ok(TractabilityNotion::StWt { s, t }),
        _ => Err(Error::Config(vec!["notion: (s,t)-WT needs both s and t".into()])),
    };
    match config.notion.as_deref() {
        Some(n) if config::is_st_wt(n) => st(),
        Some(n) => n.parse(),
        None if config.s.is_some() || config.t.is_some() => st(),
        None => Err(Error::Config(vec!["notion: required (or give s and t)".into()])),
    }
}

fn classify_cmd(config: &ProblemConfig) -> Result<Output> {
    let rule = config.sequence_rule()?;
    let verdict = classify(
        &rule,
        notion(config)?,
        config.criterion(),
        config.k.unwrap_or(config::DEFAULT_K),
    )?;
    let mut t = Table::new(&["k", "c_k"]);
    for (k, c) in &verdict.evidence {
        t.push(vec![(*k).into(), (*c).into()]);
    }
    let json = serde_json::to_value(&verdict).expect("verdict serialises");
    Ok(Output {
        table: t,
        warnings: Vec::new(),
        json: Some(json),
        passed: true,
    })
}

fn nystrom_cmd(config: &ProblemConfig) -> Result<Output> {
    let r = match &config.rule.r {
        None => 0,
        Some(ParamLaw::Const(v)) if *v >= 0.0 && v.fract() == 0.0 => *v as u32,
        Some(other) => {
            return Err(Error::Config(vec![format!(
                "rule.r: nystrom needs a constant non-negative integer, got {other}"
            )]))
        }
    };
    let kind = KernelKind::wiener(r);
    let order = config.order.unwrap_or(nystrom::DEFAULT_ORDER);
    let count = config.count.unwrap_or(nystrom::DEFAULT_COUNT.min(order / 2).max(1));
    let report = nystrom::nystrom_eigenvalues(kind, order, count)?;
    let kind_name = match kind {
        KernelKind::Brownian => "brownian",
        KernelKind::IntegratedWiener { .. } => "integrated_wiener",
    };
    let mut t = Table::new(&["j", "eigenvalue", "asymptotic_reference", "relative_deviation"]);
    t.comments.push(format!("kind={kind_name},r={r},order={order}"));
    for (j, ((l, a), dev)) in report
        .eigenvalues
        .iter()
        .zip(&report.reference_law)
        .zip(&report.deviations)
        .enumerate()
    {
        t.push(vec![(j + 1).into(), (*l).into(), (*a).into(), (*dev).into()]);
    }
    Ok(Output::table(t, Vec::new()))
}

fn validate_cmd() -> Result<Output> {
    let checks = validation::run_suite()?;
    let mut t = Table::new(&["check", "passed", "detail"]);
    let mut warnings = Vec::new();
    for c in &checks {
        if !c.passed {
            warnings.push(format!("{} failed: {}", c.name, c.detail));
        }
        t.push(vec![c.name.clone().into(), c.passed.into(), c.detail.clone().into()]);
    }
    let passed = warnings.is_empty();
    Ok(Output {
        table: t,
        warnings,
        json: None,
        passed,
    })
}

/// Resolves the flags, runs the subcommand and writes its artifact.
pub fn execute(name: Name, flags: &Flags) -> Result<RunReport> {
    let start = Instant::now();
    let config = flags.to_config()?;
    let artifact = run_subcommand(name, &config, flags.jobs)?;
    let path = config.output.path.clone();
    match &path {
        Some(p) => write_atomic(p, &artifact.text)?,
        None => print!("{}", artifact.text),
    }
    Ok(RunReport {
        tool: TOOL,
        version: VERSION,
        subcommand: name.as_str(),
        config,
        wall_time_s: start.elapsed().as_secs_f64(),
        warnings: artifact.warnings,
        rows: artifact.rows,
        output: path,
        passed: artifact.passed,
    })
}

fn write_atomic(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Machine-readable error payload.
pub fn error_payload(e: &Error) -> Value {
    let mut err = json!({ "kind": e.kind(), "message": e.to_string() });
    if let Error::Config(list) = e {
        err["errors"] = json!(list);
    }
    json!({ "error": err })
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, flags) = cli.command.split();
    match execute(name, &flags) {
        Ok(report) => {
            eprintln!("{}", serde_json::to_string(&report).expect("report serialises"));
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", error_payload(&e));
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(args: &[&str]) -> (Name, Flags) {
        let mut argv = vec!["tensortract"];
        argv.extend_from_slice(args);
        Cli::try_parse_from(argv).unwrap().command.split()
    }

    fn run(args: &[&str]) -> Artifact {
        let (name, f) = flags(args);
        run_subcommand(name, &f.to_config().unwrap(), f.jobs).unwrap()
    }

    #[test]
    fn complexity_row_for_korobov() {
        let a = run(&[
            "complexity",
            "--family",
            "korobov",
            "--r",
            "1",
            "--g",
            "0.5",
            "--epsilon",
            "0.5",
        ]);
        let line = a.text.lines().nth(1).unwrap();
        assert!(line.starts_with("1,0.5,NOR,exact,3,"), "{line}");
    }

    #[test]
    fn curve_is_monotone_and_sorted() {
        let a = run(&[
            "curve",
            "--family",
            "korobov",
            "--r",
            "1",
            "--g",
            "0.5",
            "--d",
            "1,2,3",
            "--epsilon",
            "0.9,0.5,0.25",
            "--jobs",
            "3",
        ]);
        let rows: Vec<Vec<&str>> = a.text.lines().skip(1).map(|l| l.split(',').collect()).collect();
        assert_eq!(rows.len(), 9);
        for chunk in rows.chunks(3) {
            let n: Vec<usize> = chunk.iter().map(|r| r[4].parse().unwrap()).collect();
            assert!(n.windows(2).all(|w| w[0] <= w[1]), "{n:?}");
        }
        let b = run(&[
            "curve",
            "--family",
            "korobov",
            "--r",
            "1",
            "--g",
            "0.5",
            "--d",
            "1,2,3",
            "--epsilon",
            "0.9,0.5,0.25",
            "--jobs",
            "1",
        ]);
        assert_eq!(a.text, b.text);
    }

    #[test]
    fn divergence_is_a_status_row() {
        let a = run(&[
            "complexity",
            "--family",
            "korobov",
            "--r",
            "1",
            "--g",
            "0.5",
            "--epsilon",
            "0.5",
            "--d",
            "1",
        ]);
        assert!(a.warnings.is_empty());
        let a = run(&[
            "bounds", "--family", "korobov", "--r", "0.6", "--g", "0.5", "--tau", "0.5",
        ]);
        assert!(a.text.contains("diverges"), "{}", a.text);
    }

    #[test]
    fn classify_emits_json_or_evidence() {
        let a = run(&[
            "classify",
            "--family",
            "korobov",
            "--r",
            "1",
            "--g",
            "pow(1,-2)",
            "--notion",
            "spt",
            "--k",
            "32",
        ]);
        let v: Value = serde_json::from_str(&a.text).unwrap();
        assert_eq!(v["verdict"]["decision"], "holds");
        let b = run(&[
            "classify",
            "--family",
            "korobov",
            "--r",
            "1",
            "--g",
            "pow(1,-2)",
            "--notion",
            "spt",
            "--k",
            "32",
            "--format",
            "csv",
        ]);
        assert!(b.text.starts_with("k,c_k\n"));
    }

    #[test]
    fn nystrom_has_header_comment() {
        let a = run(&["nystrom", "--r", "1", "--order", "32", "--count", "4"]);
        assert!(a
            .text
            .starts_with("# kind=integrated_wiener,r=1,order=32\nj,eigenvalue,"));
        assert_eq!(a.rows, 4);
    }

    #[test]
    fn bad_flags_collect_errors() {
        let (name, f) = flags(&[
            "complexity",
            "--family",
            "korobov",
            "--r",
            "1",
            "--epsilon",
            "1.5",
            "--tau",
            "2",
        ]);
        match f.to_config() {
            Err(Error::Config(list)) => assert!(list.len() >= 3, "{list:?}"),
            other => panic!("{other:?} for {name:?}"),
        }
    }

    #[test]
    fn error_payload_shape() {
        let v = error_payload(&Error::Config(vec!["epsilon must lie in (0,1)".into()]));
        assert_eq!(v["error"]["kind"], "config");
        assert_eq!(v["error"]["errors"][0], "epsilon must lie in (0,1)");
    }
}

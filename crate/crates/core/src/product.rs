//! Tensor-product spectra: best-first enumeration of the non-increasing
//! rearrangement of `Π_k λ(k, j_k)`, head sums and product power sums.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rule::SequenceRule;
use crate::spectra::{PowerSum, UnivariateSpectrum};
use crate::summation::NeumaierSum;

/// Default bound on live heap nodes during enumeration.
pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Raw,
    /// Every coordinate divided by its leading eigenvalue.
    Normalized,
}

/// A `d`-variate problem: one spectrum per coordinate.
#[derive(Debug, Clone)]
pub struct ProductProblem {
    spectra: Vec<UnivariateSpectrum>,
    normalization: Normalization,
}

impl ProductProblem {
    /// Builds coordinates `1..=d` of `rule`.
    pub fn from_rule(rule: &SequenceRule, d: usize, normalization: Normalization) -> Result<Self> {
        rule.validate()?;
        if d == 0 {
            return domain("dimension d must be positive");
        }
        if let Some(max) = rule.max_dim() {
            if d > max {
                return domain(format!("rule tables cover only {max} coordinates, d = {d}"));
            }
        }
        let spectra = (1..=d)
            .map(|k| UnivariateSpectrum::new(rule.family_at(k)?))
            .collect::<Result<Vec<_>>>()?;
        Self::from_spectra(spectra, normalization)
    }

    pub fn from_spectra(spectra: Vec<UnivariateSpectrum>, normalization: Normalization) -> Result<Self> {
        if spectra.is_empty() {
            return domain("dimension d must be positive");
        }
        let spectra = spectra
            .into_iter()
            .map(|s| match normalization {
                Normalization::Raw => Ok(s),
                Normalization::Normalized if s.is_normalized() => Ok(s),
                Normalization::Normalized => s.normalize(),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { spectra, normalization })
    }

    pub fn dim(&self) -> usize {
        self.spectra.len()
    }

    pub fn spectra(&self) -> &[UnivariateSpectrum] {
        &self.spectra
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// `h_k = λ(k, 2) / λ(k, 1)` for every coordinate.
    pub fn second_ratios(&self) -> Result<Vec<f64>> {
        self.spectra.iter().map(|s| s.second_ratio()).collect()
    }

    /// The same problem with every coordinate normalised.
    pub fn normalized(&self) -> Result<Self> {
        Self::from_spectra(self.spectra.clone(), Normalization::Normalized)
    }

    pub fn enumerator(&self) -> Enumerator<'_> {
        Enumerator::new(self, DEFAULT_NODE_BUDGET)
    }
}

/// One entry of the rearranged product spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedEigenvalue {
    /// 1-based position in the rearrangement.
    pub rank: usize,
    pub log_value: f64,
    /// 1-based index per coordinate.
    pub index: Vec<u32>,
}

impl RankedEigenvalue {
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }
}

#[derive(Debug)]
struct Node {
    log_value: f64,
    index: Box<[u32]>,
    /// Last coordinate raised above 1 (0 for the root).
    pivot: usize,
}

/// Colexicographic order: compare from the last coordinate backwards.
fn colex(a: &[u32], b: &[u32]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        // larger values first; among ties the colex-smaller index first
        self.log_value
            .total_cmp(&other.log_value)
            .then_with(|| colex(&other.index, &self.index))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

/// Best-first enumerator of the product spectrum.
///
/// A max-heap is seeded with `(1, …, 1)`. Popping `j` pushes `j + e_i` only
/// for coordinates `i` at or after the last coordinate of `j` exceeding 1, so
/// every index vector has exactly one parent and no visited set is needed.
/// Values are handled as logarithms, summed in coordinate order. Products
/// containing a zero eigenvalue are never produced. Ties are broken
/// colexicographically.
///
/// The iterator stops early when the heap would outgrow the node budget;
/// [`Enumerator::budget_exhausted`] tells the two endings apart.
#[derive(Debug)]
pub struct Enumerator<'a> {
    problem: &'a ProductProblem,
    heap: BinaryHeap<Node>,
    ln_cache: Vec<Vec<f64>>,
    rank: usize,
    budget: usize,
    exhausted: bool,
}

impl<'a> Enumerator<'a> {
    pub fn new(problem: &'a ProductProblem, budget: usize) -> Self {
        let d = problem.dim();
        let mut e = Self {
            problem,
            heap: BinaryHeap::new(),
            ln_cache: vec![Vec::new(); d],
            rank: 0,
            budget: budget.max(1),
            exhausted: false,
        };
        let root = vec![1u32; d].into_boxed_slice();
        let log_value = e.log_value(&root);
        if log_value > f64::NEG_INFINITY {
            e.heap.push(Node {
                log_value,
                index: root,
                pivot: 0,
            });
        }
        e
    }

    pub fn budget_exhausted(&self) -> bool {
        self.exhausted
    }

    /// Live heap nodes.
    pub fn frontier(&self) -> usize {
        self.heap.len()
    }

    fn ln(&mut self, k: usize, j: u32) -> f64 {
        let cache = &mut self.ln_cache[k];
        let spec = &self.problem.spectra[k];
        while cache.len() < j as usize {
            cache.push(spec.ln_eigenvalue(cache.len() + 1));
        }
        cache[j as usize - 1]
    }

    fn log_value(&mut self, index: &[u32]) -> f64 {
        let mut s = 0.0;
        for (k, &j) in index.iter().enumerate() {
            s += self.ln(k, j);
        }
        s
    }
}

impl Iterator for Enumerator<'_> {
    type Item = RankedEigenvalue;

    fn next(&mut self) -> Option<RankedEigenvalue> {
        if self.exhausted {
            return None;
        }
        let node = self.heap.pop()?;
        let d = node.index.len();
        if self.heap.len() + (d - node.pivot) > self.budget {
            self.exhausted = true;
            self.heap.push(node);
            return None;
        }
        for i in node.pivot..d {
            let mut child = node.index.clone();
            child[i] += 1;
            if self.ln(i, child[i]) == f64::NEG_INFINITY {
                continue;
            }
            let log_value = self.log_value(&child);
            self.heap.push(Node {
                log_value,
                index: child,
                pivot: i,
            });
        }
        self.rank += 1;
        Some(RankedEigenvalue {
            rank: self.rank,
            log_value: node.log_value,
            index: node.index.into_vec(),
        })
    }
}

/// The `m` largest products in non-increasing order. Finite spectra may
/// yield fewer when only that many products are non-zero.
pub fn enumerate_top(problem: &ProductProblem, m: usize) -> Result<Vec<RankedEigenvalue>> {
    enumerate_top_with_budget(problem, m, DEFAULT_NODE_BUDGET)
}

pub fn enumerate_top_with_budget(problem: &ProductProblem, m: usize, budget: usize) -> Result<Vec<RankedEigenvalue>> {
    if m == 0 {
        return domain("m must be positive");
    }
    let mut e = Enumerator::new(problem, budget);
    let out: Vec<RankedEigenvalue> = e.by_ref().take(m).collect();
    if out.len() < m && e.budget_exhausted() {
        return Err(Error::Cap { budget, partial: out });
    }
    Ok(out)
}

/// `Σ_{j<=n} λ_{d,j}` with compensated summation.
pub fn head_sum(problem: &ProductProblem, n: usize) -> Result<f64> {
    let mut e = problem.enumerator();
    let acc: NeumaierSum = e.by_ref().take(n).map(|r| r.value()).collect();
    if e.budget_exhausted() {
        return Err(Error::Cap {
            budget: DEFAULT_NODE_BUDGET,
            partial: Vec::new(),
        });
    }
    Ok(acc.value())
}

/// `Σ_j λ_{d,j}^x = Π_k Σ_j λ(k, j)^x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TracePower {
    /// `relative_error` bounds the accumulated error of quadrature-backed
    /// coordinates (zero for closed forms).
    Converged {
        value: f64,
        log_value: f64,
        relative_error: f64,
    },
    /// 1-based coordinate whose series diverges.
    Divergent { coordinate: usize },
}

impl TracePower {
    pub fn value(&self) -> Option<f64> {
        match *self {
            TracePower::Converged { value, .. } => Some(value),
            TracePower::Divergent { .. } => None,
        }
    }

    pub fn log_value(&self) -> Option<f64> {
        match *self {
            TracePower::Converged { log_value, .. } => Some(log_value),
            TracePower::Divergent { .. } => None,
        }
    }

    /// Converts divergence into [`Error::Divergent`].
    pub fn require(self) -> Result<(f64, f64)> {
        match self {
            TracePower::Converged { value, log_value, .. } => Ok((value, log_value)),
            TracePower::Divergent { coordinate } => Err(Error::Divergent { coordinate }),
        }
    }
}

pub fn product_trace_power(problem: &ProductProblem, x: f64) -> Result<TracePower> {
    let mut log_value = NeumaierSum::new();
    let mut relative_error = 0.0;
    for (k, spec) in problem.spectra.iter().enumerate() {
        match spec.power_sum(x)? {
            PowerSum::Divergent => return Ok(TracePower::Divergent { coordinate: k + 1 }),
            PowerSum::Converged { value, error_bound } => {
                log_value.add(value.ln());
                relative_error += error_bound / value;
            }
        }
    }
    let log_value = log_value.value();
    Ok(TracePower::Converged {
        value: log_value.exp(),
        log_value,
        relative_error,
    })
}

//! Empirical check of the three structural conditions on a sequence rule.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::rule::SequenceRule;
use crate::spectra::{PowerSum, UnivariateSpectrum};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionVerdict {
    pub holds: bool,
    pub detail: String,
}

impl ConditionVerdict {
    fn new(holds: bool, detail: impl Into<String>) -> Self {
        Self {
            holds,
            detail: detail.into(),
        }
    }
}

/// Conditions (1)-(3) evaluated on the raw spectra of coordinates `1..=K`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyPReport {
    pub family: &'static str,
    pub k_max: usize,
    /// `λ(k, 1) = 1` for every checked `k`.
    pub lambda1_is_one: bool,
    /// `h_k = λ(k, 2) / λ(k, 1)`.
    pub h_sequence: Vec<f64>,
    pub f_sequence: Vec<f64>,
    /// `max(1, max_k h_k / f_k)`.
    pub a1: f64,
    /// `min(1, min_k h_k / f_k)`.
    pub a2: f64,
    pub tau0: f64,
    /// `max_k H(k, τ0)`; `None` when some `H(k, τ0)` diverges.
    pub m_tau0: Option<f64>,
    pub condition1: ConditionVerdict,
    pub condition2: ConditionVerdict,
    pub condition3: ConditionVerdict,
}

impl PropertyPReport {
    pub fn holds(&self) -> bool {
        self.condition1.holds && self.condition2.holds && self.condition3.holds
    }
}

pub fn property_p_report(rule: &SequenceRule, tau0: f64, k_max: usize) -> Result<PropertyPReport> {
    if !(tau0 > 0.0 && tau0 < 1.0) {
        return domain(format!("tau0 must lie in (0,1), got {tau0}"));
    }
    if k_max < 2 {
        return domain(format!("K must be at least 2, got {k_max}"));
    }
    if let Some(max) = rule.max_dim() {
        if k_max > max {
            return domain(format!("the rule defines only {max} coordinates, K={k_max} requested"));
        }
    }

    let mut lambda1_is_one = true;
    let mut first_bad_lambda1 = None;
    let mut h_sequence = Vec::with_capacity(k_max);
    let mut f_sequence = Vec::with_capacity(k_max);
    let mut m_tau0: Option<f64> = Some(1.0);
    let mut divergent_at = None;
    let mut degenerate_at = None;
    for k in 1..=k_max {
        let spec = UnivariateSpectrum::new(rule.family_at(k)?)?;
        let lambda1 = spec.eigenvalue(1);
        if lambda1 != 1.0 {
            lambda1_is_one = false;
            first_bad_lambda1.get_or_insert((k, lambda1));
        }
        h_sequence.push(spec.second_ratio()?);
        f_sequence.push(rule.f_value(k)?);
        if spec.eigenvalue(2) == 0.0 {
            degenerate_at.get_or_insert(k);
            continue;
        }
        match spec.tail_function_h(tau0)? {
            PowerSum::Converged { value, .. } => {
                m_tau0 = m_tau0.map(|m| m.max(value));
            }
            PowerSum::Divergent => {
                m_tau0 = None;
                divergent_at.get_or_insert(k);
            }
        }
    }

    let condition1 = match first_bad_lambda1 {
        None => ConditionVerdict::new(true, format!("λ(k,1) = 1 for k ≤ {k_max}")),
        Some((k, v)) => ConditionVerdict::new(false, format!("λ({k},1) = {v:?} ≠ 1")),
    };

    let ratios: Vec<f64> = h_sequence.iter().zip(&f_sequence).map(|(h, f)| h / f).collect();
    let max_ratio = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let a1 = max_ratio.max(1.0);
    let a2 = min_ratio.min(1.0);
    let f_positive = f_sequence.iter().all(|f| *f > 0.0);
    let f_monotone = f_sequence.windows(2).all(|w| w[1] <= w[0]);
    let h_in_range = h_sequence.iter().all(|h| *h > 0.0 && *h <= 1.0);
    let condition2 = if !f_positive {
        ConditionVerdict::new(false, "f_k is not positive")
    } else if !f_monotone {
        ConditionVerdict::new(false, "f_k is not non-increasing")
    } else if !h_in_range {
        ConditionVerdict::new(false, "some h_k lies outside (0,1]")
    } else if !(a1.is_finite() && a2 > 0.0) {
        ConditionVerdict::new(false, format!("h_k/f_k ranges over [{min_ratio:?}, {max_ratio:?}]"))
    } else {
        ConditionVerdict::new(true, format!("{a2:?} f_k ≤ h_k ≤ {a1:?} f_k for k ≤ {k_max}"))
    };

    let condition3 = if let Some(k) = degenerate_at {
        m_tau0 = None;
        ConditionVerdict::new(false, format!("λ({k},2) = 0, H(k,x) is undefined"))
    } else if let Some(k) = divergent_at {
        ConditionVerdict::new(false, format!("H({k},{tau0:?}) diverges"))
    } else {
        let m = m_tau0.unwrap_or(f64::NAN);
        ConditionVerdict::new(true, format!("max_k H(k,{tau0:?}) = {m:?} for k ≤ {k_max}"))
    };

    Ok(PropertyPReport {
        family: rule.name(),
        k_max,
        lambda1_is_one,
        h_sequence,
        f_sequence,
        a1,
        a2,
        tau0,
        m_tau0,
        condition1,
        condition2,
        condition3,
    })
}

//! Average-case information complexity of tensor-product problems.
//!
//! The crate computes the eigenvalue sequences of the Euler, Wiener,
//! Korobov and analytic Korobov covariance kernels, enumerates the
//! rearranged product spectrum of `d`-variate problems, evaluates the
//! information complexity `n(ε, d)` under the absolute and normalised error
//! criteria with certified bounds, and classifies tractability of
//! parameter sequences.
//!
//! ```
//! use tensortract::{info_complexity, ComplexityQuery, ErrorCriterion, Normalization,
//!     ParamLaw, ProductProblem, SequenceRule};
//!
//! let rule = SequenceRule::korobov(ParamLaw::Const(1.0), ParamLaw::Const(0.5))?;
//! let problem = ProductProblem::from_rule(&rule, 1, Normalization::Raw)?;
//! let query = ComplexityQuery::new(0.5, ErrorCriterion::Nor, 1_000_000)?;
//! assert_eq!(info_complexity(&problem, &query)?.n, 3);
//! # Ok::<(), tensortract::Error>(())
//! ```

// `!(x > 0.0)` is the NaN-rejecting form used throughout for input checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod complexity;
pub mod error;
pub mod nystrom;
pub mod product;
pub mod property;
pub mod rule;
pub mod spectra;
pub mod summation;
pub mod tractability;
pub mod validation;
pub mod zeta;

pub use complexity::{
    info_complexity, initial_error, lower_bound_nor, minimal_error, sandwich_check, trace_lower_bound_nor,
    upper_bound_abs, ComplexityQuery, ComplexityResult, ComplexityStatus, ErrorCriterion, MinimalError, SandwichReport,
    UpperBound,
};
pub use error::{Error, Result};
pub use nystrom::{cross_validate, kernel_eval, nystrom_eigenvalues, KernelKind, NystromReport};
pub use product::{
    enumerate_top, head_sum, product_trace_power, Enumerator, Normalization, ProductProblem, RankedEigenvalue,
    TracePower,
};
pub use property::{property_p_report, PropertyPReport};
pub use rule::{ParamLaw, SequenceRule};
pub use spectra::{ExplicitTail, KernelFamily, PowerSum, UnivariateSpectrum};
pub use tractability::{
    classify, criterion_sequence, st_wt_classify, Decision, TractabilityNotion, TractabilityVerdict,
};

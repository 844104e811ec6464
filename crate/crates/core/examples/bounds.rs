//! Exact complexity next to the closed-form lower and upper bounds.

use tensortract::{
    info_complexity, lower_bound_nor, sandwich_check, trace_lower_bound_nor, upper_bound_abs, ComplexityQuery,
    ErrorCriterion, Normalization, ParamLaw, ProductProblem, SequenceRule,
};

fn main() -> tensortract::Result<()> {
    let rule = SequenceRule::korobov(ParamLaw::Const(1.0), "geometric(0.5)".parse()?)?;
    let eps = 0.25;
    for d in [1, 3, 6] {
        let p = ProductProblem::from_rule(&rule, d, Normalization::Normalized)?;
        let n = |c| info_complexity(&p, &ComplexityQuery::new(eps, c, 10_000_000)?).map(|r| r.n);
        let lower = trace_lower_bound_nor(&p, eps)?.max(lower_bound_nor(&p, eps, 1.0)?);
        println!(
            "d={d}: {lower:.2} <= n_nor={} <= n_abs={} <= {:.1}",
            n(ErrorCriterion::Nor)?,
            n(ErrorCriterion::Abs)?,
            upper_bound_abs(&p, eps, 0.25)?.value().unwrap_or(f64::INFINITY),
        );
    }

    let p = ProductProblem::from_rule(&rule, 32, Normalization::Normalized)?;
    let s = sandwich_check(&p, 1.0, 0.8)?;
    println!("d=32: {:.4} <= ln trace {:.4} <= {:.4}", s.left, s.middle, s.right);
    Ok(())
}

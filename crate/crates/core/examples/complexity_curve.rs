//! Information complexity as a function of ε and d, for both error criteria.

use tensortract::{
    info_complexity, ComplexityQuery, ComplexityStatus, ErrorCriterion, Normalization, ParamLaw, ProductProblem,
    SequenceRule,
};

fn main() -> tensortract::Result<()> {
    let rule = SequenceRule::analytic_korobov("pow(1,1)".parse()?, ParamLaw::Const(1.0), 0.5)?;
    println!("d   eps    n_abs    n_nor");
    for d in [1, 2, 4, 8] {
        let problem = ProductProblem::from_rule(&rule, d, Normalization::Normalized)?;
        for eps in [0.5, 0.25, 0.1] {
            let mut row = Vec::new();
            for criterion in [ErrorCriterion::Abs, ErrorCriterion::Nor] {
                let r = info_complexity(&problem, &ComplexityQuery::new(eps, criterion, 1_000_000)?)?;
                row.push(match r.status {
                    ComplexityStatus::Exact => r.n.to_string(),
                    _ => format!(">{}", r.certified_lower),
                });
            }
            println!("{d:<3} {eps:<6} {:<8} {}", row[0], row[1]);
        }
    }
    Ok(())
}

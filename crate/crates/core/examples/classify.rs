//! Tractability verdicts for a few weight sequences across the standard notions.

use tensortract::{classify, st_wt_classify, ErrorCriterion, ParamLaw, SequenceRule, TractabilityNotion};

fn main() -> tensortract::Result<()> {
    let rules = [
        (
            "g_k = k^-2",
            SequenceRule::korobov(ParamLaw::Const(1.0), "pow(1,-2)".parse()?)?,
        ),
        (
            "g_k = 1/ln(k+2)",
            SequenceRule::korobov(ParamLaw::Const(1.0), "inv_log(1)".parse()?)?,
        ),
        ("r_k = floor(ln k)", SequenceRule::euler("floor_log(1)".parse()?)?),
    ];
    let notions = [
        TractabilityNotion::Spt,
        TractabilityNotion::Pt,
        TractabilityNotion::Qpt,
        TractabilityNotion::Uwt,
        TractabilityNotion::Wt,
    ];
    for (name, rule) in &rules {
        let verdicts: Vec<String> = notions
            .iter()
            .map(|n| classify(rule, *n, ErrorCriterion::Nor, 1024).map(|v| format!("{n}={}", v.decision)))
            .collect::<tensortract::Result<_>>()?;
        println!("{name:<18} {}", verdicts.join(" "));
    }

    let wiener = SequenceRule::wiener("floor_pow(1,0.5)".parse()?)?;
    let v = st_wt_classify(&wiener, 1.0, 0.5, 1 << 16)?;
    println!(
        "wiener r_k = floor(sqrt k), (1,0.5)-WT: {} via {}",
        v.decision, v.criterion_used
    );
    Ok(())
}

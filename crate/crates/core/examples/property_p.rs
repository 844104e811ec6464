//! Whether a weight sequence satisfies the regularity conditions used by the
//! sandwich bounds, with the constants it produces.

use tensortract::{property_p_report, ParamLaw, SequenceRule};

fn main() -> tensortract::Result<()> {
    let rules = [
        (
            "korobov geometric",
            SequenceRule::korobov(ParamLaw::Const(1.0), "geometric(0.5)".parse()?)?,
        ),
        (
            "analytic a=k",
            SequenceRule::analytic_korobov("pow(1,1)".parse()?, ParamLaw::Const(1.0), 0.5)?,
        ),
        ("euler r=1", SequenceRule::euler(ParamLaw::Const(1.0))?),
    ];
    for (name, rule) in rules {
        let p = property_p_report(&rule, 0.8, 32)?;
        println!("{name}: holds={} A1={} A2={} M={:?}", p.holds(), p.a1, p.a2, p.m_tau0);
        for c in [&p.condition1, &p.condition2, &p.condition3] {
            println!("    {} {}", if c.holds { "ok  " } else { "fail" }, c.detail);
        }
    }
    Ok(())
}

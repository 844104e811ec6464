//! Leading eigenvalues of a three-variate Korobov problem with geometric weights.

use tensortract::{
    enumerate_top, head_sum, product_trace_power, Normalization, ParamLaw, ProductProblem, SequenceRule,
};

fn main() -> tensortract::Result<()> {
    let rule = SequenceRule::korobov(ParamLaw::Const(1.0), "geometric(0.5)".parse()?)?;
    let problem = ProductProblem::from_rule(&rule, 3, Normalization::Normalized)?;

    println!("rank  value         index");
    for e in enumerate_top(&problem, 12)? {
        println!("{:>4}  {:<12.6e}  {:?}", e.rank, e.value(), e.index);
    }
    let trace = product_trace_power(&problem, 1.0)?.value().expect("finite trace");
    let head = head_sum(&problem, 12)?;
    println!("trace {trace:.6}, first 12 carry {:.2}%", 100.0 * head / trace);
    Ok(())
}

//! Quadrature eigenvalues of the Brownian and integrated Wiener kernels
//! against their large-index law.

use tensortract::{cross_validate, nystrom_eigenvalues, KernelKind};

fn main() -> tensortract::Result<()> {
    for kind in [KernelKind::Brownian, KernelKind::IntegratedWiener { r: 1 }] {
        let rep = nystrom_eigenvalues(kind, 256, 8)?;
        println!(
            "{kind:?}: trace {:.12} (sum {:.12})",
            rep.trace_quadrature, rep.eigenvalue_sum
        );
        for j in 0..8 {
            println!(
                "  {:>2} {:.12e}  rel. dev. {:+.2e}",
                j + 1,
                rep.eigenvalues[j],
                rep.deviations[j]
            );
        }
    }
    let check = cross_validate(KernelKind::Brownian, 1e-6)?;
    for c in &check.checks {
        println!("{}: {} ({})", c.name, c.passed, c.detail);
    }
    Ok(())
}

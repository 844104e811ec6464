//! Persist the computed Wiener eigenvalue tables so later runs skip the solve.

use std::time::Instant;

use tensortract::nystrom::{load_wiener_cache, save_wiener_cache, wiener_eigenvalues};

fn main() -> tensortract::Result<()> {
    let path = std::env::temp_dir().join("tensortract-wiener.cache");
    if path.exists() {
        println!("loaded {} tables from {}", load_wiener_cache(&path)?, path.display());
    }
    let start = Instant::now();
    let table = wiener_eigenvalues(2, 256, 32)?;
    println!(
        "r=2 table ready in {:.3}s, λ1 = {:e}",
        start.elapsed().as_secs_f64(),
        table.eigenvalues[0]
    );
    save_wiener_cache(&path)?;
    println!("saved to {}", path.display());
    Ok(())
}

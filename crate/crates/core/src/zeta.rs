//! Riemann and Hurwitz zeta functions for real arguments `p > 1`.
//!
//! Direct summation of the first `N` terms followed by the Euler–Maclaurin
//! correction through the `B_16` term. `N` is chosen so that `N + q` exceeds
//! `p + 16`, which makes consecutive correction terms shrink by roughly a
//! factor `(2π)^2` and keeps the absolute error near machine precision.

use crate::error::{domain, Result};
use crate::summation::NeumaierSum;

/// `B_{2k} / (2k)!` for `k = 1..=8`.
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
];

/// Above this exponent plain summation converges after a handful of terms.
const DIRECT_SUM_EXPONENT: f64 = 40.0;

/// Riemann zeta `ζ(p) = Σ_{j≥1} j^{-p}`.
pub fn zeta(p: f64) -> Result<f64> {
    hurwitz_zeta(p, 1.0)
}

/// Hurwitz zeta `ζ(p, q) = Σ_{n≥0} (n + q)^{-p}` for `p > 1`, `q > 0`.
pub fn hurwitz_zeta(p: f64, q: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return domain(format!("zeta requires p > 1, got {p}"));
    }
    if !(q > 0.0) || !q.is_finite() {
        return domain(format!("hurwitz zeta requires q > 0, got {q}"));
    }
    if p >= DIRECT_SUM_EXPONENT {
        return Ok(direct_sum(p, q));
    }

    let n_terms = ((p + 16.0 - q).ceil().max(0.0)) as usize;
    let mut acc = NeumaierSum::new();
    for n in 0..n_terms {
        acc.add((n as f64 + q).powf(-p));
    }
    let x = n_terms as f64 + q;
    let x_pow = x.powf(-p);
    acc.add(x * x_pow / (p - 1.0));
    acc.add(0.5 * x_pow);

    // rising factorial p (p+1) ... (p+2k-2) times x^{-p-2k+1}
    let inv_x2 = 1.0 / (x * x);
    let mut factor = p * x_pow / x;
    for (k, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if k > 0 {
            let m = 2.0 * k as f64;
            factor *= (p + m - 1.0) * (p + m) * inv_x2;
        }
        acc.add(coeff * factor);
    }
    Ok(acc.value())
}

fn direct_sum(p: f64, q: f64) -> f64 {
    let mut acc = NeumaierSum::new();
    let mut n = 0.0;
    loop {
        let term = (n + q).powf(-p);
        acc.add(term);
        if term <= 1e-18 * acc.value() || term == 0.0 {
            break;
        }
        n += 1.0;
    }
    acc.value()
}

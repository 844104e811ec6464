use crate::error::{Error, Result};

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    /// Builds the matrix from its upper triangle; `f(p, q)` is called for `p <= q`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for p in 0..n {
            for q in p..n {
                let v = f(p, q);
                data[p * n + q] = v;
                data[q * n + p] = v;
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize) -> f64 {
        self.data[p * self.n + q]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|p| self.get(p, p)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Outcome of a cyclic Jacobi run.
#[derive(Debug, Clone)]
pub struct JacobiEigen {
    /// Eigenvalues, non-increasing.
    pub eigenvalues: Vec<f64>,
    pub sweeps: usize,
}

pub const MAX_SWEEPS: usize = 50;

/// Cyclic-by-row Jacobi eigenvalue iteration.
///
/// Sweeps until the off-diagonal Frobenius norm is at most
/// `rel_tol * ‖M‖_F`. Rotations use Rutishauser's formulation; an element is
/// skipped once it is negligible against the geometric mean of its two
/// diagonal entries, which keeps small eigenvalues of positive semidefinite
/// matrices from being polluted by larger ones.
pub fn jacobi_eigenvalues(matrix: &SymmetricMatrix, rel_tol: f64) -> Result<JacobiEigen> {
    let n = matrix.n;
    let mut a = matrix.data.clone();
    let target = rel_tol * matrix.frobenius_norm();

    for sweep in 0..=MAX_SWEEPS {
        let off = off_diagonal_norm(&a, n);
        if off <= target || n < 2 {
            let mut eigenvalues: Vec<f64> = (0..n).map(|p| a[p * n + p]).collect();
            eigenvalues.sort_by(|x, y| y.total_cmp(x));
            return Ok(JacobiEigen {
                eigenvalues,
                sweeps: sweep,
            });
        }
        if sweep == MAX_SWEEPS {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                if apq.abs() <= 1e-18 * (app * aqq).abs().sqrt() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let g = a[r * n + p];
                    let h = a[r * n + q];
                    let new_p = g - s * (h + g * tau);
                    let new_q = h + s * (g - h * tau);
                    a[r * n + p] = new_p;
                    a[r * n + q] = new_q;
                    a[p * n + r] = new_p;
                    a[q * n + r] = new_q;
                }
            }
        }
    }
    Err(Error::NumericalFailure(format!(
        "Jacobi iteration did not converge within {MAX_SWEEPS} sweeps"
    )))
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            let v = a[p * n + q];
            s += 2.0 * v * v;
        }
    }
    s.sqrt()
}

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights mapped to `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// `order`-point rule on `[-1, 1]`, nodes ascending.
    ///
    /// Newton iteration on `P_n` from the Tricomi initial guesses; the three
    /// term recurrence gives `P_n` and `P_{n-1}`, and the weight follows from
    /// `2 / ((1 - x^2) P_n'(x)^2)`.
    pub fn new(order: usize) -> Self {
        assert!(order > 0, "quadrature order must be positive");
        let n = order;
        let nf = n as f64;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Same rule mapped affinely onto `[a, b]`.
    pub fn on_interval(order: usize, a: f64, b: f64) -> Self {
        let mut rule = Self::new(order);
        rule.map_to(a, b);
        rule
    }

    fn map_to(&mut self, a: f64, b: f64) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for x in &mut self.nodes {
            *x = mid + half * *x;
        }
        for w in &mut self.weights {
            *w *= half;
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1, 2, 5, 64, 256, 512] {
            let g = GaussLegendre::on_interval(n, 0.0, 1.0);
            let s: f64 = g.weights.iter().sum();
            assert!((s - 1.0).abs() < 1e-13, "n={n} sum={s}");
        }
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        for n in [1usize, 2, 3, 7, 20] {
            let g = GaussLegendre::on_interval(n, 0.0, 1.0);
            let deg = 2 * n - 1;
            let got = g.integrate(|x| x.powi(deg as i32));
            assert!((got - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn nodes_ascending_and_symmetric() {
        let g = GaussLegendre::new(255);
        assert!(g.nodes.windows(2).all(|w| w[0] < w[1]));
        for i in 0..255 {
            assert_eq!(g.nodes[i], -g.nodes[254 - i]);
        }
    }

    #[test]
    fn three_point_rule() {
        let g = GaussLegendre::new(3);
        assert!((g.nodes[2] - (0.6f64).sqrt()).abs() < 1e-15);
        assert!((g.weights[1] - 8.0 / 9.0).abs() < 1e-15);
        assert!((g.weights[0] - 5.0 / 9.0).abs() < 1e-15);
    }
}

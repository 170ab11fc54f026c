//! Gauss quadrature rules and Lagrange interpolation on the reference interval.
//!
//! Both rule families are generated at runtime by Newton iteration on the
//! Legendre recurrence, so any order is available. Gauss-Legendre with `n`
//! points integrates polynomials up to degree `2n - 1` exactly;
//! Gauss-Lobatto with `n` points (which includes both endpoints) is exact up
//! to degree `2n - 3`.

/// Nodes and weights of a quadrature rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Affinely remaps the rule to the interval `[a, b]`.
    pub fn mapped_to(&self, a: f64, b: f64) -> QuadratureRule {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        QuadratureRule {
            nodes: self.nodes.iter().map(|x| mid + half * x).collect(),
            weights: self.weights.iter().map(|w| half * w).collect(),
        }
    }

    /// Applies the rule to `f`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Evaluates the Legendre polynomial `P_n` and its derivative at `x`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut p = x;
    for j in 1..n {
        let jf = j as f64;
        let p_next = ((2.0 * jf + 1.0) * x * p - jf * p_prev) / (jf + 1.0);
        p_prev = p;
        p = p_next;
    }
    // (1 - x^2) P_n' = n (P_{n-1} - x P_n); endpoints never arise for the
    // interior Newton iterations below.
    let dp = n as f64 * (p_prev - x * p) / (1.0 - x * x);
    (p, dp)
}

/// Gauss-Legendre rule with `n >= 1` points on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> QuadratureRule {
    assert!(n >= 1, "quadrature needs at least one point");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x =
            (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // The guess above starts near +1; store symmetrically.
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, dp) = legendre_with_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (dp * dp);
    }
    QuadratureRule { nodes, weights }
}

/// Gauss-Lobatto rule with `n >= 2` points on `[-1, 1]`, endpoints included.
///
/// All weights are strictly positive, which is what makes the lumped inner
/// product built from this rule positive definite.
pub fn gauss_lobatto(n: usize) -> QuadratureRule {
    assert!(n >= 2, "Lobatto rule needs at least two points");
    let m = n - 1; // interior nodes are the roots of P_m'
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    nodes[0] = -1.0;
    nodes[n - 1] = 1.0;
    let endpoint_w = 2.0 / (m as f64 * (m as f64 + 1.0));
    weights[0] = endpoint_w;
    weights[n - 1] = endpoint_w;

    for i in 1..=(n - 1) / 2 {
        // Chebyshev-Lobatto points bracket the roots of P_m' closely enough
        // for Newton to stay inside its basin.
        let mut x = (std::f64::consts::PI * i as f64 / m as f64).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(m, x);
            // P_m'' from the Legendre ODE.
            let ddp = (2.0 * x * dp - (m * (m + 1)) as f64 * p) / (1.0 - x * x);
            let dx = dp / ddp;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let (p, _) = legendre_with_derivative(m, x);
        let w = 2.0 / ((m * (m + 1)) as f64 * p * p);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (p, _) = legendre_with_derivative(m, 0.0);
        weights[n / 2] = 2.0 / ((m * (m + 1)) as f64 * p * p);
    }
    QuadratureRule { nodes, weights }
}

/// Values of the Lagrange cardinal polynomials through `nodes` at `x`.
pub fn lagrange_values(nodes: &[f64], x: f64) -> Vec<f64> {
    let k = nodes.len();
    let mut values = vec![1.0; k];
    for j in 0..k {
        for m in 0..k {
            if m != j {
                values[j] *= (x - nodes[m]) / (nodes[j] - nodes[m]);
            }
        }
    }
    values
}

/// Derivatives of the Lagrange cardinal polynomials through `nodes` at `x`.
pub fn lagrange_derivatives(nodes: &[f64], x: f64) -> Vec<f64> {
    let k = nodes.len();
    let mut derivs = vec![0.0; k];
    for j in 0..k {
        let mut sum = 0.0;
        for m in 0..k {
            if m == j {
                continue;
            }
            let mut term = 1.0 / (nodes[j] - nodes[m]);
            for r in 0..k {
                if r != j && r != m {
                    term *= (x - nodes[r]) / (nodes[j] - nodes[r]);
                }
            }
            sum += term;
        }
        derivs[j] = sum;
    }
    derivs
}

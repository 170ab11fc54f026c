//! Space-time slab solutions and the time basis tables behind them.
//!
//! On each slab `[t^{n-1}, t^n]` the trial functions are polynomials of
//! degree `q` in time with coefficients in the element space, represented by
//! their values at the `q + 1` Gauss-Lobatto points of the slab. Node 0 is
//! pinned to the incoming state, which enforces continuity in time. Test
//! functions are one degree lower and discontinuous across slabs.

use crate::mesh::FieldVector;
use crate::model::State;
use crate::quadrature::{
    gauss_legendre, gauss_lobatto, lagrange_derivatives, lagrange_values,
};

/// One slab of the space-time solution: values of `ψ` and `p` at the
/// `q + 1` Gauss-Lobatto time nodes.
#[derive(Debug, Clone)]
pub struct SlabSolution {
    t_start: f64,
    tau: f64,
    /// Gauss-Lobatto nodes on the unit slab `[0, 1]`, length `q + 1`.
    time_nodes: Vec<f64>,
    psi: Vec<FieldVector>,
    p: Vec<FieldVector>,
}

impl SlabSolution {
    /// Builds a slab from per-time-node values. `psi[0]`, `p[0]` are the
    /// incoming state; the slab covers `[t_start, t_start + tau]`.
    pub fn from_nodes(
        t_start: f64,
        tau: f64,
        psi: Vec<FieldVector>,
        p: Vec<FieldVector>,
    ) -> Self {
        assert!(tau != 0.0, "slab must have nonzero width");
        assert!(psi.len() >= 2 && psi.len() == p.len());
        let n = psi[0].len();
        assert!(psi.iter().chain(p.iter()).all(|v| v.len() == n));
        let q = psi.len() - 1;
        let time_nodes = unit_lobatto_nodes(q);
        SlabSolution {
            t_start,
            tau,
            time_nodes,
            psi,
            p,
        }
    }

    /// Unpacks the Newton unknown layout: node `m >= 1`, spatial node `i`,
    /// field `f` (0 = ψ, 1 = p) lives at `x[i * 2q + 2 (m - 1) + f]`.
    pub(crate) fn from_flat(state: &State, tau: f64, q: usize, x: &[f64]) -> Self {
        let n = state.num_nodes();
        assert_eq!(x.len(), 2 * q * n);
        let mut psi = Vec::with_capacity(q + 1);
        let mut p = Vec::with_capacity(q + 1);
        psi.push(state.psi.clone());
        p.push(state.p.clone());
        for m in 1..=q {
            let mut pm = FieldVector::zeros(n);
            let mut pp = FieldVector::zeros(n);
            for i in 0..n {
                pm[i] = x[i * 2 * q + 2 * (m - 1)];
                pp[i] = x[i * 2 * q + 2 * (m - 1) + 1];
            }
            psi.push(pm);
            p.push(pp);
        }
        SlabSolution::from_nodes(state.time, tau, psi, p)
    }

    /// Polynomial degree `q` in time.
    pub fn order(&self) -> usize {
        self.psi.len() - 1
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_start + self.tau
    }

    /// Gauss-Lobatto time nodes on the unit slab.
    pub fn time_nodes(&self) -> &[f64] {
        &self.time_nodes
    }

    pub fn psi_node(&self, m: usize) -> &FieldVector {
        &self.psi[m]
    }

    pub fn p_node(&self, m: usize) -> &FieldVector {
        &self.p[m]
    }

    /// State at the right end of the slab; the values are bitwise those of
    /// the last time node, so threading slabs keeps continuity exact.
    pub fn end_state(&self) -> State {
        State::new(
            self.psi.last().unwrap().clone(),
            self.p.last().unwrap().clone(),
            self.t_end(),
        )
    }

    /// `ψ` at unit-slab coordinate `s ∈ [0, 1]`.
    pub fn psi_at(&self, s: f64) -> FieldVector {
        self.combine(&lagrange_values(&self.time_nodes, s), &self.psi, 1.0)
    }

    /// `p` at unit-slab coordinate `s`.
    pub fn p_at(&self, s: f64) -> FieldVector {
        self.combine(&lagrange_values(&self.time_nodes, s), &self.p, 1.0)
    }

    /// `∂_t ψ` at unit-slab coordinate `s` (true time derivative).
    pub fn psi_rate_at(&self, s: f64) -> FieldVector {
        self.combine(
            &lagrange_derivatives(&self.time_nodes, s),
            &self.psi,
            1.0 / self.tau,
        )
    }

    /// `∂_t p` at unit-slab coordinate `s`.
    pub fn p_rate_at(&self, s: f64) -> FieldVector {
        self.combine(
            &lagrange_derivatives(&self.time_nodes, s),
            &self.p,
            1.0 / self.tau,
        )
    }

    fn combine(&self, basis: &[f64], nodes: &[FieldVector], scale: f64) -> FieldVector {
        let n = nodes[0].len();
        let mut out = FieldVector::zeros(n);
        for (b, node) in basis.iter().zip(nodes) {
            if *b == 0.0 {
                continue;
            }
            for i in 0..n {
                out[i] += scale * b * node[i];
            }
        }
        out
    }
}

fn unit_lobatto_nodes(q: usize) -> Vec<f64> {
    gauss_lobatto(q + 1)
        .nodes
        .iter()
        .map(|x| 0.5 * (x + 1.0))
        .collect()
}

/// Precomputed time-direction tables for the slab system of order `q`:
/// trial basis (Lagrange at the `q + 1` Lobatto nodes) and test basis
/// (Lagrange at the `q` Gauss points), both tabulated at the `2q`-point
/// Gauss rule that integrates every slab integrand exactly (the largest
/// degree is `3q - 1 <= 4q - 1`).
#[derive(Debug, Clone)]
pub(crate) struct TimeBasis {
    pub q: usize,
    /// Quadrature on the unit slab; weights sum to 1.
    pub quad_nodes: Vec<f64>,
    pub quad_weights: Vec<f64>,
    /// `trial_at_quad[g][m]`, `m = 0..=q`.
    pub trial_at_quad: Vec<Vec<f64>>,
    /// d/ds values; divide by `tau` for true time derivatives.
    pub trial_deriv_at_quad: Vec<Vec<f64>>,
    /// `test_at_quad[g][l]`, `l = 0..q`.
    pub test_at_quad: Vec<Vec<f64>>,
}

impl TimeBasis {
    pub fn new(q: usize) -> Self {
        assert!(q >= 1);
        let trial_nodes = unit_lobatto_nodes(q);
        let test_nodes: Vec<f64> = gauss_legendre(q)
            .nodes
            .iter()
            .map(|x| 0.5 * (x + 1.0))
            .collect();
        let quad = gauss_legendre(2 * q);
        let quad_nodes: Vec<f64> = quad.nodes.iter().map(|x| 0.5 * (x + 1.0)).collect();
        let quad_weights: Vec<f64> = quad.weights.iter().map(|w| 0.5 * w).collect();
        let trial_at_quad = quad_nodes
            .iter()
            .map(|&s| lagrange_values(&trial_nodes, s))
            .collect();
        let trial_deriv_at_quad = quad_nodes
            .iter()
            .map(|&s| lagrange_derivatives(&trial_nodes, s))
            .collect();
        let test_at_quad = quad_nodes
            .iter()
            .map(|&s| lagrange_values(&test_nodes, s))
            .collect();
        TimeBasis {
            q,
            quad_nodes,
            quad_weights,
            trial_at_quad,
            trial_deriv_at_quad,
            test_at_quad,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_node_slab() -> SlabSolution {
        SlabSolution::from_nodes(
            1.0,
            0.5,
            vec![
                FieldVector::new(vec![0.0, 1.0]),
                FieldVector::new(vec![2.0, 3.0]),
            ],
            vec![
                FieldVector::new(vec![1.0, 1.0]),
                FieldVector::new(vec![-1.0, 5.0]),
            ],
        )
    }

    #[test]
    fn linear_slab_evaluation() {
        let slab = two_node_slab();
        assert_eq!(slab.order(), 1);
        let mid = slab.psi_at(0.5);
        assert_eq!(mid.as_slice(), &[1.0, 2.0]);
        let rate = slab.psi_rate_at(0.25);
        // Δψ / τ = (2, 2) / 0.5
        assert_eq!(rate.as_slice(), &[4.0, 4.0]);
        assert_eq!(slab.t_end(), 1.5);
    }

    #[test]
    fn end_state_is_last_node() {
        let slab = two_node_slab();
        let end = slab.end_state();
        assert_eq!(end.psi.as_slice(), &[2.0, 3.0]);
        assert_eq!(end.p.as_slice(), &[-1.0, 5.0]);
        assert_eq!(end.time, 1.5);
    }

    #[test]
    fn quadratic_slab_reproduces_quadratic_in_time() {
        // Scalar field, values of t² at Lobatto nodes {0, 1/2, 1}.
        let slab = SlabSolution::from_nodes(
            0.0,
            2.0,
            vec![
                FieldVector::new(vec![0.0]),
                FieldVector::new(vec![1.0]),
                FieldVector::new(vec![4.0]),
            ],
            vec![
                FieldVector::new(vec![0.0]),
                FieldVector::new(vec![0.0]),
                FieldVector::new(vec![0.0]),
            ],
        );
        // ψ(s) = (2s)², rate = d/dt (t²) = 2t = 4s.
        let s = 0.3;
        assert!((slab.psi_at(s)[0] - (2.0 * s) * (2.0 * s)).abs() < 1e-14);
        assert!((slab.psi_rate_at(s)[0] - 4.0 * s).abs() < 1e-13);
    }

    #[test]
    fn basis_tables_are_consistent() {
        for q in 1..=4 {
            let basis = TimeBasis::new(q);
            assert_eq!(basis.quad_nodes.len(), 2 * q);
            let total: f64 = basis.quad_weights.iter().sum();
            assert!((total - 1.0).abs() < 1e-14);
            for g in 0..2 * q {
                // Trial partition of unity, derivative sum zero.
                let sv: f64 = basis.trial_at_quad[g].iter().sum();
                let sd: f64 = basis.trial_deriv_at_quad[g].iter().sum();
                assert!((sv - 1.0).abs() < 1e-13);
                assert!(sd.abs() < 1e-12);
                let st: f64 = basis.test_at_quad[g].iter().sum();
                assert!((st - 1.0).abs() < 1e-13);
            }
        }
    }
}

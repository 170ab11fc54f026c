//! Model parameters, coupled state, discrete energy, and the energy ledger.
//!
//! The solver evolves the pair `u = (ψ, p)` with `p = ∂_t ψ` (velocity
//! potential and acoustic pressure). The discrete acoustic energy combines
//! the exact stiffness form with the lumped product for the pressure terms:
//!
//! ```text
//! E_h(ψ, p) = 1/2 ψᵀKψ + Σ_i w_i (1/2 - (2β/3) p_i) p_i²
//! ```
//!
//! Time stepping balances `E_h` exactly against the viscous dissipation
//! integral; the ledger records both so the balance can be audited per step.

use crate::assembly::{LumpedInner, StiffnessMatrix};
use crate::integrators::SlabSolution;
use crate::mesh::FieldVector;
use crate::quadrature::gauss_legendre;

/// Margin at or below which the factor `(1 - 2βp)` counts as degenerate and
/// stepping aborts. The equation loses its evolution character at zero.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;

/// Dimensionless damping `α ≥ 0` and nonlinearity `β ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, beta: f64) -> crate::error::Result<Self> {
        if !(alpha >= 0.0) || !(beta >= 0.0) {
            return Err(crate::error::Error::InvalidArgument(format!(
                "alpha and beta must be nonnegative, got ({alpha}, {beta})"
            )));
        }
        Ok(ModelParams { alpha, beta })
    }

    /// Linear wave equation (`α = β = 0`).
    pub fn linear() -> Self {
        ModelParams {
            alpha: 0.0,
            beta: 0.0,
        }
    }
}

/// Nodal coefficients of `(ψ, p)` at one time instant.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub psi: FieldVector,
    pub p: FieldVector,
    pub time: f64,
}

impl State {
    pub fn new(psi: FieldVector, p: FieldVector, time: f64) -> Self {
        assert_eq!(psi.len(), p.len(), "psi and p must share a mesh");
        State { psi, p, time }
    }

    pub fn num_nodes(&self) -> usize {
        self.psi.len()
    }
}

/// Discrete energy `E_h` of a state.
pub fn discrete_energy(
    stiffness: &StiffnessMatrix,
    lumped: &LumpedInner,
    params: &ModelParams,
    state: &State,
) -> f64 {
    assert_eq!(state.num_nodes(), stiffness.n());
    assert_eq!(state.num_nodes(), lumped.len());
    let grad = 0.5 * stiffness.bilinear(&state.psi, &state.psi);
    let two_thirds_beta = 2.0 * params.beta / 3.0;
    let pressure: f64 = state
        .p
        .iter()
        .enumerate()
        .map(|(i, &p)| lumped.weight(i) * (0.5 - two_thirds_beta * p) * p * p)
        .sum();
    grad + pressure
}

/// Smallest nodal value of `(1 - 2βp)`.
///
/// Callers treat a margin at or below [`DEGENERACY_THRESHOLD`] as failure.
pub fn degeneracy_margin(p: &FieldVector, params: &ModelParams) -> f64 {
    p.iter()
        .map(|&v| 1.0 - 2.0 * params.beta * v)
        .fold(f64::INFINITY, f64::min)
}

/// Viscous dissipation over one slab,
/// `α ∫ (∂_t ψ)ᵀ K (∂_t ψ) dt`, integrated exactly.
///
/// `∂_t ψ` has polynomial degree `q - 1` in time, so `q` Gauss points are
/// exact; for `α = 0` the increment is zero without touching the slab.
pub fn dissipation_increment(
    stiffness: &StiffnessMatrix,
    slab: &SlabSolution,
    params: &ModelParams,
) -> f64 {
    if params.alpha == 0.0 {
        return 0.0;
    }
    let rule = gauss_legendre(slab.order()).mapped_to(0.0, 1.0);
    let mut total = 0.0;
    for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
        let rate = slab.psi_rate_at(s);
        total += w * stiffness.bilinear(&rate, &rate);
    }
    params.alpha * slab.tau() * total
}

/// Per-step record of the discrete energy and dissipation increments.
///
/// `dissipation_increments` is one entry shorter than `energies`; entry `n`
/// covers the step from `times[n]` to `times[n + 1]`.
#[derive(Debug, Clone, Default)]
pub struct EnergyLedger {
    pub times: Vec<f64>,
    pub energies: Vec<f64>,
    pub dissipation_increments: Vec<f64>,
}

impl EnergyLedger {
    pub fn new(t0: f64, e0: f64) -> Self {
        EnergyLedger {
            times: vec![t0],
            energies: vec![e0],
            dissipation_increments: Vec::new(),
        }
    }

    pub fn record_step(&mut self, t: f64, energy: f64, dissipation: f64) {
        self.times.push(t);
        self.energies.push(energy);
        self.dissipation_increments.push(dissipation);
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// `max_n |E_h(t^n) - E_h(t^0)|`.
    pub fn max_drift(&self) -> f64 {
        let e0 = self.energies[0];
        self.energies
            .iter()
            .map(|e| (e - e0).abs())
            .fold(0.0, f64::max)
    }

    /// Accumulated dissipation up to entry `n` (inclusive of the step
    /// ending at `times[n]`).
    pub fn cumulative_dissipation(&self, n: usize) -> f64 {
        self.dissipation_increments[..n].iter().sum()
    }

    /// `max_n |E_h(t^n) - E_h(t^0) + Σ_{j<=n} d_j|`, the residual of the
    /// integral energy identity.
    pub fn max_balance_residual(&self) -> f64 {
        let e0 = self.energies[0];
        let mut acc = 0.0;
        let mut worst = 0.0f64;
        for (n, &e) in self.energies.iter().enumerate() {
            if n > 0 {
                acc += self.dissipation_increments[n - 1];
            }
            worst = worst.max((e - e0 + acc).abs());
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{assemble_lumped_weights, assemble_stiffness};
    use crate::mesh::Mesh1D;
    use crate::quadrature::gauss_legendre;

    fn operators(mesh: &Mesh1D) -> (StiffnessMatrix, LumpedInner) {
        (assemble_stiffness(mesh), assemble_lumped_weights(mesh))
    }

    #[test]
    fn zero_state_has_zero_energy() {
        let mesh = Mesh1D::uniform(0.0, 16.0, 8, 2).unwrap();
        let (k, w) = operators(&mesh);
        let n = mesh.num_nodes();
        let state = State::new(FieldVector::zeros(n), FieldVector::zeros(n), 0.0);
        let params = ModelParams::new(0.0, 0.3).unwrap();
        assert_eq!(discrete_energy(&k, &w, &params, &state), 0.0);
    }

    #[test]
    fn constant_pressure_energy_is_half_domain_length() {
        let mesh = Mesh1D::uniform(0.0, 16.0, 32, 1).unwrap();
        let (k, w) = operators(&mesh);
        let state = State::new(
            FieldVector::zeros(mesh.num_nodes()),
            mesh.interpolate(|_| 1.0),
            0.0,
        );
        let params = ModelParams::linear();
        assert!((discrete_energy(&k, &w, &params, &state) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_pressure_energy_matches_quadrature_oracle() {
        // ψ = 0, p = exp(-0.2 x²), β = 0.3 on (0, 16). The exact value of
        // ∫ (1/2 - 0.2 e^{-0.2x²}) e^{-0.4x²} dx comes from a high-order
        // quadrature rule, independent of the lumped product.
        let integrand =
            |x: f64| (0.5 - 0.2 * (-0.2 * x * x).exp()) * (-0.4 * x * x).exp();
        let oracle: f64 = (0..64)
            .map(|c| {
                gauss_legendre(24)
                    .mapped_to(c as f64 * 0.25, (c + 1) as f64 * 0.25)
                    .integrate(integrand)
            })
            .sum();
        assert!((oracle - 0.471801).abs() < 5e-6, "oracle {oracle}");

        let mesh = Mesh1D::uniform(0.0, 16.0, 256, 2).unwrap();
        let (k, w) = operators(&mesh);
        let params = ModelParams::new(0.0, 0.3).unwrap();
        let state = State::new(
            FieldVector::zeros(mesh.num_nodes()),
            mesh.interpolate(|x| (-0.2 * x * x).exp()),
            0.0,
        );
        let eh = discrete_energy(&k, &w, &params, &state);
        assert!((eh - 0.471801).abs() < 5e-6, "E_h = {eh}");
        assert!((eh - oracle).abs() < 1e-6);
    }

    #[test]
    fn energy_formula_has_no_degeneracy_guard() {
        let mesh = Mesh1D::uniform(0.0, 1.0, 4, 1).unwrap();
        let (k, w) = operators(&mesh);
        let params = ModelParams::new(0.0, 5.0).unwrap();
        let state = State::new(
            FieldVector::zeros(mesh.num_nodes()),
            mesh.interpolate(|_| 1.0),
            0.0,
        );
        // (1/2 - 10/3) < 0 somewhere; the formula still evaluates.
        let e = discrete_energy(&k, &w, &params, &state);
        assert!(e.is_finite() && e < 0.0);
    }

    #[test]
    fn energy_invariant_under_constant_psi_shift() {
        let mesh = Mesh1D::uniform(0.0, 16.0, 20, 2).unwrap();
        let (k, w) = operators(&mesh);
        let params = ModelParams::new(0.1, 0.3).unwrap();
        let psi = mesh.interpolate(|x| (0.5 * x).sin());
        let p = mesh.interpolate(|x| (-0.2 * x * x).exp());
        let e1 = discrete_energy(&k, &w, &params, &State::new(psi.clone(), p.clone(), 0.0));
        let shifted = FieldVector::new(psi.iter().map(|v| v + 1.5).collect());
        let e2 = discrete_energy(&k, &w, &params, &State::new(shifted, p, 0.0));
        assert!((e1 - e2).abs() <= 1e-12 * e1.abs().max(1.0));
    }

    #[test]
    fn linear_energy_is_nonnegative() {
        let mesh = Mesh1D::uniform(0.0, 4.0, 10, 2).unwrap();
        let (k, w) = operators(&mesh);
        let params = ModelParams::linear();
        let state = State::new(
            mesh.interpolate(|x| (x * 1.3).cos()),
            mesh.interpolate(|x| -x + 1.0),
            0.0,
        );
        assert!(discrete_energy(&k, &w, &params, &state) >= 0.0);
    }

    #[test]
    fn lumped_energy_converges_to_continuous_energy() {
        // Against an exact-quadrature oracle for smooth data the lumped
        // energy converges at rate >= k + 1.
        for k_deg in 1..=3usize {
            let params = ModelParams::new(0.0, 0.3).unwrap();
            let psi_fn = |x: f64| (0.7 * x).sin();
            let p_fn = |x: f64| (-0.2 * x * x).exp();
            let oracle: f64 = (0..64)
                .map(|c| {
                    gauss_legendre(24)
                        .mapped_to(c as f64 * 0.25, (c + 1) as f64 * 0.25)
                        .integrate(|x| {
                            let dpsi = 0.7 * (0.7 * x).cos();
                            let p = p_fn(x);
                            0.5 * dpsi * dpsi + (0.5 - 0.2 * p) * p * p
                        })
                })
                .sum();
            let energy_err = |elems: usize| {
                let mesh = Mesh1D::uniform(0.0, 16.0, elems, k_deg).unwrap();
                let (k, w) = operators(&mesh);
                let state =
                    State::new(mesh.interpolate(psi_fn), mesh.interpolate(p_fn), 0.0);
                (discrete_energy(&k, &w, &params, &state) - oracle).abs()
            };
            let rate = (energy_err(64) / energy_err(128)).log2();
            assert!(rate >= k_deg as f64 + 1.0 - 0.3, "k={k_deg}, rate={rate}");
        }
    }

    #[test]
    fn degeneracy_margin_values() {
        let mesh = Mesh1D::uniform(0.0, 1.0, 4, 1).unwrap();
        let p = mesh.interpolate(|x| x); // max 1
        assert_eq!(degeneracy_margin(&p, &ModelParams::linear()), 1.0);
        let params = ModelParams::new(0.0, 0.3).unwrap();
        assert!((degeneracy_margin(&p, &params) - 0.4).abs() < 1e-15);
        let params = ModelParams::new(0.0, 0.5).unwrap();
        let margin = degeneracy_margin(&p, &params);
        assert!(margin.abs() < 1e-15);
        assert!(margin <= DEGENERACY_THRESHOLD);
    }

    #[test]
    fn ledger_bookkeeping() {
        let mut ledger = EnergyLedger::new(0.0, 1.0);
        ledger.record_step(0.5, 0.9, 0.1);
        ledger.record_step(1.0, 0.85, 0.05);
        assert_eq!(ledger.len(), 3);
        assert!((ledger.max_drift() - 0.15).abs() < 1e-15);
        assert!(ledger.max_balance_residual() < 1e-15);
        assert!((ledger.cumulative_dissipation(2) - 0.15).abs() < 1e-15);
    }
}

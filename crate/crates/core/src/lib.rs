//! Structure-preserving finite element solver for the 1D Westervelt equation
//! of nonlinear acoustics,
//!
//! ```text
//! ∂_tt ψ - Δψ = α Δ(∂_t ψ) + β ∂_t (∂_t ψ)²
//! ```
//!
//! posed with homogeneous Neumann boundary conditions for the velocity
//! potential `ψ` and the acoustic pressure `p = ∂_t ψ`. The solver combines
//!
//! * arbitrary-degree continuous elements on Gauss-Lobatto nodes with nodal
//!   mass lumping ([`mesh`], [`assembly`]),
//! * a continuous Petrov-Galerkin time discretization of arbitrary order
//!   whose slab integrals are computed exactly ([`integrators`]), and
//! * an energy ledger that checks, per step, the discrete identity
//!   `E_h(t^n) - E_h(t^m) = -α ∫ |∇∂_t ψ_h|² dx dt` ([`model`]).
//!
//! With `α = 0` the discrete acoustic energy is conserved to roundoff for
//! any polynomial orders and step sizes; with `α > 0` it decays by exactly
//! the accumulated dissipation integral. Two classical implicit Runge-Kutta
//! baselines (implicit midpoint and two-stage Lobatto-IIIA) are included for
//! comparison; they lose this property as soon as `β > 0`.
//!
//! The [`experiments`] module drives full runs, convergence studies against
//! a refined reference oracle, and integrator comparisons.

pub mod assembly;
pub mod banded;
pub mod error;
pub mod experiments;
pub mod integrators;
pub mod mesh;
pub mod model;
pub mod quadrature;

pub use assembly::{assemble_lumped_weights, assemble_stiffness, LumpedInner, StiffnessMatrix};
pub use banded::{BandedLu, BandedMatrix};
pub use error::{Error, Result};
pub use experiments::{
    compare_integrators, convergence_study, error_at_gridpoints, max_abs_gradient,
    reference_oracle, run_simulation, ConvergenceRow, InitialProfile, IntegratorComparison,
    IntegratorKind, SimulationConfig, TerminationStatus, Trajectory,
};
pub use integrators::{
    baseline_implicit_midpoint, baseline_lobatto_iiia2, cpg_jacobian, cpg_residual, newton_solve,
    step_cpg, step_q1, NewtonConfig, NewtonReport, SlabSolution,
};
pub use mesh::{FieldVector, Mesh1D};
pub use model::{
    degeneracy_margin, discrete_energy, dissipation_increment, EnergyLedger, ModelParams, State,
    DEGENERACY_THRESHOLD,
};

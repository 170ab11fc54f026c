//! Full simulation runs, energy ledgers, gridpoint error measurement,
//! convergence studies, and integrator comparisons.

use std::fmt;

use crate::assembly::{assemble_lumped_weights, assemble_stiffness};
use crate::error::{Error, Result};
use crate::integrators::{
    baseline_implicit_midpoint_with_report, baseline_lobatto_iiia2_with_report,
    step_cpg_with_report, NewtonConfig,
};
use crate::mesh::{FieldVector, Mesh1D};
use crate::model::{discrete_energy, dissipation_increment, EnergyLedger, ModelParams, State};
use crate::quadrature::lagrange_derivatives;

/// Named initial data profiles.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialProfile {
    Zero,
    /// `exp(-c x²)`.
    Gaussian { coefficient: f64 },
    /// Explicit nodal samples; must match the mesh node count.
    Samples(Vec<f64>),
}

impl InitialProfile {
    pub fn realize(&self, mesh: &Mesh1D) -> Result<FieldVector> {
        match self {
            InitialProfile::Zero => Ok(FieldVector::zeros(mesh.num_nodes())),
            InitialProfile::Gaussian { coefficient } => {
                let c = *coefficient;
                Ok(mesh.interpolate(|x| (-c * x * x).exp()))
            }
            InitialProfile::Samples(values) => {
                if values.len() != mesh.num_nodes() {
                    return Err(Error::InvalidArgument(format!(
                        "profile has {} samples, mesh has {} nodes",
                        values.len(),
                        mesh.num_nodes()
                    )));
                }
                Ok(FieldVector::new(values.clone()))
            }
        }
    }

    /// Parses `zero` or `gaussian(c)`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "zero" {
            return Ok(InitialProfile::Zero);
        }
        if let Some(inner) = t.strip_prefix("gaussian(").and_then(|s| s.strip_suffix(')')) {
            let coefficient: f64 = inner.trim().parse().map_err(|_| {
                Error::InvalidArgument(format!("bad gaussian coefficient: {inner:?}"))
            })?;
            return Ok(InitialProfile::Gaussian { coefficient });
        }
        Err(Error::InvalidArgument(format!(
            "unknown initial profile {t:?} (expected zero or gaussian(c))"
        )))
    }
}

impl fmt::Display for InitialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialProfile::Zero => write!(f, "zero"),
            InitialProfile::Gaussian { coefficient } => write!(f, "gaussian({coefficient})"),
            InitialProfile::Samples(v) => write!(f, "samples[{}]", v.len()),
        }
    }
}

/// Which time integrator drives the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegratorKind {
    Cpg,
    ImplicitMidpoint,
    LobattoIiia2,
}

impl IntegratorKind {
    pub const ALL: [IntegratorKind; 3] = [
        IntegratorKind::Cpg,
        IntegratorKind::ImplicitMidpoint,
        IntegratorKind::LobattoIiia2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IntegratorKind::Cpg => "cpg",
            IntegratorKind::ImplicitMidpoint => "implicit_midpoint",
            IntegratorKind::LobattoIiia2 => "lobatto_iiia2",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "cpg" => Ok(IntegratorKind::Cpg),
            "implicit_midpoint" => Ok(IntegratorKind::ImplicitMidpoint),
            "lobatto_iiia2" => Ok(IntegratorKind::LobattoIiia2),
            other => Err(Error::InvalidArgument(format!(
                "unknown integrator {other:?} (expected cpg, implicit_midpoint, or lobatto_iiia2)"
            ))),
        }
    }
}

impl fmt::Display for IntegratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Everything needed to run one simulation.
#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub domain: (f64, f64),
    pub num_elements: usize,
    pub degree: usize,
    /// Time order `q` (used by the cpg integrator; the baselines are
    /// two-level schemes regardless).
    pub order: usize,
    pub t_final: f64,
    pub tau: f64,
    pub params: ModelParams,
    pub psi0: InitialProfile,
    pub p0: InitialProfile,
    pub snapshot_times: Vec<f64>,
    pub integrator: IntegratorKind,
    pub newton: NewtonConfig,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.domain;
        if !(a < b) {
            return Err(Error::InvalidArgument(format!(
                "domain must satisfy a < b, got ({a}, {b})"
            )));
        }
        if self.num_elements < 1 || self.degree < 1 || self.order < 1 {
            return Err(Error::InvalidArgument(
                "elements, degree and order must be >= 1".into(),
            ));
        }
        if !(self.tau > 0.0) || !(self.t_final > 0.0) {
            return Err(Error::InvalidArgument(
                "tau and t_final must be positive".into(),
            ));
        }
        if !(self.params.alpha >= 0.0) || !(self.params.beta >= 0.0) {
            return Err(Error::InvalidArgument(
                "alpha and beta must be nonnegative".into(),
            ));
        }
        let steps = self.num_steps();
        if steps == 0 {
            return Err(Error::InvalidArgument(
                "t_final / tau rounds to zero steps".into(),
            ));
        }
        if (steps as f64 * self.tau - self.t_final).abs() > 0.5 * self.tau + 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "steps do not cover [0, {}] with tau = {}",
                self.t_final, self.tau
            )));
        }
        for &t in &self.snapshot_times {
            if t < 0.0 || t > self.t_final + 0.5 * self.tau {
                return Err(Error::InvalidArgument(format!(
                    "snapshot time {t} outside [0, {}]",
                    self.t_final
                )));
            }
        }
        Ok(())
    }

    /// Number of uniform steps, `round(t_final / tau)`.
    pub fn num_steps(&self) -> usize {
        (self.t_final / self.tau).round() as usize
    }

    /// Same run with space and time refined together by `factor`.
    pub fn refined(&self, factor: usize) -> SimulationConfig {
        let mut refined = self.clone();
        refined.num_elements *= factor;
        refined.tau /= factor as f64;
        refined
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TerminationStatus {
    Completed,
    Degenerate { margin: f64 },
    NewtonFailed { residual: f64 },
}

impl TerminationStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            TerminationStatus::Completed => "completed",
            TerminationStatus::Degenerate { .. } => "degenerate",
            TerminationStatus::NewtonFailed { .. } => "newton-failed",
        }
    }

    pub fn is_completed(&self) -> bool {
        matches!(self, TerminationStatus::Completed)
    }

    fn as_error(&self) -> Option<Error> {
        match *self {
            TerminationStatus::Completed => None,
            TerminationStatus::Degenerate { margin } => Some(Error::Degenerate { margin }),
            TerminationStatus::NewtonFailed { residual } => Some(Error::NewtonDiverged {
                iterations: 0,
                residual,
            }),
        }
    }
}

/// States at every step of a run, with the energy ledger and per-step Newton
/// iteration counts. On integrator failure the trajectory up to the failing
/// step is retained and `status` records the cause.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub mesh: Mesh1D,
    pub states: Vec<State>,
    /// `(requested time, index into states)` for each snapshot that was
    /// reached, at the nearest step time.
    pub snapshots: Vec<(f64, usize)>,
    pub ledger: EnergyLedger,
    pub newton_iterations: Vec<usize>,
    pub status: TerminationStatus,
}

impl Trajectory {
    pub fn final_state(&self) -> &State {
        self.states.last().unwrap()
    }

    /// Step size, assuming at least one step was taken.
    pub fn tau(&self) -> f64 {
        self.states[1].time - self.states[0].time
    }
}

/// Runs a configured simulation from `t = 0` to `t_final`.
///
/// Configuration problems are errors; integrator failures terminate the run
/// early and are reported through [`Trajectory::status`].
pub fn run_simulation(config: &SimulationConfig) -> Result<Trajectory> {
    config.validate()?;
    let (a, b) = config.domain;
    let mesh = Mesh1D::uniform(a, b, config.num_elements, config.degree)?;
    let stiffness = assemble_stiffness(&mesh);
    let lumped = assemble_lumped_weights(&mesh);
    let psi0 = config.psi0.realize(&mesh)?;
    let p0 = config.p0.realize(&mesh)?;
    let initial = State::new(psi0, p0, 0.0);

    let steps = config.num_steps();
    let snapshot_targets: Vec<(f64, usize)> = config
        .snapshot_times
        .iter()
        .map(|&t| (t, (t / config.tau).round() as usize))
        .collect();

    let mut ledger = EnergyLedger::new(
        0.0,
        discrete_energy(&stiffness, &lumped, &config.params, &initial),
    );
    let mut states = Vec::with_capacity(steps + 1);
    states.push(initial);
    let mut newton_iterations = Vec::with_capacity(steps);
    let mut status = TerminationStatus::Completed;

    for n in 1..=steps {
        let current = states.last().unwrap();
        let step = match config.integrator {
            IntegratorKind::Cpg => step_cpg_with_report(
                current,
                config.tau,
                config.order,
                &config.params,
                &stiffness,
                &lumped,
                &config.newton,
            )
            .map(|(state, slab, report)| {
                let d = dissipation_increment(&stiffness, &slab, &config.params);
                (state, d, report)
            }),
            IntegratorKind::ImplicitMidpoint => baseline_implicit_midpoint_with_report(
                current,
                config.tau,
                &config.params,
                &stiffness,
                &lumped,
                &config.newton,
            )
            .map(|(state, report)| {
                let d = two_level_dissipation(&stiffness, current, &state, &config.params);
                (state, d, report)
            }),
            IntegratorKind::LobattoIiia2 => baseline_lobatto_iiia2_with_report(
                current,
                config.tau,
                &config.params,
                &stiffness,
                &lumped,
                &config.newton,
            )
            .map(|(state, report)| {
                let d = two_level_dissipation(&stiffness, current, &state, &config.params);
                (state, d, report)
            }),
        };
        match step {
            Ok((mut state, dissipation, report)) => {
                // Multiplicative times keep nested grids comparable exactly.
                state.time = n as f64 * config.tau;
                ledger.record_step(
                    state.time,
                    discrete_energy(&stiffness, &lumped, &config.params, &state),
                    dissipation,
                );
                newton_iterations.push(report.iterations);
                states.push(state);
            }
            Err(Error::Degenerate { margin }) => {
                status = TerminationStatus::Degenerate { margin };
                break;
            }
            Err(Error::NewtonDiverged { residual, .. }) => {
                status = TerminationStatus::NewtonFailed { residual };
                break;
            }
            Err(Error::SingularMatrix) => {
                status = TerminationStatus::NewtonFailed { residual: f64::NAN };
                break;
            }
            Err(other) => return Err(other),
        }
    }

    let snapshots = snapshot_targets
        .into_iter()
        .filter(|&(_, idx)| idx < states.len())
        .collect();
    Ok(Trajectory {
        mesh,
        states,
        snapshots,
        ledger,
        newton_iterations,
        status,
    })
}

/// Dissipation increment for the two-level baselines (piecewise-linear
/// reconstruction in time): `α ΔψᵀKΔψ / τ`.
fn two_level_dissipation(
    stiffness: &crate::assembly::StiffnessMatrix,
    old: &State,
    new: &State,
    params: &ModelParams,
) -> f64 {
    if params.alpha == 0.0 {
        return 0.0;
    }
    let n = old.num_nodes();
    let mut dpsi = FieldVector::zeros(n);
    for i in 0..n {
        dpsi[i] = new.psi[i] - old.psi[i];
    }
    params.alpha * stiffness.bilinear(&dpsi, &dpsi) / (new.time - old.time)
}

/// Maximum over the coarse step times of the lumped norm `√⟨d, d⟩_h` of the
/// pressure difference against the reference, read off at coincident nodes
/// and times. Both grids must be nested (coarse ⊂ reference).
pub fn error_at_gridpoints(trajectory: &Trajectory, reference: &Trajectory) -> Result<f64> {
    let (cl, cr) = trajectory.mesh.domain();
    let (rl, rr) = reference.mesh.domain();
    if cl != rl || cr != rr {
        return Err(Error::NonNestedGrids(format!(
            "domains differ: ({cl}, {cr}) vs ({rl}, {rr})"
        )));
    }
    let tol = 1e-9 * (cr - cl).abs().max(1.0);
    let ref_nodes = reference.mesh.nodes();
    let mut node_map = Vec::with_capacity(trajectory.mesh.num_nodes());
    for &x in trajectory.mesh.nodes() {
        let idx = ref_nodes.partition_point(|&v| v < x - tol);
        if idx >= ref_nodes.len() || (ref_nodes[idx] - x).abs() > tol {
            return Err(Error::NonNestedGrids(format!(
                "coarse node {x} is not a reference node"
            )));
        }
        node_map.push(idx);
    }

    if reference.states.len() < 2 {
        return Err(Error::NonNestedGrids("reference has no steps".into()));
    }
    let ref_tau = reference.tau();
    let lumped = assemble_lumped_weights(&trajectory.mesh);
    let mut err = 0.0f64;
    for state in &trajectory.states {
        let ridx = (state.time / ref_tau).round() as usize;
        if ridx >= reference.states.len()
            || (reference.states[ridx].time - state.time).abs() > tol
        {
            return Err(Error::NonNestedGrids(format!(
                "coarse time {} is not a reference step time",
                state.time
            )));
        }
        let ref_p = &reference.states[ridx].p;
        let mut norm_sq = 0.0;
        for (i, &ri) in node_map.iter().enumerate() {
            let d = state.p[i] - ref_p[ri];
            norm_sq += lumped.weight(i) * d * d;
        }
        err = err.max(norm_sq.sqrt());
    }
    Ok(err)
}

/// One refinement level of a convergence study.
#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub h_tau: f64,
    pub error: f64,
    /// `log2(err_prev / err)`, absent on the first row.
    pub eoc: Option<f64>,
}

/// Reference for a convergence study: the same run with `h` and `τ` refined
/// by a further factor 4 beyond `finest`, driven by the cpg integrator.
pub fn reference_oracle(finest: &SimulationConfig) -> Result<Trajectory> {
    let mut config = finest.refined(4);
    config.integrator = IntegratorKind::Cpg;
    let trajectory = run_simulation(&config)?;
    if let Some(err) = trajectory.status.as_error() {
        return Err(err);
    }
    Ok(trajectory)
}

/// Runs `levels` simultaneous space-time refinements of `base` (halving
/// `h = τ` each level) against the two-extra-halvings reference oracle.
pub fn convergence_study(base: &SimulationConfig, levels: usize) -> Result<Vec<ConvergenceRow>> {
    if levels < 3 {
        return Err(Error::InvalidArgument(
            "a convergence study needs at least 3 levels".into(),
        ));
    }
    base.validate()?;
    let finest = base.refined(1 << (levels - 1));
    let reference = reference_oracle(&finest)?;

    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(levels);
    for level in 0..levels {
        let config = base.refined(1 << level);
        let trajectory = run_simulation(&config)?;
        if let Some(err) = trajectory.status.as_error() {
            return Err(err);
        }
        let error = error_at_gridpoints(&trajectory, &reference)?;
        let eoc = rows.last().map(|prev: &ConvergenceRow| (prev.error / error).log2());
        rows.push(ConvergenceRow {
            h_tau: config.tau,
            error,
            eoc,
        });
    }
    Ok(rows)
}

/// Energy summary of one integrator in a side-by-side comparison.
#[derive(Debug, Clone)]
pub struct IntegratorComparison {
    pub integrator: IntegratorKind,
    /// `max_n |E_h(t^n) - E_h(0)|`.
    pub max_drift: f64,
    /// `max_n |E_h(t^n) - E_h(0) + Σ d_j|`.
    pub balance_residual: f64,
    pub final_energy: f64,
}

/// Runs all three integrators on identical data and reports their energy
/// drift and dissipation-adjusted balance residual.
pub fn compare_integrators(config: &SimulationConfig) -> Result<Vec<IntegratorComparison>> {
    let mut results = Vec::with_capacity(IntegratorKind::ALL.len());
    for kind in IntegratorKind::ALL {
        let mut run_config = config.clone();
        run_config.integrator = kind;
        let trajectory = run_simulation(&run_config)?;
        if let Some(err) = trajectory.status.as_error() {
            return Err(err);
        }
        results.push(IntegratorComparison {
            integrator: kind,
            max_drift: trajectory.ledger.max_drift(),
            balance_residual: trajectory.ledger.max_balance_residual(),
            final_energy: *trajectory.ledger.energies.last().unwrap(),
        });
    }
    Ok(results)
}

/// Largest absolute spatial derivative of `u`, sampled at the element nodes.
pub fn max_abs_gradient(mesh: &Mesh1D, u: &FieldVector) -> f64 {
    let k = mesh.degree();
    let ref_nodes = mesh.reference_nodes();
    let derivs: Vec<Vec<f64>> = ref_nodes
        .iter()
        .map(|&xi| lagrange_derivatives(ref_nodes, xi))
        .collect();
    let mut worst = 0.0f64;
    for e in 0..mesh.num_elements() {
        let scale = 2.0 / mesh.element_size(e);
        for table in &derivs {
            let mut slope = 0.0;
            for l in 0..=k {
                slope += table[l] * u[mesh.global_index(e, l)];
            }
            worst = worst.max((scale * slope).abs());
        }
    }
    worst
}

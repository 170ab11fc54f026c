//! Time integrators: the energy-balancing continuous Petrov-Galerkin slab
//! scheme of order `q`, plus two standard implicit Runge-Kutta baselines.
//!
//! # The slab system
//!
//! On each slab, `ψ_h` and `p_h` are degree-`q` polynomials in time pinned to
//! the incoming state at the left end. Testing against every spatial basis
//! function and every time-test function `T ∈ P_{q-1}` gives, per test pair,
//! the two residual families
//!
//! ```text
//! R1 = ∫ [ ⟨(1-2βp_h) ∂_t p_h, T⟩_h + α ⟨∇∂_t ψ_h, ∇T⟩ + ⟨∇ψ_h, ∇T⟩ ] dt
//! R2 = ∫ ⟨(1-2βp_h) (∂_t ψ_h - p_h), T⟩_h dt
//! ```
//!
//! All time integrals are evaluated with a `2q`-point Gauss rule, which is
//! exact for every integrand above (degree at most `3q - 1`). Exactness is
//! what makes the discrete energy balance hold to roundoff: testing with
//! `∂_t ψ_h` and `∂_t p_h` telescopes the energy difference against the
//! dissipation integral with no quadrature remainder.
//!
//! For `q = 1` the slab integrals collapse to a closed-form midpoint system
//! whose second equation carries a `(β/6)(Δp)²` correction; that correction
//! is exactly what the plain implicit-midpoint baseline lacks, and dropping
//! it breaks energy conservation for `β > 0`. The sign of the correction
//! here comes from integrating `∫ (1-2βp) p dt` exactly for linear-in-time
//! `p`; the conservation tests pin it down.
//!
//! The nonlinear slab systems are solved by Newton with an analytic Jacobian
//! (the residual is quadratic in the unknowns, so the Jacobian is exact and
//! affine) and a direct banded factorization.

mod newton;
mod slab;

pub use newton::{newton_solve, NewtonConfig, NewtonReport};
pub use slab::SlabSolution;
pub(crate) use slab::TimeBasis;

use crate::assembly::{LumpedInner, StiffnessMatrix};
use crate::banded::BandedMatrix;
use crate::error::{Error, Result};
use crate::mesh::FieldVector;
use crate::model::{degeneracy_margin, ModelParams, State, DEGENERACY_THRESHOLD};

/// Unknown and residual layout of the slab system of order `q` on `n`
/// spatial nodes: entry `(i, m, f)` lives at index `i * 2q + 2 (m - 1) + f`,
/// where `m = 1..=q` counts trial time nodes (residuals: test functions
/// `l = 1..=q`) and `f` selects the field (0 = ψ / first equation,
/// 1 = p / second equation).
struct CpgSystem<'a> {
    psi0: &'a FieldVector,
    p0: &'a FieldVector,
    tau: f64,
    params: &'a ModelParams,
    stiffness: &'a StiffnessMatrix,
    lumped: &'a LumpedInner,
    basis: &'a TimeBasis,
}

/// Trial values and time derivatives of both fields at one quadrature point.
struct QuadPointValues {
    psi: Vec<f64>,
    p: Vec<f64>,
    dpsi: Vec<f64>,
    dp: Vec<f64>,
}

impl<'a> CpgSystem<'a> {
    fn num_nodes(&self) -> usize {
        self.psi0.len()
    }

    fn num_unknowns(&self) -> usize {
        2 * self.basis.q * self.num_nodes()
    }

    fn eval_at_quad(&self, x: &[f64], g: usize) -> QuadPointValues {
        let n = self.num_nodes();
        let q = self.basis.q;
        let lv = &self.basis.trial_at_quad[g];
        let ld = &self.basis.trial_deriv_at_quad[g];
        let inv_tau = 1.0 / self.tau;
        let mut vals = QuadPointValues {
            psi: vec![0.0; n],
            p: vec![0.0; n],
            dpsi: vec![0.0; n],
            dp: vec![0.0; n],
        };
        for i in 0..n {
            let base = i * 2 * q;
            let mut psi = lv[0] * self.psi0[i];
            let mut dpsi = ld[0] * self.psi0[i];
            let mut p = lv[0] * self.p0[i];
            let mut dp = ld[0] * self.p0[i];
            for m in 1..=q {
                let xpsi = x[base + 2 * (m - 1)];
                let xp = x[base + 2 * (m - 1) + 1];
                psi += lv[m] * xpsi;
                dpsi += ld[m] * xpsi;
                p += lv[m] * xp;
                dp += ld[m] * xp;
            }
            vals.psi[i] = psi;
            vals.p[i] = p;
            vals.dpsi[i] = dpsi * inv_tau;
            vals.dp[i] = dp * inv_tau;
        }
        vals
    }

    /// Degeneracy margins at the iterate's time-node values and, for
    /// `q >= 2`, at the quadrature evaluations (which are no longer convex
    /// combinations of node values).
    fn check_margins(&self, x: &[f64]) -> Result<()> {
        let n = self.num_nodes();
        let q = self.basis.q;
        let two_beta = 2.0 * self.params.beta;
        let mut margin = f64::INFINITY;
        for i in 0..n {
            for m in 1..=q {
                margin = margin.min(1.0 - two_beta * x[i * 2 * q + 2 * (m - 1) + 1]);
            }
        }
        if q >= 2 {
            for g in 0..self.basis.quad_nodes.len() {
                let vals = self.eval_at_quad(x, g);
                for &p in &vals.p {
                    margin = margin.min(1.0 - two_beta * p);
                }
            }
        }
        if margin <= DEGENERACY_THRESHOLD {
            return Err(Error::Degenerate { margin });
        }
        Ok(())
    }

    fn residual(&self, x: &[f64], out: &mut [f64]) {
        let n = self.num_nodes();
        let q = self.basis.q;
        let alpha = self.params.alpha;
        let two_beta = 2.0 * self.params.beta;
        out.fill(0.0);
        let mut k_psi = vec![0.0; n];
        let mut k_dpsi = vec![0.0; n];
        for g in 0..self.basis.quad_nodes.len() {
            let vals = self.eval_at_quad(x, g);
            self.stiffness.apply(&vals.psi, &mut k_psi);
            if alpha != 0.0 {
                self.stiffness.apply(&vals.dpsi, &mut k_dpsi);
            }
            let tw = self.tau * self.basis.quad_weights[g];
            for i in 0..n {
                let wi = self.lumped.weight(i);
                let c = 1.0 - two_beta * vals.p[i];
                let mut r1 = wi * c * vals.dp[i] + k_psi[i];
                if alpha != 0.0 {
                    r1 += alpha * k_dpsi[i];
                }
                let r2 = wi * c * (vals.dpsi[i] - vals.p[i]);
                let base = i * 2 * q;
                for l in 0..q {
                    let t = tw * self.basis.test_at_quad[g][l];
                    out[base + 2 * l] += t * r1;
                    out[base + 2 * l + 1] += t * r2;
                }
            }
        }
    }

    fn jacobian(&self, x: &[f64]) -> BandedMatrix {
        let n = self.num_nodes();
        let q = self.basis.q;
        let k = self.stiffness.half_bandwidth();
        let alpha = self.params.alpha;
        let beta = self.params.beta;
        let two_beta = 2.0 * beta;
        let bw = 2 * q * (k + 1) - 1;
        let mut jac = BandedMatrix::zeros(self.num_unknowns(), bw, bw);
        for g in 0..self.basis.quad_nodes.len() {
            let vals = self.eval_at_quad(x, g);
            let tw = self.tau * self.basis.quad_weights[g];
            for l in 0..q {
                let t = tw * self.basis.test_at_quad[g][l];
                for m in 1..=q {
                    let lv = self.basis.trial_at_quad[g][m];
                    let ldt = self.basis.trial_deriv_at_quad[g][m] / self.tau;
                    // Coefficient multiplying K entries in dR1/dψ.
                    let c_stiff = t * (alpha * ldt + lv);
                    for i in 0..n {
                        let wi = self.lumped.weight(i);
                        let c = 1.0 - two_beta * vals.p[i];
                        let row1 = i * 2 * q + 2 * l;
                        let row2 = row1 + 1;
                        let col_psi = i * 2 * q + 2 * (m - 1);
                        let col_p = col_psi + 1;
                        jac.add(row1, col_p, t * wi * (c * ldt - two_beta * lv * vals.dp[i]));
                        jac.add(row2, col_psi, t * wi * c * ldt);
                        jac.add(
                            row2,
                            col_p,
                            t * wi * (-two_beta * lv * (vals.dpsi[i] - vals.p[i]) - c * lv),
                        );
                        for j in i.saturating_sub(k)..=(i + k).min(n - 1) {
                            let kij = self.stiffness.get(i, j);
                            if kij != 0.0 {
                                jac.add(row1, j * 2 * q + 2 * (m - 1), c_stiff * kij);
                            }
                        }
                    }
                }
            }
        }
        jac
    }
}

fn flatten_slab(slab: &SlabSolution) -> Vec<f64> {
    let q = slab.order();
    let n = slab.psi_node(0).len();
    let mut x = vec![0.0; 2 * q * n];
    for m in 1..=q {
        let psi = slab.psi_node(m);
        let p = slab.p_node(m);
        for i in 0..n {
            x[i * 2 * q + 2 * (m - 1)] = psi[i];
            x[i * 2 * q + 2 * (m - 1) + 1] = p[i];
        }
    }
    x
}

/// Residual of the slab system evaluated at a full slab guess, in the layout
/// described on [`cpg_jacobian`]. No degeneracy guard is applied here.
pub fn cpg_residual(
    slab: &SlabSolution,
    params: &ModelParams,
    stiffness: &StiffnessMatrix,
    lumped: &LumpedInner,
) -> Vec<f64> {
    let basis = TimeBasis::new(slab.order());
    let sys = CpgSystem {
        psi0: slab.psi_node(0),
        p0: slab.p_node(0),
        tau: slab.tau(),
        params,
        stiffness,
        lumped,
        basis: &basis,
    };
    let x = flatten_slab(slab);
    let mut out = vec![0.0; x.len()];
    sys.residual(&x, &mut out);
    out
}

/// Exact derivative of [`cpg_residual`] with respect to the slab unknowns.
///
/// Unknown `(i, m, f)` — spatial node `i`, trial time node `m = 1..=q`,
/// field `f` (0 = ψ, 1 = p) — sits at column `i * 2q + 2 (m - 1) + f`;
/// residual `(i, l, f)` for test index `l = 1..=q` uses the same formula for
/// its row. The β terms are quadratic, so this Jacobian is affine in the
/// guess and exact.
pub fn cpg_jacobian(
    slab: &SlabSolution,
    params: &ModelParams,
    stiffness: &StiffnessMatrix,
    lumped: &LumpedInner,
) -> BandedMatrix {
    let basis = TimeBasis::new(slab.order());
    let sys = CpgSystem {
        psi0: slab.psi_node(0),
        p0: slab.p_node(0),
        tau: slab.tau(),
        params,
        stiffness,
        lumped,
        basis: &basis,
    };
    sys.jacobian(&flatten_slab(slab))
}

fn check_incoming_margin(state: &State, params: &ModelParams) -> Result<()> {
    let margin = degeneracy_margin(&state.p, params);
    if margin <= DEGENERACY_THRESHOLD {
        return Err(Error::Degenerate { margin });
    }
    Ok(())
}

/// One slab of the order-`q` scheme. Returns the end state together with the
/// full slab solution (needed for the dissipation integral) and the Newton
/// convergence record.
pub fn step_cpg_with_report(
    state: &State,
    tau: f64,
    q: usize,
    params: &ModelParams,
    stiffness: &StiffnessMatrix,
    lumped: &LumpedInner,
    cfg: &NewtonConfig,
) -> Result<(State, SlabSolution, NewtonReport)> {
    assert!(q >= 1, "time order must be >= 1");
    assert!(tau != 0.0, "time step must be nonzero");
    check_incoming_margin(state, params)?;
    let basis = TimeBasis::new(q);
    let sys = CpgSystem {
        psi0: &state.psi,
        p0: &state.p,
        tau,
        params,
        stiffness,
        lumped,
        basis: &basis,
    };
    let n = state.num_nodes();
    // Constant-in-time extrapolation of the incoming state.
    let mut x = vec![0.0; sys.num_unknowns()];
    for i in 0..n {
        for m in 0..q {
            x[i * 2 * q + 2 * m] = state.psi[i];
            x[i * 2 * q + 2 * m + 1] = state.p[i];
        }
    }
    let report = newton_solve(
        &mut x,
        |x, out| {
            sys.check_margins(x)?;
            sys.residual(x, out);
            Ok(())
        },
        |x| Ok(sys.jacobian(x)),
        cfg,
    )?;
    let slab = SlabSolution::from_flat(state, tau, q, &x);
    Ok((slab.end_state(), slab, report))
}

/// One slab of the order-`q` scheme.
pub fn step_cpg(
    state: &State,
    tau: f64,
    q: usize,
    params: &ModelParams,
    stiffness: &StiffnessMatrix,
    lumped: &LumpedInner,
    cfg: &NewtonConfig,
) -> Result<(State, SlabSolution)> {
    step_cpg_with_report(state, tau, q, params, stiffness, lumped, cfg)
        .map(|(s, slab, _)| (s, slab))
}

/// Shared driver for the three two-level steppers below; unknowns are
/// `y[2i] = ψ_i`, `y[2i + 1] = p_i` at the new time level.
fn solve_two_level<R, J>(
    state: &State,
    tau: f64,
    residual: R,
    jacobian: J,
    cfg: &NewtonConfig,
) -> Result<(State, NewtonReport)>
where
    R: FnMut(&[f64], &mut [f64]) -> Result<()>,
    J: FnMut(&[f64]) -> Result<BandedMatrix>,
{
    let n = state.num_nodes();
    let mut y = vec![0.0; 2 * n];
    for i in 0..n {
        y[2 * i] = state.psi[i];
        y[2 * i + 1] = state.p[i];
    }
    let report = newton_solve(&mut y, residual, jacobian, cfg)?;
    let mut psi = FieldVector::zeros(n);
    let mut p = FieldVector::zeros(n);
    for i in 0..n {
        psi[i] = y[2 * i];
        p[i] = y[2 * i + 1];
    }
    Ok((State::new(psi, p, state.time + tau), report))
}

fn margin_of(values: impl Iterator<Item = f64>, beta: f64) -> f64 {
    values
        .map(|p| 1.0 - 2.0 * beta * p)
        .fold(f64::INFINITY, f64::min)
}

/// Closed-form `q = 1` update, obtained by integrating the slab system
/// exactly: midpoint-coefficient matrices plus the `(β/6)(Δp)²` correction
/// in the second equation.
pub fn step_q1_with_report(
    state: &State,
    tau: f64,
    params: &ModelParams,
    stiffness: &StiffnessMatrix,
    lumped: &LumpedInner,
    cfg: &NewtonConfig,
) -> Result<(State, NewtonReport)> {
    assert!(tau != 0.0);
    check_incoming_margin(state, params)?;
    let n = state.num_nodes();
    let k = stiffness.half_bandwidth();
    let (alpha, beta) = (params.alpha, params.beta);
    let two_beta = 2.0 * beta;

    let residual = |y: &[f64], out: &mut [f64]| -> Result<()> {
        let margin = margin_of((0..n).map(|i| y[2 * i + 1]), beta).min(margin_of(
            (0..n).map(|i| 0.5 * (y[2 * i + 1] + state.p[i])),
            beta,
        ));
        if margin <= DEGENERACY_THRESHOLD {
            return Err(Error::Degenerate { margin });
        }
        let mut dpsi = vec![0.0; n];
        let mut psibar = vec![0.0; n];
        for i in 0..n {
            dpsi[i] = y[2 * i] - state.psi[i];
            psibar[i] = 0.5 * (y[2 * i] + state.psi[i]);
        }
        let mut k_dpsi = vec![0.0; n];
        let mut k_psibar = vec![0.0; n];
        stiffness.apply(&dpsi, &mut k_dpsi);
        stiffness.apply(&psibar, &mut k_psibar);
        for i in 0..n {
            let dp = y[2 * i + 1] - state.p[i];
            let pbar = 0.5 * (y[2 * i + 1] + state.p[i]);
            let c = 1.0 - two_beta * pbar;
            let wi = lumped.weight(i);
            out[2 * i] = wi * c * dp + alpha * k_dpsi[i] + tau * k_psibar[i];
            out[2 * i + 1] =
                wi * (c * (dpsi[i] - tau * pbar) + tau * (beta / 6.0) * dp * dp);
        }
        Ok(())
    };

    let jacobian = |y: &[f64]| -> Result<BandedMatrix> {
        let mut jac = BandedMatrix::zeros(2 * n, 2 * k + 1, 2 * k + 1);
        for i in 0..n {
            let dp = y[2 * i + 1] - state.p[i];
            let pbar = 0.5 * (y[2 * i + 1] + state.p[i]);
            let dpsi = y[2 * i] - state.psi[i];
            let c = 1.0 - two_beta * pbar;
            let wi = lumped.weight(i);
            jac.add(2 * i, 2 * i + 1, wi * (c - beta * dp));
            jac.add(2 * i + 1, 2 * i, wi * c);
            jac.add(
                2 * i + 1,
                2 * i + 1,
                wi * (-beta * (dpsi - tau * pbar) - 0.5 * tau * c + tau * (beta / 3.0) * dp),
            );
            for j in i.saturating_sub(k)..=(i + k).min(n - 1) {
                let kij = stiffness.get(i, j);
                if kij != 0.0 {
                    jac.add(2 * i, 2 * j, (alpha + 0.5 * tau) * kij);
                }
            }
        }
        Ok(jac)
    };

    solve_two_level(state, tau, residual, jacobian, cfg)
}

/// Closed-form `q = 1` update; see [`step_q1_with_report`].
pub fn step_q1(
    state: &State,
    tau: f64,
    params: &ModelParams,
    stiffness: &StiffnessMatrix,
    lumped: &LumpedInner,
    cfg: &NewtonConfig,
) -> Result<State> {
    step_q1_with_report(state, tau, params, stiffness, lumped, cfg).map(|(s, _)| s)
}

/// Implicit midpoint (one-stage Gauss-Runge-Kutta): the `q = 1` system with
/// the nonlinearity evaluated only at the midpoint, i.e. without the
/// `(β/6)(Δp)²` correction. Not exactly energy-conserving for `β > 0`.
pub fn baseline_implicit_midpoint_with_report(
    state: &State,
    tau: f64,
    params: &ModelParams,
    stiffness: &StiffnessMatrix,
    lumped: &LumpedInner,
    cfg: &NewtonConfig,
) -> Result<(State, NewtonReport)> {
    assert!(tau != 0.0);
    check_incoming_margin(state, params)?;
    let n = state.num_nodes();
    let k = stiffness.half_bandwidth();
    let (alpha, beta) = (params.alpha, params.beta);
    let two_beta = 2.0 * beta;

    let residual = |y: &[f64], out: &mut [f64]| -> Result<()> {
        let margin = margin_of((0..n).map(|i| y[2 * i + 1]), beta).min(margin_of(
            (0..n).map(|i| 0.5 * (y[2 * i + 1] + state.p[i])),
            beta,
        ));
        if margin <= DEGENERACY_THRESHOLD {
            return Err(Error::Degenerate { margin });
        }
        let mut dpsi = vec![0.0; n];
        let mut psibar = vec![0.0; n];
        for i in 0..n {
            dpsi[i] = y[2 * i] - state.psi[i];
            psibar[i] = 0.5 * (y[2 * i] + state.psi[i]);
        }
        let mut k_dpsi = vec![0.0; n];
        let mut k_psibar = vec![0.0; n];
        stiffness.apply(&dpsi, &mut k_dpsi);
        stiffness.apply(&psibar, &mut k_psibar);
        for i in 0..n {
            let dp = y[2 * i + 1] - state.p[i];
            let pbar = 0.5 * (y[2 * i + 1] + state.p[i]);
            let c = 1.0 - two_beta * pbar;
            let wi = lumped.weight(i);
            out[2 * i] = wi * c * dp + alpha * k_dpsi[i] + tau * k_psibar[i];
            out[2 * i + 1] = wi * c * (dpsi[i] - tau * pbar);
        }
        Ok(())
    };

    let jacobian = |y: &[f64]| -> Result<BandedMatrix> {
        let mut jac = BandedMatrix::zeros(2 * n, 2 * k + 1, 2 * k + 1);
        for i in 0..n {
            let dp = y[2 * i + 1] - state.p[i];
            let pbar = 0.5 * (y[2 * i + 1] + state.p[i]);
            let dpsi = y[2 * i] - state.psi[i];
            let c = 1.0 - two_beta * pbar;
            let wi = lumped.weight(i);
            jac.add(2 * i, 2 * i + 1, wi * (c - beta * dp));
            jac.add(2 * i + 1, 2 * i, wi * c);
            jac.add(
                2 * i + 1,
                2 * i + 1,
                wi * (-beta * (dpsi - tau * pbar) - 0.5 * tau * c),
            );
            for j in i.saturating_sub(k)..=(i + k).min(n - 1) {
                let kij = stiffness.get(i, j);
                if kij != 0.0 {
                    jac.add(2 * i, 2 * j, (alpha + 0.5 * tau) * kij);
                }
            }
        }
        Ok(jac)
    };

    solve_two_level(state, tau, residual, jacobian, cfg)
}

/// Implicit midpoint baseline; see [`baseline_implicit_midpoint_with_report`].
pub fn baseline_implicit_midpoint(
    state: &State,
    tau: f64,
    params: &ModelParams,
    stiffness: &StiffnessMatrix,
    lumped: &LumpedInner,
    cfg: &NewtonConfig,
) -> Result<State> {
    baseline_implicit_midpoint_with_report(state, tau, params, stiffness, lumped, cfg)
        .map(|(s, _)| s)
}

/// Two-stage Lobatto-IIIA (trapezoidal rule) applied to the explicit form of
/// the first-order system: averages the full right-hand side
///
/// ```text
/// ψ̇ = p,    ṗ = -D(1-2βp)⁻¹ K (ψ + α p)
/// ```
///
/// at the two endpoints. For `β = 0` this coincides with the `q = 1` scheme;
/// for `β > 0` its energy drifts.
pub fn baseline_lobatto_iiia2_with_report(
    state: &State,
    tau: f64,
    params: &ModelParams,
    stiffness: &StiffnessMatrix,
    lumped: &LumpedInner,
    cfg: &NewtonConfig,
) -> Result<(State, NewtonReport)> {
    assert!(tau != 0.0);
    check_incoming_margin(state, params)?;
    let n = state.num_nodes();
    let k = stiffness.half_bandwidth();
    let (alpha, beta) = (params.alpha, params.beta);
    let two_beta = 2.0 * beta;

    // Right-hand side at the incoming state, computed once.
    let mut flux0 = vec![0.0; n];
    {
        let mut arg = vec![0.0; n];
        for i in 0..n {
            arg[i] = state.psi[i] + alpha * state.p[i];
        }
        let mut k_arg = vec![0.0; n];
        stiffness.apply(&arg, &mut k_arg);
        for i in 0..n {
            let c0 = 1.0 - two_beta * state.p[i];
            flux0[i] = k_arg[i] / (lumped.weight(i) * c0);
        }
    }

    let residual = |y: &[f64], out: &mut [f64]| -> Result<()> {
        let margin = margin_of((0..n).map(|i| y[2 * i + 1]), beta);
        if margin <= DEGENERACY_THRESHOLD {
            return Err(Error::Degenerate { margin });
        }
        let mut arg = vec![0.0; n];
        for i in 0..n {
            arg[i] = y[2 * i] + alpha * y[2 * i + 1];
        }
        let mut k_arg = vec![0.0; n];
        stiffness.apply(&arg, &mut k_arg);
        for i in 0..n {
            let c1 = 1.0 - two_beta * y[2 * i + 1];
            let flux1 = k_arg[i] / (lumped.weight(i) * c1);
            out[2 * i] = (y[2 * i] - state.psi[i])
                - 0.5 * tau * (state.p[i] + y[2 * i + 1]);
            out[2 * i + 1] =
                (y[2 * i + 1] - state.p[i]) + 0.5 * tau * (flux0[i] + flux1);
        }
        Ok(())
    };

    let jacobian = |y: &[f64]| -> Result<BandedMatrix> {
        let mut jac = BandedMatrix::zeros(2 * n, 2 * k + 1, 2 * k + 1);
        let mut arg = vec![0.0; n];
        for i in 0..n {
            arg[i] = y[2 * i] + alpha * y[2 * i + 1];
        }
        let mut k_arg = vec![0.0; n];
        stiffness.apply(&arg, &mut k_arg);
        for i in 0..n {
            let c1 = 1.0 - two_beta * y[2 * i + 1];
            let denom = lumped.weight(i) * c1;
            jac.add(2 * i, 2 * i, 1.0);
            jac.add(2 * i, 2 * i + 1, -0.5 * tau);
            jac.add(2 * i + 1, 2 * i + 1, 1.0);
            // d(1/c1)/dp = 2β / c1².
            jac.add(
                2 * i + 1,
                2 * i + 1,
                0.5 * tau * k_arg[i] * two_beta / (denom * c1),
            );
            for j in i.saturating_sub(k)..=(i + k).min(n - 1) {
                let kij = stiffness.get(i, j);
                if kij != 0.0 {
                    jac.add(2 * i + 1, 2 * j, 0.5 * tau * kij / denom);
                    if alpha != 0.0 {
                        jac.add(2 * i + 1, 2 * j + 1, 0.5 * tau * alpha * kij / denom);
                    }
                }
            }
        }
        Ok(jac)
    };

    solve_two_level(state, tau, residual, jacobian, cfg)
}

/// Lobatto-IIIA baseline; see [`baseline_lobatto_iiia2_with_report`].
pub fn baseline_lobatto_iiia2(
    state: &State,
    tau: f64,
    params: &ModelParams,
    stiffness: &StiffnessMatrix,
    lumped: &LumpedInner,
    cfg: &NewtonConfig,
) -> Result<State> {
    baseline_lobatto_iiia2_with_report(state, tau, params, stiffness, lumped, cfg)
        .map(|(s, _)| s)
}

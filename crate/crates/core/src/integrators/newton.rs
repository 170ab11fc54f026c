//! Newton iteration with a direct banded solve per step.

use crate::banded::BandedMatrix;
use crate::error::{Error, Result};

/// Stopping parameters for the slab Newton solves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    /// Converged once `‖R‖ <= abs_tol + rel_tol * ‖R(x0)‖`, where `‖·‖` is
    /// the root-mean-square norm (the L2 norm scaled by `1/√N`), so the
    /// absolute tolerance keeps its meaning for any system size.
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_iter: 50,
        }
    }
}

/// Convergence record of one Newton solve.
#[derive(Debug, Clone)]
pub struct NewtonReport {
    pub iterations: usize,
    /// `‖R‖` before the first update and after every iteration.
    pub residual_norms: Vec<f64>,
}

fn rms_norm(v: &[f64]) -> f64 {
    (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt()
}

/// Solves `R(x) = 0` in place by `x ← x - J(x)⁻¹ R(x)` with a banded LU
/// factorization of the Jacobian. An input that already satisfies the
/// tolerance returns after zero iterations.
pub fn newton_solve<R, J>(
    x: &mut [f64],
    mut residual: R,
    mut jacobian: J,
    cfg: &NewtonConfig,
) -> Result<NewtonReport>
where
    R: FnMut(&[f64], &mut [f64]) -> Result<()>,
    J: FnMut(&[f64]) -> Result<BandedMatrix>,
{
    let mut r = vec![0.0; x.len()];
    residual(x, &mut r)?;
    let norm0 = rms_norm(&r);
    let tol = cfg.abs_tol + cfg.rel_tol * norm0;
    let mut residual_norms = vec![norm0];
    if norm0 <= tol {
        return Ok(NewtonReport {
            iterations: 0,
            residual_norms,
        });
    }
    for iterations in 1..=cfg.max_iter {
        let lu = jacobian(x)?.factor()?;
        for v in r.iter_mut() {
            *v = -*v;
        }
        lu.solve_in_place(&mut r);
        for (xi, di) in x.iter_mut().zip(&r) {
            *xi += di;
        }
        residual(x, &mut r)?;
        let norm = rms_norm(&r);
        residual_norms.push(norm);
        if norm <= tol {
            return Ok(NewtonReport {
                iterations,
                residual_norms,
            });
        }
    }
    Err(Error::NewtonDiverged {
        iterations: cfg.max_iter,
        residual: *residual_norms.last().unwrap(),
    })
}

//! Error type shared across mesh construction, assembly, and time stepping.

use std::fmt;

/// Errors reported by the solver.
///
/// Dimension mismatches between vectors and operators built for the same mesh
/// are programmer errors and panic instead of returning a variant.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A constructor or operation received an argument outside its domain.
    InvalidArgument(String),
    /// A point evaluation was requested outside the mesh interval.
    OutOfDomain { x: f64, left: f64, right: f64 },
    /// The factor (1 - 2 beta p) dropped to or below the degeneracy
    /// threshold, so the equation loses its evolution character.
    Degenerate { margin: f64 },
    /// Newton iteration exhausted its budget without meeting the tolerance.
    NewtonDiverged { iterations: usize, residual: f64 },
    /// A banded factorization encountered a zero pivot column.
    SingularMatrix,
    /// Gridpoint error comparison requires the coarse node set and time grid
    /// to be subsets of the reference ones.
    NonNestedGrids(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::OutOfDomain { x, left, right } => {
                write!(f, "point {x} outside domain [{left}, {right}]")
            }
            Error::Degenerate { margin } => {
                write!(f, "degeneracy: min(1 - 2 beta p) = {margin:e}")
            }
            Error::NewtonDiverged {
                iterations,
                residual,
            } => write!(
                f,
                "Newton did not converge in {iterations} iterations (residual {residual:e})"
            ),
            Error::SingularMatrix => write!(f, "singular banded matrix"),
            Error::NonNestedGrids(msg) => write!(f, "non-nested grids: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

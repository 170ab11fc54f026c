//! Shared fixtures for the solver benchmarks.

use westervelt::{
    assemble_lumped_weights, assemble_stiffness, FieldVector, LumpedInner, Mesh1D, ModelParams,
    State, StiffnessMatrix,
};

pub struct Fixture {
    pub mesh: Mesh1D,
    pub stiffness: StiffnessMatrix,
    pub lumped: LumpedInner,
    pub params: ModelParams,
    pub state: State,
}

/// The standard experiment setup: Gaussian pressure pulse on (0, 16) with
/// beta = 0.3, at a configurable resolution.
pub fn gaussian_fixture(elements: usize, degree: usize) -> Fixture {
    let mesh = Mesh1D::uniform(0.0, 16.0, elements, degree).unwrap();
    let stiffness = assemble_stiffness(&mesh);
    let lumped = assemble_lumped_weights(&mesh);
    let state = State::new(
        FieldVector::zeros(mesh.num_nodes()),
        mesh.interpolate(|x| (-0.2 * x * x).exp()),
        0.0,
    );
    Fixture {
        mesh,
        stiffness,
        lumped,
        params: ModelParams::new(0.0, 0.3).unwrap(),
        state,
    }
}

//! 1D finite element mesh with a Gauss-Lobatto nodal layout.
//!
//! The space is the usual `H^1`-conforming space of continuous piecewise
//! polynomials of degree `k` on an interval partition. Within each element
//! the `k + 1` nodes sit at the Gauss-Lobatto points, so nodal quadrature
//! (`assembly::assemble_lumped_weights`) has strictly positive weights for
//! every degree; interface nodes are shared between neighbouring elements.

use crate::error::{Error, Result};
use crate::quadrature::{gauss_lobatto, lagrange_values};

/// Interval mesh carrying the nodal layout of the degree-`k` element space.
#[derive(Debug, Clone)]
pub struct Mesh1D {
    domain_left: f64,
    domain_right: f64,
    num_elements: usize,
    degree: usize,
    element_boundaries: Vec<f64>,
    nodes: Vec<f64>,
    /// Gauss-Lobatto points on [-1, 1], shared by every element.
    reference_nodes: Vec<f64>,
}

impl Mesh1D {
    /// Uniform mesh of `num_elements` elements of degree `k` on `(a, b)`.
    pub fn uniform(a: f64, b: f64, num_elements: usize, k: usize) -> Result<Self> {
        if !(a < b) {
            return Err(Error::InvalidArgument(format!(
                "domain must satisfy a < b, got ({a}, {b})"
            )));
        }
        let h = (b - a) / num_elements as f64;
        let boundaries: Vec<f64> = (0..=num_elements)
            .map(|e| {
                if e == num_elements {
                    b
                } else {
                    a + e as f64 * h
                }
            })
            .collect();
        Self::from_boundaries(boundaries, k)
    }

    /// Mesh from an explicit, strictly increasing boundary sequence.
    pub fn from_boundaries(element_boundaries: Vec<f64>, k: usize) -> Result<Self> {
        if element_boundaries.len() < 2 {
            return Err(Error::InvalidArgument(
                "need at least one element".into(),
            ));
        }
        if k < 1 {
            return Err(Error::InvalidArgument("degree must be >= 1".into()));
        }
        if element_boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "element boundaries must be strictly increasing".into(),
            ));
        }
        let num_elements = element_boundaries.len() - 1;
        let reference_nodes = gauss_lobatto(k + 1).nodes;
        let mut nodes = Vec::with_capacity(num_elements * k + 1);
        nodes.push(element_boundaries[0]);
        for e in 0..num_elements {
            let (xl, xr) = (element_boundaries[e], element_boundaries[e + 1]);
            let mid = 0.5 * (xl + xr);
            let half = 0.5 * (xr - xl);
            for &xi in &reference_nodes[1..k] {
                nodes.push(mid + half * xi);
            }
            // Pin the interface node to the boundary value exactly.
            nodes.push(xr);
        }
        Ok(Mesh1D {
            domain_left: element_boundaries[0],
            domain_right: element_boundaries[num_elements],
            num_elements,
            degree: k,
            element_boundaries,
            nodes,
            reference_nodes,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.domain_left, self.domain_right)
    }

    pub fn num_elements(&self) -> usize {
        self.num_elements
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of global nodes, `num_elements * k + 1`.
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Global node coordinates, strictly increasing.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn element_boundaries(&self) -> &[f64] {
        &self.element_boundaries
    }

    /// Gauss-Lobatto reference nodes on [-1, 1] (`k + 1` of them).
    pub fn reference_nodes(&self) -> &[f64] {
        &self.reference_nodes
    }

    /// Width of element `e`.
    pub fn element_size(&self, e: usize) -> f64 {
        self.element_boundaries[e + 1] - self.element_boundaries[e]
    }

    /// Global index of local node `l` of element `e`.
    pub fn global_index(&self, e: usize, l: usize) -> usize {
        e * self.degree + l
    }

    /// Nodal interpolant of `f`.
    pub fn interpolate(&self, f: impl Fn(f64) -> f64) -> FieldVector {
        FieldVector::new(self.nodes.iter().map(|&x| f(x)).collect())
    }

    /// Evaluates the piecewise-polynomial interpolant of `u` at `x`.
    pub fn evaluate(&self, u: &FieldVector, x: f64) -> Result<f64> {
        assert_eq!(u.len(), self.num_nodes(), "field/mesh size mismatch");
        let e = self.locate_element(x)?;
        let (xl, xr) = (
            self.element_boundaries[e],
            self.element_boundaries[e + 1],
        );
        let xi = (2.0 * x - xl - xr) / (xr - xl);
        let basis = lagrange_values(&self.reference_nodes, xi);
        let base = self.global_index(e, 0);
        Ok(basis
            .iter()
            .enumerate()
            .map(|(l, &b)| b * u[base + l])
            .sum())
    }

    fn locate_element(&self, x: f64) -> Result<usize> {
        if x < self.domain_left || x > self.domain_right {
            return Err(Error::OutOfDomain {
                x,
                left: self.domain_left,
                right: self.domain_right,
            });
        }
        // partition_point returns the first boundary > x; the element left of
        // it contains x. The right endpoint falls into the last element.
        let idx = self.element_boundaries.partition_point(|&b| b <= x);
        Ok(idx.saturating_sub(1).min(self.num_elements - 1))
    }
}

/// Nodal coefficients of a function in the element space, one per global node.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldVector {
    values: Vec<f64>,
}

impl FieldVector {
    pub fn new(values: Vec<f64>) -> Self {
        FieldVector { values }
    }

    pub fn zeros(n: usize) -> Self {
        FieldVector {
            values: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.values.iter()
    }

    /// Maximum absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl std::ops::Index<usize> for FieldVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

impl std::ops::IndexMut<usize> for FieldVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.values[i]
    }
}

impl From<Vec<f64>> for FieldVector {
    fn from(values: Vec<f64>) -> Self {
        FieldVector { values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn linear_mesh_nodes_are_boundaries() {
        let mesh = Mesh1D::uniform(0.0, 2.0, 2, 1).unwrap();
        assert_eq!(mesh.nodes(), &[0.0, 1.0, 2.0]);
    }

    #[test]
    fn quadratic_mesh_node_count() {
        let mesh = Mesh1D::uniform(0.0, 16.0, 64, 2).unwrap();
        assert_eq!(mesh.num_nodes(), 129);
        // Interior element midpoints are nodes.
        assert!(mesh.nodes().contains(&0.125));
    }

    #[test]
    fn single_quadratic_element_nodes() {
        let mesh = Mesh1D::uniform(0.0, 1.0, 1, 2).unwrap();
        assert_eq!(mesh.nodes(), &[0.0, 0.5, 1.0]);
    }

    #[test]
    fn invalid_arguments_rejected() {
        assert!(Mesh1D::uniform(1.0, 0.0, 4, 1).is_err());
        assert!(Mesh1D::uniform(0.0, 1.0, 2, 0).is_err());
        assert!(Mesh1D::from_boundaries(vec![0.0], 1).is_err());
        assert!(Mesh1D::from_boundaries(vec![0.0, 0.0, 1.0], 1).is_err());
    }

    #[test]
    fn node_layout_invariants_sweep() {
        for num_elements in 1..=8 {
            for k in 1..=4 {
                let mesh = Mesh1D::uniform(-1.0, 3.0, num_elements, k).unwrap();
                assert_eq!(mesh.num_nodes(), num_elements * k + 1);
                assert!(mesh.nodes().windows(2).all(|w| w[0] < w[1]));
                assert_eq!(mesh.nodes()[0], -1.0);
                assert_eq!(*mesh.nodes().last().unwrap(), 3.0);
                for e in 0..num_elements {
                    let first = mesh.global_index(e, 0);
                    let last = mesh.global_index(e, k);
                    assert_eq!(mesh.nodes()[first], mesh.element_boundaries()[e]);
                    assert_eq!(mesh.nodes()[last], mesh.element_boundaries()[e + 1]);
                }
            }
        }
    }

    #[test]
    fn interpolation_is_nodal() {
        let mesh = Mesh1D::uniform(0.0, 2.0, 2, 1).unwrap();
        let u = mesh.interpolate(|x| x);
        assert_eq!(u.as_slice(), &[0.0, 1.0, 2.0]);
        let z = mesh.interpolate(|_| 0.0);
        assert!(z.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn interpolate_gaussian_samples_nodewise() {
        let mesh = Mesh1D::uniform(0.0, 16.0, 16, 2).unwrap();
        let u = mesh.interpolate(|x| (-0.2 * x * x).exp());
        for (i, &x) in mesh.nodes().iter().enumerate() {
            assert_eq!(u[i], (-0.2 * x * x).exp());
        }
    }

    #[test]
    fn evaluate_reproduces_linear_interpolation() {
        let mesh = Mesh1D::uniform(0.0, 1.0, 1, 1).unwrap();
        let u = FieldVector::new(vec![0.0, 1.0]);
        assert!((mesh.evaluate(&u, 0.25).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn evaluate_at_nodes_returns_coefficients() {
        let mesh = Mesh1D::uniform(0.0, 2.0, 3, 3).unwrap();
        let u = mesh.interpolate(|x| x.sin());
        for (i, &x) in mesh.nodes().iter().enumerate() {
            assert!((mesh.evaluate(&u, x).unwrap() - u[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn evaluate_rejects_out_of_domain() {
        let mesh = Mesh1D::uniform(0.0, 1.0, 2, 1).unwrap();
        let u = FieldVector::zeros(3);
        assert!(matches!(
            mesh.evaluate(&u, -0.1),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            mesh.evaluate(&u, 1.1),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn partition_of_unity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for k in 1..=4 {
            let mesh = Mesh1D::uniform(0.0, 16.0, 9, k).unwrap();
            let ones = mesh.interpolate(|_| 1.0);
            for _ in 0..100 {
                let x = rng.gen_range(0.0..16.0);
                assert!((mesh.evaluate(&ones, x).unwrap() - 1.0).abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn reproduces_polynomials_of_element_degree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for k in 1..=4usize {
            let mesh = Mesh1D::uniform(-2.0, 3.0, 5, k).unwrap();
            let coeffs: Vec<f64> =
                (0..=k).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let poly = |x: f64| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, c)| c * x.powi(j as i32))
                    .sum::<f64>()
            };
            let u = mesh.interpolate(poly);
            for _ in 0..50 {
                let x = rng.gen_range(-2.0..3.0);
                let exact = poly(x);
                let diff = (mesh.evaluate(&u, x).unwrap() - exact).abs();
                assert!(diff <= 1e-12 * exact.abs().max(1.0));
            }
        }
    }

    #[test]
    fn non_uniform_boundaries_supported() {
        let mesh = Mesh1D::from_boundaries(vec![0.0, 0.1, 0.5, 2.0], 2).unwrap();
        assert_eq!(mesh.num_nodes(), 7);
        assert!((mesh.element_size(2) - 1.5).abs() < 1e-15);
        let u = mesh.interpolate(|x| x * x);
        assert!((mesh.evaluate(&u, 1.3).unwrap() - 1.69).abs() < 1e-13);
    }
}

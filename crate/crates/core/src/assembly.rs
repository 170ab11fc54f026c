//! Assembly of the exact stiffness form and the lumped nodal inner product.
//!
//! The stiffness entries `∫ φ_i' φ_j' dx` are integrated exactly per element
//! (the integrand is polynomial of degree `2k - 2`). Mass-type terms are
//! never assembled as a matrix: replacing the `L²` product by Gauss-Lobatto
//! nodal quadrature on each element makes every mass operator diagonal, so a
//! positive weight vector carries the whole inner product. Nonlinear
//! coefficients then enter only through diagonal scalings.

use crate::banded::BandedMatrix;
use crate::mesh::{FieldVector, Mesh1D};
use crate::quadrature::{gauss_legendre, gauss_lobatto, lagrange_derivatives};

/// Exact stiffness operator `K`, a symmetric banded matrix with
/// `K[i][j] = ∫ φ_i' φ_j' dx`.
///
/// The operator is singular with kernel spanned by the constant vector
/// (homogeneous Neumann problem): every row sums to zero.
#[derive(Debug, Clone)]
pub struct StiffnessMatrix {
    band: BandedMatrix,
    half_bandwidth: usize,
}

impl StiffnessMatrix {
    pub fn n(&self) -> usize {
        self.band.n()
    }

    /// Half bandwidth `k`: entries vanish for `|i - j| > k`.
    pub fn half_bandwidth(&self) -> usize {
        self.half_bandwidth
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.band.get(i, j)
    }

    /// `y = K x` on raw slices.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.band.matvec(x, y);
    }

    /// `K u` as a new field.
    pub fn matvec(&self, u: &FieldVector) -> FieldVector {
        let mut out = FieldVector::zeros(u.len());
        self.band.matvec(u.as_slice(), out.as_mut_slice());
        out
    }

    /// Bilinear form `u^T K v = ⟨∇u, ∇v⟩`.
    pub fn bilinear(&self, u: &FieldVector, v: &FieldVector) -> f64 {
        assert_eq!(u.len(), self.n());
        assert_eq!(v.len(), self.n());
        let mut ku = vec![0.0; self.n()];
        self.band.matvec(u.as_slice(), &mut ku);
        ku.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        let lo = i.saturating_sub(self.half_bandwidth);
        let hi = (i + self.half_bandwidth).min(self.n() - 1);
        (lo..=hi).map(|j| self.band.get(i, j)).sum()
    }
}

/// Assembles the exact stiffness matrix for `mesh`.
pub fn assemble_stiffness(mesh: &Mesh1D) -> StiffnessMatrix {
    let k = mesh.degree();
    let n = mesh.num_nodes();
    // Reference element matrix on [-1, 1]; an element of width h scales it
    // by 2/h. Degree-k Gauss integrates the degree 2k-2 integrand exactly.
    let rule = gauss_legendre(k.max(1));
    let ref_nodes = mesh.reference_nodes();
    let mut ref_stiff = vec![vec![0.0; k + 1]; k + 1];
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let d = lagrange_derivatives(ref_nodes, x);
        for a in 0..=k {
            for b in 0..=k {
                ref_stiff[a][b] += w * d[a] * d[b];
            }
        }
    }
    // Scrub quadrature roundoff: the element matrix is symmetric and has the
    // constants in its kernel; enforcing both keeps K's Neumann kernel exact,
    // which long conservative runs rely on (the mean of ψ grows linearly in
    // time whenever p has nonzero mean).
    for a in 0..=k {
        for b in (a + 1)..=k {
            let avg = 0.5 * (ref_stiff[a][b] + ref_stiff[b][a]);
            ref_stiff[a][b] = avg;
            ref_stiff[b][a] = avg;
        }
    }
    for a in 0..=k {
        ref_stiff[a][a] = -(0..=k)
            .filter(|&b| b != a)
            .map(|b| ref_stiff[a][b])
            .sum::<f64>();
    }

    let mut band = BandedMatrix::zeros(n, k, k);
    for e in 0..mesh.num_elements() {
        let scale = 2.0 / mesh.element_size(e);
        for a in 0..=k {
            let ga = mesh.global_index(e, a);
            for b in 0..=k {
                band.add(ga, mesh.global_index(e, b), scale * ref_stiff[a][b]);
            }
        }
    }
    StiffnessMatrix {
        band,
        half_bandwidth: k,
    }
}

/// Diagonal weights of the lumped inner product `⟨u, v⟩_h = Σ w_i u_i v_i`.
#[derive(Debug, Clone)]
pub struct LumpedInner {
    weights: Vec<f64>,
}

impl LumpedInner {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// `⟨u, v⟩_h`.
    pub fn inner(&self, u: &FieldVector, v: &FieldVector) -> f64 {
        assert_eq!(u.len(), self.len());
        assert_eq!(v.len(), self.len());
        self.weights
            .iter()
            .zip(u.iter().zip(v.iter()))
            .map(|(&w, (&a, &b))| w * a * b)
            .sum()
    }

    /// `⟨a u, v⟩_h` with a nodal coefficient `a`.
    pub fn inner_weighted(&self, a: &FieldVector, u: &FieldVector, v: &FieldVector) -> f64 {
        assert_eq!(a.len(), self.len());
        assert_eq!(u.len(), self.len());
        assert_eq!(v.len(), self.len());
        self.weights
            .iter()
            .enumerate()
            .map(|(i, &w)| w * a[i] * u[i] * v[i])
            .sum()
    }

    /// Applies the diagonal operator `D(a)`: `r_i = w_i a_i u_i`.
    pub fn apply_d(&self, a: &FieldVector, u: &FieldVector) -> FieldVector {
        assert_eq!(a.len(), self.len());
        assert_eq!(u.len(), self.len());
        FieldVector::new(
            self.weights
                .iter()
                .enumerate()
                .map(|(i, &w)| w * a[i] * u[i])
                .collect(),
        )
    }

    /// Lumped norm `√⟨u, u⟩_h`.
    pub fn norm(&self, u: &FieldVector) -> f64 {
        self.inner(u, u).sqrt()
    }
}

/// Assembles the lumped weights: per element the Gauss-Lobatto quadrature
/// weights scaled to element length, accumulated at shared interface nodes.
///
/// For `k = 1` this is the vertex rule (`h` inside, `h/2` at the boundary).
pub fn assemble_lumped_weights(mesh: &Mesh1D) -> LumpedInner {
    let k = mesh.degree();
    let ref_weights = gauss_lobatto(k + 1).weights;
    let mut weights = vec![0.0; mesh.num_nodes()];
    for e in 0..mesh.num_elements() {
        let scale = 0.5 * mesh.element_size(e);
        for (l, &rw) in ref_weights.iter().enumerate() {
            weights[mesh.global_index(e, l)] += scale * rw;
        }
    }
    LumpedInner { weights }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_legendre;

    #[test]
    fn hat_function_stiffness_rows() {
        let mesh = Mesh1D::uniform(0.0, 2.0, 2, 1).unwrap();
        let k = assemble_stiffness(&mesh);
        let expect = [[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((k.get(i, j) - expect[i][j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn quadratic_single_element_stiffness() {
        let mesh = Mesh1D::uniform(0.0, 1.0, 1, 2).unwrap();
        let k = assemble_stiffness(&mesh);
        assert!((k.get(0, 0) - 7.0 / 3.0).abs() < 1e-13);
        for i in 0..3 {
            assert!(k.row_sum(i).abs() < 1e-13);
        }
    }

    #[test]
    fn stiffness_symmetric_with_zero_row_sums() {
        for k in 1..=4 {
            let mesh = Mesh1D::uniform(-1.0, 5.0, 7, k).unwrap();
            let a = assemble_stiffness(&mesh);
            let n = a.n();
            for i in 0..n {
                assert!(a.row_sum(i).abs() < 1e-12, "row {i}, k={k}");
                for j in i.saturating_sub(k)..=(i + k).min(n - 1) {
                    assert!((a.get(i, j) - a.get(j, i)).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn stiffness_exact_for_polynomials() {
        // For u, v of degree <= k the interpolants are exact, and so is the
        // assembled bilinear form; compare against direct quadrature of the
        // derivative product.
        for k in 1..=4usize {
            let mesh = Mesh1D::uniform(0.0, 2.0, 3, k).unwrap();
            let a = assemble_stiffness(&mesh);
            let u = mesh.interpolate(|x| x.powi(k as i32));
            let v = mesh.interpolate(|x| 1.0 + x.powi(k as i32) - 0.5 * x);
            let du = |x: f64| k as f64 * x.powi(k as i32 - 1);
            let dv = |x: f64| k as f64 * x.powi(k as i32 - 1) - 0.5;
            let exact = gauss_legendre(k + 1)
                .mapped_to(0.0, 2.0)
                .integrate(|x| du(x) * dv(x));
            let got = a.bilinear(&u, &v);
            assert!((got - exact).abs() <= 1e-12 * exact.abs().max(1.0), "k={k}");
        }
    }

    #[test]
    fn vertex_rule_weights() {
        let mesh = Mesh1D::uniform(0.0, 16.0, 64, 1).unwrap();
        let w = assemble_lumped_weights(&mesh);
        assert!((w.weight(0) - 0.125).abs() < 1e-14);
        assert!((w.weight(64) - 0.125).abs() < 1e-14);
        for i in 1..64 {
            assert!((w.weight(i) - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn simpson_weights_single_quadratic_element() {
        let mesh = Mesh1D::uniform(0.0, 1.0, 1, 2).unwrap();
        let w = assemble_lumped_weights(&mesh);
        assert!((w.weight(0) - 1.0 / 6.0).abs() < 1e-15);
        assert!((w.weight(1) - 2.0 / 3.0).abs() < 1e-15);
        assert!((w.weight(2) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn weights_positive_and_sum_to_domain_length() {
        for k in 1..=4 {
            let mesh = Mesh1D::from_boundaries(vec![0.0, 0.3, 1.0, 2.5, 4.0], k).unwrap();
            let w = assemble_lumped_weights(&mesh);
            assert!(w.weights().iter().all(|&x| x > 0.0));
            let total: f64 = w.weights().iter().sum();
            assert!((total - 4.0).abs() <= 1e-12 * 4.0);
        }
    }

    #[test]
    fn inner_product_basics() {
        let mesh = Mesh1D::uniform(0.0, 16.0, 8, 2).unwrap();
        let w = assemble_lumped_weights(&mesh);
        let ones = mesh.interpolate(|_| 1.0);
        assert!((w.inner(&ones, &ones) - 16.0).abs() < 1e-12);

        // Unit coefficient vector picks out w_i.
        let mut e3 = FieldVector::zeros(mesh.num_nodes());
        e3[3] = 1.0;
        assert!((w.inner(&e3, &e3) - w.weight(3)).abs() < 1e-15);
    }

    #[test]
    fn weighted_inner_symmetry_and_apply_d_consistency() {
        let mesh = Mesh1D::uniform(0.0, 2.0, 5, 2).unwrap();
        let w = assemble_lumped_weights(&mesh);
        let a = mesh.interpolate(|x| (3.0 * x).sin() - 0.4);
        let u = mesh.interpolate(|x| x * x - 1.0);
        let v = mesh.interpolate(|x| (x - 0.5).cos());
        let uv = w.inner_weighted(&a, &u, &v);
        let vu = w.inner_weighted(&a, &v, &u);
        assert!((uv - vu).abs() < 1e-14);

        let d = w.apply_d(&a, &u);
        let via_d: f64 = d.iter().zip(v.iter()).map(|(x, y)| x * y).sum();
        assert!((uv - via_d).abs() < 1e-13);
    }

    #[test]
    fn lumped_inner_converges_to_l2_at_order_k_plus_one() {
        // |⟨u,u⟩_h - ∫ u²| for u = sin(x) should shrink at rate >= k+1.
        for k in 1..=3usize {
            let exact = gauss_legendre(20)
                .mapped_to(0.0, 2.0)
                .integrate(|x| x.sin() * x.sin());
            let err = |elems: usize| {
                let mesh = Mesh1D::uniform(0.0, 2.0, elems, k).unwrap();
                let w = assemble_lumped_weights(&mesh);
                let u = mesh.interpolate(f64::sin);
                (w.inner(&u, &u) - exact).abs()
            };
            let rate = (err(8) / err(16)).log2();
            assert!(rate >= k as f64 + 1.0 - 0.2, "k={k}, rate={rate}");
        }
    }

    #[test]
    fn positivity_of_lumped_norm() {
        let mesh = Mesh1D::uniform(0.0, 1.0, 4, 3).unwrap();
        let w = assemble_lumped_weights(&mesh);
        let mut u = FieldVector::zeros(mesh.num_nodes());
        u[5] = -1e-9;
        assert!(w.inner(&u, &u) > 0.0);
    }
}

//! Seeded test matrices: i.i.d. Gaussian and orthonormal edge bases of random
//! weighted connected graphs.
//!
//! Streams come from `ChaCha8Rng::seed_from_u64(seed)`; normal deviates use
//! the `rand_distr` `StandardNormal` ziggurat sampler. Gaussian matrices are
//! filled column by column.

use nalgebra::DMatrix;
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, SelectError};
use crate::factorize::lq_orthonormalize;
use crate::matrix::Matrix;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `m x n` matrix of independent standard normal entries.
pub fn gaussian_matrix(m: usize, n: usize, seed: u64) -> Result<Matrix> {
    if m == 0 || m > n {
        return Err(SelectError::UnsupportedShape(format!(
            "gaussian matrix needs 1 <= m <= n, got {m}x{n}"
        )));
    }
    let mut rng = seeded_rng(seed);
    let data = DMatrix::from_fn(m, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    Matrix::new(data)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphSpec {
    pub num_vertices: usize,
    pub num_edges: usize,
    /// Weights are drawn uniformly from `(low, high]`.
    pub weight_range: (f64, f64),
    pub seed: u64,
}

impl GraphSpec {
    pub fn new(num_vertices: usize, num_edges: usize, seed: u64) -> Self {
        Self {
            num_vertices,
            num_edges,
            weight_range: (0.0, 1.0),
            seed,
        }
    }

    pub fn max_edges(num_vertices: usize) -> usize {
        num_vertices * num_vertices.saturating_sub(1) / 2
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.num_vertices;
        if v < 2 {
            return Err(SelectError::InfeasibleGraph(format!("need at least 2 vertices, got {v}")));
        }
        if self.num_edges < v - 1 || self.num_edges > Self::max_edges(v) {
            return Err(SelectError::InfeasibleGraph(format!(
                "{} edges impossible for a connected simple graph on {v} vertices (allowed {}..={})",
                self.num_edges,
                v - 1,
                Self::max_edges(v)
            )));
        }
        let (lo, hi) = self.weight_range;
        if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
            return Err(SelectError::InfeasibleGraph(format!(
                "weight range ({lo}, {hi}] must be positive and non-empty"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    /// Always `u < v`.
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    pub num_vertices: usize,
    /// Sorted by `(u, v)`.
    pub edges: Vec<Edge>,
}

impl WeightedGraph {
    /// Random spanning tree (each vertex of a shuffled order hooks onto a
    /// uniformly chosen earlier one) plus extra edges drawn uniformly without
    /// replacement from the unused pairs.
    pub fn random_connected(spec: &GraphSpec) -> Result<Self> {
        spec.validate()?;
        let nv = spec.num_vertices;
        let mut rng = seeded_rng(spec.seed);
        let mut order: Vec<usize> = (0..nv).collect();
        order.shuffle(&mut rng);

        let mut used = vec![false; nv * nv];
        let mut pairs = Vec::with_capacity(spec.num_edges);
        for i in 1..nv {
            let a = order[i];
            let b = order[rng.random_range(0..i)];
            let (u, v) = (a.min(b), a.max(b));
            used[u * nv + v] = true;
            pairs.push((u, v));
        }

        let free: Vec<(usize, usize)> = (0..nv)
            .flat_map(|u| (u + 1..nv).map(move |v| (u, v)))
            .filter(|&(u, v)| !used[u * nv + v])
            .collect();
        let extra = spec.num_edges - (nv - 1);
        pairs.extend(index::sample(&mut rng, free.len(), extra).into_iter().map(|i| free[i]));
        pairs.sort_unstable();

        let (lo, hi) = spec.weight_range;
        let edges = pairs
            .into_iter()
            .map(|(u, v)| {
                let t: f64 = rng.random();
                Edge {
                    u,
                    v,
                    weight: lo + (hi - lo) * (1.0 - t),
                }
            })
            .collect();
        Ok(Self {
            num_vertices: nv,
            edges,
        })
    }

    /// Weighted oriented incidence, vertices by edges: `+sqrt(w)` at `u`,
    /// `-sqrt(w)` at `v`.
    pub fn incidence(&self) -> DMatrix<f64> {
        let mut b = DMatrix::zeros(self.num_vertices, self.edges.len());
        for (e, edge) in self.edges.iter().enumerate() {
            let s = edge.weight.sqrt();
            b[(edge.u, e)] = s;
            b[(edge.v, e)] = -s;
        }
        b
    }

    pub fn laplacian(&self) -> DMatrix<f64> {
        let b = self.incidence();
        &b * b.transpose()
    }

    /// Orthonormal `(|V| - 1) x |E|` basis of the edge-space row span of the
    /// incidence operator; column `e` belongs to edge `e`.
    pub fn edge_basis(&self) -> Result<Matrix> {
        let b = self.incidence();
        let grounded = b.rows(0, self.num_vertices - 1).into_owned();
        lq_orthonormalize(&Matrix::new(grounded)?)
    }
}

/// Orthonormal-row matrix spanned by the incidence operator of a random
/// weighted connected graph.
pub fn graph_singular_matrix(spec: &GraphSpec) -> Result<Matrix> {
    WeightedGraph::random_connected(spec)?.edge_basis()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_is_deterministic() {
        let a = gaussian_matrix(4, 9, 17).unwrap();
        let b = gaussian_matrix(4, 9, 17).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, gaussian_matrix(4, 9, 18).unwrap());
        assert!(gaussian_matrix(5, 4, 0).is_err());
    }

    #[test]
    fn gaussian_moments() {
        let (m, n) = (100, 5000);
        let x = gaussian_matrix(m, n, 2024).unwrap();
        let count = (m * n) as f64;
        let mean = x.as_dmatrix().sum() / count;
        let var = x.as_dmatrix().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1.0);
        assert!(mean.abs() <= 4.0 / count.sqrt(), "mean {mean}");
        assert!((var - 1.0).abs() <= 0.05, "variance {var}");
    }

    #[test]
    fn graph_spec_validation() {
        assert!(GraphSpec::new(1, 0, 0).validate().is_err());
        assert!(GraphSpec::new(5, 3, 0).validate().is_err());
        assert!(GraphSpec::new(5, 11, 0).validate().is_err());
        assert!(GraphSpec::new(5, 10, 0).validate().is_ok());
        let mut spec = GraphSpec::new(5, 6, 0);
        spec.weight_range = (1.0, 1.0);
        assert!(spec.validate().is_err());
    }

    #[test]
    fn graph_is_simple_and_connected() {
        for seed in 0..10 {
            let spec = GraphSpec::new(12, 20 + seed as usize, seed);
            let g = WeightedGraph::random_connected(&spec).unwrap();
            assert_eq!(g.edges.len(), spec.num_edges);
            let mut pairs: Vec<_> = g.edges.iter().map(|e| (e.u, e.v)).collect();
            assert!(g.edges.iter().all(|e| e.u < e.v && e.weight > 0.0 && e.weight <= 1.0));
            pairs.dedup();
            assert_eq!(pairs.len(), spec.num_edges);
            // union-find connectivity
            let mut parent: Vec<usize> = (0..12).collect();
            fn find(p: &mut Vec<usize>, i: usize) -> usize {
                if p[i] != i {
                    let r = find(p, p[i]);
                    p[i] = r;
                }
                p[i]
            }
            for e in &g.edges {
                let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
                parent[a] = b;
            }
            let root = find(&mut parent, 0);
            assert!((0..12).all(|i| find(&mut parent, i) == root));
        }
    }

    #[test]
    fn tree_basis_is_orthogonal() {
        let x = graph_singular_matrix(&GraphSpec::new(7, 6, 3)).unwrap();
        assert_eq!((x.rows(), x.cols()), (6, 6));
        assert!((x.as_dmatrix().determinant().abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn edge_basis_has_orthonormal_rows() {
        let x = graph_singular_matrix(&GraphSpec::new(15, 60, 9)).unwrap();
        assert_eq!((x.rows(), x.cols()), (14, 60));
        let g = x.as_dmatrix() * x.as_dmatrix().transpose();
        assert!((g - DMatrix::<f64>::identity(14, 14)).amax() < 1e-10);
        let total: f64 = x.as_dmatrix().iter().map(|v| v * v).sum();
        assert!((total - 14.0).abs() < 1e-10);
    }

    #[test]
    fn column_norms_are_edge_leverage_scores() {
        let g = WeightedGraph::random_connected(&GraphSpec::new(9, 20, 4)).unwrap();
        let x = g.edge_basis().unwrap();
        let lap_pinv = g.laplacian().pseudo_inverse(1e-10).unwrap();
        for (e, edge) in g.edges.iter().enumerate() {
            let r_eff = lap_pinv[(edge.u, edge.u)] + lap_pinv[(edge.v, edge.v)] - 2.0 * lap_pinv[(edge.u, edge.v)];
            let lev = edge.weight * r_eff;
            assert!((x.column(e).norm_squared() - lev).abs() < 1e-10);
        }
    }

    #[test]
    fn full_scale_graph_shape() {
        let spec = GraphSpec::new(101, 5000, 1);
        let g = WeightedGraph::random_connected(&spec).unwrap();
        assert_eq!(g.edges.len(), 5000);
        assert_eq!(g.incidence().shape(), (101, 5000));
    }
}

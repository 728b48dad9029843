//! Finite-dimensional Pythagorean modules.
//!
//! A module assigns a space `H_v = C^{dims[v]}` to every vertex and an operator
//! `A_g : H_{r(g)} -> H_{s(g)}` to every edge, stored as a
//! `dims[s(g)] x dims[r(g)]` matrix. At every vertex `w` that receives edges
//! the stacked operators `(A_g)_{r(g) = w}` must form an isometry, i.e.
//! `Σ A_g† A_g = I`. Vertices without incoming edges carry no condition.

mod structure;

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::graph::{EdgeId, Graph, Path, VertexId};
use crate::matrix::{orthonormal_columns, ComplexMatrix, C64};

pub use structure::{
    are_equivalent, generated_algebra_dimension, intertwiner_space, is_indecomposable,
    is_irreducible, star_commutant_dimension, Equivalence, GradedMap, IntertwinerSpace,
};

/// Default tolerance for the isometry condition.
pub const VALIDATION_TOL: f64 = 1e-9;
/// Relative singular-value threshold for rank and nullspace decisions.
pub const RANK_TOL: f64 = 1e-10;
/// How far `|z|` may stray from 1 for a loop scalar.
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModuleError {
    #[error("expected {expected} vertex dimensions, got {found}")]
    DimsLength { expected: usize, found: usize },
    #[error("expected {expected} edge operators, got {found}")]
    OpsLength { expected: usize, found: usize },
    #[error("operator on edge {edge} has shape {found:?}, expected {expected:?}")]
    ShapeMismatch {
        edge: EdgeId,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("modules live over different graphs")]
    GraphMismatch,
    #[error("vertex {vertex} carries {loops} loops, expected exactly one")]
    LoopCount { vertex: VertexId, loops: usize },
    #[error("loop scalar has modulus {0}, expected 1")]
    NotUnimodular(f64),
    #[error("vertex {vertex} receives edges {edges:?}; zero operators cannot satisfy its isometry condition")]
    HasIncoming {
        vertex: VertexId,
        edges: Vec<EdgeId>,
    },
    #[error("vertex {vertex} needs an isometry C^{needed} -> C^{available}, which does not exist")]
    NoIsometry {
        vertex: VertexId,
        needed: usize,
        available: usize,
    },
    #[error("the module is zero-dimensional")]
    ZeroDimensional,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PythagoreanModule {
    graph: Arc<Graph>,
    dims: Vec<usize>,
    ops: Vec<ComplexMatrix>,
}

impl PythagoreanModule {
    /// Checks operator shapes; the isometry condition is checked by [`validate_module`].
    pub fn new(
        graph: Arc<Graph>,
        dims: Vec<usize>,
        ops: Vec<ComplexMatrix>,
    ) -> Result<Self, ModuleError> {
        if dims.len() != graph.vertex_count() {
            return Err(ModuleError::DimsLength {
                expected: graph.vertex_count(),
                found: dims.len(),
            });
        }
        if ops.len() != graph.edge_count() {
            return Err(ModuleError::OpsLength {
                expected: graph.edge_count(),
                found: ops.len(),
            });
        }
        for (e, op) in ops.iter().enumerate() {
            let expected = (dims[graph.source(e)], dims[graph.range(e)]);
            if op.shape() != expected {
                return Err(ModuleError::ShapeMismatch {
                    edge: graph.edge(e).id.clone(),
                    expected,
                    found: op.shape(),
                });
            }
        }
        Ok(Self { graph, dims, ops })
    }

    /// All operators zero.
    pub fn zero(graph: Arc<Graph>, dims: Vec<usize>) -> Result<Self, ModuleError> {
        if dims.len() != graph.vertex_count() {
            return Err(ModuleError::DimsLength {
                expected: graph.vertex_count(),
                found: dims.len(),
            });
        }
        let ops = (0..graph.edge_count())
            .map(|e| ComplexMatrix::zeros(dims[graph.source(e)], dims[graph.range(e)]))
            .collect();
        Self::new(graph, dims, ops)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn shared_graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn op(&self, e: usize) -> &ComplexMatrix {
        &self.ops[e]
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    /// Replaces one operator, keeping the shape contract.
    pub fn with_op(mut self, e: usize, op: ComplexMatrix) -> Result<Self, ModuleError> {
        let expected = (
            self.dims[self.graph.source(e)],
            self.dims[self.graph.range(e)],
        );
        if op.shape() != expected {
            return Err(ModuleError::ShapeMismatch {
                edge: self.graph.edge(e).id.clone(),
                expected,
                found: op.shape(),
            });
        }
        self.ops[e] = op;
        Ok(self)
    }

    pub(crate) fn same_graph(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.graph, &other.graph) || *self.graph == *other.graph
    }

    /// Start of each vertex block in `H = ⊕ H_v`.
    pub fn offsets(&self) -> Vec<usize> {
        self.dims
            .iter()
            .scan(0, |acc, &d| {
                let start = *acc;
                *acc += d;
                Some(start)
            })
            .collect()
    }

    pub fn vertex_projection(&self, v: usize) -> ComplexMatrix {
        let d = self.total_dim();
        let start = self.offsets()[v];
        let mut p = ComplexMatrix::zeros(d, d);
        for i in start..start + self.dims[v] {
            p.set(i, i, C64::new(1.0, 0.0));
        }
        p
    }

    /// `A_e` as an operator on the whole graded space.
    pub fn edge_operator(&self, e: usize) -> ComplexMatrix {
        let d = self.total_dim();
        let offsets = self.offsets();
        let mut full = ComplexMatrix::zeros(d, d);
        full.set_block(
            offsets[self.graph.source(e)],
            offsets[self.graph.range(e)],
            &self.ops[e],
        );
        full
    }

    /// Vertex projections followed by edge operators, all on `H`.
    pub fn generators(&self) -> Vec<ComplexMatrix> {
        (0..self.graph.vertex_count())
            .map(|v| self.vertex_projection(v))
            .chain((0..self.graph.edge_count()).map(|e| self.edge_operator(e)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// `‖Σ_{r(g)=w} A_g†A_g − I‖_F` per vertex; `None` where no condition applies.
    pub residuals: Vec<Option<f64>>,
    pub tol: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.residuals.iter().flatten().all(|&r| r <= self.tol)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().flatten().copied().fold(0.0, f64::max)
    }

    /// The vertex with the largest residual, if any condition applies.
    pub fn worst(&self) -> Option<(usize, f64)> {
        self.residuals
            .iter()
            .enumerate()
            .filter_map(|(v, r)| r.map(|r| (v, r)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }
}

pub fn isometry_residual(m: &PythagoreanModule, w: usize) -> Option<f64> {
    let g = m.graph();
    if m.dims[w] == 0 || !g.has_incoming(w) {
        return None;
    }
    let mut sum = ComplexMatrix::zeros(m.dims[w], m.dims[w]);
    for &e in g.incoming(w) {
        sum = &sum + &(&m.ops[e].adjoint() * &m.ops[e]);
    }
    Some(sum.distance(&ComplexMatrix::identity(m.dims[w])))
}

pub fn validate_module(m: &PythagoreanModule, tol: f64) -> ValidationReport {
    ValidationReport {
        residuals: (0..m.graph.vertex_count())
            .map(|w| isometry_residual(m, w))
            .collect(),
        tol,
    }
}

/// `H = H_v = C`, the loop at `v` acts by `z`, every other operator vanishes.
pub fn one_dim_module(
    graph: Arc<Graph>,
    v: usize,
    z: C64,
) -> Result<PythagoreanModule, ModuleError> {
    let loops: Vec<usize> = graph.loops_at(v).collect();
    if loops.len() != 1 {
        return Err(ModuleError::LoopCount {
            vertex: graph.vertex(v).clone(),
            loops: loops.len(),
        });
    }
    if (z.norm() - 1.0).abs() > UNIT_TOL {
        return Err(ModuleError::NotUnimodular(z.norm()));
    }
    let mut dims = vec![0; graph.vertex_count()];
    dims[v] = 1;
    PythagoreanModule::zero(graph, dims)?.with_op(loops[0], ComplexMatrix::scalar(z))
}

/// `H = H_v = C` with all operators zero; `v` must receive no edges.
pub fn isolated_module(graph: Arc<Graph>, v: usize) -> Result<PythagoreanModule, ModuleError> {
    if graph.has_incoming(v) {
        return Err(ModuleError::HasIncoming {
            vertex: graph.vertex(v).clone(),
            edges: graph
                .incoming(v)
                .iter()
                .map(|&e| graph.edge(e).id.clone())
                .collect(),
        });
    }
    let mut dims = vec![0; graph.vertex_count()];
    dims[v] = 1;
    PythagoreanModule::zero(graph, dims)
}

/// Block-diagonal sum; the first summand occupies the leading coordinates of each `H_v`.
pub fn direct_sum(
    a: &PythagoreanModule,
    b: &PythagoreanModule,
) -> Result<PythagoreanModule, ModuleError> {
    if !a.same_graph(b) {
        return Err(ModuleError::GraphMismatch);
    }
    let dims = a.dims.iter().zip(&b.dims).map(|(x, y)| x + y).collect();
    let ops = a
        .ops
        .iter()
        .zip(&b.ops)
        .map(|(x, y)| ComplexMatrix::block_diagonal(x, y))
        .collect();
    PythagoreanModule::new(a.graph.clone(), dims, ops)
}

/// A module whose isometries come from orthonormalizing complex Gaussian
/// samples drawn from a ChaCha8 stream seeded with `seed`.
///
/// At each receiving vertex `w` (in vertex order) a
/// `(Σ_{r(g)=w} dims[s(g)]) x dims[w]` matrix is sampled, its columns are
/// orthonormalized, and its rows are split into the blocks `A_g` in edge order.
pub fn random_module(
    graph: Arc<Graph>,
    dims: &[usize],
    seed: u64,
) -> Result<PythagoreanModule, ModuleError> {
    let mut module = PythagoreanModule::zero(graph.clone(), dims.to_vec())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    for w in 0..graph.vertex_count() {
        let cols = dims[w];
        if cols == 0 || !graph.has_incoming(w) {
            continue;
        }
        let incoming = graph.incoming(w);
        let rows: usize = incoming.iter().map(|&e| dims[graph.source(e)]).sum();
        if rows < cols {
            return Err(ModuleError::NoIsometry {
                vertex: graph.vertex(w).clone(),
                needed: cols,
                available: rows,
            });
        }
        let sample: Vec<C64> = (0..rows * cols)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                C64::new(re * scale, im * scale)
            })
            .collect();
        let q = orthonormal_columns(&ComplexMatrix::from_vec(rows, cols, sample));
        let mut row = 0;
        for &e in incoming {
            let height = dims[graph.source(e)];
            module.ops[e] = q.block(row, 0, height, cols);
            row += height;
        }
    }
    Ok(module)
}

/// `A_λ : H_{r(λ)} -> H_{s(λ)}`, the product `A_{e_1} A_{e_2} ⋯ A_{e_k}`
/// with `e_1` traversed first; a vertex path gives the identity.
pub fn path_operator(m: &PythagoreanModule, path: &Path) -> ComplexMatrix {
    let mut acc = ComplexMatrix::identity(m.dims[path.source()]);
    for &e in path.edges() {
        acc = &acc * &m.ops[e];
    }
    acc
}

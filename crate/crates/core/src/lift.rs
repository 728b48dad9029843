//! Finite levels of the representation lifted from a Pythagorean module.
//!
//! Level `W_k` is spanned by the classes `[λ, e_b]` where `λ` runs over the
//! maximal paths of length `≤ k` ending at each vertex and `e_b` over the
//! standard basis of `H_{s(λ)}`. When the module satisfies its isometry
//! condition these classes are orthonormal, and:
//!
//! * the embedding `W_k -> W_{k+1}` rewrites `[λ, ξ]` as `Σ_μ [λμ, A_μ ξ]`
//!   over edges `μ` ending at `s(λ)`, and fixes classes whose path cannot be
//!   extended;
//! * the generator `X_e` maps `[μ, ξ]` to `[eμ, ξ]`, sending `W_k` into
//!   `W_{k+1}`;
//! * `X_v` is the projection onto classes whose path ends at `v`.
//!
//! A lift at level `m` keeps the bases of `W_0 ..= W_{m+1}` so that the
//! generators out of `W_m` have somewhere to land.

use std::collections::HashMap;

use thiserror::Error;

use crate::exec::Exec;
use crate::graph::{maximal_paths, Graph, GraphError, Path, VertexId};
use crate::matrix::{inner, vector_norm, ComplexMatrix, C64, ONE, ZERO};
use crate::module::{validate_module, GradedMap, PythagoreanModule, VALIDATION_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LiftError {
    #[error("module fails its isometry condition at vertex {vertex} (residual {residual:e})")]
    InvalidModule { vertex: VertexId, residual: f64 },
    #[error("level {level} is outside the available range 0..={max}")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("a path of length {path_len} has no class at level {level}")]
    PathTooLong { path_len: usize, level: usize },
    #[error("H at vertex {0} is zero-dimensional")]
    ZeroFiber(VertexId),
    #[error("vector has {found} coefficients, expected {expected}")]
    VectorLength { expected: usize, found: usize },
    #[error("map is not an intertwiner (residual {0:e})")]
    NotIntertwiner(f64),
    #[error("map block at vertex {vertex} does not match the module dimensions")]
    MapShape { vertex: usize },
    #[error("lifts come from modules over different graphs")]
    ModuleMismatch,
    #[error("vertex {vertex} carries {loops} loops, expected exactly one")]
    LoopCount { vertex: VertexId, loops: usize },
    #[error("word letter {position} would lower the level below 0")]
    LevelUnderflow { position: usize },
    #[error("word letter {position} would raise the level above {max}")]
    LevelOverflow { position: usize, max: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisEntry {
    pub path: Path,
    pub fiber: usize,
}

/// Ordered basis of one level: by range vertex, then canonical path order, then fiber.
#[derive(Debug, Clone)]
pub struct LevelBasis {
    level: usize,
    entries: Vec<BasisEntry>,
    index: HashMap<BasisEntry, usize>,
}

impl LevelBasis {
    fn build(module: &PythagoreanModule, level: usize, exec: Exec) -> Self {
        let g = module.graph();
        let per_vertex = exec.map_range(0..g.vertex_count(), |v| {
            maximal_paths(g, v, level)
                .into_iter()
                .flat_map(|path| {
                    (0..module.dim(path.source())).map(move |fiber| BasisEntry {
                        path: path.clone(),
                        fiber,
                    })
                })
                .collect::<Vec<_>>()
        });
        let entries: Vec<BasisEntry> = per_vertex.into_iter().flatten().collect();
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        Self {
            level,
            entries,
            index,
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BasisEntry] {
        &self.entries
    }

    pub fn position(&self, path: &Path, fiber: usize) -> Option<usize> {
        self.index
            .get(&BasisEntry {
                path: path.clone(),
                fiber,
            })
            .copied()
    }
}

/// Coordinates of a vector of `W_level` in the level basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftVector {
    pub level: usize,
    pub coefficients: Vec<C64>,
}

impl LiftVector {
    pub fn norm(&self) -> f64 {
        vector_norm(&self.coefficients)
    }
}

/// A matrix between two levels.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelMatrix {
    pub source_level: usize,
    pub target_level: usize,
    pub matrix: ComplexMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    /// `x_e`, raising the level by one.
    Edge(usize),
    /// `x_e*`, lowering the level by one.
    EdgeAdjoint(usize),
    /// `x_v`, preserving the level.
    Vertex(usize),
}

/// Generator matrices out of the top working level.
#[derive(Debug, Clone, PartialEq)]
pub struct Generators {
    pub level: usize,
    /// `E_e : W_level -> W_{level+1}`, indexed like the graph's edges.
    pub edges: Vec<ComplexMatrix>,
    /// `P_v` on `W_level`, indexed like the graph's vertices.
    pub projections: Vec<ComplexMatrix>,
}

/// Maximal Frobenius residuals of the Cuntz–Krieger relations on a lift.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CkReport {
    /// `P_v P_w` for `v ≠ w`, and `P_v² − P_v`, on `W_m`.
    pub projection_orthogonality: f64,
    /// `Σ_v P_v − I` on `W_m`.
    pub projection_completeness: f64,
    /// `E_e† E_e − P_{s(e)}` on `W_m`.
    pub isometry: f64,
    /// `Σ_{r(e)=w} E_e E_e† − P_w` on `W_{m+1}`, at vertices receiving edges.
    pub range: f64,
    /// `J_k† J_k − I` for the embeddings `J_k : W_k -> W_{k+1}`, `k ≤ m`: the
    /// relation `[λ, ξ] = Σ_μ [λμ, A_μ ξ]` is norm-preserving exactly when
    /// the module's isometry condition holds.
    pub class_relation: f64,
}

impl CkReport {
    pub fn max(&self) -> f64 {
        [
            self.projection_orthogonality,
            self.projection_completeness,
            self.isometry,
            self.range,
            self.class_relation,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

/// Eigenvalue estimate of a loop generator on a lifted vertex class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenProbe {
    pub value: C64,
    /// `‖X_ℓ r − value · J r‖` with `r` the class at the lift's level.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct TruncatedLift {
    module: PythagoreanModule,
    level: usize,
    levels: Vec<LevelBasis>,
    embeddings: Vec<ComplexMatrix>,
}

/// Lifts a valid module to level `m`.
pub fn lift(module: &PythagoreanModule, m: usize) -> Result<TruncatedLift, LiftError> {
    TruncatedLift::new(module, m, Exec::default())
}

impl TruncatedLift {
    pub fn new(module: &PythagoreanModule, m: usize, exec: Exec) -> Result<Self, LiftError> {
        let report = validate_module(module, VALIDATION_TOL);
        if !report.passed() {
            let (v, residual) = report.worst().expect("a failing report has a residual");
            return Err(LiftError::InvalidModule {
                vertex: module.graph().vertex(v).clone(),
                residual,
            });
        }
        Ok(Self::new_unchecked(module, m, exec))
    }

    /// Builds the lift without validating the module; used to diagnose
    /// modules that fail their isometry condition.
    pub fn new_unchecked(module: &PythagoreanModule, m: usize, exec: Exec) -> Self {
        let levels: Vec<LevelBasis> = (0..=m + 1)
            .map(|k| LevelBasis::build(module, k, exec))
            .collect();
        let embeddings = exec.map_range(0..m + 1, |k| {
            embedding_matrix(module, &levels[k], &levels[k + 1])
        });
        Self {
            module: module.clone(),
            level: m,
            levels,
            embeddings,
        }
    }

    pub fn module(&self) -> &PythagoreanModule {
        &self.module
    }

    pub fn graph(&self) -> &Graph {
        self.module.graph()
    }

    /// The working level `m`.
    pub fn level(&self) -> usize {
        self.level
    }

    /// The highest level with a basis, `m + 1`.
    pub fn top_level(&self) -> usize {
        self.level + 1
    }

    pub fn basis(&self, k: usize) -> &LevelBasis {
        &self.levels[k]
    }

    pub fn dim(&self, k: usize) -> usize {
        self.levels[k].len()
    }

    fn check_level(&self, k: usize, max: usize) -> Result<(), LiftError> {
        if k > max {
            return Err(LiftError::LevelOutOfRange { level: k, max });
        }
        Ok(())
    }

    /// `J_k : W_k -> W_{k+1}` for `k ≤ m`.
    pub fn embedding(&self, k: usize) -> Result<&ComplexMatrix, LiftError> {
        self.check_level(k, self.level)?;
        Ok(&self.embeddings[k])
    }

    pub fn embed_vector(&self, x: &LiftVector) -> Result<LiftVector, LiftError> {
        let j = self.embedding(x.level)?;
        if x.coefficients.len() != j.cols() {
            return Err(LiftError::VectorLength {
                expected: j.cols(),
                found: x.coefficients.len(),
            });
        }
        Ok(LiftVector {
            level: x.level + 1,
            coefficients: j.apply(&x.coefficients),
        })
    }

    /// Coordinates of the class `[path, ξ]` in `W_target`.
    pub fn reduce_class(
        &self,
        path: &Path,
        xi: &[C64],
        target: usize,
    ) -> Result<LiftVector, LiftError> {
        self.check_level(target, self.top_level())?;
        if target < path.len() {
            return Err(LiftError::PathTooLong {
                path_len: path.len(),
                level: target,
            });
        }
        let d = self.module.dim(path.source());
        if d == 0 {
            return Err(LiftError::ZeroFiber(
                self.graph().vertex(path.source()).clone(),
            ));
        }
        if xi.len() != d {
            return Err(LiftError::VectorLength {
                expected: d,
                found: xi.len(),
            });
        }
        let start = &self.levels[path.len()];
        let mut coefficients = vec![ZERO; start.len()];
        for (b, &c) in xi.iter().enumerate() {
            let i = start
                .position(path, b)
                .expect("a path of length k is maximal at level k");
            coefficients[i] = c;
        }
        let mut x = LiftVector {
            level: path.len(),
            coefficients,
        };
        while x.level < target {
            x = self.embed_vector(&x)?;
        }
        Ok(x)
    }

    /// `E_e : W_k -> W_{k+1}` for `k ≤ m`.
    pub fn edge_matrix(&self, e: usize, k: usize) -> Result<ComplexMatrix, LiftError> {
        self.check_level(k, self.level)?;
        let g = self.graph();
        let (from, to) = (&self.levels[k], &self.levels[k + 1]);
        let mut out = ComplexMatrix::zeros(to.len(), from.len());
        for (j, entry) in from.entries().iter().enumerate() {
            if entry.path.range() != g.source(e) {
                continue;
            }
            let extended = entry.path.extend_at_range(g, e);
            let i = to
                .position(&extended, entry.fiber)
                .expect("extending a maximal path at its range stays maximal");
            out.set(i, j, ONE);
        }
        Ok(out)
    }

    /// `P_v` on `W_k` for `k ≤ m + 1`.
    pub fn projection(&self, v: usize, k: usize) -> Result<ComplexMatrix, LiftError> {
        self.check_level(k, self.top_level())?;
        let diag: Vec<C64> = self.levels[k]
            .entries()
            .iter()
            .map(|e| if e.path.range() == v { ONE } else { ZERO })
            .collect();
        Ok(ComplexMatrix::diagonal(&diag))
    }

    pub fn generator_matrices(&self) -> Generators {
        self.generator_matrices_with(Exec::default())
    }

    pub fn generator_matrices_with(&self, exec: Exec) -> Generators {
        let g = self.graph();
        let m = self.level;
        Generators {
            level: m,
            edges: exec.map_range(0..g.edge_count(), |e| self.edge_matrix(e, m).unwrap()),
            projections: (0..g.vertex_count())
                .map(|v| self.projection(v, m).unwrap())
                .collect(),
        }
    }

    pub fn ck_residuals(&self) -> CkReport {
        self.ck_residuals_with(Exec::default())
    }

    pub fn ck_residuals_with(&self, exec: Exec) -> CkReport {
        let g = self.graph();
        let m = self.level;
        let gens = self.generator_matrices_with(exec);
        let n = self.dim(m);
        let identity = ComplexMatrix::identity(n);

        let mut orthogonality: f64 = 0.0;
        let mut total = ComplexMatrix::zeros(n, n);
        for (v, p) in gens.projections.iter().enumerate() {
            orthogonality = orthogonality.max((p * p).distance(p));
            for q in &gens.projections[v + 1..] {
                orthogonality = orthogonality.max((p * q).frobenius_norm());
            }
            total = &total + p;
        }
        let completeness = total.distance(&identity);

        let isometry = exec
            .map_range(0..g.edge_count(), |e| {
                let ee = &gens.edges[e].adjoint() * &gens.edges[e];
                ee.distance(&gens.projections[g.source(e)])
            })
            .into_iter()
            .fold(0.0, f64::max);

        let up = self.dim(m + 1);
        let range = exec
            .map_range(0..g.vertex_count(), |w| {
                if !g.has_incoming(w) {
                    return 0.0;
                }
                let mut sum = ComplexMatrix::zeros(up, up);
                for &e in g.incoming(w) {
                    sum = &sum + &(&gens.edges[e] * &gens.edges[e].adjoint());
                }
                sum.distance(&self.projection(w, m + 1).unwrap())
            })
            .into_iter()
            .fold(0.0, f64::max);

        let class_relation = exec
            .map(&self.embeddings, |j| {
                (&j.adjoint() * j).distance(&ComplexMatrix::identity(j.cols()))
            })
            .into_iter()
            .fold(0.0, f64::max);

        CkReport {
            projection_orthogonality: orthogonality,
            projection_completeness: completeness,
            isometry,
            range,
            class_relation,
        }
    }

    /// The operator of a word (a product read left to right, so the rightmost
    /// letter acts first) starting from `W_start`.
    pub fn word_operator(&self, word: &[Letter], start: usize) -> Result<LevelMatrix, LiftError> {
        self.check_level(start, self.top_level())?;
        let mut level = start;
        let mut acc = ComplexMatrix::identity(self.dim(start));
        for (position, letter) in word.iter().enumerate().rev() {
            acc = match *letter {
                Letter::Vertex(v) => &self.projection(v, level)? * &acc,
                Letter::Edge(e) => {
                    if level + 1 > self.top_level() {
                        return Err(LiftError::LevelOverflow {
                            position,
                            max: self.top_level(),
                        });
                    }
                    let m = self.edge_matrix(e, level)?;
                    level += 1;
                    &m * &acc
                }
                Letter::EdgeAdjoint(e) => {
                    if level == 0 {
                        return Err(LiftError::LevelUnderflow { position });
                    }
                    level -= 1;
                    &self.edge_matrix(e, level)?.adjoint() * &acc
                }
            };
        }
        Ok(LevelMatrix {
            source_level: start,
            target_level: level,
            matrix: acc,
        })
    }

    /// Probes `X_ℓ` on the class `[v, ξ]`, `ℓ` the unique loop at `v`:
    /// `X_ℓ [v, ξ]` is compared with `[v, ξ]` one level up.
    pub fn loop_eigenvalue(&self, v: usize, xi: &[C64]) -> Result<EigenProbe, LiftError> {
        let g = self.graph();
        let loops: Vec<usize> = g.loops_at(v).collect();
        if loops.len() != 1 {
            return Err(LiftError::LoopCount {
                vertex: g.vertex(v).clone(),
                loops: loops.len(),
            });
        }
        let m = self.level;
        let here = self.reduce_class(&Path::vertex(v), xi, m)?;
        let moved = self.edge_matrix(loops[0], m)?.apply(&here.coefficients);
        let same = self.embed_vector(&here)?.coefficients;
        let value = inner(&same, &moved) / inner(&same, &same);
        let residual = moved
            .iter()
            .zip(&same)
            .map(|(a, b)| (a - value * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        Ok(EigenProbe { value, residual })
    }
}

fn embedding_matrix(
    module: &PythagoreanModule,
    from: &LevelBasis,
    to: &LevelBasis,
) -> ComplexMatrix {
    let g = module.graph();
    let k = from.level();
    let mut out = ComplexMatrix::zeros(to.len(), from.len());
    for (j, entry) in from.entries().iter().enumerate() {
        let source = entry.path.source();
        if entry.path.len() < k || !g.has_incoming(source) {
            let i = to
                .position(&entry.path, entry.fiber)
                .expect("unextendable paths stay maximal");
            out.set(i, j, ONE);
            continue;
        }
        for &mu in g.incoming(source) {
            let op = module.op(mu);
            let longer = entry.path.extend_at_source(g, mu);
            for b in 0..op.rows() {
                let z = op.get(b, entry.fiber);
                if z != ZERO {
                    let i = to.position(&longer, b).expect("extended path is maximal");
                    out.set(i, j, z);
                }
            }
        }
    }
    out
}

/// `Π(θ)` on level `k`: `[μ, η] ↦ [μ, θ(η)]`.
pub fn lift_intertwiner(
    theta: &GradedMap,
    source: &TruncatedLift,
    target: &TruncatedLift,
    k: usize,
) -> Result<ComplexMatrix, LiftError> {
    if source.graph() != target.graph() {
        return Err(LiftError::ModuleMismatch);
    }
    let g = source.graph();
    if theta.blocks.len() != g.vertex_count() {
        return Err(LiftError::MapShape {
            vertex: theta.blocks.len().min(g.vertex_count()),
        });
    }
    for v in 0..g.vertex_count() {
        if theta.block(v).shape() != (target.module().dim(v), source.module().dim(v)) {
            return Err(LiftError::MapShape { vertex: v });
        }
    }
    let residual = theta.intertwining_residual(source.module(), target.module());
    if residual > VALIDATION_TOL * theta.frobenius_norm().max(1.0) {
        return Err(LiftError::NotIntertwiner(residual));
    }
    let max = source.top_level().min(target.top_level());
    if k > max {
        return Err(LiftError::LevelOutOfRange { level: k, max });
    }
    let (from, to) = (source.basis(k), target.basis(k));
    let mut out = ComplexMatrix::zeros(to.len(), from.len());
    for (j, entry) in from.entries().iter().enumerate() {
        let block = theta.block(entry.path.source());
        for b in 0..block.rows() {
            let z = block.get(b, entry.fiber);
            if z != ZERO {
                let i = to
                    .position(&entry.path, b)
                    .expect("target fiber is nonzero, so the path is in its basis");
                out.set(i, j, z);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::module::{direct_sum, intertwiner_space, one_dim_module, random_module};
    use crate::quantum::{sphere_even_graph, sphere_odd_graph};

    fn phase(k: u32, n: u32) -> C64 {
        C64::from_polar(1.0, std::f64::consts::TAU * f64::from(k) / f64::from(n))
    }

    fn l3() -> Arc<Graph> {
        Arc::new(sphere_odd_graph(2))
    }

    #[test]
    fn lift_dimensions_on_l3() {
        let m1 = one_dim_module(l3(), 0, phase(1, 8)).unwrap();
        let m2 = one_dim_module(l3(), 1, phase(3, 8)).unwrap();
        let sum = direct_sum(&m1, &m2).unwrap();
        let t1 = lift(&m1, 5).unwrap();
        let t2 = lift(&m2, 5).unwrap();
        let ts = lift(&sum, 5).unwrap();
        for k in 0..=5 {
            assert_eq!(t1.dim(k), k + 1);
            assert_eq!(t2.dim(k), 1);
            assert_eq!(ts.dim(k), k + 2);
        }
    }

    #[test]
    fn lift_rejects_invalid_modules() {
        let m = random_module(l3(), &[1, 1], 2).unwrap();
        let bad = m
            .clone()
            .with_op(0, m.op(0).scale(C64::new(2.0, 0.0)))
            .unwrap();
        assert!(matches!(
            lift(&bad, 2),
            Err(LiftError::InvalidModule { .. })
        ));
    }

    #[test]
    fn embedding_on_the_one_loop_graph() {
        let z = phase(1, 6);
        let m = one_dim_module(Arc::new(sphere_odd_graph(1)), 0, z).unwrap();
        let t = lift(&m, 3).unwrap();
        let x = LiftVector {
            level: 0,
            coefficients: vec![ONE],
        };
        let y = t.embed_vector(&x).unwrap();
        assert_eq!(y.level, 1);
        assert!((y.coefficients[0] - z).norm() < 1e-15);
        let gens = t.generator_matrices();
        assert_eq!(gens.edges[0], ComplexMatrix::scalar(ONE));
    }

    #[test]
    fn unextendable_entries_are_fixed() {
        let g = Arc::new(sphere_even_graph(3));
        let m = random_module(g.clone(), &[1, 1, 1, 1, 1], 4).unwrap();
        let t = lift(&m, 2).unwrap();
        let four = g.require_vertex("4").unwrap();
        let x = t.reduce_class(&Path::vertex(four), &[ONE], 0).unwrap();
        let y = t.embed_vector(&x).unwrap();
        let i = t.basis(1).position(&Path::vertex(four), 0).unwrap();
        assert_eq!(y.coefficients[i], ONE);
        assert!((y.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reduce_class_one_step() {
        let z = phase(1, 8);
        let g = l3();
        let m = one_dim_module(g.clone(), 0, z).unwrap();
        let t = lift(&m, 2).unwrap();
        let x0 = t.reduce_class(&Path::vertex(0), &[ONE], 0).unwrap();
        assert_eq!(x0.coefficients, vec![ONE]);
        let x1 = t.reduce_class(&Path::vertex(0), &[ONE], 1).unwrap();
        let loop11 = Path::from_ids(&g, &["11"]).unwrap();
        let i = t.basis(1).position(&loop11, 0).unwrap();
        assert!((x1.coefficients[i] - z).norm() < 1e-15);
        assert!((x1.norm() - 1.0).abs() < 1e-15);

        assert!(matches!(
            t.reduce_class(&Path::from_ids(&g, &["11", "11"]).unwrap(), &[ONE], 1),
            Err(LiftError::PathTooLong { .. })
        ));
        assert!(matches!(
            t.reduce_class(&Path::vertex(1), &[ONE], 1),
            Err(LiftError::ZeroFiber(_))
        ));
    }

    #[test]
    fn generator_relations_on_l5() {
        let g = Arc::new(sphere_odd_graph(3));
        let m = random_module(g.clone(), &[2, 3, 1], 17).unwrap();
        let t = lift(&m, 2).unwrap();
        let gens = t.generator_matrices();
        for e in 0..g.edge_count() {
            let ee = &gens.edges[e].adjoint() * &gens.edges[e];
            assert!(ee.distance(&gens.projections[g.source(e)]) <= 1e-12);
        }
        let total = gens
            .projections
            .iter()
            .fold(ComplexMatrix::zeros(t.dim(2), t.dim(2)), |acc, p| &acc + p);
        assert_eq!(total, ComplexMatrix::identity(t.dim(2)));
        let report = t.ck_residuals();
        assert!(report.passed(1e-10), "{report:?}");
    }

    #[test]
    fn perturbed_module_shows_in_class_relation() {
        let g = Arc::new(sphere_odd_graph(3));
        let m = random_module(g, &[2, 2, 2], 3).unwrap();
        // Scale one operator so validation fails at about 1e-2.
        let bumped = m.op(5).scale(C64::new(1.005, 0.0));
        let bad = m.with_op(5, bumped).unwrap();
        let vr = validate_module(&bad, VALIDATION_TOL);
        assert!(vr.max_residual() > 1e-3 && vr.max_residual() < 1e-1);
        let report = TruncatedLift::new_unchecked(&bad, 2, Exec::default()).ck_residuals();
        assert!(report.class_relation >= 1e-3, "{report:?}");
    }

    #[test]
    fn lift_of_vertex_two_kills_vertex_one() {
        let m = one_dim_module(l3(), 1, phase(1, 5)).unwrap();
        for level in 0..4 {
            let t = lift(&m, level).unwrap();
            let report = t.ck_residuals();
            assert!(report.max() < 1e-14);
            assert_eq!(t.projection(0, level).unwrap().max_abs(), 0.0);
        }
    }

    #[test]
    fn words() {
        let g = Arc::new(sphere_odd_graph(3));
        let m = random_module(g.clone(), &[1, 2, 1], 8).unwrap();
        let t = lift(&m, 2).unwrap();
        let e = g.require_edge("32").unwrap();
        let w = t.word_operator(&[Letter::Vertex(1)], 2).unwrap();
        assert_eq!(w.matrix, t.projection(1, 2).unwrap());
        let w = t
            .word_operator(&[Letter::EdgeAdjoint(e), Letter::Edge(e)], 1)
            .unwrap();
        assert_eq!((w.source_level, w.target_level), (1, 1));
        assert_eq!(w.matrix, t.projection(g.source(e), 1).unwrap());
        assert!(matches!(
            t.word_operator(&[Letter::EdgeAdjoint(e)], 0),
            Err(LiftError::LevelUnderflow { .. })
        ));
        assert!(matches!(
            t.word_operator(&[Letter::Edge(e), Letter::Edge(e)], 2),
            Err(LiftError::LevelOverflow { .. })
        ));
    }

    #[test]
    fn loop_eigenvalue_is_the_conjugate_phase() {
        let g = l3();
        for k in 0..8 {
            let z = phase(k, 8);
            let m = one_dim_module(g.clone(), 0, z).unwrap();
            for level in 0..=4 {
                let t = lift(&m, level).unwrap();
                let probe = t.loop_eigenvalue(0, &[ONE]).unwrap();
                assert!((probe.value - z.conj()).norm() < 1e-12);
                assert!(probe.residual < 1e-12);
            }
        }
    }

    #[test]
    fn lifted_intertwiners() {
        let g = l3();
        let m = random_module(g.clone(), &[2, 1], 21).unwrap();
        let sum = direct_sum(&m, &m).unwrap();
        let (tm, ts) = (lift(&m, 3).unwrap(), lift(&sum, 3).unwrap());

        let id = lift_intertwiner(&GradedMap::identity(&m), &tm, &tm, 2).unwrap();
        assert_eq!(id, ComplexMatrix::identity(tm.dim(2)));
        let zero = lift_intertwiner(&GradedMap::zero(&m, &sum), &tm, &ts, 2).unwrap();
        assert_eq!(zero.max_abs(), 0.0);

        let hom = intertwiner_space(&m, &sum).unwrap();
        for theta in &hom.basis {
            for k in 0..=3 {
                let pk = lift_intertwiner(theta, &tm, &ts, k).unwrap();
                let pk1 = lift_intertwiner(theta, &tm, &ts, k + 1).unwrap();
                for e in 0..g.edge_count() {
                    let lhs = &pk1 * &tm.edge_matrix(e, k).unwrap();
                    let rhs = &ts.edge_matrix(e, k).unwrap() * &pk;
                    assert!(lhs.distance(&rhs) < 1e-10);
                }
                let lhs = &pk1 * tm.embedding(k).unwrap();
                let rhs = ts.embedding(k).unwrap() * &pk;
                assert!(lhs.distance(&rhs) < 1e-10);
            }
        }

        let mut corner = ComplexMatrix::zeros(4, 2);
        corner.set(0, 0, ONE);
        let not_hom = GradedMap {
            blocks: vec![corner, ComplexMatrix::zeros(2, 1)],
        };
        assert!(matches!(
            lift_intertwiner(&not_hom, &tm, &ts, 1),
            Err(LiftError::NotIntertwiner(_))
        ));
    }
}

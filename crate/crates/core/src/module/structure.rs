//! Intertwiners, irreducibility and indecomposability of modules.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{ModuleError, PythagoreanModule, RANK_TOL};
use crate::exec::Exec;
use crate::matrix::{nullspace, nullspace_abs, rank, ComplexMatrix, SpanBasis, C64, ZERO};

/// A linear map `⊕ H_v -> ⊕ H'_v` that respects the grading: one block
/// `dims'[v] x dims[v]` per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedMap {
    pub blocks: Vec<ComplexMatrix>,
}

impl GradedMap {
    pub fn identity(m: &PythagoreanModule) -> Self {
        Self {
            blocks: m
                .dims()
                .iter()
                .map(|&d| ComplexMatrix::identity(d))
                .collect(),
        }
    }

    pub fn zero(source: &PythagoreanModule, target: &PythagoreanModule) -> Self {
        Self {
            blocks: source
                .dims()
                .iter()
                .zip(target.dims())
                .map(|(&d, &t)| ComplexMatrix::zeros(t, d))
                .collect(),
        }
    }

    pub fn block(&self, v: usize) -> &ComplexMatrix {
        &self.blocks[v]
    }

    /// The block-diagonal matrix on the total spaces.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let rows: usize = self.blocks.iter().map(ComplexMatrix::rows).sum();
        let cols: usize = self.blocks.iter().map(ComplexMatrix::cols).sum();
        let mut out = ComplexMatrix::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in &self.blocks {
            out.set_block(r, c, b);
            r += b.rows();
            c += b.cols();
        }
        out
    }

    /// `max_g ‖θ_{s(g)} A_g − A'_g θ_{r(g)}‖_F`.
    pub fn intertwining_residual(
        &self,
        source: &PythagoreanModule,
        target: &PythagoreanModule,
    ) -> f64 {
        let g = source.graph();
        (0..g.edge_count())
            .map(|e| {
                let lhs = &self.blocks[g.source(e)] * source.op(e);
                let rhs = target.op(e) * &self.blocks[g.range(e)];
                lhs.distance(&rhs)
            })
            .fold(0.0, f64::max)
    }

    /// Every block square and of full numerical rank.
    pub fn is_invertible(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| b.is_square() && rank(b, RANK_TOL) == b.rows())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.frobenius_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    fn combination(basis: &[GradedMap], coefficients: &[C64]) -> GradedMap {
        let mut blocks: Vec<ComplexMatrix> = basis[0]
            .blocks
            .iter()
            .map(|b| ComplexMatrix::zeros(b.rows(), b.cols()))
            .collect();
        for (map, &c) in basis.iter().zip(coefficients) {
            for (acc, b) in blocks.iter_mut().zip(&map.blocks) {
                *acc = &*acc + &b.scale(c);
            }
        }
        GradedMap { blocks }
    }
}

/// Orthonormal basis (in the Frobenius inner product) of `Hom(source, target)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntertwinerSpace {
    pub basis: Vec<GradedMap>,
}

impl IntertwinerSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }
}

/// Solves `θ_{s(g)} A_g = A'_g θ_{r(g)}` for all edges `g`.
pub fn intertwiner_space(
    source: &PythagoreanModule,
    target: &PythagoreanModule,
) -> Result<IntertwinerSpace, ModuleError> {
    if !source.same_graph(target) {
        return Err(ModuleError::GraphMismatch);
    }
    let g = source.graph();
    let (d1, d2) = (source.dims(), target.dims());
    let mut offsets = Vec::with_capacity(d1.len());
    let mut unknowns = 0;
    for v in 0..d1.len() {
        offsets.push(unknowns);
        unknowns += d2[v] * d1[v];
    }
    // θ_v[i][j] sits at offsets[v] + i * d1[v] + j.
    let idx = |v: usize, i: usize, j: usize| offsets[v] + i * d1[v] + j;

    let equations: usize = (0..g.edge_count())
        .map(|e| d2[g.source(e)] * d1[g.range(e)])
        .sum();
    let mut system = ComplexMatrix::zeros(equations, unknowns);
    let mut row = 0;
    for e in 0..g.edge_count() {
        let (s, r) = (g.source(e), g.range(e));
        let (a, a2) = (source.op(e), target.op(e));
        for i in 0..d2[s] {
            for k in 0..d1[r] {
                for j in 0..d1[s] {
                    system.add_at(row, idx(s, i, j), a.get(j, k));
                }
                for j in 0..d2[r] {
                    system.add_at(row, idx(r, j, k), -a2.get(i, j));
                }
                row += 1;
            }
        }
    }

    let basis = nullspace(&system, RANK_TOL)
        .into_iter()
        .map(|x| GradedMap {
            blocks: (0..d1.len())
                .map(|v| {
                    let start = offsets[v];
                    ComplexMatrix::from_vec(d2[v], d1[v], x[start..start + d2[v] * d1[v]].to_vec())
                })
                .collect(),
        })
        .collect();
    Ok(IntertwinerSpace { basis })
}

/// Dimension of the unital algebra generated by `generators` inside `M_d(C)`,
/// found by closing `span{I}` under left multiplication.
pub fn generated_algebra_dimension(generators: &[ComplexMatrix], d: usize, exec: Exec) -> usize {
    let mut span = SpanBasis::new(d * d, RANK_TOL);
    let identity = ComplexMatrix::identity(d);
    span.insert(identity.data());
    let mut frontier = vec![identity];
    while !frontier.is_empty() && !span.is_full() {
        let pairs: Vec<(usize, usize)> = (0..frontier.len())
            .flat_map(|f| (0..generators.len()).map(move |k| (f, k)))
            .collect();
        let products = exec.map(&pairs, |&(f, k)| &generators[k] * &frontier[f]);
        frontier = products
            .into_iter()
            .filter(|p| span.insert(p.data()))
            .collect();
    }
    span.len()
}

/// Whether the module has no invariant subspace other than `0` and `H`,
/// by Burnside: the generated algebra must be all of `M_d(C)`.
pub fn is_irreducible(m: &PythagoreanModule) -> Result<bool, ModuleError> {
    let d = m.total_dim();
    if d == 0 {
        return Err(ModuleError::ZeroDimensional);
    }
    Ok(generated_algebra_dimension(&m.generators(), d, Exec::default()) == d * d)
}

/// Dimension of `{X : XG = GX and XG† = G†X for every generator G}`.
///
/// The commutation constraints are imposed one generator at a time on the
/// running solution space, which keeps every factorization at most
/// `d² x d²`. Singular values count as zero at or below `RANK_TOL` times the
/// Frobenius norm of the full stacked system.
pub fn star_commutant_dimension(m: &PythagoreanModule) -> usize {
    let d = m.total_dim();
    let n = d * d;
    let gens = m.generators();
    let mut all: Vec<ComplexMatrix> = Vec::with_capacity(2 * gens.len());
    for g in gens {
        all.push(g.adjoint());
        all.push(g);
    }
    all.retain(|g| g.max_abs() > 0.0);
    // Row i*d+k of the block for G is (XG − GX)[i][k], acting on vec(X) row-major.
    let blocks: Vec<ComplexMatrix> = all
        .iter()
        .map(|g| {
            let mut block = ComplexMatrix::zeros(n, n);
            for i in 0..d {
                for k in 0..d {
                    let row = i * d + k;
                    for j in 0..d {
                        let gjk = g.get(j, k);
                        if gjk != ZERO {
                            block.add_at(row, i * d + j, gjk);
                        }
                        let gij = g.get(i, j);
                        if gij != ZERO {
                            block.add_at(row, j * d + k, -gij);
                        }
                    }
                }
            }
            block
        })
        .collect();
    let scale = blocks
        .iter()
        .map(|b| b.frobenius_norm().powi(2))
        .sum::<f64>()
        .sqrt();
    let mut basis = ComplexMatrix::identity(n);
    for block in &blocks {
        // The identity always commutes, so one dimension is the floor.
        if basis.cols() <= 1 {
            break;
        }
        let null = nullspace_abs(&(block * &basis), RANK_TOL * scale);
        let mut step = ComplexMatrix::zeros(basis.cols(), null.len());
        for (c, v) in null.iter().enumerate() {
            for (r, &z) in v.iter().enumerate() {
                step.set(r, c, z);
            }
        }
        basis = &basis * &step;
    }
    basis.cols()
}

/// Whether `H` admits no splitting into two orthogonal nonzero submodules.
///
/// Such a splitting is exactly a nontrivial orthogonal projection commuting
/// with every generator and its adjoint, and a star-closed algebra of
/// dimension above one always contains one.
pub fn is_indecomposable(m: &PythagoreanModule) -> Result<bool, ModuleError> {
    if m.total_dim() == 0 {
        return Err(ModuleError::ZeroDimensional);
    }
    Ok(star_commutant_dimension(m) == 1)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Equivalence {
    /// An invertible intertwiner `source -> target`.
    Equivalent(GradedMap),
    Inequivalent,
    Undetermined,
}

const EQUIVALENCE_DRAWS: usize = 20;
const EQUIVALENCE_SEED: u64 = 0x00c0_ffee;

/// Decides whether two modules are isomorphic, with a certificate when they are.
pub fn are_equivalent(
    a: &PythagoreanModule,
    b: &PythagoreanModule,
) -> Result<Equivalence, ModuleError> {
    if !a.same_graph(b) {
        return Err(ModuleError::GraphMismatch);
    }
    // A graded isomorphism needs matching dimensions vertex by vertex.
    if a.dims() != b.dims() {
        return Ok(Equivalence::Inequivalent);
    }
    if a.total_dim() == 0 {
        return Ok(Equivalence::Equivalent(GradedMap::identity(a)));
    }
    let forward = intertwiner_space(a, b)?;
    let backward = intertwiner_space(b, a)?;
    if forward.is_zero() || backward.is_zero() {
        return Ok(Equivalence::Inequivalent);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(EQUIVALENCE_SEED);
    for _ in 0..EQUIVALENCE_DRAWS {
        let coefficients: Vec<C64> = (0..forward.dim())
            .map(|_| {
                C64::new(
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                )
            })
            .collect();
        let theta = GradedMap::combination(&forward.basis, &coefficients);
        if theta.is_invertible() {
            return Ok(Equivalence::Equivalent(theta));
        }
    }
    if is_irreducible(a)? && is_irreducible(b)? {
        // A nonzero intertwiner between irreducibles is invertible.
        return Ok(Equivalence::Equivalent(forward.basis[0].clone()));
    }
    Ok(Equivalence::Undetermined)
}

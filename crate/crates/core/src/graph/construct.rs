use itertools::Itertools;

use super::path::all_paths;
use super::{Edge, EdgeId, Graph, GraphError, VertexId};

pub const ISOMORPHISM_VERTEX_LIMIT: usize = 9;

/// Same vertices and edge ids, every edge reversed.
pub fn opposite(g: &Graph) -> Graph {
    let edges = g
        .edges()
        .iter()
        .map(|e| Edge {
            id: e.id.clone(),
            source: e.range.clone(),
            range: e.source.clone(),
            provenance: e.provenance.clone(),
        })
        .collect();
    Graph::new(g.vertices().to_vec(), edges).expect("reversing edges keeps a graph valid")
}

/// The graph on the same vertices whose edges are the length-`k` paths of `g`.
///
/// Edge ids are the right-to-left display of the underlying path; for `k > 1`
/// the traversal-order constituents are kept as provenance.
pub fn power_graph(g: &Graph, k: usize) -> Result<Graph, GraphError> {
    if k == 0 {
        return Err(GraphError::ZeroPower);
    }
    let edges = all_paths(g, k)
        .into_iter()
        .map(|p| {
            let edge = Edge::new(
                p.display(g),
                g.vertex(p.source()).clone(),
                g.vertex(p.range()).clone(),
            );
            if k == 1 {
                edge
            } else {
                edge.with_provenance(p.edges().iter().map(|&e| g.edge(e).id.clone()).collect())
            }
        })
        .collect();
    Graph::new(g.vertices().to_vec(), edges)
}

/// Skew product over `Z_p`: vertex `v@c` for each level `c`, and edge `e@c`
/// running from `s(e)@(c - w(s(e)))` to `r(e)@c`.
///
/// `weights` is indexed like `g.vertices()`.
pub fn skew_product(g: &Graph, p: u32, weights: &[i64]) -> Result<Graph, GraphError> {
    if p < 2 {
        return Err(GraphError::CyclicOrderTooSmall(p));
    }
    if weights.len() < g.vertex_count() {
        return Err(GraphError::MissingWeight(g.vertex(weights.len()).clone()));
    }
    let order = i64::from(p);
    let at = |v: usize, c: i64| VertexId::new(format!("{}@{}", g.vertex(v), c.rem_euclid(order)));
    let vertices = (0..g.vertex_count())
        .flat_map(|v| (0..order).map(move |c| (v, c)))
        .map(|(v, c)| at(v, c))
        .collect();
    let edges = (0..g.edge_count())
        .flat_map(|e| (0..order).map(move |c| (e, c)))
        .map(|(e, c)| {
            let (s, r) = (g.source(e), g.range(e));
            Edge::new(
                EdgeId::new(format!("{}@{}", g.edge(e).id, c)),
                at(s, c - weights[s]),
                at(r, c),
            )
        })
        .collect();
    Graph::new(vertices, edges)
}

/// A vertex bijection `g1 -> g2`, stored by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexBijection(pub Vec<usize>);

impl VertexBijection {
    pub fn image(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn labels<'a>(&self, g1: &'a Graph, g2: &'a Graph) -> Vec<(&'a VertexId, &'a VertexId)> {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &j)| (g1.vertex(i), g2.vertex(j)))
            .collect()
    }
}

/// Brute-force search for a vertex bijection preserving edge multiplicities.
///
/// Permutations are tried in lexicographic order, so the identity wins when it works.
pub fn is_isomorphic(g1: &Graph, g2: &Graph) -> Result<Option<VertexBijection>, GraphError> {
    let n = g1.vertex_count();
    for g in [g1, g2] {
        if g.vertex_count() > ISOMORPHISM_VERTEX_LIMIT {
            return Err(GraphError::TooManyVertices {
                vertices: g.vertex_count(),
                limit: ISOMORPHISM_VERTEX_LIMIT,
            });
        }
    }
    if n != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    let a = g1.multiplicity_matrix();
    let b = g2.multiplicity_matrix();
    let signature = |m: &Vec<Vec<usize>>, v: usize| {
        let out: usize = m[v].iter().sum();
        let inc: usize = m.iter().map(|row| row[v]).sum();
        (out, inc, m[v][v])
    };
    let sig_a: Vec<_> = (0..n).map(|v| signature(&a, v)).collect();
    let sig_b: Vec<_> = (0..n).map(|v| signature(&b, v)).collect();
    let found = (0..n).permutations(n).find(|perm| {
        (0..n).all(|i| sig_a[i] == sig_b[perm[i]])
            && (0..n).all(|i| (0..n).all(|j| a[i][j] == b[perm[i]][perm[j]]))
    });
    Ok(found.map(VertexBijection))
}

/// Reorders the vertex list so that old vertex `i` sits at index `perm[i]`.
/// Labels and edges are unchanged; only indices move.
pub fn permute_vertices(g: &Graph, perm: &[usize]) -> Graph {
    assert_eq!(perm.len(), g.vertex_count());
    let mut vertices = vec![VertexId::new("_"); perm.len()];
    for (i, &j) in perm.iter().enumerate() {
        vertices[j] = g.vertex(i).clone();
    }
    Graph::new(vertices, g.edges().to_vec()).expect("permutation keeps a graph valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{enumerate_paths, PathFilter};
    use crate::quantum::sphere_odd_graph;

    #[test]
    fn opposite_is_an_involution() {
        let l1 = sphere_odd_graph(1);
        assert_eq!(opposite(&l1), l1);
        let l5 = sphere_odd_graph(3);
        assert_ne!(opposite(&l5), l5);
        assert_eq!(opposite(&opposite(&l5)), l5);
    }

    #[test]
    fn l5_is_isomorphic_to_its_opposite_by_reversal() {
        // Oracle: check all 3! maps directly on the edge lists.
        let l5 = sphere_odd_graph(3);
        let op = opposite(&l5);
        let count = |g: &Graph, s: usize, r: usize| {
            (0..g.edge_count())
                .filter(|&e| g.source(e) == s && g.range(e) == r)
                .count()
        };
        let working: Vec<Vec<usize>> = (0..3)
            .permutations(3)
            .filter(|p| (0..3).all(|s| (0..3).all(|r| count(&l5, s, r) == count(&op, p[s], p[r]))))
            .collect();
        assert_eq!(working, vec![vec![2, 1, 0]]);

        let found = is_isomorphic(&l5, &op).unwrap().unwrap();
        assert_eq!(found.0, vec![2, 1, 0]);
    }

    #[test]
    fn isomorphism_trivial_cases() {
        let l5 = sphere_odd_graph(3);
        assert!(is_isomorphic(&l5, &l5).unwrap().unwrap().is_identity());
        assert_eq!(is_isomorphic(&l5, &sphere_odd_graph(1)).unwrap(), None);
        assert!(matches!(
            is_isomorphic(&sphere_odd_graph(10), &sphere_odd_graph(10)),
            Err(GraphError::TooManyVertices { .. })
        ));
    }

    #[test]
    fn power_graph_counts() {
        let l1 = sphere_odd_graph(1);
        let sq = power_graph(&l1, 2).unwrap();
        assert_eq!((sq.vertex_count(), sq.edge_count()), (1, 1));
        assert_eq!(sq.edge(0).id.as_str(), "11.11");

        let l5 = sphere_odd_graph(3);
        let sq = power_graph(&l5, 2).unwrap();
        // Oracle: nondecreasing triples 1 <= i <= j <= k <= 3.
        let triples = (1..=3)
            .flat_map(|i| (i..=3).flat_map(move |j| (j..=3).map(move |k| (i, j, k))))
            .count();
        assert_eq!(sq.edge_count(), triples);
        assert_eq!(sq.edge_count(), 10);

        assert!(is_isomorphic(&power_graph(&l5, 1).unwrap(), &l5)
            .unwrap()
            .is_some());
        assert_eq!(power_graph(&l5, 0), Err(GraphError::ZeroPower));
    }

    #[test]
    fn power_graph_matches_enumeration() {
        let g = sphere_odd_graph(3);
        for k in 1..=4 {
            let total: usize = (0..g.vertex_count())
                .map(|v| enumerate_paths(&g, k, PathFilter::Source(v)).len())
                .sum();
            assert_eq!(power_graph(&g, k).unwrap().edge_count(), total);
        }
    }

    #[test]
    fn skew_product_of_l3() {
        let l3 = sphere_odd_graph(2);
        let sk = skew_product(&l3, 3, &[1, 1]).unwrap();
        assert_eq!((sk.vertex_count(), sk.edge_count()), (6, 9));
        let e = sk.require_edge("21@0").unwrap();
        assert_eq!(sk.vertex(sk.source(e)).as_str(), "1@2");
        assert_eq!(sk.vertex(sk.range(e)).as_str(), "2@0");

        assert_eq!(
            skew_product(&l3, 1, &[1, 1]),
            Err(GraphError::CyclicOrderTooSmall(1))
        );
        assert!(matches!(
            skew_product(&l3, 3, &[1]),
            Err(GraphError::MissingWeight(_))
        ));
    }

    #[test]
    fn zero_weights_give_disjoint_copies() {
        let l5 = sphere_odd_graph(3);
        let sk = skew_product(&l5, 4, &[0, 4, 8]).unwrap();
        for e in 0..sk.edge_count() {
            let level = |v: usize| sk.vertex(v).as_str().split('@').nth(1).unwrap().to_owned();
            assert_eq!(level(sk.source(e)), level(sk.range(e)));
        }
    }
}

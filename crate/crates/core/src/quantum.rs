//! The graph families attached to quantum spheres, projective spaces and lens spaces.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::graph::{
    loop_structure, power_graph, skew_product, Edge, EdgeId, Graph, GraphError, VertexId,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantumError {
    #[error("weight m_{index} = {weight} is not coprime to p = {p}: gcd({weight}, {p}) = {}", gcd(*weight, *p))]
    NotCoprime { index: usize, weight: u32, p: u32 },
    #[error("invalid lens parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Edge label `ji` for the edge from `i` to `j`; a comma separates the two
/// numbers once labels stop being single digits.
fn pair_id(j: usize, i: usize, largest: usize) -> EdgeId {
    if largest < 10 {
        EdgeId::new(format!("{j}{i}"))
    } else {
        EdgeId::new(format!("{j},{i}"))
    }
}

fn numbered_vertices(count: usize) -> Vec<VertexId> {
    (1..=count).map(|v| VertexId::new(v.to_string())).collect()
}

/// Vertices `1..=n`, one edge `ji: i -> j` for every `i <= j`.
pub fn sphere_odd_graph(n: usize) -> Graph {
    assert!(n >= 1, "sphere graphs need n >= 1");
    let edges = (1..=n)
        .flat_map(|j| (1..=j).map(move |i| (j, i)))
        .map(|(j, i)| Edge::new(pair_id(j, i, n), i.to_string(), j.to_string()))
        .collect();
    Graph::new(numbered_vertices(n), edges).expect("sphere graph is well formed")
}

/// Vertices `1..=n+2`: a loop at each `i <= n`, an edge `i -> j` for `i < j <= n`,
/// and edges from both `n+1` and `n+2` to every `i <= n`.
pub fn sphere_even_graph(n: usize) -> Graph {
    assert!(n >= 1, "sphere graphs need n >= 1");
    let top = n + 2;
    let mut edges = Vec::with_capacity(n * (n + 1) / 2 + 2 * n);
    for j in 1..=n {
        for i in 1..=j {
            edges.push(Edge::new(pair_id(j, i, top), i.to_string(), j.to_string()));
        }
    }
    for j in 1..=n {
        for src in [n + 1, n + 2] {
            edges.push(Edge::new(
                pair_id(j, src, top),
                src.to_string(),
                j.to_string(),
            ));
        }
    }
    Graph::new(numbered_vertices(top), edges).expect("sphere graph is well formed")
}

/// The odd-sphere graph with length-two paths as edges.
pub fn projective_graph(n: usize) -> Graph {
    power_graph(&sphere_odd_graph(n), 2).expect("exponent is positive")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LensParams {
    pub n: usize,
    pub p: u32,
    pub weights: Vec<u32>,
}

impl LensParams {
    pub fn new(n: usize, p: u32, weights: Vec<u32>) -> Result<Self, QuantumError> {
        if n == 0 {
            return Err(QuantumError::InvalidParams("n must be at least 1".into()));
        }
        if p < 2 {
            return Err(QuantumError::InvalidParams(format!(
                "p must be at least 2, got {p}"
            )));
        }
        if weights.len() != n {
            return Err(QuantumError::InvalidParams(format!(
                "expected {n} weights, got {}",
                weights.len()
            )));
        }
        if weights.contains(&0) {
            return Err(QuantumError::InvalidParams(
                "weights must be positive".into(),
            ));
        }
        Ok(Self { n, p, weights })
    }

    pub fn check_coprime(&self) -> Result<(), QuantumError> {
        for (k, &w) in self.weights.iter().enumerate() {
            if gcd(w, self.p) != 1 {
                return Err(QuantumError::NotCoprime {
                    index: k + 1,
                    weight: w,
                    p: self.p,
                });
            }
        }
        Ok(())
    }
}

/// How the "distinct edges" admissibility condition is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdmissibilityRule {
    /// No vertex of the skew product is visited twice, the starting vertex included.
    #[default]
    NoRevisit,
    /// Only the ranges of the traversed edges must be pairwise distinct.
    DistinctRanges,
}

/// The lens-space graph built from admissible paths of the skew product of
/// the odd-sphere graph over `Z_p` with the given weights.
pub fn lens_graph_coprime(params: &LensParams) -> Result<Graph, QuantumError> {
    lens_graph_coprime_with(params, AdmissibilityRule::default(), Exec::default())
}

pub fn lens_graph_coprime_with(
    params: &LensParams,
    rule: AdmissibilityRule,
    exec: Exec,
) -> Result<Graph, QuantumError> {
    params.check_coprime()?;
    let base = sphere_odd_graph(params.n);
    let weights: Vec<i64> = params.weights.iter().map(|&w| i64::from(w)).collect();
    let skew = skew_product(&base, params.p, &weights)?;
    let p = params.p as usize;

    let per_start = exec.map_range(0..params.n, |i| admissible_paths(&skew, p, i, rule));
    let mut found: Vec<(usize, usize, Vec<usize>)> = per_start.into_iter().flatten().collect();
    found.sort_by_cached_key(|(i, j, path)| {
        let key: Vec<&str> = path.iter().map(|&e| skew.edge(e).id.as_str()).collect();
        (*i, *j, key)
    });

    let edges = found
        .into_iter()
        .map(|(i, j, path)| {
            let mut id: Vec<&str> = path.iter().map(|&e| skew.edge(e).id.as_str()).collect();
            id.reverse();
            Edge::new(id.join("."), base.vertex(i).clone(), base.vertex(j).clone())
                .with_provenance(path.iter().map(|&e| skew.edge(e).id.clone()).collect())
        })
        .collect();
    Ok(Graph::new(base.vertices().to_vec(), edges)?)
}

/// Admissible skew-product paths starting at `(i, 0)`, as `(i, j, edges)`.
///
/// Skew-product indices are vertex-major: vertex `(v, c)` is `v * p + c` and
/// edge `(e, c)` is `e * p + c`.
fn admissible_paths(
    skew: &Graph,
    p: usize,
    start: usize,
    rule: AdmissibilityRule,
) -> Vec<(usize, usize, Vec<usize>)> {
    struct Walk<'a> {
        skew: &'a Graph,
        p: usize,
        start: usize,
        rule: AdmissibilityRule,
        seen: Vec<bool>,
        path: Vec<usize>,
        out: Vec<(usize, usize, Vec<usize>)>,
    }

    impl Walk<'_> {
        fn blocked(&self, v: usize) -> bool {
            match self.rule {
                AdmissibilityRule::NoRevisit => self.seen[v],
                AdmissibilityRule::DistinctRanges => {
                    self.path.iter().any(|&e| self.skew.range(e) == v)
                }
            }
        }

        fn step(&mut self, at: usize) {
            let outgoing = self.skew.outgoing(at).to_vec();
            for e in outgoing {
                let next = self.skew.range(e);
                if self.blocked(next) {
                    continue;
                }
                let level = e % self.p;
                let first = self.path.is_empty();
                self.path.push(e);
                if first || level == 0 {
                    self.out
                        .push((self.start, next / self.p, self.path.clone()));
                }
                if level != 0 {
                    self.seen[next] = true;
                    self.step(next);
                    self.seen[next] = false;
                }
                self.path.pop();
            }
        }
    }

    let origin = start * p;
    let mut walk = Walk {
        skew,
        p,
        start,
        rule,
        seen: vec![false; skew.vertex_count()],
        path: Vec::new(),
        out: Vec::new(),
    };
    walk.seen[origin] = true;
    walk.step(origin);
    walk.out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphFamily {
    SphereOdd { n: usize },
    SphereEven { n: usize },
    Projective { n: usize },
    Lens(LensParams),
}

impl GraphFamily {
    /// Number of vertices carrying loops (`n` for every family).
    fn looped(&self) -> usize {
        match self {
            GraphFamily::SphereOdd { n }
            | GraphFamily::SphereEven { n }
            | GraphFamily::Projective { n } => *n,
            GraphFamily::Lens(params) => params.n,
        }
    }

    fn sources(&self) -> usize {
        match self {
            GraphFamily::SphereEven { .. } => 2,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub checks: Vec<StructureCheck>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&StructureCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Structural checks for a graph claimed to belong to `family`. Vertex `k`
/// (0-based) plays the role of vertex `k + 1`.
pub fn validate_quantum_graph(g: &Graph, family: &GraphFamily) -> StructureReport {
    let n = family.looped();
    let expected_vertices = n + family.sources();
    let mut checks = Vec::new();

    checks.push(StructureCheck {
        name: "vertex count",
        passed: g.vertex_count() == expected_vertices,
        detail: format!("expected {expected_vertices}, found {}", g.vertex_count()),
    });

    let loops = loop_structure(g);
    let bad_loops: Vec<String> = loops
        .loops
        .iter()
        .enumerate()
        .filter(|&(v, &count)| count != if v < n { 1 } else { 0 })
        .map(|(v, &count)| format!("{}: {count} loops", g.vertex(v)))
        .collect();
    checks.push(StructureCheck {
        name: "one loop per vertex",
        passed: bad_loops.is_empty(),
        detail: if bad_loops.is_empty() {
            "ok".into()
        } else {
            bad_loops.join(", ")
        },
    });

    checks.push(StructureCheck {
        name: "loops-removed acyclic",
        passed: loops.loops_removed_acyclic,
        detail: match &loops.cycle {
            None => "ok".into(),
            Some(c) => format!(
                "cycle through {}",
                c.iter()
                    .map(|&v| g.vertex(v).as_str())
                    .collect::<Vec<_>>()
                    .join(" -> ")
            ),
        },
    });

    let counts = g.multiplicity_matrix();
    let mut bad_pattern = Vec::new();
    for (s, row) in counts.iter().enumerate() {
        for (r, &count) in row.iter().enumerate() {
            let expected = if r >= n {
                false
            } else if s >= n {
                true
            } else {
                s <= r
            };
            if (count > 0) != expected {
                bad_pattern.push(format!("{} -> {}: {count} edges", g.vertex(s), g.vertex(r)));
            }
        }
    }
    checks.push(StructureCheck {
        name: "edge pattern",
        passed: bad_pattern.is_empty(),
        detail: if bad_pattern.is_empty() {
            "edge i -> j present iff i <= j".into()
        } else {
            bad_pattern.join(", ")
        },
    });

    StructureReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_isomorphic, opposite};

    #[test]
    fn odd_sphere_sizes() {
        let g = sphere_odd_graph(1);
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 1));
        let g = sphere_odd_graph(3);
        let ids: Vec<&str> = g.edges().iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["11", "21", "22", "31", "32", "33"]);
        assert_eq!(sphere_odd_graph(4).edge_count(), 10);
        let e = g.require_edge("21").unwrap();
        assert_eq!(g.vertex(g.source(e)).as_str(), "1");
        assert_eq!(g.vertex(g.range(e)).as_str(), "2");
    }

    #[test]
    fn even_sphere_sizes() {
        let g = sphere_even_graph(3);
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 12));
        let g = sphere_even_graph(1);
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 3));
        for n in 1..=6 {
            let g = sphere_even_graph(n);
            assert!(!g.has_incoming(n));
            assert!(!g.has_incoming(n + 1));
            assert_eq!(g.outgoing(n).len(), n);
        }
    }

    #[test]
    fn projective_graph_loops() {
        assert_eq!(projective_graph(1).edge_count(), 1);
        assert_eq!(projective_graph(3).edge_count(), 10);
        for n in 1..=6 {
            let report = loop_structure(&projective_graph(n));
            assert!(report.loops.iter().all(|&l| l == 1));
            assert!(report.loops_removed_acyclic);
        }
    }

    #[test]
    fn odd_sphere_is_self_opposite_by_reversal() {
        for n in 1..=5 {
            let g = sphere_odd_graph(n);
            let map = is_isomorphic(&g, &opposite(&g)).unwrap().unwrap();
            assert_eq!(map.0, (0..n).rev().collect::<Vec<_>>());
        }
    }

    #[test]
    fn lens_graph_small_case() {
        let params = LensParams::new(2, 3, vec![1, 1]).unwrap();
        let g = lens_graph_coprime(&params).unwrap();
        let report = loop_structure(&g);
        assert_eq!(report.loops, vec![1, 1]);
        let counts = g.multiplicity_matrix();
        assert!(counts[0][1] >= 1);
        assert_eq!(counts[1][0], 0);
        // The loop at each vertex is the single edge (ii, m_i).
        let loop_at_1 = g.edge(g.loops_at(0).next().unwrap());
        assert_eq!(loop_at_1.id.as_str(), "11@1");
        let loop_at_2 = g.edge(g.loops_at(1).next().unwrap());
        assert_eq!(loop_at_2.id.as_str(), "22@1");
        // 1 -> 2: the direct edge plus three longer admissible paths.
        assert_eq!(counts[0][1], 4);
    }

    #[test]
    fn literal_rule_admits_an_extra_loop() {
        let params = LensParams::new(2, 3, vec![1, 1]).unwrap();
        let g =
            lens_graph_coprime_with(&params, AdmissibilityRule::DistinctRanges, Exec::Sequential)
                .unwrap();
        let loops: Vec<&str> = g.loops_at(0).map(|e| g.edge(e).id.as_str()).collect();
        assert!(loops.contains(&"11@0.11@2.11@1"));
        assert!(!validate_quantum_graph(&g, &GraphFamily::Lens(params)).passed());
    }

    #[test]
    fn lens_graph_rejects_non_coprime_weights() {
        let params = LensParams::new(2, 4, vec![2, 1]).unwrap();
        assert_eq!(
            lens_graph_coprime(&params),
            Err(QuantumError::NotCoprime {
                index: 1,
                weight: 2,
                p: 4
            })
        );
        assert!(LensParams::new(2, 4, vec![1]).is_err());
        assert!(LensParams::new(2, 1, vec![1, 1]).is_err());
    }

    #[test]
    fn lens_graph_provenance_is_the_skew_path() {
        let params = LensParams::new(2, 3, vec![1, 1]).unwrap();
        let g = lens_graph_coprime(&params).unwrap();
        for e in g.edges() {
            let prov = e.provenance.as_ref().unwrap();
            let mut display: Vec<&str> = prov.iter().map(EdgeId::as_str).collect();
            display.reverse();
            assert_eq!(display.join("."), e.id.as_str());
        }
    }

    #[test]
    fn validator_accepts_family_graphs() {
        assert!(
            validate_quantum_graph(&sphere_odd_graph(4), &GraphFamily::SphereOdd { n: 4 }).passed()
        );
        assert!(
            validate_quantum_graph(&sphere_even_graph(3), &GraphFamily::SphereEven { n: 3 })
                .passed()
        );
        assert!(
            validate_quantum_graph(&projective_graph(3), &GraphFamily::Projective { n: 3 })
                .passed()
        );
        let params = LensParams::new(2, 3, vec![1, 1]).unwrap();
        let g = lens_graph_coprime(&params).unwrap();
        assert!(validate_quantum_graph(&g, &GraphFamily::Lens(params)).passed());
    }

    #[test]
    fn validator_flags_double_loop() {
        let g = Graph::from_labels(&["1"], &[("a", "1", "1"), ("b", "1", "1")]).unwrap();
        let report = validate_quantum_graph(&g, &GraphFamily::SphereOdd { n: 1 });
        assert!(!report.check("one loop per vertex").unwrap().passed);
        assert!(report.check("vertex count").unwrap().passed);
    }

    #[test]
    fn lens_graphs_in_range_are_well_structured() {
        for n in 1..=3 {
            for p in 2..=7u32 {
                let coprime: Vec<u32> = (1..=p).filter(|&w| gcd(w, p) == 1).collect();
                // A few weight vectors per (n, p): constant and staggered.
                let choices = [
                    vec![coprime[0]; n],
                    (0..n)
                        .map(|k| coprime[k % coprime.len()])
                        .collect::<Vec<_>>(),
                    (0..n)
                        .map(|k| coprime[(k + 1) % coprime.len()])
                        .collect::<Vec<_>>(),
                ];
                for weights in choices {
                    let params = LensParams::new(n, p, weights).unwrap();
                    let g = lens_graph_coprime(&params).unwrap();
                    let report = validate_quantum_graph(&g, &GraphFamily::Lens(params.clone()));
                    assert!(report.passed(), "{params:?}: {report:?}");
                    let longest = g
                        .edges()
                        .iter()
                        .map(|e| e.provenance.as_ref().unwrap().len())
                        .max();
                    assert!(longest.unwrap() <= n * p as usize);
                }
            }
        }
    }

    #[test]
    fn sequential_and_parallel_lens_graphs_agree() {
        let params = LensParams::new(3, 4, vec![1, 3, 1]).unwrap();
        let a = lens_graph_coprime_with(&params, AdmissibilityRule::NoRevisit, Exec::Sequential)
            .unwrap();
        let b =
            lens_graph_coprime_with(&params, AdmissibilityRule::NoRevisit, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }
}

use super::{Graph, GraphError};

/// A path in a [`Graph`], stored as edge indices in traversal order.
///
/// Length-zero paths are vertices; `source == range` then.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    source: usize,
    range: usize,
    edges: Vec<usize>,
}

impl Path {
    pub fn vertex(v: usize) -> Self {
        Self {
            source: v,
            range: v,
            edges: Vec::new(),
        }
    }

    pub fn edge(g: &Graph, e: usize) -> Self {
        Self {
            source: g.source(e),
            range: g.range(e),
            edges: vec![e],
        }
    }

    /// Builds a nonempty path from edges listed in traversal order.
    pub fn from_edges(g: &Graph, edges: &[usize]) -> Result<Self, GraphError> {
        let (&first, rest) = edges
            .split_first()
            .expect("from_edges needs at least one edge; use Path::vertex");
        let mut range = g.range(first);
        for &e in rest {
            if g.source(e) != range {
                return Err(GraphError::BrokenPath(g.edge(e).id.clone()));
            }
            range = g.range(e);
        }
        Ok(Self {
            source: g.source(first),
            range,
            edges: edges.to_vec(),
        })
    }

    /// Builds a path from edge labels in traversal order (source end first).
    pub fn from_ids(g: &Graph, ids: &[&str]) -> Result<Self, GraphError> {
        let edges = ids
            .iter()
            .map(|id| g.require_edge(id))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_edges(g, &edges)
    }

    #[allow(clippy::len_without_is_empty)] // a length-0 path is a vertex, see `is_vertex`
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn range(&self) -> usize {
        self.range
    }

    /// Edge indices in traversal order.
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    /// The path `self · e`, i.e. `e` traversed before `self`. Requires `r(e) = s(self)`.
    pub fn extend_at_source(&self, g: &Graph, e: usize) -> Self {
        debug_assert_eq!(g.range(e), self.source);
        let mut edges = Vec::with_capacity(self.edges.len() + 1);
        edges.push(e);
        edges.extend_from_slice(&self.edges);
        Self {
            source: g.source(e),
            range: self.range,
            edges,
        }
    }

    /// The path `e · self`, i.e. `e` traversed after `self`. Requires `s(e) = r(self)`.
    pub fn extend_at_range(&self, g: &Graph, e: usize) -> Self {
        debug_assert_eq!(g.source(e), self.range);
        let mut edges = self.edges.clone();
        edges.push(e);
        Self {
            source: self.source,
            range: g.range(e),
            edges,
        }
    }

    /// Edge labels in traversal order; the canonical sort key.
    pub fn key<'g>(&self, g: &'g Graph) -> Vec<&'g str> {
        self.edges.iter().map(|&e| g.edge(e).id.as_str()).collect()
    }

    /// Right-to-left rendering joined by `.`; a vertex path renders as its label.
    pub fn display(&self, g: &Graph) -> String {
        if self.edges.is_empty() {
            return g.vertex(self.source).to_string();
        }
        let mut parts = self.key(g);
        parts.reverse();
        parts.join(".")
    }
}

/// The composite `left · right` (traverse `right`, then `left`).
pub fn compose_paths(g: &Graph, left: &Path, right: &Path) -> Result<Path, GraphError> {
    if left.source != right.range {
        return Err(GraphError::NotComposable {
            left_source: g.vertex(left.source).clone(),
            right_range: g.vertex(right.range).clone(),
        });
    }
    let mut edges = right.edges.clone();
    edges.extend_from_slice(&left.edges);
    Ok(Path {
        source: right.source,
        range: left.range,
        edges,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathFilter {
    Source(usize),
    Range(usize),
}

pub(crate) fn sort_canonical(g: &Graph, paths: &mut [Path]) {
    paths.sort_by_cached_key(|p| p.key(g));
}

/// All paths of exactly `length` edges matching `filter`, in canonical order.
pub fn enumerate_paths(g: &Graph, length: usize, filter: PathFilter) -> Vec<Path> {
    let mut frontier = match filter {
        PathFilter::Source(v) | PathFilter::Range(v) => vec![Path::vertex(v)],
    };
    for _ in 0..length {
        frontier = frontier
            .iter()
            .flat_map(|p| match filter {
                PathFilter::Source(_) => g
                    .outgoing(p.range())
                    .iter()
                    .map(|&e| p.extend_at_range(g, e))
                    .collect::<Vec<_>>(),
                PathFilter::Range(_) => g
                    .incoming(p.source())
                    .iter()
                    .map(|&e| p.extend_at_source(g, e))
                    .collect(),
            })
            .collect();
    }
    sort_canonical(g, &mut frontier);
    frontier
}

/// Every path of `length` edges in the graph, in canonical order.
pub(crate) fn all_paths(g: &Graph, length: usize) -> Vec<Path> {
    let mut paths: Vec<Path> = (0..g.vertex_count())
        .flat_map(|v| enumerate_paths(g, length, PathFilter::Source(v)))
        .collect();
    sort_canonical(g, &mut paths);
    paths
}

/// Paths with range `v` that have length `m`, together with shorter ones that
/// cannot be extended because their source receives no edges.
pub fn maximal_paths(g: &Graph, v: usize, m: usize) -> Vec<Path> {
    let mut out = Vec::new();
    let mut frontier = vec![Path::vertex(v)];
    for _ in 0..m {
        let mut next = Vec::new();
        for p in frontier {
            let incoming = g.incoming(p.source());
            if incoming.is_empty() {
                out.push(p);
            } else {
                next.extend(incoming.iter().map(|&e| p.extend_at_source(g, e)));
            }
        }
        frontier = next;
    }
    out.extend(frontier);
    sort_canonical(g, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopReport {
    /// Number of loops based at each vertex.
    pub loops: Vec<usize>,
    /// Whether the graph is acyclic once every loop is deleted.
    pub loops_removed_acyclic: bool,
    /// A cycle (vertex indices, in traversal order) witnessing failure.
    pub cycle: Option<Vec<usize>>,
}

pub fn loop_structure(g: &Graph) -> LoopReport {
    let loops = (0..g.vertex_count())
        .map(|v| g.loops_at(v).count())
        .collect();
    let cycle = find_cycle_without_loops(g);
    LoopReport {
        loops,
        loops_removed_acyclic: cycle.is_none(),
        cycle,
    }
}

fn find_cycle_without_loops(g: &Graph) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let n = g.vertex_count();
    let mut mark = vec![Mark::New; n];
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        // (vertex, position in its outgoing list)
        let mut stack = vec![(root, 0usize)];
        mark[root] = Mark::Active;
        while let Some(&(v, pos)) = stack.last() {
            let out = g.outgoing(v);
            if pos == out.len() {
                mark[v] = Mark::Done;
                stack.pop();
                continue;
            }
            let w = g.range(out[pos]);
            stack.last_mut().unwrap().1 += 1;
            if w == v {
                continue;
            }
            match mark[w] {
                Mark::New => {
                    mark[w] = Mark::Active;
                    stack.push((w, 0));
                }
                Mark::Active => {
                    let start = stack.iter().position(|&(u, _)| u == w).unwrap();
                    return Some(stack[start..].iter().map(|&(u, _)| u).collect());
                }
                Mark::Done => {}
            }
        }
    }
    None
}

//! Finite directed multigraphs.
//!
//! Vertices and edges carry text labels; everything downstream works on the
//! dense indices assigned in declaration order. Paths are stored in traversal
//! order (source end first) and rendered right-to-left, so the path that runs
//! `21` and then `22` displays as `22.21`.

mod construct;
mod path;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use construct::{
    is_isomorphic, opposite, permute_vertices, power_graph, skew_product, VertexBijection,
    ISOMORPHISM_VERTEX_LIMIT,
};
pub use path::{
    compose_paths, enumerate_paths, loop_structure, maximal_paths, LoopReport, Path, PathFilter,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    EmptyVertexList,
    #[error("malformed identifier {0:?}: ids must be nonempty and contain no whitespace")]
    MalformedId(String),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge {0}")]
    DuplicateEdge(EdgeId),
    #[error("edge {edge} has dangling endpoint {vertex}")]
    DanglingEndpoint { edge: EdgeId, vertex: VertexId },
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error(
        "paths do not compose: source of left is {left_source}, range of right is {right_range}"
    )]
    NotComposable {
        left_source: VertexId,
        right_range: VertexId,
    },
    #[error("edge sequence is not a path: edge {0} does not start where the previous one ends")]
    BrokenPath(EdgeId),
    #[error("skew product needs a cyclic order of at least 2, got {0}")]
    CyclicOrderTooSmall(u32),
    #[error("no weight given for vertex {0}")]
    MissingWeight(VertexId),
    #[error("power graph exponent must be positive")]
    ZeroPower,
    #[error("brute-force isomorphism search is limited to {limit} vertices, got {vertices}")]
    TooManyVertices { vertices: usize, limit: usize },
}

macro_rules! label_type {
    ($name:ident) => {
        #[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(label: impl Into<String>) -> Self {
                Self(label.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }
    };
}

label_type!(VertexId);
label_type!(EdgeId);

/// A directed edge `source -> range`.
///
/// `provenance` records, for edges of derived graphs (power graphs, lens
/// graphs), the traversal-order edge ids of the underlying path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub id: EdgeId,
    pub source: VertexId,
    pub range: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Vec<EdgeId>>,
}

impl Edge {
    pub fn new(
        id: impl Into<EdgeId>,
        source: impl Into<VertexId>,
        range: impl Into<VertexId>,
    ) -> Self {
        Self {
            id: id.into(),
            source: source.into(),
            range: range.into(),
            provenance: None,
        }
    }

    pub fn with_provenance(mut self, provenance: Vec<EdgeId>) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn is_loop(&self) -> bool {
        self.source == self.range
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
}

/// A validated, immutable finite directed multigraph.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct Graph {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    vertex_index: HashMap<VertexId, usize>,
    edge_index: HashMap<EdgeId, usize>,
    sources: Vec<usize>,
    ranges: Vec<usize>,
    incoming: Vec<Vec<usize>>,
    outgoing: Vec<Vec<usize>>,
}

fn well_formed(label: &str) -> bool {
    !label.is_empty() && !label.chars().any(char::is_whitespace)
}

impl Graph {
    pub fn new(vertices: Vec<VertexId>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::EmptyVertexList);
        }
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if !well_formed(v.as_str()) {
                return Err(GraphError::MalformedId(v.0.clone()));
            }
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut edge_index = HashMap::with_capacity(edges.len());
        let mut sources = Vec::with_capacity(edges.len());
        let mut ranges = Vec::with_capacity(edges.len());
        let mut incoming = vec![Vec::new(); vertices.len()];
        let mut outgoing = vec![Vec::new(); vertices.len()];
        for (k, e) in edges.iter().enumerate() {
            if !well_formed(e.id.as_str()) {
                return Err(GraphError::MalformedId(e.id.0.clone()));
            }
            if edge_index.insert(e.id.clone(), k).is_some() {
                return Err(GraphError::DuplicateEdge(e.id.clone()));
            }
            let lookup = |v: &VertexId| {
                vertex_index
                    .get(v)
                    .copied()
                    .ok_or_else(|| GraphError::DanglingEndpoint {
                        edge: e.id.clone(),
                        vertex: v.clone(),
                    })
            };
            let s = lookup(&e.source)?;
            let r = lookup(&e.range)?;
            sources.push(s);
            ranges.push(r);
            outgoing[s].push(k);
            incoming[r].push(k);
        }
        Ok(Self {
            vertices,
            edges,
            vertex_index,
            edge_index,
            sources,
            ranges,
            incoming,
            outgoing,
        })
    }

    /// Convenience constructor from string labels: edges are `(id, source, range)`.
    pub fn from_labels(
        vertices: &[&str],
        edges: &[(&str, &str, &str)],
    ) -> Result<Self, GraphError> {
        Self::new(
            vertices.iter().map(|&v| VertexId::from(v)).collect(),
            edges
                .iter()
                .map(|&(id, s, r)| Edge::new(id, s, r))
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, v: usize) -> &VertexId {
        &self.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertex_index.get(&VertexId::from(label)).copied()
    }

    pub fn edge_index(&self, label: &str) -> Option<usize> {
        self.edge_index.get(&EdgeId::from(label)).copied()
    }

    pub fn require_vertex(&self, label: &str) -> Result<usize, GraphError> {
        self.vertex_index(label)
            .ok_or_else(|| GraphError::UnknownVertex(label.to_owned()))
    }

    pub fn require_edge(&self, label: &str) -> Result<usize, GraphError> {
        self.edge_index(label)
            .ok_or_else(|| GraphError::UnknownEdge(label.to_owned()))
    }

    pub fn source(&self, e: usize) -> usize {
        self.sources[e]
    }

    pub fn range(&self, e: usize) -> usize {
        self.ranges[e]
    }

    /// Edges whose range is `v`.
    pub fn incoming(&self, v: usize) -> &[usize] {
        &self.incoming[v]
    }

    /// Edges whose source is `v`.
    pub fn outgoing(&self, v: usize) -> &[usize] {
        &self.outgoing[v]
    }

    pub fn has_incoming(&self, v: usize) -> bool {
        !self.incoming[v].is_empty()
    }

    pub fn loops_at(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.outgoing[v]
            .iter()
            .copied()
            .filter(move |&e| self.ranges[e] == v)
    }

    /// `counts[s][r]` is the number of edges from `s` to `r`.
    pub fn multiplicity_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut counts = vec![vec![0; n]; n];
        for e in 0..self.edge_count() {
            counts[self.sources[e]][self.ranges[e]] += 1;
        }
        counts
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl TryFrom<RawGraph> for Graph {
    type Error = GraphError;

    fn try_from(raw: RawGraph) -> Result<Self, Self::Error> {
        Graph::new(raw.vertices, raw.edges)
    }
}

impl From<Graph> for RawGraph {
    fn from(g: Graph) -> Self {
        RawGraph {
            vertices: g.vertices,
            edges: g.edges,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_graph() {
        let g = Graph::from_labels(&["1"], &[("11", "1", "1")]).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.loops_at(0).count(), 1);
    }

    #[test]
    fn builds_l5_from_edge_table() {
        let g = Graph::from_labels(
            &["1", "2", "3"],
            &[
                ("11", "1", "1"),
                ("21", "1", "2"),
                ("22", "2", "2"),
                ("31", "1", "3"),
                ("32", "2", "3"),
                ("33", "3", "3"),
            ],
        )
        .unwrap();
        assert_eq!(g, crate::quantum::sphere_odd_graph(3));
        assert_eq!(g.incoming(0), &[0]);
        assert_eq!(g.outgoing(0), &[0, 1, 3]);
    }

    #[test]
    fn rejects_dangling_endpoint() {
        let err = Graph::from_labels(&["1", "2"], &[("a", "9", "1")]).unwrap_err();
        assert_eq!(
            err,
            GraphError::DanglingEndpoint {
                edge: "a".into(),
                vertex: "9".into()
            }
        );
    }

    #[test]
    fn rejects_duplicates_and_empty() {
        assert_eq!(
            Graph::from_labels(&[], &[]).unwrap_err(),
            GraphError::EmptyVertexList
        );
        assert!(matches!(
            Graph::from_labels(&["1", "1"], &[]),
            Err(GraphError::DuplicateVertex(_))
        ));
        assert!(matches!(
            Graph::from_labels(&["1"], &[("a", "1", "1"), ("a", "1", "1")]),
            Err(GraphError::DuplicateEdge(_))
        ));
        assert!(matches!(
            Graph::from_labels(&["1 2"], &[]),
            Err(GraphError::MalformedId(_))
        ));
    }
}

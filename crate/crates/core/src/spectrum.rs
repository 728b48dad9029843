//! Spectrum of the graph algebra for graphs whose only cycles are loops.
//!
//! Each vertex with a single loop carries a circle of one-dimensional
//! classes `M_{v,z}`, `|z| = 1`, and each loopless vertex that receives no
//! edges carries one isolated class. Graphs outside this class are rejected.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{is_isomorphic, loop_structure, Graph, VertexId, ISOMORPHISM_VERTEX_LIMIT};
use crate::matrix::C64;
use crate::module::{isolated_module, one_dim_module, ModuleError, PythagoreanModule};
use crate::quantum::sphere_even_graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphClass {
    /// Every vertex has exactly one loop and no other cycles exist.
    LoopGraph,
    /// As above, plus loopless vertices that receive no edges.
    LoopGraphWithSources,
    Unsupported,
}

impl GraphClass {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphClass::LoopGraph => "loop-graph",
            GraphClass::LoopGraphWithSources => "loop-graph-with-sources",
            GraphClass::Unsupported => "unsupported",
        }
    }
}

impl std::fmt::Display for GraphClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisReport {
    pub class: GraphClass,
    /// Vertices carrying two or more loops.
    pub multi_loop: Vec<VertexId>,
    /// Loopless vertices that receive an edge.
    pub loopless_receivers: Vec<VertexId>,
    /// A cycle through distinct vertices that is not a loop.
    pub cycle: Option<Vec<VertexId>>,
    /// Set for graphs with sources that are not shaped like an even sphere;
    /// the classification there is extrapolated rather than established.
    pub by_analogy: bool,
}

impl HypothesisReport {
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = Vec::new();
        let join = |vs: &[VertexId]| {
            vs.iter()
                .map(VertexId::as_str)
                .collect::<Vec<_>>()
                .join(", ")
        };
        if !self.multi_loop.is_empty() {
            out.push(format!("more than one loop at: {}", join(&self.multi_loop)));
        }
        if !self.loopless_receivers.is_empty() {
            out.push(format!(
                "loopless vertices receiving edges: {}",
                join(&self.loopless_receivers)
            ));
        }
        if let Some(cycle) = &self.cycle {
            out.push(format!("cycle through {}", join(cycle)));
        }
        if self.by_analogy {
            out.push("sources outside the even-sphere shape: classification by analogy".into());
        }
        out
    }
}

pub fn check_hypotheses(g: &Graph) -> HypothesisReport {
    let structure = loop_structure(g);
    let label = |v: usize| g.vertex(v).clone();
    let multi_loop: Vec<VertexId> = (0..g.vertex_count())
        .filter(|&v| structure.loops[v] > 1)
        .map(label)
        .collect();
    let loopless_receivers: Vec<VertexId> = (0..g.vertex_count())
        .filter(|&v| structure.loops[v] == 0 && g.has_incoming(v))
        .map(label)
        .collect();
    let cycle = structure
        .cycle
        .map(|c| c.into_iter().map(label).collect::<Vec<_>>());
    let has_sources = structure.loops.contains(&0);

    let class = if !multi_loop.is_empty() || !loopless_receivers.is_empty() || cycle.is_some() {
        GraphClass::Unsupported
    } else if has_sources {
        GraphClass::LoopGraphWithSources
    } else {
        GraphClass::LoopGraph
    };
    let by_analogy =
        class == GraphClass::LoopGraphWithSources && !even_sphere_shaped(g, &structure.loops);
    HypothesisReport {
        class,
        multi_loop,
        loopless_receivers,
        cycle,
        by_analogy,
    }
}

fn even_sphere_shaped(g: &Graph, loops: &[usize]) -> bool {
    let circles = loops.iter().filter(|&&l| l == 1).count();
    if circles == 0
        || g.vertex_count() != circles + 2
        || g.vertex_count() > ISOMORPHISM_VERTEX_LIMIT
    {
        return false;
    }
    matches!(is_isomorphic(g, &sphere_even_graph(circles)), Ok(Some(_)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumDescription {
    pub class: GraphClass,
    /// One circle `{M_{v,z} : z ∈ S¹}` per looped vertex.
    pub circles: Vec<VertexId>,
    /// One isolated class per loopless source.
    pub points: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("graph is outside the supported class: {}", .0.diagnostics().join("; "))]
    Unsupported(Box<HypothesisReport>),
    #[error("vertex {0} is not a component of the spectrum")]
    NotInSpectrum(VertexId),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

pub fn classify(g: &Graph) -> Result<SpectrumDescription, SpectrumError> {
    let report = check_hypotheses(g);
    if report.class == GraphClass::Unsupported {
        return Err(SpectrumError::Unsupported(Box::new(report)));
    }
    let mut circles = Vec::new();
    let mut points = Vec::new();
    for v in 0..g.vertex_count() {
        if g.loops_at(v).next().is_some() {
            circles.push(g.vertex(v).clone());
        } else {
            points.push(g.vertex(v).clone());
        }
    }
    Ok(SpectrumDescription {
        class: report.class,
        circles,
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Component {
    Circle { vertex: usize, z: C64 },
    Point { vertex: usize },
}

pub fn representative_module(
    g: Arc<Graph>,
    component: Component,
) -> Result<PythagoreanModule, SpectrumError> {
    let spectrum = classify(&g)?;
    match component {
        Component::Circle { vertex, z } => {
            if !spectrum.circles.contains(g.vertex(vertex)) {
                return Err(SpectrumError::NotInSpectrum(g.vertex(vertex).clone()));
            }
            Ok(one_dim_module(g, vertex, z)?)
        }
        Component::Point { vertex } => {
            if !spectrum.points.contains(g.vertex(vertex)) {
                return Err(SpectrumError::NotInSpectrum(g.vertex(vertex).clone()));
            }
            Ok(isolated_module(g, vertex)?)
        }
    }
}

//! JSON and DOT encodings, and complex scalar syntax.
//!
//! Graph JSON: `{"vertices":["1","2"],"edges":[{"id":"21","source":"1","range":"2"}]}`
//! with an optional `"provenance"` list per edge.
//!
//! Module JSON: `{"graph":{..},"dims":{"1":2},"ops":{"21":[[[re,im],..],..]}}`;
//! matrices are row-major, `dims[source] x dims[range]`. Missing dims are 0
//! and missing operators are zero.
//!
//! Decoding errors carry a JSON pointer to the offending value.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError, VertexId};
use crate::lift::{LiftError, TruncatedLift};
use crate::matrix::{ComplexMatrix, C64};
use crate::module::PythagoreanModule;
use crate::spectrum::SpectrumDescription;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodecError {
    #[error("at {}: {message}", if .pointer.is_empty() { "(root)" } else { .pointer.as_str() })]
    Schema { pointer: String, message: String },
    #[error("malformed complex number {0:?}: expected a+bi or exp(k/n)")]
    Complex(String),
}

impl CodecError {
    fn at(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        CodecError::Schema {
            pointer: pointer.into(),
            message: message.into(),
        }
    }

    /// The JSON pointer of a schema error.
    pub fn pointer(&self) -> Option<&str> {
        match self {
            CodecError::Schema { pointer, .. } => Some(pointer),
            CodecError::Complex(_) => None,
        }
    }
}

fn escape(token: &str) -> String {
    token.replace('~', "~0").replace('/', "~1")
}

fn decode<T: DeserializeOwned>(text: &str) -> Result<T, CodecError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        use serde_path_to_error::Segment;
        let mut pointer = String::new();
        for segment in e.path().iter() {
            pointer.push('/');
            match segment {
                Segment::Seq { index } => pointer.push_str(&index.to_string()),
                Segment::Map { key } => pointer.push_str(&escape(key)),
                Segment::Enum { variant } => pointer.push_str(&escape(variant)),
                Segment::Unknown => pointer.push('?'),
            }
        }
        CodecError::at(pointer, e.inner().to_string())
    })?;
    de.end().map_err(|e| CodecError::at("", e.to_string()))?;
    Ok(value)
}

fn pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values always serialize")
}

// ---- graphs ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
}

fn build_graph(raw: RawGraph, prefix: &str) -> Result<Graph, CodecError> {
    Graph::new(raw.vertices.clone(), raw.edges.clone()).map_err(|err| {
        let vertex_at = |label: &str, nth: usize| {
            raw.vertices
                .iter()
                .enumerate()
                .filter(|(_, v)| v.as_str() == label)
                .nth(nth)
                .map(|(i, _)| format!("/vertices/{i}"))
        };
        let edge_at = |label: &str, nth: usize| {
            raw.edges
                .iter()
                .enumerate()
                .filter(|(_, e)| e.id.as_str() == label)
                .nth(nth)
                .map(|(i, _)| i)
        };
        let local = match &err {
            GraphError::EmptyVertexList => Some("/vertices".to_string()),
            GraphError::MalformedId(label) => {
                vertex_at(label, 0).or_else(|| edge_at(label, 0).map(|i| format!("/edges/{i}/id")))
            }
            GraphError::DuplicateVertex(v) => vertex_at(v.as_str(), 1),
            GraphError::DuplicateEdge(e) => {
                edge_at(e.as_str(), 1).map(|i| format!("/edges/{i}/id"))
            }
            GraphError::DanglingEndpoint { edge, vertex } => edge_at(edge.as_str(), 0).map(|i| {
                let field = if raw.edges[i].source == *vertex {
                    "source"
                } else {
                    "range"
                };
                format!("/edges/{i}/{field}")
            }),
            _ => None,
        };
        CodecError::at(
            format!("{prefix}{}", local.unwrap_or_default()),
            err.to_string(),
        )
    })
}

pub fn graph_to_value(g: &Graph) -> Value {
    serde_json::to_value(g).expect("graphs always serialize")
}

pub fn graph_to_json(g: &Graph) -> String {
    pretty(&graph_to_value(g))
}

pub fn graph_from_json(text: &str) -> Result<Graph, CodecError> {
    build_graph(decode(text)?, "")
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering; every edge is labelled by its id.
pub fn graph_to_dot(g: &Graph) -> String {
    let mut out = String::from("digraph L {\n");
    for v in g.vertices() {
        out.push_str(&format!(
            "  {} [label={}];\n",
            dot_quote(v.as_str()),
            dot_quote(v.as_str())
        ));
    }
    for e in g.edges() {
        out.push_str(&format!(
            "  {} -> {} [label={}];\n",
            dot_quote(e.source.as_str()),
            dot_quote(e.range.as_str()),
            dot_quote(e.id.as_str())
        ));
    }
    out.push_str("}\n");
    out
}

// ---- matrices and modules ----

type RawMatrix = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_value(a: &ComplexMatrix) -> Value {
    Value::Array(
        (0..a.rows())
            .map(|i| Value::Array(a.row(i).iter().map(|z| json!([z.re, z.im])).collect()))
            .collect(),
    )
}

fn matrix_from_raw(
    raw: &RawMatrix,
    rows: usize,
    cols: usize,
    pointer: &str,
    what: &str,
) -> Result<ComplexMatrix, CodecError> {
    let found_cols = raw.first().map_or(0, Vec::len);
    if raw.len() != rows || raw.iter().any(|r| r.len() != cols) {
        return Err(CodecError::at(
            pointer,
            format!(
                "{what} needs a {rows}x{cols} matrix, found {}x{found_cols}",
                raw.len()
            ),
        ));
    }
    let data = raw
        .iter()
        .flatten()
        .map(|&[re, im]| C64::new(re, im))
        .collect();
    Ok(ComplexMatrix::from_vec(rows, cols, data))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModule {
    graph: RawGraph,
    #[serde(default)]
    dims: BTreeMap<String, usize>,
    #[serde(default)]
    ops: BTreeMap<String, RawMatrix>,
}

fn build_module(raw: RawModule, prefix: &str) -> Result<PythagoreanModule, CodecError> {
    let g = std::sync::Arc::new(build_graph(raw.graph, &format!("{prefix}/graph"))?);
    let mut dims = vec![0; g.vertex_count()];
    for (label, &d) in &raw.dims {
        let v = g.vertex_index(label).ok_or_else(|| {
            CodecError::at(
                format!("{prefix}/dims/{}", escape(label)),
                format!("unknown vertex {label}"),
            )
        })?;
        dims[v] = d;
    }
    let mut ops: Vec<ComplexMatrix> = (0..g.edge_count())
        .map(|e| ComplexMatrix::zeros(dims[g.source(e)], dims[g.range(e)]))
        .collect();
    for (label, matrix) in &raw.ops {
        let pointer = format!("{prefix}/ops/{}", escape(label));
        let e = g
            .edge_index(label)
            .ok_or_else(|| CodecError::at(&pointer, format!("unknown edge {label}")))?;
        let (rows, cols) = (dims[g.source(e)], dims[g.range(e)]);
        ops[e] = matrix_from_raw(matrix, rows, cols, &pointer, &format!("edge {label}"))?;
    }
    PythagoreanModule::new(g, dims, ops).map_err(|e| CodecError::at(prefix, e.to_string()))
}

pub fn module_to_value(m: &PythagoreanModule) -> Value {
    let g = m.graph();
    let dims: Map<String, Value> = g
        .vertices()
        .iter()
        .zip(m.dims())
        .map(|(v, &d)| (v.to_string(), json!(d)))
        .collect();
    let ops: Map<String, Value> = g
        .edges()
        .iter()
        .zip(m.ops())
        .map(|(e, a)| (e.id.to_string(), matrix_to_value(a)))
        .collect();
    json!({ "graph": graph_to_value(g), "dims": dims, "ops": ops })
}

pub fn module_to_json(m: &PythagoreanModule) -> String {
    pretty(&module_to_value(m))
}

pub fn module_from_json(text: &str) -> Result<PythagoreanModule, CodecError> {
    build_module(decode(text)?, "")
}

// ---- spectra ----

pub fn spectrum_to_json(s: &SpectrumDescription) -> String {
    serde_json::to_string(s).expect("spectra always serialize")
}

pub fn spectrum_from_json(text: &str) -> Result<SpectrumDescription, CodecError> {
    decode(text)
}

// ---- lifts ----

/// The module, the level, the basis of every level, the embeddings between
/// consecutive levels and the generator matrices out of the working level.
pub fn lift_to_value(t: &TruncatedLift) -> Value {
    let g = t.graph();
    let levels: Vec<Value> = (0..=t.top_level())
        .map(|k| {
            let basis: Vec<Value> = t
                .basis(k)
                .entries()
                .iter()
                .map(|b| {
                    json!({
                        "path": b.path.display(g),
                        "source": g.vertex(b.path.source()).as_str(),
                        "range": g.vertex(b.path.range()).as_str(),
                        "fiber": b.fiber,
                    })
                })
                .collect();
            json!({ "level": k, "dim": t.dim(k), "basis": basis })
        })
        .collect();
    let embeddings: Vec<Value> = (0..=t.level())
        .map(|k| matrix_to_value(t.embedding(k).expect("k is at most the level")))
        .collect();
    let gens = t.generator_matrices();
    let edges: Map<String, Value> = g
        .edges()
        .iter()
        .zip(&gens.edges)
        .map(|(e, a)| (e.id.to_string(), matrix_to_value(a)))
        .collect();
    let projections: Map<String, Value> = g
        .vertices()
        .iter()
        .zip(&gens.projections)
        .map(|(v, a)| (v.to_string(), matrix_to_value(a)))
        .collect();
    json!({
        "module": module_to_value(t.module()),
        "level": t.level(),
        "levels": levels,
        "embeddings": embeddings,
        "generators": { "edges": edges, "projections": projections },
    })
}

pub fn lift_to_json(t: &TruncatedLift) -> String {
    pretty(&lift_to_value(t))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBasisEntry {
    path: String,
    source: String,
    range: String,
    fiber: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLevel {
    level: usize,
    dim: usize,
    basis: Vec<RawBasisEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerators {
    edges: BTreeMap<String, RawMatrix>,
    projections: BTreeMap<String, RawMatrix>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLift {
    module: RawModule,
    level: usize,
    levels: Vec<RawLevel>,
    embeddings: Vec<RawMatrix>,
    generators: RawGenerators,
}

/// Rebuilds the lift from its module and level, then checks every recorded
/// basis entry and matrix against the rebuilt one.
pub fn lift_from_json(text: &str) -> Result<TruncatedLift, CodecError> {
    let raw: RawLift = decode(text)?;
    let module = build_module(raw.module, "/module")?;
    let t =
        TruncatedLift::new(&module, raw.level, crate::Exec::default()).map_err(|e| match e {
            LiftError::InvalidModule { .. } => CodecError::at("/module", e.to_string()),
            _ => CodecError::at("/level", e.to_string()),
        })?;
    let g = t.graph();
    if raw.levels.len() != t.top_level() + 1 {
        return Err(CodecError::at(
            "/levels",
            format!(
                "expected {} levels, found {}",
                t.top_level() + 1,
                raw.levels.len()
            ),
        ));
    }
    for (k, level) in raw.levels.iter().enumerate() {
        let basis = t.basis(k);
        if level.level != k || level.dim != basis.len() || level.basis.len() != basis.len() {
            return Err(CodecError::at(
                format!("/levels/{k}"),
                "level does not match the rebuilt lift",
            ));
        }
        for (i, (entry, want)) in level.basis.iter().zip(basis.entries()).enumerate() {
            let same = entry.path == want.path.display(g)
                && entry.source == g.vertex(want.path.source()).as_str()
                && entry.range == g.vertex(want.path.range()).as_str()
                && entry.fiber == want.fiber;
            if !same {
                return Err(CodecError::at(
                    format!("/levels/{k}/basis/{i}"),
                    "basis entry does not match the rebuilt lift",
                ));
            }
        }
    }
    if raw.embeddings.len() != t.level() + 1 {
        return Err(CodecError::at("/embeddings", "wrong number of embeddings"));
    }
    let check = |raw: &RawMatrix, want: &ComplexMatrix, pointer: String| {
        let got = matrix_from_raw(raw, want.rows(), want.cols(), &pointer, "entry")?;
        if &got != want {
            return Err(CodecError::at(
                pointer,
                "matrix does not match the rebuilt lift",
            ));
        }
        Ok(())
    };
    for (k, matrix) in raw.embeddings.iter().enumerate() {
        check(
            matrix,
            t.embedding(k).expect("k is at most the level"),
            format!("/embeddings/{k}"),
        )?;
    }
    let gens = t.generator_matrices();
    let expect_keys = |found: &BTreeMap<String, RawMatrix>, count: usize, pointer: &str| {
        if found.len() != count {
            return Err(CodecError::at(
                pointer,
                format!("expected {count} matrices, found {}", found.len()),
            ));
        }
        Ok(())
    };
    expect_keys(&raw.generators.edges, g.edge_count(), "/generators/edges")?;
    expect_keys(
        &raw.generators.projections,
        g.vertex_count(),
        "/generators/projections",
    )?;
    for (label, matrix) in &raw.generators.edges {
        let pointer = format!("/generators/edges/{}", escape(label));
        let e = g
            .edge_index(label)
            .ok_or_else(|| CodecError::at(&pointer, format!("unknown edge {label}")))?;
        check(matrix, &gens.edges[e], pointer)?;
    }
    for (label, matrix) in &raw.generators.projections {
        let pointer = format!("/generators/projections/{}", escape(label));
        let v = g
            .vertex_index(label)
            .ok_or_else(|| CodecError::at(&pointer, format!("unknown vertex {label}")))?;
        check(matrix, &gens.projections[v], pointer)?;
    }
    Ok(t)
}

// ---- complex scalars ----

/// Parses `a+bi`, `a-bi`, `a`, `bi`, `i`, or `exp(k/n)` for `e^{2πik/n}`.
pub fn parse_complex(text: &str) -> Result<C64, CodecError> {
    let fail = || CodecError::Complex(text.to_string());
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(inner) = s.strip_prefix("exp(").and_then(|r| r.strip_suffix(')')) {
        let (k, n) = inner.split_once('/').ok_or_else(fail)?;
        let k: i64 = k.parse().map_err(|_| fail())?;
        let n: i64 = n.parse().map_err(|_| fail())?;
        if n == 0 {
            return Err(fail());
        }
        return Ok(C64::from_polar(
            1.0,
            std::f64::consts::TAU * k as f64 / n as f64,
        ));
    }
    let Some(body) = s.strip_suffix('i') else {
        return match s.parse::<f64>() {
            Ok(re) if re.is_finite() => Ok(C64::new(re, 0.0)),
            _ => Err(fail()),
        };
    };
    // The split is the last sign that does not belong to an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| fail())?,
    };
    let re = re.parse::<f64>().map_err(|_| fail())?;
    if !re.is_finite() || !im.is_finite() {
        return Err(fail());
    }
    Ok(C64::new(re, im))
}

/// `a+bi` with shortest round-trip decimals.
pub fn format_complex(z: C64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

//! JSON and DOT serialization of plabic graphs.

use std::fmt::Write as _;

use serde_json::{json, Value};

use super::graph::{Color, Edge, PlabicGraph, Vertex};
use super::labels::FaceLabeling;
use crate::error::{Error, Result};

fn color_name(c: Color) -> &'static str {
    match c {
        Color::Black => "black",
        Color::White => "white",
    }
}

/// Serializes the graph: vertices with their rotations, edges, half-edge
/// successor maps and faces (with labels when given).
pub fn graph_to_json(g: &PlabicGraph, labels: Option<&FaceLabeling>) -> Value {
    let vertices: Vec<Value> = g
        .vertices()
        .iter()
        .enumerate()
        .map(|(id, v)| json!({ "id": id, "color": color_name(v.color), "boundary": v.boundary, "rotation": v.rotation }))
        .collect();
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(id, e)| json!({ "id": id, "black": e.black, "white": e.white }))
        .collect();
    let half_edges: Vec<Value> = (0..g.num_half_edges())
        .map(|h| {
            json!({
                "id": h,
                "origin": g.origin(h),
                "twin": h ^ 1,
                "next_at_vertex": g.next_at_vertex(h),
                "next_in_face": g.next_in_face(h),
            })
        })
        .collect();
    let faces: Vec<Value> = g
        .faces()
        .iter()
        .enumerate()
        .map(|(id, f)| {
            let mut o = json!({
                "id": id,
                "kind": if f.is_internal() { "internal" } else { "boundary" },
                "segment": f.segment,
                "half_edges": f.half_edges,
            });
            if let Some(l) = labels {
                o["label"] = json!(l.label(id));
            }
            o
        })
        .collect();
    json!({
        "k": g.k(),
        "n": g.n(),
        "vertices": vertices,
        "edges": edges,
        "half_edges": half_edges,
        "faces": faces,
    })
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field `{key}`")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::Parse(format!("`{what}` must be a non-negative integer")))
}

/// Reads a graph written by [`graph_to_json`]. Only `k`, `n`, `vertices`
/// and `edges` are read; derived data is recomputed and validated.
pub fn graph_from_json(v: &Value) -> Result<PlabicGraph> {
    let k = as_usize(field(v, "k")?, "k")?;
    let n = as_usize(field(v, "n")?, "n")?;
    let vs = field(v, "vertices")?
        .as_array()
        .ok_or_else(|| Error::Parse("`vertices` must be an array".into()))?;
    let mut vertices = Vec::with_capacity(vs.len());
    for (pos, x) in vs.iter().enumerate() {
        if let Some(id) = x.get("id") {
            if as_usize(id, "id")? != pos {
                return Err(Error::Parse(format!(
                    "vertex ids must be 0..{} in order",
                    vs.len()
                )));
            }
        }
        let color = match field(x, "color")?.as_str() {
            Some("black") => Color::Black,
            Some("white") => Color::White,
            _ => {
                return Err(Error::Parse(format!(
                    "vertex {pos}: color must be black or white"
                )))
            }
        };
        let boundary = match x.get("boundary") {
            None | Some(Value::Null) => None,
            Some(b) => Some(as_usize(b, "boundary")?),
        };
        let rotation = field(x, "rotation")?
            .as_array()
            .ok_or_else(|| Error::Parse("`rotation` must be an array".into()))?
            .iter()
            .map(|e| as_usize(e, "rotation entry"))
            .collect::<Result<Vec<_>>>()?;
        vertices.push(Vertex {
            color,
            boundary,
            rotation,
        });
    }
    let es = field(v, "edges")?
        .as_array()
        .ok_or_else(|| Error::Parse("`edges` must be an array".into()))?;
    let edges = es
        .iter()
        .map(|x| {
            Ok(Edge {
                black: as_usize(field(x, "black")?, "black")?,
                white: as_usize(field(x, "white")?, "white")?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PlabicGraph::new(k, n, vertices, edges)
}

/// DOT rendering. Faces appear as plaintext nodes tied invisibly to their
/// vertices so that layout engines place each label inside its face.
pub fn graph_to_dot(
    g: &PlabicGraph,
    labels: Option<&FaceLabeling>,
    positions: Option<&[(f64, f64)]>,
) -> String {
    let mut s = String::from("graph plabic {\n  node [shape=circle, width=0.2, label=\"\"];\n");
    for (id, v) in g.vertices().iter().enumerate() {
        let fill = color_name(v.color);
        let mut attrs = format!("style=filled, fillcolor={fill}");
        if let Some(b) = v.boundary {
            let _ = write!(attrs, ", xlabel=\"{b}\"");
        }
        if let Some(p) = positions.and_then(|p| p.get(id)) {
            let _ = write!(attrs, ", pos=\"{:.3},{:.3}!\"", p.0, p.1);
        }
        let _ = writeln!(s, "  v{id} [{attrs}];");
    }
    for e in g.edges() {
        let _ = writeln!(s, "  v{} -- v{};", e.black, e.white);
    }
    if let Some(l) = labels {
        for f in 0..g.faces().len() {
            let _ = writeln!(s, "  subgraph cluster_face{f} {{ label=\"{}\"; f{f} [shape=plaintext, label=\"{}\"]; }}", l.label(f), l.label(f));
            let mut vs = g.face_vertices(f);
            vs.sort();
            vs.dedup();
            for v in vs {
                let _ = writeln!(s, "  f{f} -- v{v} [style=invis];");
            }
        }
    }
    s.push_str("}\n");
    s
}

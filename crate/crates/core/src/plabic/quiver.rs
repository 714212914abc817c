use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Value};

use super::graph::PlabicGraph;
use super::labels::FaceLabeling;
use crate::combinatorics::KSubset;
use crate::error::{Error, Result};

/// A quiver on face labels, stored as its skew-symmetric exchange matrix.
///
/// Arrows between two frozen vertices are never recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    frozen: BTreeMap<KSubset, bool>,
    b: BTreeMap<(KSubset, KSubset), i64>,
}

impl Quiver {
    pub fn new(vertices: impl IntoIterator<Item = (KSubset, bool)>) -> Self {
        Self {
            frozen: vertices.into_iter().collect(),
            b: BTreeMap::new(),
        }
    }

    /// Adds `m` arrows `u → v` (negative `m` reverses them), cancelling
    /// against existing opposite arrows.
    pub fn add_arrows(&mut self, u: &KSubset, v: &KSubset, m: i64) {
        if u == v || m == 0 || (self.is_frozen(u) && self.is_frozen(v)) {
            return;
        }
        for (x, y, s) in [(u, v, m), (v, u, -m)] {
            let entry = self.b.entry((x.clone(), y.clone())).or_insert(0);
            *entry += s;
            if *entry == 0 {
                self.b.remove(&(x.clone(), y.clone()));
            }
        }
    }

    pub fn is_frozen(&self, v: &KSubset) -> bool {
        self.frozen.get(v).copied().unwrap_or(false)
    }

    pub fn contains(&self, v: &KSubset) -> bool {
        self.frozen.contains_key(v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = (&KSubset, bool)> {
        self.frozen.iter().map(|(v, &f)| (v, f))
    }

    pub fn mutable_vertices(&self) -> Vec<KSubset> {
        self.frozen
            .iter()
            .filter(|(_, &f)| !f)
            .map(|(v, _)| v.clone())
            .collect()
    }

    /// Signed number of arrows `u → v`.
    pub fn b(&self, u: &KSubset, v: &KSubset) -> i64 {
        self.b.get(&(u.clone(), v.clone())).copied().unwrap_or(0)
    }

    /// Arrows `(u, v, multiplicity)` with positive multiplicity, sorted.
    pub fn arrows(&self) -> Vec<(KSubset, KSubset, i64)> {
        self.b
            .iter()
            .filter(|(_, &m)| m > 0)
            .map(|((u, v), &m)| (u.clone(), v.clone(), m))
            .collect()
    }

    pub fn in_neighbors(&self, v: &KSubset) -> Vec<(KSubset, i64)> {
        self.arrows()
            .into_iter()
            .filter(|a| &a.1 == v)
            .map(|a| (a.0, a.2))
            .collect()
    }

    pub fn out_neighbors(&self, v: &KSubset) -> Vec<(KSubset, i64)> {
        self.arrows()
            .into_iter()
            .filter(|a| &a.0 == v)
            .map(|a| (a.1, a.2))
            .collect()
    }

    /// Mutation at a mutable vertex.
    pub fn mutate(&self, v: &KSubset) -> Result<Self> {
        if !self.contains(v) {
            return Err(Error::InvalidSubset(format!("{v} is not a quiver vertex")));
        }
        if self.is_frozen(v) {
            return Err(Error::FrozenMutation(v.to_string()));
        }
        let ins = self.in_neighbors(v);
        let outs = self.out_neighbors(v);
        let mut q = Self {
            frozen: self.frozen.clone(),
            b: BTreeMap::new(),
        };
        for ((x, y), &m) in &self.b {
            if m > 0 {
                if x == v || y == v {
                    q.add_arrows(y, x, m);
                } else {
                    q.add_arrows(x, y, m);
                }
            }
        }
        for (i, a) in &ins {
            for (o, c) in &outs {
                q.add_arrows(i, o, a * c);
            }
        }
        Ok(q)
    }

    /// Renames vertex `old` to `new`.
    pub fn relabel(&self, old: &KSubset, new: &KSubset) -> Self {
        let rename = |x: &KSubset| if x == old { new.clone() } else { x.clone() };
        Self {
            frozen: self.frozen.iter().map(|(v, &f)| (rename(v), f)).collect(),
            b: self
                .b
                .iter()
                .map(|((x, y), &m)| ((rename(x), rename(y)), m))
                .collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let vertices: Vec<Value> = self
            .frozen
            .iter()
            .map(|(v, &f)| json!({ "label": v, "frozen": f }))
            .collect();
        let arrows: Vec<Value> = self
            .arrows()
            .iter()
            .map(|(u, v, m)| json!({ "from": u, "to": v, "multiplicity": m }))
            .collect();
        json!({ "vertices": vertices, "arrows": arrows })
    }

    pub fn from_json(v: &Value, n: usize) -> Result<Self> {
        let parse_set = |x: &Value| -> Result<KSubset> {
            let elems = x
                .as_array()
                .ok_or_else(|| Error::Parse("label must be an array".into()))?
                .iter()
                .map(|e| {
                    e.as_u64()
                        .map(|e| e as usize)
                        .ok_or_else(|| Error::Parse("label entry".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            KSubset::new(n, elems)
        };
        let verts = v["vertices"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing vertices".into()))?;
        let mut q = Self::new(
            verts
                .iter()
                .map(|x| {
                    Ok((
                        parse_set(&x["label"])?,
                        x["frozen"].as_bool().unwrap_or(false),
                    ))
                })
                .collect::<Result<Vec<_>>>()?,
        );
        for a in v["arrows"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing arrows".into()))?
        {
            let m = a["multiplicity"]
                .as_i64()
                .ok_or_else(|| Error::Parse("arrow multiplicity".into()))?;
            q.add_arrows(&parse_set(&a["from"])?, &parse_set(&a["to"])?, m);
        }
        Ok(q)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph quiver {\n");
        for (v, &f) in &self.frozen {
            let shape = if f { "box" } else { "ellipse" };
            let _ = writeln!(s, "  \"{v}\" [shape={shape}];");
        }
        for (u, v, m) in self.arrows() {
            for _ in 0..m {
                let _ = writeln!(s, "  \"{u}\" -> \"{v}\";");
            }
        }
        s.push_str("}\n");
        s
    }
}

/// One arrow per edge, crossing it with the white endpoint on the left,
/// followed by cancellation of 2-cycles.
pub fn extract_quiver(g: &PlabicGraph, labels: &FaceLabeling) -> Quiver {
    let mut q = Quiver::new(
        g.faces()
            .iter()
            .enumerate()
            .map(|(f, face)| (labels.label(f).clone(), !face.is_internal())),
    );
    for e in 0..g.edges().len() {
        let left = labels.label(g.face_of(2 * e));
        let right = labels.label(g.face_of(2 * e + 1));
        q.add_arrows(left, right, 1);
    }
    q
}

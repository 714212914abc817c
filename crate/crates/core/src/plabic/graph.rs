use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Serialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn opposite(self) -> Self {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

/// A vertex with its incident edges listed counterclockwise.
///
/// For a boundary vertex the list is linear: the disk boundary (and the
/// exterior) sits between the last entry and the first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub color: Color,
    pub boundary: Option<usize>,
    pub rotation: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub black: usize,
    pub white: usize,
}

impl Edge {
    pub fn other(&self, v: usize) -> usize {
        if v == self.black {
            self.white
        } else {
            self.black
        }
    }
}

pub type FaceId = usize;

/// A face traced counterclockwise: each listed half-edge has the face on its
/// left. Boundary faces also contain exactly one boundary segment; segment
/// `i` runs between boundary vertices `i` and `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub half_edges: Vec<usize>,
    pub segment: Option<usize>,
}

impl Face {
    pub fn is_internal(&self) -> bool {
        self.segment.is_none()
    }
}

/// A bipartite graph embedded in a disk with boundary vertices `1..n` in
/// clockwise order.
///
/// Half-edge `2e` runs from the black end of edge `e` to its white end and
/// `2e + 1` runs back. Faces are recomputed from the rotation system whenever
/// a graph is constructed.
#[derive(Clone, Debug)]
pub struct PlabicGraph {
    k: usize,
    n: usize,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    boundary: Vec<usize>,
    slot: Vec<usize>,
    faces: Vec<Face>,
    face_of: Vec<FaceId>,
}

impl PartialEq for PlabicGraph {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k
            && self.n == other.n
            && self.vertices == other.vertices
            && self.edges == other.edges
    }
}

impl Eq for PlabicGraph {}

impl PlabicGraph {
    /// Validates the embedding and derives its faces.
    pub fn new(k: usize, n: usize, vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self> {
        let bad = |why: String| Error::InvalidGraph(why);
        if n < 2 || k == 0 || k >= n {
            return Err(bad(format!("need 0 < k < n, got k={k}, n={n}")));
        }
        for (e, ed) in edges.iter().enumerate() {
            let (b, w) = (ed.black, ed.white);
            if b >= vertices.len() || w >= vertices.len() {
                return Err(bad(format!("edge {e} has an endpoint out of range")));
            }
            if vertices[b].color != Color::Black || vertices[w].color != Color::White {
                return Err(bad(format!(
                    "edge {e} does not join black {b} to white {w}"
                )));
            }
        }
        let mut slot = vec![usize::MAX; 2 * edges.len()];
        let mut boundary = vec![usize::MAX; n];
        for (v, vx) in vertices.iter().enumerate() {
            if let Some(i) = vx.boundary {
                if i == 0 || i > n || boundary[i - 1] != usize::MAX {
                    return Err(bad(format!(
                        "boundary index {i} at vertex {v} invalid or repeated"
                    )));
                }
                if vx.color != Color::Black {
                    return Err(bad(format!("boundary vertex {i} is not black")));
                }
                if vx.rotation.is_empty() {
                    return Err(bad(format!("boundary vertex {i} is isolated")));
                }
                boundary[i - 1] = v;
            }
            for (s, &e) in vx.rotation.iter().enumerate() {
                let ed = edges
                    .get(e)
                    .ok_or_else(|| bad(format!("vertex {v} lists unknown edge {e}")))?;
                let h = match vx.color {
                    Color::Black if ed.black == v => 2 * e,
                    Color::White if ed.white == v => 2 * e + 1,
                    _ => {
                        return Err(bad(format!(
                            "vertex {v} lists edge {e} which is not incident"
                        )))
                    }
                };
                if slot[h] != usize::MAX {
                    return Err(bad(format!("edge {e} listed twice at vertex {v}")));
                }
                slot[h] = s;
            }
        }
        if let Some(i) = boundary.iter().position(|&v| v == usize::MAX) {
            return Err(bad(format!("boundary vertex {} missing", i + 1)));
        }
        if let Some(h) = slot.iter().position(|&s| s == usize::MAX) {
            return Err(bad(format!(
                "edge {} missing from the rotation of an endpoint",
                h / 2
            )));
        }
        for ed in &edges {
            if vertices[ed.black].boundary.is_some() && vertices[ed.white].boundary.is_some() {
                return Err(bad("edge between two boundary vertices".into()));
            }
        }
        let mut g = Self {
            k,
            n,
            vertices,
            edges,
            boundary,
            slot,
            faces: vec![],
            face_of: vec![],
        };
        g.derive_faces()?;
        g.check_connected()?;
        let internal = g.faces.iter().filter(|f| f.is_internal()).count() as i64;
        let euler = g.vertices.len() as i64 - g.edges.len() as i64 + internal;
        if euler != 1 {
            return Err(bad(format!(
                "Euler characteristic V - E + F_internal = {euler}, expected 1"
            )));
        }
        Ok(g)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: FaceId) -> &Face {
        &self.faces[f]
    }

    pub fn num_half_edges(&self) -> usize {
        2 * self.edges.len()
    }

    /// Vertex carrying boundary index `i` (1-based).
    pub fn boundary_vertex(&self, i: usize) -> usize {
        self.boundary[i - 1]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.vertices[v].rotation.len()
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.vertices[v].boundary.is_some()
    }

    pub fn origin(&self, h: usize) -> usize {
        let e = &self.edges[h / 2];
        if h % 2 == 0 {
            e.black
        } else {
            e.white
        }
    }

    pub fn target(&self, h: usize) -> usize {
        self.origin(h ^ 1)
    }

    /// Position of half-edge `h` in the rotation of its origin.
    pub fn slot(&self, h: usize) -> usize {
        self.slot[h]
    }

    /// Half-edge leaving `v` along its `s`-th edge.
    pub fn out_half_edge(&self, v: usize, s: usize) -> usize {
        let e = self.vertices[v].rotation[s];
        match self.vertices[v].color {
            Color::Black => 2 * e,
            Color::White => 2 * e + 1,
        }
    }

    pub fn face_of(&self, h: usize) -> FaceId {
        self.face_of[h]
    }

    /// Faces incident to `v`, one per angular sector (boundary vertices
    /// include the two boundary faces beside them).
    pub fn faces_around(&self, v: usize) -> Vec<FaceId> {
        let mut out: Vec<FaceId> = (0..self.degree(v))
            .map(|s| self.face_of(self.out_half_edge(v, s)))
            .collect();
        if let Some(i) = self.vertices[v].boundary {
            out.push(self.boundary_face(if i == 1 { self.n } else { i - 1 }));
        }
        out
    }

    /// Face containing boundary segment `i` (between boundary vertices `i` and `i + 1`).
    pub fn boundary_face(&self, i: usize) -> FaceId {
        i - 1
    }

    pub fn internal_faces(&self) -> impl Iterator<Item = FaceId> + '_ {
        (0..self.faces.len()).filter(|&f| self.faces[f].is_internal())
    }

    pub fn num_internal_faces(&self) -> usize {
        self.faces.len() - self.n
    }

    /// Origins of the half-edges of face `f`, in order.
    pub fn face_vertices(&self, f: FaceId) -> Vec<usize> {
        self.faces[f]
            .half_edges
            .iter()
            .map(|&h| self.origin(h))
            .collect()
    }

    pub fn black_count(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| v.color == Color::Black)
            .count()
    }

    pub fn white_count(&self) -> usize {
        self.vertices.len() - self.black_count()
    }

    fn next_step(&self, h: usize) -> (Option<usize>, usize) {
        let v = self.target(h);
        let s = self.slot[h ^ 1];
        let deg = self.degree(v);
        match self.vertices[v].boundary {
            Some(i) if s == 0 => {
                let prev = if i == 1 { self.n } else { i - 1 };
                let u = self.boundary[prev - 1];
                (Some(prev), self.out_half_edge(u, self.degree(u) - 1))
            }
            Some(_) => (None, self.out_half_edge(v, s - 1)),
            None => (None, self.out_half_edge(v, (s + deg - 1) % deg)),
        }
    }

    /// Successor of `h` along its face, ignoring boundary segments.
    pub fn next_in_face(&self, h: usize) -> usize {
        self.next_step(h).1
    }

    /// Next half-edge counterclockwise around the origin of `h`; for boundary
    /// vertices the last entry wraps to the first.
    pub fn next_at_vertex(&self, h: usize) -> usize {
        let v = self.origin(h);
        self.out_half_edge(v, (self.slot[h] + 1) % self.degree(v))
    }

    fn derive_faces(&mut self) -> Result<()> {
        let m = self.num_half_edges();
        let mut face_of = vec![usize::MAX; m];
        let mut raw: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for start in 0..m {
            if face_of[start] != usize::MAX {
                continue;
            }
            let id = raw.len();
            let mut halves = Vec::new();
            let mut segs = Vec::new();
            let mut h = start;
            loop {
                if face_of[h] != usize::MAX {
                    return Err(Error::InvalidGraph("face walk does not close up".into()));
                }
                face_of[h] = id;
                halves.push(h);
                let (seg, next) = self.next_step(h);
                segs.extend(seg);
                h = next;
                if h == start {
                    break;
                }
            }
            raw.push((halves, segs));
        }
        let mut seg_face = vec![usize::MAX; self.n];
        for (id, (_, segs)) in raw.iter().enumerate() {
            if segs.len() > 1 {
                return Err(Error::InvalidGraph(format!(
                    "a face touches {} boundary segments",
                    segs.len()
                )));
            }
            for &s in segs {
                if seg_face[s - 1] != usize::MAX {
                    return Err(Error::InvalidGraph(format!(
                        "segment {s} lies on two faces"
                    )));
                }
                seg_face[s - 1] = id;
            }
        }
        if seg_face.contains(&usize::MAX) {
            return Err(Error::InvalidGraph(
                "some boundary segment lies on no face".into(),
            ));
        }
        let mut order: Vec<usize> = seg_face.clone();
        let mut internal: Vec<usize> = (0..raw.len()).filter(|id| raw[*id].1.is_empty()).collect();
        internal.sort_by_key(|&id| raw[id].0.iter().copied().min());
        order.extend(internal);
        let mut new_id = vec![0; raw.len()];
        for (new, &old) in order.iter().enumerate() {
            new_id[old] = new;
        }
        self.faces = order
            .iter()
            .map(|&old| Face {
                half_edges: raw[old].0.clone(),
                segment: raw[old].1.first().copied(),
            })
            .collect();
        self.face_of = face_of.into_iter().map(|f| new_id[f]).collect();
        Ok(())
    }

    fn check_connected(&self) -> Result<()> {
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([self.boundary[0]]);
        seen[self.boundary[0]] = true;
        let mut push = |v: usize, q: &mut VecDeque<usize>| {
            if !seen[v] {
                seen[v] = true;
                q.push_back(v);
            }
        };
        while let Some(v) = queue.pop_front() {
            for &e in &self.vertices[v].rotation {
                push(self.edges[e].other(v), &mut queue);
            }
            if let Some(i) = self.vertices[v].boundary {
                push(self.boundary[i % self.n], &mut queue);
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(Error::InvalidGraph(
                "graph is not connected to the boundary".into(),
            ))
        }
    }

    pub(crate) fn parts(&self) -> (Vec<Vertex>, Vec<Edge>) {
        (self.vertices.clone(), self.edges.clone())
    }
}

/// Rebuilds a graph from vertex and edge slots where `None` marks a deleted
/// entry. Returns the graph with old-to-new vertex and edge maps.
pub(crate) fn compact(
    k: usize,
    n: usize,
    vertices: Vec<Option<Vertex>>,
    edges: Vec<Option<Edge>>,
) -> Result<(PlabicGraph, Vec<Option<usize>>, Vec<Option<usize>>)> {
    let mut vmap = vec![None; vertices.len()];
    let mut next = 0;
    for (v, x) in vertices.iter().enumerate() {
        if x.is_some() {
            vmap[v] = Some(next);
            next += 1;
        }
    }
    let mut emap = vec![None; edges.len()];
    next = 0;
    for (e, x) in edges.iter().enumerate() {
        if x.is_some() {
            emap[e] = Some(next);
            next += 1;
        }
    }
    let missing = || Error::InvalidGraph("dangling reference after a move".into());
    let new_edges = edges
        .into_iter()
        .flatten()
        .map(|ed| {
            Ok(Edge {
                black: vmap[ed.black].ok_or_else(missing)?,
                white: vmap[ed.white].ok_or_else(missing)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let new_vertices = vertices
        .into_iter()
        .flatten()
        .map(|mut vx| {
            vx.rotation = vx
                .rotation
                .iter()
                .map(|&e| emap[e].ok_or_else(missing))
                .collect::<Result<_>>()?;
            Ok(vx)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((PlabicGraph::new(k, n, new_vertices, new_edges)?, vmap, emap))
}

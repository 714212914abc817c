use std::collections::{BTreeMap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use super::graph::{compact, Color, Edge, FaceId, PlabicGraph, Vertex};
use super::labels::{compute_face_labels, FaceLabeling};
use crate::combinatorics::{quad_target, KSubset};
use crate::error::{Error, Result};

fn new_edge(colors: (Color, usize), other: usize) -> Edge {
    match colors.0 {
        Color::Black => Edge {
            black: colors.1,
            white: other,
        },
        Color::White => Edge {
            black: other,
            white: colors.1,
        },
    }
}

/// Splits vertex `v` in two: the `len` consecutive edges starting at slot
/// `start` move to a new vertex of the same colour, which is joined to `v`
/// through a new degree-two vertex of the opposite colour.
///
/// Existing vertex and edge ids are preserved. Returns the graph together
/// with the ids of the new middle vertex and the new far vertex.
pub fn blow_up(
    g: &PlabicGraph,
    v: usize,
    start: usize,
    len: usize,
) -> Result<(PlabicGraph, usize, usize)> {
    let deg = g.degree(v);
    let vx = g.vertex(v);
    let boundary = vx.boundary.is_some();
    let ok = if boundary {
        len >= 1 && start + len <= deg
    } else {
        len >= 1 && len < deg && start < deg
    };
    if !ok {
        return Err(Error::InvalidMove(format!(
            "window ({start}, {len}) invalid at vertex {v} of degree {deg}"
        )));
    }
    let (mut vertices, mut edges) = g.parts();
    let (mid, far) = (vertices.len(), vertices.len() + 1);
    let (e1, e2) = (edges.len(), edges.len() + 1);
    let color = vx.color;
    let rot = &vx.rotation;
    let (window, rest): (Vec<usize>, Vec<usize>) = if boundary {
        let window = rot[start..start + len].to_vec();
        let rest = rot[..start]
            .iter()
            .chain([&e1])
            .chain(&rot[start + len..])
            .copied()
            .collect();
        (window, rest)
    } else {
        let window = (0..len).map(|t| rot[(start + t) % deg]).collect();
        let rest = std::iter::once(e1)
            .chain((len..deg).map(|t| rot[(start + t) % deg]))
            .collect();
        (window, rest)
    };
    for &e in &window {
        let ed = &mut edges[e];
        if ed.black == v {
            ed.black = far;
        } else {
            ed.white = far;
        }
    }
    edges.push(new_edge((color, v), mid));
    edges.push(new_edge((color, far), mid));
    vertices[v].rotation = rest;
    vertices.push(Vertex {
        color: color.opposite(),
        boundary: None,
        rotation: vec![e1, e2],
    });
    let mut far_rot = window;
    far_rot.push(e2);
    vertices.push(Vertex {
        color,
        boundary: None,
        rotation: far_rot,
    });
    Ok((PlabicGraph::new(g.k(), g.n(), vertices, edges)?, mid, far))
}

/// Result of a move that deletes vertices or edges, with maps from old ids
/// to surviving new ids.
#[derive(Clone, Debug)]
pub struct MoveResult {
    pub graph: PlabicGraph,
    pub vertex_map: Vec<Option<usize>>,
    pub edge_map: Vec<Option<usize>>,
}

fn can_blow_down(g: &PlabicGraph, v: usize) -> Option<(usize, usize)> {
    if g.is_boundary(v) || g.degree(v) != 2 {
        return None;
    }
    let rot = &g.vertex(v).rotation;
    let x = g.edge(rot[0]).other(v);
    let y = g.edge(rot[1]).other(v);
    if x == y || (g.is_boundary(x) && g.is_boundary(y)) {
        return None;
    }
    Some((x, y))
}

/// Contracts the degree-two internal vertex `v`, merging its two neighbours
/// (which must be distinct and not both on the boundary).
pub fn blow_down(g: &PlabicGraph, v: usize) -> Result<MoveResult> {
    let (x, y) = can_blow_down(g, v).ok_or_else(|| {
        Error::InvalidMove(format!(
            "vertex {v} is not an internal degree-two vertex between mergeable neighbours"
        ))
    })?;
    let (keep, gone) = if g.is_boundary(y) { (y, x) } else { (x, y) };
    let rot_v = &g.vertex(v).rotation;
    let (e_keep, e_gone) = if g.edge(rot_v[0]).other(v) == keep {
        (rot_v[0], rot_v[1])
    } else {
        (rot_v[1], rot_v[0])
    };
    let (vertices, mut edges) = g.parts();
    let keep_rot = &vertices[keep].rotation;
    let gone_rot = &vertices[gone].rotation;
    let s = keep_rot
        .iter()
        .position(|&e| e == e_keep)
        .expect("rotation lists incident edge");
    let t = gone_rot
        .iter()
        .position(|&e| e == e_gone)
        .expect("rotation lists incident edge");
    let mut merged: Vec<usize> = keep_rot[..s].to_vec();
    merged.extend(gone_rot[t + 1..].iter().chain(&gone_rot[..t]));
    merged.extend(&keep_rot[s + 1..]);
    for &e in gone_rot {
        let ed = &mut edges[e];
        if ed.black == gone {
            ed.black = keep;
        } else if ed.white == gone {
            ed.white = keep;
        }
    }
    let mut vs: Vec<Option<Vertex>> = vertices.into_iter().map(Some).collect();
    vs[keep].as_mut().expect("kept").rotation = merged;
    vs[gone] = None;
    vs[v] = None;
    let mut es: Vec<Option<Edge>> = edges.into_iter().map(Some).collect();
    es[e_keep] = None;
    es[e_gone] = None;
    let (graph, vertex_map, edge_map) = compact(g.k(), g.n(), vs, es)?;
    Ok(MoveResult {
        graph,
        vertex_map,
        edge_map,
    })
}

/// Contracts internal degree-two vertices until none can be removed.
pub fn remove_degree_two(g: &PlabicGraph) -> Result<PlabicGraph> {
    let mut g = g.clone();
    while let Some(v) = (0..g.vertices().len()).find(|&v| can_blow_down(&g, v).is_some()) {
        g = blow_down(&g, v)?.graph;
    }
    Ok(g)
}

fn map_half_edge(h: usize, edge_map: &[Option<usize>]) -> Option<usize> {
    edge_map[h / 2].map(|e| 2 * e + (h & 1))
}

/// Outcome of a quadrilateral move.
#[derive(Clone, Debug)]
pub struct QuadMoveResult {
    pub graph: PlabicGraph,
    pub labels: FaceLabeling,
    /// The face that replaced the moved one.
    pub face: FaceId,
    pub old_label: KSubset,
    pub new_label: KSubset,
}

/// Removes degree-two vertices from the boundary of the face containing
/// half-edge `h`, tracking the face through a surviving half-edge.
fn squeeze_face(mut g: PlabicGraph, mut h: usize) -> Result<(PlabicGraph, usize)> {
    loop {
        let f = g.face_of(h);
        let halves = g.face(f).half_edges.clone();
        let Some(v) = halves
            .iter()
            .map(|&x| g.origin(x))
            .find(|&v| can_blow_down(&g, v).is_some())
        else {
            return Ok((g, h));
        };
        let keep = halves
            .iter()
            .copied()
            .find(|&x| g.origin(x) != v && g.target(x) != v)
            .ok_or_else(|| {
                Error::InvalidMove("face collapses while removing degree-two vertices".into())
            })?;
        let r = blow_down(&g, v)?;
        h = map_half_edge(keep, &r.edge_map).expect("untouched edge survives");
        g = r.graph;
    }
}

/// Square move at internal face `f` (urban renewal followed by contracting
/// the degree-two corners it creates). Degree-two vertices on the face are
/// contracted first; afterwards the face must be a quadrilateral.
pub fn quad_move(g: &PlabicGraph, f: FaceId) -> Result<QuadMoveResult> {
    if !g.face(f).is_internal() {
        return Err(Error::InvalidMove(format!("face {f} is a boundary face")));
    }
    let old_labels = compute_face_labels(g)?;
    let old_label = old_labels.label(f).clone();
    let (g1, h) = squeeze_face(g.clone(), g.face(f).half_edges[0])?;
    let f1 = g1.face_of(h);
    let hs = g1.face(f1).half_edges.clone();
    if hs.len() != 4 {
        return Err(Error::InvalidMove(format!(
            "face {old_label} has {} sides",
            hs.len()
        )));
    }
    let corners: Vec<usize> = hs.iter().map(|&x| g1.origin(x)).collect();
    let mut distinct = corners.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() != 4 {
        return Err(Error::InvalidMove(format!(
            "face {old_label} does not have four distinct corners"
        )));
    }
    let labels1 = compute_face_labels(&g1)?;
    let neighbors: [KSubset; 4] =
        std::array::from_fn(|i| labels1.label(g1.face_of(hs[i] ^ 1)).clone());
    let expected = quad_target(&old_label, &neighbors)?;

    let (mut vertices, mut edges) = g1.parts();
    let base_v = vertices.len();
    let base_e = edges.len();
    let side = |i: usize| hs[i] / 2;
    let spoke = |i: usize| base_e + i;
    let ring = |i: usize| base_e + 4 + i;
    for i in 0..4 {
        let x = corners[i];
        let rot = &vertices[x].rotation;
        let s_next = g1.slot(hs[i]);
        let s_prev = g1.slot(hs[(i + 3) % 4] ^ 1);
        let mut rot2: Vec<usize> = Vec::with_capacity(rot.len() - 1);
        for (s, &e) in rot.iter().enumerate() {
            if s == s_next {
                rot2.push(spoke(i));
            } else if s != s_prev {
                rot2.push(e);
            }
        }
        vertices[x].rotation = rot2;
    }
    for i in 0..4 {
        let x = corners[i];
        let color = vertices[x].color;
        vertices.push(Vertex {
            color: color.opposite(),
            boundary: None,
            rotation: vec![ring(i), ring((i + 3) % 4), spoke(i)],
        });
    }
    for i in 0..4 {
        let x = corners[i];
        edges.push(new_edge((vertices[x].color, x), base_v + i));
    }
    for i in 0..4 {
        let color = vertices[base_v + i].color;
        edges.push(new_edge((color, base_v + i), base_v + (i + 1) % 4));
    }
    let vs: Vec<Option<Vertex>> = vertices.into_iter().map(Some).collect();
    let mut es: Vec<Option<Edge>> = edges.into_iter().map(Some).collect();
    for i in 0..4 {
        es[side(i)] = None;
    }
    let (mut g2, vmap, emap) = compact(g1.k(), g1.n(), vs, es)?;
    // half-edge from new corner 0 to new corner 1 bounds the new square
    let ring0 = emap[ring(0)].expect("new edge survives");
    let first = vmap[base_v].expect("new vertex");
    let mut h_new = 2 * ring0 + usize::from(g2.vertex(first).color == Color::White);
    let mut corner_ids: Vec<usize> = corners
        .iter()
        .map(|&c| vmap[c].expect("corner survives"))
        .collect();
    while let Some(pos) = corner_ids
        .iter()
        .position(|&c| can_blow_down(&g2, c).is_some())
    {
        let c = corner_ids[pos];
        let r = blow_down(&g2, c)?;
        h_new = map_half_edge(h_new, &r.edge_map).expect("square edge survives");
        corner_ids = corner_ids
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pos)
            .filter_map(|(_, &x)| r.vertex_map[x])
            .collect();
        g2 = r.graph;
    }
    let labels = compute_face_labels(&g2)?;
    let face = g2.face_of(h_new);
    let new_label = labels.label(face).clone();
    if new_label != expected {
        return Err(Error::InvalidMove(format!(
            "move at {old_label} produced {new_label}, expected {expected}"
        )));
    }
    Ok(QuadMoveResult {
        graph: g2,
        labels,
        face,
        old_label,
        new_label,
    })
}

/// Quadrilateral move at the face carrying `label`.
pub fn quad_move_at_label(g: &PlabicGraph, label: &KSubset) -> Result<QuadMoveResult> {
    let labels = compute_face_labels(g)?;
    let f = labels
        .face_with_label(label)
        .ok_or_else(|| Error::InvalidMove(format!("no face labelled {label}")))?;
    quad_move(g, f)
}

/// Internal faces at which a quadrilateral move applies.
pub fn quad_move_candidates(g: &PlabicGraph) -> Vec<FaceId> {
    g.internal_faces()
        .filter(|&f| quad_move(g, f).is_ok())
        .collect()
}

/// Applies `count` quadrilateral moves, each at a face drawn uniformly from
/// the current candidates. Returns the final graph, its labels and the
/// labels moved at. Stops early if no move applies.
pub fn random_quad_moves<R: Rng + ?Sized>(
    g: &PlabicGraph,
    count: usize,
    rng: &mut R,
) -> Result<(PlabicGraph, FaceLabeling, Vec<KSubset>)> {
    let mut g = g.clone();
    let mut labels = compute_face_labels(&g)?;
    let mut path = Vec::with_capacity(count);
    for _ in 0..count {
        let candidates = quad_move_candidates(&g);
        let Some(&f) = candidates.choose(rng) else {
            break;
        };
        let r = quad_move(&g, f)?;
        path.push(r.old_label);
        g = r.graph;
        labels = r.labels;
    }
    Ok((g, labels, path))
}

/// A blow-up at a uniformly chosen vertex of degree at least two, with a
/// uniformly chosen admissible window. Returns the graph and the new
/// degree-two vertex, at which [`blow_down`] undoes the move.
pub fn random_blow_up<R: Rng + ?Sized>(
    g: &PlabicGraph,
    rng: &mut R,
) -> Result<(PlabicGraph, usize)> {
    let eligible: Vec<usize> = (0..g.vertices().len())
        .filter(|&v| g.degree(v) >= 2)
        .collect();
    let &v = eligible
        .choose(rng)
        .ok_or_else(|| Error::InvalidMove("no vertex of degree two or more".into()))?;
    let deg = g.degree(v);
    let (start, len) = if g.is_boundary(v) {
        let start = rng.gen_range(0..deg);
        (start, rng.gen_range(1..=deg - start))
    } else {
        (rng.gen_range(0..deg), rng.gen_range(1..deg))
    };
    let (graph, mid, _) = blow_up(g, v, start, len)?;
    Ok((graph, mid))
}

/// A relabelling-invariant description of a graph: vertices and edges are
/// renumbered in the order a breadth-first search from boundary vertex 1
/// meets them, visiting rotations in order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub k: usize,
    pub n: usize,
    pub vertices: Vec<(Color, Option<usize>, Vec<usize>)>,
}

pub fn canonical_form(g: &PlabicGraph) -> CanonicalForm {
    let nv = g.vertices().len();
    let mut order = vec![usize::MAX; nv];
    let mut via: Vec<Option<usize>> = vec![None; nv];
    let mut eorder: BTreeMap<usize, usize> = BTreeMap::new();
    let mut seq = Vec::new();
    let mut queue = VecDeque::new();
    let ordered = |v: usize, via: Option<usize>| -> Vec<usize> {
        let rot = &g.vertex(v).rotation;
        let p = match (g.vertex(v).boundary, via) {
            (None, Some(e)) => rot.iter().position(|&x| x == e).unwrap_or(0),
            _ => 0,
        };
        rot[p..].iter().chain(&rot[..p]).copied().collect()
    };
    for i in 1..=g.n() {
        let b = g.boundary_vertex(i);
        if order[b] != usize::MAX {
            continue;
        }
        order[b] = seq.len();
        seq.push(b);
        queue.push_back(b);
        while let Some(v) = queue.pop_front() {
            for e in ordered(v, via[v]) {
                let len = eorder.len();
                eorder.entry(e).or_insert(len);
                let u = g.edge(e).other(v);
                if order[u] == usize::MAX {
                    order[u] = seq.len();
                    via[u] = Some(e);
                    seq.push(u);
                    queue.push_back(u);
                }
            }
        }
    }
    let vertices = seq
        .iter()
        .map(|&v| {
            let vx = g.vertex(v);
            let rot = ordered(v, via[v]).iter().map(|e| eorder[e]).collect();
            (vx.color, vx.boundary, rot)
        })
        .collect();
    CanonicalForm {
        k: g.k(),
        n: g.n(),
        vertices,
    }
}

/// Breadth-first search over quadrilateral moves for a graph whose internal
/// face labels are exactly `target`. Returns the graph and the labels moved
/// at, in order.
pub fn search_by_quad_moves(
    start: &PlabicGraph,
    target: &std::collections::BTreeSet<KSubset>,
    max_depth: usize,
) -> Result<Option<(PlabicGraph, Vec<KSubset>)>> {
    let internal = |g: &PlabicGraph, l: &FaceLabeling| -> std::collections::BTreeSet<KSubset> {
        g.internal_faces().map(|f| l.label(f).clone()).collect()
    };
    let labels = compute_face_labels(start)?;
    let mut seen = std::collections::BTreeSet::from([internal(start, &labels)]);
    let mut frontier = vec![(start.clone(), labels, Vec::new())];
    for depth in 0..=max_depth {
        let mut next = Vec::new();
        for (g, l, path) in frontier {
            if &internal(&g, &l) == target {
                return Ok(Some((g, path)));
            }
            if depth == max_depth {
                continue;
            }
            for f in g.internal_faces() {
                let Ok(r) = quad_move(&g, f) else { continue };
                if seen.insert(internal(&r.graph, &r.labels)) {
                    let mut p: Vec<KSubset> = path.clone();
                    p.push(r.old_label.clone());
                    next.push((r.graph, r.labels, p));
                }
            }
        }
        frontier = next;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plabic::build::{build_regular, build_regular_star};

    #[test]
    fn blow_up_then_down_restores_graph() {
        let g = build_regular(3, 6).unwrap().graph;
        for v in 0..g.vertices().len() {
            let deg = g.degree(v);
            let windows: Vec<(usize, usize)> = if g.is_boundary(v) {
                (1..=deg).map(|l| (0, l)).collect()
            } else {
                (0..deg)
                    .flat_map(|s| (1..deg).map(move |l| (s, l)))
                    .collect()
            };
            for (s, l) in windows {
                let (g2, mid, _) = blow_up(&g, v, s, l).unwrap();
                assert_eq!(
                    compute_face_labels(&g2).unwrap().labels(),
                    compute_face_labels(&g).unwrap().labels()
                );
                let back = blow_down(&g2, mid).unwrap().graph;
                assert_eq!(
                    canonical_form(&back),
                    canonical_form(&g),
                    "vertex {v} window ({s},{l})"
                );
            }
        }
    }

    #[test]
    fn quad_move_is_an_involution() {
        for (k, n) in [(2, 4), (2, 5), (3, 6), (3, 7), (4, 8)] {
            let g = build_regular(k, n).unwrap().graph;
            let cands = quad_move_candidates(&g);
            assert!(!cands.is_empty(), "no square faces in G({k},{n})");
            for f in cands {
                let r = quad_move(&g, f).unwrap();
                let back = quad_move(&r.graph, r.face).unwrap();
                assert_eq!(back.new_label, r.old_label);
                assert_eq!(
                    back.labels.by_label().keys().collect::<Vec<_>>(),
                    compute_face_labels(&g)
                        .unwrap()
                        .by_label()
                        .keys()
                        .collect::<Vec<_>>()
                );
            }
        }
    }

    #[test]
    fn canonical_form_ignores_ids() {
        let a = build_regular_star(2, 5).unwrap().graph;
        let b = build_regular_star(2, 5).unwrap().graph;
        assert_eq!(canonical_form(&a), canonical_form(&b));
        assert_ne!(
            canonical_form(&a),
            canonical_form(&build_regular(2, 5).unwrap().graph)
        );
    }

    #[test]
    fn random_moves_are_reproducible() {
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;
        let g = build_regular(3, 7).unwrap().graph;
        let a = random_quad_moves(&g, 15, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = random_quad_moves(&g, 15, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a.2.len(), 15);
        assert_eq!(a.2, b.2);
        assert_eq!(a.0, b.0);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..40 {
            let (g2, mid) = random_blow_up(&a.0, &mut rng).unwrap();
            assert_eq!(compute_face_labels(&g2).unwrap().labels(), a.1.labels());
            assert_eq!(
                canonical_form(&blow_down(&g2, mid).unwrap().graph),
                canonical_form(&a.0)
            );
        }
    }
}

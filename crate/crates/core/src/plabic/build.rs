//! Constructions of the regular plabic graphs `G_{k,n}` and `G*_{k,n}`.
//!
//! The graphs are cut out of the triangular lattice. Lattice face `(a, b)`
//! sits at `a·(1, 0) + b·(1/2, √3/2)`; faces with `1 ≤ a ≤ k−1` and
//! `1 ≤ b ≤ n−k−1` become hexagons and every lattice triangle touching a
//! hexagon becomes a vertex. Upward triangles are black and downward ones
//! white (colours swap for the dual graph).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::graph::{Color, Edge, FaceId, PlabicGraph, Vertex};
use super::labels::{compute_face_labels, FaceLabeling};
use crate::combinatorics::{regular_label, regular_star_label};
use crate::error::{Error, Result};

pub type Point = (f64, f64);

/// A constructed graph with the data needed to recognise its faces.
#[derive(Clone, Debug)]
pub struct RegularGraph {
    pub graph: PlabicGraph,
    pub labels: FaceLabeling,
    /// Lattice coordinates of the internal faces.
    pub face_coords: BTreeMap<FaceId, (usize, usize)>,
    /// For each edge, the two lattice faces it separates (absent for the
    /// stalks attached at the boundary and for fan graphs).
    pub edge_sides: Vec<Option<[(usize, usize); 2]>>,
    /// Planar positions used for drawing.
    pub positions: Vec<Point>,
}

impl RegularGraph {
    pub fn face_at(&self, a: usize, b: usize) -> Option<FaceId> {
        self.face_coords
            .iter()
            .find(|(_, &c)| c == (a, b))
            .map(|(&f, _)| f)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Tri {
    Up(usize, usize),
    Down(usize, usize),
}

fn lattice_pos(a: f64, b: f64) -> Point {
    (a + b / 2.0, b * 3f64.sqrt() / 2.0)
}

fn centroid(pts: &[Point]) -> Point {
    let m = pts.len() as f64;
    (
        pts.iter().map(|p| p.0).sum::<f64>() / m,
        pts.iter().map(|p| p.1).sum::<f64>() / m,
    )
}

impl Tri {
    fn corners(self) -> [(usize, usize); 3] {
        match self {
            Tri::Up(a, b) => [(a, b), (a + 1, b), (a, b + 1)],
            Tri::Down(a, b) => [(a + 1, b), (a, b + 1), (a + 1, b + 1)],
        }
    }

    fn pos(self) -> Point {
        let pts: Vec<Point> = self
            .corners()
            .iter()
            .map(|&(a, b)| lattice_pos(a as f64, b as f64))
            .collect();
        centroid(&pts)
    }
}

fn angle(from: Point, to: Point) -> f64 {
    (to.1 - from.1).atan2(to.0 - from.0)
}

/// Incremental builder that fixes rotations from planar positions.
struct Layout {
    colors: Vec<Color>,
    boundary: Vec<Option<usize>>,
    outward: Vec<Option<f64>>,
    pos: Vec<Point>,
    edges: Vec<(usize, usize)>,
    sides: Vec<Option<[(usize, usize); 2]>>,
}

impl Layout {
    fn new() -> Self {
        Self {
            colors: vec![],
            boundary: vec![],
            outward: vec![],
            pos: vec![],
            edges: vec![],
            sides: vec![],
        }
    }

    fn vertex(&mut self, color: Color, pos: Point) -> usize {
        self.colors.push(color);
        self.boundary.push(None);
        self.outward.push(None);
        self.pos.push(pos);
        self.colors.len() - 1
    }

    fn edge(&mut self, u: usize, v: usize, side: Option<[(usize, usize); 2]>) {
        self.edges.push((u, v));
        self.sides.push(side);
    }

    fn make_boundary(&mut self, v: usize, index: usize, outward: f64) {
        self.boundary[v] = Some(index);
        self.outward[v] = Some(outward);
    }

    fn finish(
        self,
        k: usize,
        n: usize,
    ) -> Result<(PlabicGraph, Vec<Option<[(usize, usize); 2]>>, Vec<Point>)> {
        let mut incident: Vec<Vec<(f64, usize)>> = vec![vec![]; self.colors.len()];
        let mut edges = Vec::with_capacity(self.edges.len());
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            let (b, w) = if self.colors[u] == Color::Black {
                (u, v)
            } else {
                (v, u)
            };
            if self.colors[b] != Color::Black || self.colors[w] != Color::White {
                return Err(Error::InvalidGraph(format!("monochromatic edge {u}-{v}")));
            }
            edges.push(Edge { black: b, white: w });
            incident[u].push((angle(self.pos[u], self.pos[v]), e));
            incident[v].push((angle(self.pos[v], self.pos[u]), e));
        }
        let vertices = incident
            .into_iter()
            .enumerate()
            .map(|(v, mut list)| {
                let base = self.outward[v].unwrap_or(-PI);
                for item in list.iter_mut() {
                    item.0 = (item.0 - base).rem_euclid(2.0 * PI);
                }
                list.sort_by(|x, y| x.0.total_cmp(&y.0));
                Vertex {
                    color: self.colors[v],
                    boundary: self.boundary[v],
                    rotation: list.into_iter().map(|x| x.1).collect(),
                }
            })
            .collect();
        Ok((
            PlabicGraph::new(k, n, vertices, edges)?,
            self.sides,
            self.pos,
        ))
    }
}

fn check_range(k: usize, n: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(Error::Range(format!("need 0 < k < n, got k={k}, n={n}")));
    }
    Ok(())
}

/// Where a boundary vertex of the lattice graph sits and which boundary
/// index it carries, before any relabelling.
struct LatticeBoundary {
    tri: Tri,
    index: usize,
    inner: (usize, usize),
    /// True when the lattice vertex itself is the (black) boundary vertex;
    /// false when it gets a stalk.
    direct: bool,
}

fn lattice_boundary(k: usize, n: usize) -> Vec<LatticeBoundary> {
    let (aa, bb) = (k - 1, n - k - 1);
    let mut out = vec![LatticeBoundary {
        tri: Tri::Up(aa, bb),
        index: k,
        inner: (aa, bb),
        direct: true,
    }];
    for b in 1..=bb {
        out.push(LatticeBoundary {
            tri: Tri::Up(0, b),
            index: k + b + 1,
            inner: (1, b),
            direct: true,
        });
    }
    for i in 1..k {
        out.push(LatticeBoundary {
            tri: Tri::Down(i - 1, bb),
            index: i,
            inner: (i, bb),
            direct: false,
        });
    }
    out.push(LatticeBoundary {
        tri: Tri::Down(0, 0),
        index: k + 1,
        inner: (1, 1),
        direct: false,
    });
    out
}

/// Lattice vertices and edges for `2 ≤ k ≤ n−2`.
fn lattice(k: usize, n: usize, layout: &mut Layout, swap: bool) -> BTreeMap<Tri, usize> {
    let (aa, bb) = (k - 1, n - k - 1);
    let (up, down) = if swap {
        (Color::White, Color::Black)
    } else {
        (Color::Black, Color::White)
    };
    let mut ids = BTreeMap::new();
    for a in 0..=aa {
        for b in 0..=bb {
            if (a, b) != (0, 0) {
                let t = Tri::Up(a, b);
                ids.insert(t, layout.vertex(up, t.pos()));
            }
            if (a, b) != (aa, bb) {
                let t = Tri::Down(a, b);
                ids.insert(t, layout.vertex(down, t.pos()));
            }
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for i in 1..=aa {
        for j in 1..=bb {
            let cycle = [
                Tri::Up(i, j),
                Tri::Down(i - 1, j),
                Tri::Up(i - 1, j),
                Tri::Down(i - 1, j - 1),
                Tri::Up(i, j - 1),
                Tri::Down(i, j - 1),
            ];
            for r in 0..6 {
                let (x, y) = (cycle[r], cycle[(r + 1) % 6]);
                let key = if x < y { (x, y) } else { (y, x) };
                if !seen.insert(key) {
                    continue;
                }
                let cx = x.corners();
                let shared: Vec<(usize, usize)> =
                    y.corners().into_iter().filter(|c| cx.contains(c)).collect();
                layout.edge(ids[&x], ids[&y], Some([shared[0], shared[1]]));
            }
        }
    }
    ids
}

fn outward_angle(t: Tri, inner: (usize, usize)) -> f64 {
    angle(lattice_pos(inner.0 as f64, inner.1 as f64), t.pos())
}

fn stalk(layout: &mut Layout, from: usize, index: usize, dir: f64) {
    let p = layout.pos[from];
    let q = (p.0 + 0.4 * dir.cos(), p.1 + 0.4 * dir.sin());
    let b = layout.vertex(Color::Black, q);
    layout.make_boundary(b, index, dir);
    layout.edge(b, from, None);
}

fn coords_of_faces(
    g: &PlabicGraph,
    pos: &[Point],
    k: usize,
    n: usize,
) -> Result<BTreeMap<FaceId, (usize, usize)>> {
    let mut out = BTreeMap::new();
    for f in g.internal_faces() {
        let pts: Vec<Point> = g.face_vertices(f).iter().map(|&v| pos[v]).collect();
        let c = centroid(&pts);
        let b = (c.1 / (3f64.sqrt() / 2.0)).round();
        let a = (c.0 - b / 2.0).round();
        if a < 1.0 || b < 1.0 || a > (k - 1) as f64 || b > (n - k - 1) as f64 {
            return Err(Error::InvalidGraph(format!(
                "face {f} does not sit on a lattice hexagon"
            )));
        }
        out.insert(f, (a as usize, b as usize));
    }
    Ok(out)
}

/// Star-shaped graph for `k = 1` (one black centre) or `k = n−1` (one white
/// centre), with boundary vertices placed clockwise on a circle.
fn fan(k: usize, n: usize) -> Result<RegularGraph> {
    let mut layout = Layout::new();
    let centre_color = if k == 1 { Color::Black } else { Color::White };
    let centre = layout.vertex(centre_color, (0.0, 0.0));
    for i in 1..=n {
        let theta = PI / 2.0 - 2.0 * PI * (i as f64 - 1.0) / n as f64;
        let outer = (2.0 * theta.cos(), 2.0 * theta.sin());
        let b = layout.vertex(Color::Black, outer);
        layout.make_boundary(b, i, theta);
        if k == 1 {
            let w = layout.vertex(Color::White, (theta.cos(), theta.sin()));
            layout.edge(centre, w, None);
            layout.edge(w, b, None);
        } else {
            layout.edge(centre, b, None);
        }
    }
    let (graph, edge_sides, positions) = layout.finish(k, n)?;
    let labels = compute_face_labels(&graph)?;
    Ok(RegularGraph {
        graph,
        labels,
        face_coords: BTreeMap::new(),
        edge_sides,
        positions,
    })
}

/// The regular graph `G_{k,n}`; face `(i, j)` carries `M_{k,n}(i, j)`.
pub fn build_regular(k: usize, n: usize) -> Result<RegularGraph> {
    check_range(k, n)?;
    if k == 1 || k == n - 1 {
        return fan(k, n);
    }
    let mut layout = Layout::new();
    let ids = lattice(k, n, &mut layout, false);
    for lb in lattice_boundary(k, n) {
        let v = ids[&lb.tri];
        let dir = outward_angle(lb.tri, lb.inner);
        if lb.direct {
            layout.make_boundary(v, lb.index, dir);
        } else {
            stalk(&mut layout, v, lb.index, dir);
        }
    }
    let (graph, edge_sides, positions) = layout.finish(k, n)?;
    let labels = compute_face_labels(&graph)?;
    let face_coords = coords_of_faces(&graph, &positions, k, n)?;
    for (&f, &(i, j)) in &face_coords {
        let want = regular_label(k, n, i, j)?;
        if labels.label(f) != &want {
            return Err(Error::InvalidGraph(format!(
                "face ({i},{j}) labelled {} not {want}",
                labels.label(f)
            )));
        }
    }
    Ok(RegularGraph {
        graph,
        labels,
        face_coords,
        edge_sides,
        positions,
    })
}

/// The dual regular graph `G*_{k,n}`: the lattice graph of `G_{n−k,n}` with
/// colours swapped and boundary indices shifted by `k`. Face `(a, b)`
/// carries `M*_{n−k,n}(a, b)`.
pub fn build_regular_star(k: usize, n: usize) -> Result<RegularGraph> {
    check_range(k, n)?;
    if k == 1 || k == n - 1 {
        return fan(k, n);
    }
    let m = n - k;
    let mut layout = Layout::new();
    let ids = lattice(m, n, &mut layout, true);
    for lb in lattice_boundary(m, n) {
        let v = ids[&lb.tri];
        let dir = outward_angle(lb.tri, lb.inner);
        let index = (lb.index + k - 1) % n + 1;
        if lb.direct {
            stalk(&mut layout, v, index, dir);
        } else {
            layout.make_boundary(v, index, dir);
        }
    }
    let (graph, edge_sides, positions) = layout.finish(k, n)?;
    let labels = compute_face_labels(&graph)?;
    let face_coords = coords_of_faces(&graph, &positions, m, n)?;
    for (&f, &(a, b)) in &face_coords {
        let want = regular_star_label(k, n, a, b)?;
        if labels.label(f) != &want {
            return Err(Error::InvalidGraph(format!(
                "face ({a},{b}) labelled {} not {want}",
                labels.label(f)
            )));
        }
    }
    Ok(RegularGraph {
        graph,
        labels,
        face_coords,
        edge_sides,
        positions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_graphs_have_expected_labels() {
        for n in 2..=9 {
            for k in 1..n {
                let g = build_regular(k, n).unwrap_or_else(|e| panic!("G({k},{n}): {e}"));
                assert_eq!(g.graph.faces().len(), k * (n - k) + 1);
                if k >= 2 && k <= n - 2 {
                    assert_eq!(g.face_coords.len(), (k - 1) * (n - k - 1));
                }
            }
        }
    }

    #[test]
    fn star_graphs_have_expected_labels() {
        for n in 2..=9 {
            for k in 1..n {
                let g = build_regular_star(k, n).unwrap_or_else(|e| panic!("G*({k},{n}): {e}"));
                assert_eq!(g.graph.faces().len(), k * (n - k) + 1);
            }
        }
    }
}

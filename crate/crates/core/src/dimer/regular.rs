//! The unique perfect matching of `G*(M_{k,n}(i,j))`, assembled hexagon by
//! hexagon.

use std::collections::{BTreeMap, BTreeSet};

use super::{remove_boundary, BoundaryGraph, DimerConfiguration, WeightedGraph};
use crate::combinatorics::regular_label;
use crate::error::{Error, Result};
use crate::plabic::{build_regular_star, RegularGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum HexagonType {
    O,
    A,
    B,
    C,
    X,
    Y,
    Z,
}

/// Type of hexagon `(a, b)` in the matching for `M_{k,n}(i,j)`, for
/// `0 ≤ a ≤ n−k−1` and `1 ≤ b ≤ k`. When `i = j = 0` every hexagon has type Z.
pub fn hexagon_type_table(i: usize, j: usize, a: usize, b: usize) -> HexagonType {
    let (s, t) = (a + b, i + j);
    if (i, j) == (0, 0) {
        HexagonType::Z
    } else if (a, b) == (j, i) {
        HexagonType::O
    } else if a < j && b == i {
        HexagonType::A
    } else if s == t && a < j {
        HexagonType::B
    } else if a == j && b > i {
        HexagonType::C
    } else if s < t && b > i {
        HexagonType::X
    } else if s > t && a < j {
        HexagonType::Y
    } else {
        HexagonType::Z
    }
}

pub type Offset = (i64, i64);

/// For each lattice face, the offsets to the neighbouring faces across the
/// matched sides of that face.
pub fn hexagon_types_of(
    rg: &RegularGraph,
    m: &DimerConfiguration,
) -> BTreeMap<(usize, usize), BTreeSet<Offset>> {
    let mut out: BTreeMap<(usize, usize), BTreeSet<Offset>> = BTreeMap::new();
    for &e in &m.edges {
        if let Some(Some([p, q])) = rg.edge_sides.get(e) {
            let d = (q.0 as i64 - p.0 as i64, q.1 as i64 - p.1 as i64);
            out.entry(*p).or_default().insert(d);
            out.entry(*q).or_default().insert((-d.0, -d.1));
        }
    }
    out
}

/// The matching together with the graph it lives on and the hexagon types
/// it was assembled from.
#[derive(Clone, Debug)]
pub struct RegularDimer {
    pub regular: RegularGraph,
    pub boundary_graph: BoundaryGraph,
    pub configuration: DimerConfiguration,
    pub types: BTreeMap<(usize, usize), HexagonType>,
}

impl HexagonType {
    /// Offsets `(Δa, Δb)` to the neighbouring faces across the sides of a
    /// hexagon of this type that belong to the matching.
    pub fn matched_sides(self) -> &'static [Offset] {
        match self {
            HexagonType::O => &[(1, -1)],
            HexagonType::A => &[(0, 1), (1, -1)],
            HexagonType::B => &[(0, -1), (1, 0)],
            HexagonType::C => &[(-1, 0), (1, -1)],
            HexagonType::X => &[(0, -1), (0, 1)],
            HexagonType::Y => &[(-1, 0), (1, 0)],
            HexagonType::Z => &[(-1, 1), (1, -1)],
        }
    }
}

fn shift(p: (usize, usize), d: Offset) -> Option<(usize, usize)> {
    let a = usize::try_from(p.0 as i64 + d.0).ok()?;
    let b = usize::try_from(p.1 as i64 + d.1).ok()?;
    Some((a, b))
}

/// Builds the matching of `G*(M_{k,n}(i,j))` from the hexagon types, then
/// adds the edges this forces (stalks and the continuations of the tiling
/// at the removed boundary vertices).
pub fn unique_regular_dimer(k: usize, n: usize, i: usize, j: usize) -> Result<RegularDimer> {
    if k < 2 || k + 2 > n {
        return Err(Error::Range(format!(
            "hexagonal construction needs 2 <= k <= n-2, got k={k}, n={n}"
        )));
    }
    let subset = regular_label(k, n, i, j)?;
    let regular = build_regular_star(k, n)?;
    let wg = WeightedGraph::with_labels(regular.graph.clone(), regular.labels.clone());
    let boundary_graph = remove_boundary(&wg, &subset)?;
    let g = boundary_graph.graph();
    let mut side_edge: BTreeMap<((usize, usize), (usize, usize)), usize> = BTreeMap::new();
    for &e in &boundary_graph.active_edges {
        if let Some(Some([p, q])) = regular.edge_sides.get(e) {
            side_edge.insert((*p, *q), e);
            side_edge.insert((*q, *p), e);
        }
    }
    let mut types = BTreeMap::new();
    let mut chosen = BTreeSet::new();
    for a in 0..n - k {
        for b in 1..=k {
            let t = hexagon_type_table(i, j, a, b);
            types.insert((a, b), t);
            for &d in t.matched_sides() {
                if let Some(&e) = shift((a, b), d).and_then(|q| side_edge.get(&((a, b), q))) {
                    chosen.insert(e);
                }
            }
        }
    }
    let mut matched = boundary_graph.removed.clone();
    for &e in &chosen {
        let ed = g.edge(e);
        if matched[ed.black] || matched[ed.white] {
            return Err(Error::InvalidGraph(format!(
                "hexagon types overlap at edge {e}"
            )));
        }
        matched[ed.black] = true;
        matched[ed.white] = true;
    }
    let mut adj = vec![Vec::new(); g.vertices().len()];
    for &e in &boundary_graph.active_edges {
        let ed = g.edge(e);
        adj[ed.black].push((e, ed.white));
        adj[ed.white].push((e, ed.black));
    }
    loop {
        let forced = (0..adj.len()).filter(|&v| !matched[v]).find_map(|v| {
            let open: Vec<&(usize, usize)> = adj[v].iter().filter(|(_, u)| !matched[*u]).collect();
            (open.len() == 1).then(|| (v, *open[0]))
        });
        let Some((v, (e, u))) = forced else { break };
        matched[v] = true;
        matched[u] = true;
        chosen.insert(e);
    }
    let configuration = DimerConfiguration::new(chosen.into_iter().collect());
    if !configuration.is_perfect_matching(&boundary_graph) {
        return Err(Error::InvalidGraph(format!(
            "hexagon types do not determine a matching for ({i},{j})"
        )));
    }
    Ok(RegularDimer {
        regular,
        boundary_graph,
        configuration,
        types,
    })
}

impl RegularDimer {
    /// Checks every table hexagon against its type: a side that is present
    /// in the graph is matched exactly when the type says so.
    pub fn types_match(&self) -> bool {
        let sides = hexagon_types_of(&self.regular, &self.configuration);
        let active: BTreeSet<usize> = self.boundary_graph.active_edges.iter().copied().collect();
        let mut present: BTreeMap<(usize, usize), BTreeSet<Offset>> = BTreeMap::new();
        for (e, s) in self.regular.edge_sides.iter().enumerate() {
            if let (Some([p, q]), true) = (s, active.contains(&e)) {
                let d = (q.0 as i64 - p.0 as i64, q.1 as i64 - p.1 as i64);
                present.entry(*p).or_default().insert(d);
                present.entry(*q).or_default().insert((-d.0, -d.1));
            }
        }
        self.types.iter().all(|(pos, t)| {
            let want: BTreeSet<Offset> = t
                .matched_sides()
                .iter()
                .copied()
                .filter(|d| present.get(pos).is_some_and(|p| p.contains(d)))
                .collect();
            sides.get(pos).cloned().unwrap_or_default() == want
        })
    }
}

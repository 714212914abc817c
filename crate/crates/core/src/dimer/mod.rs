//! Edge weights, boundary-conditioned graphs `G(I)`, perfect-matching
//! enumeration and the partition functions `Đ` and `Đ̃`.

mod kasteleyn;
mod regular;

use std::collections::BTreeSet;

use serde_json::{json, Value};

pub use kasteleyn::kasteleyn_count;
pub use regular::{
    hexagon_type_table, hexagon_types_of, unique_regular_dimer, HexagonType, RegularDimer,
};

use crate::combinatorics::{KSubset, ShortPlucker};
use crate::error::{Error, Result};
use crate::exact::GrassPoint;
use crate::plabic::{blow_up, compute_face_labels, Color, FaceLabeling, PlabicGraph};
use crate::symbolic::{LaurentPolynomial, Monomial};

/// Weight of edge `e`: the product of the labels of the faces around its
/// white endpoint, leaving out the faces on either side of `e`.
pub fn edge_weight(g: &PlabicGraph, labels: &FaceLabeling, e: usize) -> Monomial {
    let w = g.edge(e).white;
    let around: BTreeSet<usize> = g.faces_around(w).into_iter().collect();
    let skip = [g.face_of(2 * e), g.face_of(2 * e + 1)];
    Monomial::product(
        around
            .iter()
            .filter(|f| !skip.contains(f))
            .map(|&f| labels.label(f)),
    )
}

/// A labelled graph with its edge weights.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    pub graph: PlabicGraph,
    pub labels: FaceLabeling,
    pub weights: Vec<Monomial>,
}

impl WeightedGraph {
    pub fn new(graph: PlabicGraph) -> Result<Self> {
        let labels = compute_face_labels(&graph)?;
        Ok(Self::with_labels(graph, labels))
    }

    pub fn with_labels(graph: PlabicGraph, labels: FaceLabeling) -> Self {
        let weights = (0..graph.edges().len())
            .map(|e| edge_weight(&graph, &labels, e))
            .collect();
        Self {
            graph,
            labels,
            weights,
        }
    }

    /// Product of the labels of all internal faces.
    pub fn internal_product(&self) -> Monomial {
        Monomial::product(self.graph.internal_faces().map(|f| self.labels.label(f)))
    }
}

/// `G(I)`: the weighted graph with the boundary vertices in `I` removed.
#[derive(Clone, Debug)]
pub struct BoundaryGraph {
    /// The graph after moving every removed boundary vertex onto a stalk.
    pub weighted: WeightedGraph,
    pub subset: KSubset,
    pub removed: Vec<bool>,
    pub active_edges: Vec<usize>,
}

impl BoundaryGraph {
    pub fn graph(&self) -> &PlabicGraph {
        &self.weighted.graph
    }

    pub fn is_active_vertex(&self, v: usize) -> bool {
        !self.removed[v]
    }

    pub fn active_vertices(&self) -> Vec<usize> {
        (0..self.removed.len())
            .filter(|&v| !self.removed[v])
            .collect()
    }

    pub fn is_balanced(&self) -> bool {
        let (b, w) = self.color_counts();
        b == w
    }

    fn color_counts(&self) -> (usize, usize) {
        let g = self.graph();
        let b = self
            .active_vertices()
            .iter()
            .filter(|&&v| g.vertex(v).color == Color::Black)
            .count();
        (b, self.active_vertices().len() - b)
    }
}

/// Deletes the boundary vertices in `I`. Each of them that is not already on
/// a stalk is first blown up so that it is; the weights of surviving edges
/// are those of the blown-up graph.
pub fn remove_boundary(wg: &WeightedGraph, subset: &KSubset) -> Result<BoundaryGraph> {
    let g0 = &wg.graph;
    if subset.n() != g0.n() || subset.k() != g0.k() {
        return Err(Error::Dimension(format!(
            "subset {subset} is not a {}-subset of 1..{}",
            g0.k(),
            g0.n()
        )));
    }
    let mut g = g0.clone();
    for &i in subset.elements() {
        let v = g.boundary_vertex(i);
        if g.degree(v) > 1 {
            g = blow_up(&g, v, 0, g.degree(v))?.0;
        }
    }
    let weighted = if g.edges().len() == g0.edges().len() {
        wg.clone()
    } else {
        let labels = compute_face_labels(&g)?;
        WeightedGraph::with_labels(g, labels)
    };
    let g = &weighted.graph;
    let mut removed = vec![false; g.vertices().len()];
    for &i in subset.elements() {
        removed[g.boundary_vertex(i)] = true;
    }
    let active_edges = (0..g.edges().len())
        .filter(|&e| !removed[g.edge(e).black] && !removed[g.edge(e).white])
        .collect();
    Ok(BoundaryGraph {
        weighted,
        subset: subset.clone(),
        removed,
        active_edges,
    })
}

/// A perfect matching, as a sorted list of edge ids.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DimerConfiguration {
    pub edges: Vec<usize>,
}

impl DimerConfiguration {
    pub fn new(mut edges: Vec<usize>) -> Self {
        edges.sort_unstable();
        Self { edges }
    }

    pub fn weight(&self, bg: &BoundaryGraph) -> Monomial {
        self.edges
            .iter()
            .fold(Monomial::one(), |acc, &e| acc.mul(&bg.weighted.weights[e]))
    }

    /// Checks that every active vertex is covered exactly once by active edges.
    pub fn is_perfect_matching(&self, bg: &BoundaryGraph) -> bool {
        let g = bg.graph();
        let mut cover = vec![0u32; g.vertices().len()];
        for &e in &self.edges {
            if !bg.active_edges.contains(&e) {
                return false;
            }
            cover[g.edge(e).black] += 1;
            cover[g.edge(e).white] += 1;
        }
        bg.active_vertices().iter().all(|&v| cover[v] == 1)
    }
}

struct Search<'a> {
    adj: Vec<Vec<(usize, usize)>>,
    covered: Vec<bool>,
    active: &'a [usize],
    chosen: Vec<usize>,
    out: Vec<DimerConfiguration>,
}

impl Search<'_> {
    fn run(&mut self) {
        let mut best: Option<(usize, usize)> = None;
        for &v in self.active {
            if self.covered[v] {
                continue;
            }
            let d = self.adj[v]
                .iter()
                .filter(|&&(_, u)| !self.covered[u])
                .count();
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, v));
                if d == 0 {
                    break;
                }
            }
        }
        let Some((d, v)) = best else {
            self.out.push(DimerConfiguration::new(self.chosen.clone()));
            return;
        };
        if d == 0 {
            return;
        }
        self.covered[v] = true;
        for idx in 0..self.adj[v].len() {
            let (e, u) = self.adj[v][idx];
            if self.covered[u] {
                continue;
            }
            self.covered[u] = true;
            self.chosen.push(e);
            self.run();
            self.chosen.pop();
            self.covered[u] = false;
        }
        self.covered[v] = false;
    }
}

/// Every perfect matching of `G(I)`, sorted.
///
/// Backtracks on an uncovered vertex of minimum available degree (lowest id
/// on ties), so forced edges such as stalks are taken first.
pub fn enumerate_dimers(bg: &BoundaryGraph) -> Result<Vec<DimerConfiguration>> {
    let (black, white) = bg.color_counts();
    if black != white {
        return Err(Error::Unbalanced { black, white });
    }
    let g = bg.graph();
    let mut adj = vec![Vec::new(); g.vertices().len()];
    for &e in &bg.active_edges {
        let ed = g.edge(e);
        adj[ed.black].push((e, ed.white));
        adj[ed.white].push((e, ed.black));
    }
    let active = bg.active_vertices();
    let mut s = Search {
        adj,
        covered: bg.removed.clone(),
        active: &active,
        chosen: Vec::new(),
        out: Vec::new(),
    };
    s.run();
    let mut out = s.out;
    out.sort();
    Ok(out)
}

/// `Đ_{G(I)}`: the sum of the weights of all perfect matchings of `G(I)`.
pub fn partition_function(wg: &WeightedGraph, subset: &KSubset) -> Result<LaurentPolynomial> {
    let bg = remove_boundary(wg, subset)?;
    let mut total = LaurentPolynomial::zero();
    for m in enumerate_dimers(&bg)? {
        total.add_monomial(&m.weight(&bg));
    }
    Ok(total)
}

/// `Đ̃_{G(I)} = Đ_{G(I)} / ∏ internal face labels`.
pub fn scaled_partition_function(
    wg: &WeightedGraph,
    subset: &KSubset,
) -> Result<LaurentPolynomial> {
    partition_function(wg, subset)?.divide_by_monomial(&wg.internal_product())
}

/// Everything computed for one boundary subset, in the form the CLI prints.
#[derive(Clone, Debug)]
pub struct DimerReport {
    pub boundary_graph: BoundaryGraph,
    pub matchings: Vec<DimerConfiguration>,
    pub weights: Vec<Monomial>,
    pub partition: LaurentPolynomial,
    pub scaled: LaurentPolynomial,
}

impl DimerReport {
    pub fn compute(wg: &WeightedGraph, subset: &KSubset) -> Result<Self> {
        let boundary_graph = remove_boundary(wg, subset)?;
        let matchings = enumerate_dimers(&boundary_graph)?;
        let weights: Vec<Monomial> = matchings
            .iter()
            .map(|m| m.weight(&boundary_graph))
            .collect();
        let mut partition = LaurentPolynomial::zero();
        for w in &weights {
            partition.add_monomial(w);
        }
        let scaled = partition.divide_by_monomial(&wg.internal_product())?;
        Ok(Self {
            boundary_graph,
            matchings,
            weights,
            partition,
            scaled,
        })
    }

    pub fn to_json(&self) -> Value {
        let matchings: Vec<Value> = self
            .matchings
            .iter()
            .zip(&self.weights)
            .map(|(m, w)| json!({ "edges": m.edges, "weight": w.to_json(), "weight_text": w.to_string() }))
            .collect();
        json!({
            "subset": self.boundary_graph.subset,
            "matchings": matchings,
            "partition_function": self.partition.to_json(),
            "partition_function_text": self.partition.to_string(),
            "scaled_partition_function": self.scaled.to_json(),
            "scaled_partition_function_text": self.scaled.to_string(),
        })
    }
}

/// Evaluates `[Jac][Jbd] − [Jab][Jcd] − [Jad][Jbc]` with `[S] := Đ̃_{G(S)}(p)`
/// and reports whether it vanishes.
pub fn condensation_check(
    wg: &WeightedGraph,
    relation: &ShortPlucker,
    p: &GrassPoint,
) -> Result<bool> {
    let [ac, bd, ab, cd, ad, bc] = relation.subsets();
    let value = |s: &KSubset| -> Result<_> { scaled_partition_function(wg, s)?.evaluate(p) };
    let lhs = value(&ac)? * value(&bd)?;
    let rhs = value(&ab)? * value(&cd)? + value(&ad)? * value(&bc)?;
    Ok(lhs == rhs)
}

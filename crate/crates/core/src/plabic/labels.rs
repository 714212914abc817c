use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::graph::{Color, FaceId, PlabicGraph};
use crate::combinatorics::{coeff_subset, sigma_pow, KSubset};
use crate::error::{Error, Result};

/// A trip from one boundary vertex to another, as the list of traversed
/// half-edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trip {
    pub start: usize,
    pub end: usize,
    pub half_edges: Vec<usize>,
}

/// Follows the rules of the road: turn maximally left at black vertices and
/// maximally right at white ones.
pub fn trip_from(g: &PlabicGraph, i: usize) -> Result<Trip> {
    let b = g.boundary_vertex(i);
    let mut h = g.out_half_edge(b, g.degree(b) - 1);
    let mut half_edges = Vec::new();
    for _ in 0..=g.num_half_edges() {
        half_edges.push(h);
        let v = g.target(h);
        let s = g.slot(h ^ 1);
        let deg = g.degree(v);
        let next_slot = match (g.vertex(v).color, g.vertex(v).boundary) {
            (Color::Black, Some(end)) if s == 0 => {
                return Ok(Trip {
                    start: i,
                    end,
                    half_edges,
                })
            }
            (Color::Black, Some(_)) => s - 1,
            (Color::Black, None) => (s + deg - 1) % deg,
            (Color::White, _) => (s + 1) % deg,
        };
        h = g.out_half_edge(v, next_slot);
    }
    Err(Error::Trip(format!(
        "trip from {i} never reaches the boundary"
    )))
}

pub fn trips(g: &PlabicGraph) -> Result<Vec<Trip>> {
    (1..=g.n()).map(|i| trip_from(g, i)).collect()
}

/// The trip permutation as `perm[i - 1] = end of trip i`.
pub fn trip_permutation(g: &PlabicGraph) -> Result<Vec<usize>> {
    Ok(trips(g)?.into_iter().map(|t| t.end).collect())
}

/// Face labels indexed by [`FaceId`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceLabeling {
    labels: Vec<KSubset>,
}

impl FaceLabeling {
    pub fn from_labels(labels: Vec<KSubset>) -> Self {
        Self { labels }
    }

    pub fn label(&self, f: FaceId) -> &KSubset {
        &self.labels[f]
    }

    pub fn labels(&self) -> &[KSubset] {
        &self.labels
    }

    pub fn face_with_label(&self, s: &KSubset) -> Option<FaceId> {
        self.labels.iter().position(|l| l == s)
    }

    pub fn by_label(&self) -> BTreeMap<KSubset, FaceId> {
        self.labels
            .iter()
            .cloned()
            .enumerate()
            .map(|(f, l)| (l, f))
            .collect()
    }
}

/// Faces lying to the left of the trip, found by flooding from the faces on
/// its left across edges the trip does not use.
fn left_region(g: &PlabicGraph, trip: &Trip) -> Result<Vec<bool>> {
    let mut used = vec![false; g.edges().len()];
    for &h in &trip.half_edges {
        used[h / 2] = true;
    }
    let nf = g.faces().len();
    let mut right = vec![false; nf];
    for &h in &trip.half_edges {
        right[g.face_of(h ^ 1)] = true;
    }
    let mut left = vec![false; nf];
    let mut queue = VecDeque::new();
    for &h in &trip.half_edges {
        let f = g.face_of(h);
        if !left[f] {
            left[f] = true;
            queue.push_back(f);
        }
    }
    while let Some(f) = queue.pop_front() {
        if right[f] {
            return Err(Error::Trip(format!(
                "trip {} has face {f} on both sides",
                trip.start
            )));
        }
        for &h in &g.face(f).half_edges {
            if used[h / 2] {
                continue;
            }
            let other = g.face_of(h ^ 1);
            if !left[other] {
                left[other] = true;
                queue.push_back(other);
            }
        }
    }
    Ok(left)
}

/// Labels every face by the set of trips that have it on their left and
/// checks the result: trip `i` must end at `i + k`, each label has `k`
/// elements, labels are distinct, and boundary face `i` carries `𝒦_i`.
pub fn compute_face_labels(g: &PlabicGraph) -> Result<FaceLabeling> {
    let (k, n) = (g.k(), g.n());
    if g.faces().len() != k * (n - k) + 1 {
        return Err(Error::Trip(format!(
            "{} faces where a reduced graph has {}",
            g.faces().len(),
            k * (n - k) + 1
        )));
    }
    let ts = trips(g)?;
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); g.faces().len()];
    for t in &ts {
        let expected = sigma_pow(t.start, -(k as i64), n);
        if t.end != expected {
            return Err(Error::Trip(format!(
                "trip from {} ends at {}, expected {expected}",
                t.start, t.end
            )));
        }
        for (f, inside) in left_region(g, t)?.into_iter().enumerate() {
            if inside {
                members[f].push(t.start);
            }
        }
    }
    let labels = members
        .into_iter()
        .map(|m| KSubset::new(n, m))
        .collect::<Result<Vec<_>>>()?;
    for (f, l) in labels.iter().enumerate() {
        if l.k() != k {
            return Err(Error::Trip(format!(
                "face {f} has label {l} of size {}",
                l.k()
            )));
        }
    }
    for i in 1..=n {
        let want = coeff_subset(i, k, n)?;
        if labels[g.boundary_face(i)] != want {
            return Err(Error::Trip(format!(
                "boundary face {i} labelled {} instead of {want}",
                labels[g.boundary_face(i)]
            )));
        }
    }
    let mut sorted = labels.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != labels.len() {
        return Err(Error::Trip("two faces share a label".into()));
    }
    Ok(FaceLabeling { labels })
}

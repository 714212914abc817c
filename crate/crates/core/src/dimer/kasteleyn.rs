//! Matching count via a Kasteleyn-signed biadjacency determinant, used as an
//! independent check on the enumeration.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::BoundaryGraph;
use crate::exact::bareiss_determinant;
use crate::plabic::Color;

/// Solves `A x = b` over GF(2); rows are bit vectors with `b` in the last
/// bit. Returns `None` when the system is inconsistent.
fn solve_gf2(mut rows: Vec<Vec<u64>>, vars: usize) -> Option<Vec<bool>> {
    let get = |r: &Vec<u64>, i: usize| (r[i / 64] >> (i % 64)) & 1 == 1;
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..vars {
        let Some(p) = (rank..rows.len()).find(|&r| get(&rows[r], col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && get(row, col) {
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a ^= b;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|r| get(r, vars)) {
        return None;
    }
    let mut x = vec![false; vars];
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = get(&rows[r], vars);
    }
    Some(x)
}

/// Number of perfect matchings of `G(I)`, computed as `|det K|` for a
/// Kasteleyn signing of the biadjacency matrix.
///
/// The signing makes every face walk of the embedded subgraph carry a number
/// of minus signs congruent to `L/2 + 1` modulo 2, where `L` is the walk
/// length. On each connected component these conditions sum to a tautology,
/// so imposing all of them is consistent whenever a matching can exist.
pub fn kasteleyn_count(bg: &BoundaryGraph) -> BigInt {
    let g = bg.graph();
    let active: Vec<usize> = bg.active_vertices();
    let edges = &bg.active_edges;
    let blacks: Vec<usize> = active
        .iter()
        .copied()
        .filter(|&v| g.vertex(v).color == Color::Black)
        .collect();
    let whites: Vec<usize> = active
        .iter()
        .copied()
        .filter(|&v| g.vertex(v).color == Color::White)
        .collect();
    if blacks.len() != whites.len() {
        return BigInt::zero();
    }
    if blacks.is_empty() {
        return BigInt::from(1);
    }
    let mut local = vec![usize::MAX; g.edges().len()];
    for (i, &e) in edges.iter().enumerate() {
        local[e] = i;
    }
    let rot: Vec<Vec<usize>> = (0..g.vertices().len())
        .map(|v| {
            g.vertex(v)
                .rotation
                .iter()
                .copied()
                .filter(|&e| local[e] != usize::MAX)
                .collect()
        })
        .collect();
    let half = |v: usize, e: usize| 2 * e + usize::from(g.vertex(v).color == Color::White);
    let mut seen = vec![false; 2 * g.edges().len()];
    let words = (edges.len() + 1).div_ceil(64);
    let mut rows = Vec::new();
    for &e in edges {
        for start in [2 * e, 2 * e + 1] {
            if seen[start] {
                continue;
            }
            let mut row = vec![0u64; words];
            let mut len = 0usize;
            let mut h = start;
            loop {
                seen[h] = true;
                len += 1;
                let i = local[h / 2];
                row[i / 64] ^= 1 << (i % 64);
                let v = g.target(h);
                let r = &rot[v];
                let s = r
                    .iter()
                    .position(|&x| x == h / 2)
                    .expect("edge at its endpoint");
                let next_e = r[(s + r.len() - 1) % r.len()];
                h = half(v, next_e);
                if h == start {
                    break;
                }
            }
            if (len / 2 + 1) % 2 == 1 {
                let i = edges.len();
                row[i / 64] ^= 1 << (i % 64);
            }
            rows.push(row);
        }
    }
    let Some(signs) = solve_gf2(rows, edges.len()) else {
        return BigInt::zero();
    };
    let bidx = |v: usize| blacks.binary_search(&v).expect("active black");
    let widx = |v: usize| whites.binary_search(&v).expect("active white");
    let mut m = vec![vec![BigInt::zero(); whites.len()]; blacks.len()];
    for (i, &e) in edges.iter().enumerate() {
        let ed = g.edge(e);
        let s = if signs[i] { -1 } else { 1 };
        m[bidx(ed.black)][widx(ed.white)] += s;
    }
    bareiss_determinant(m).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::KSubset;
    use crate::dimer::{enumerate_dimers, remove_boundary, WeightedGraph};
    use crate::plabic::{build_regular, build_regular_star};

    #[test]
    fn agrees_with_enumeration_on_small_graphs() {
        for n in 4..=7 {
            for k in 1..n {
                for r in [
                    build_regular(k, n).unwrap(),
                    build_regular_star(k, n).unwrap(),
                ] {
                    let wg = WeightedGraph::new(r.graph).unwrap();
                    for s in KSubset::all(k, n) {
                        let bg = remove_boundary(&wg, &s).unwrap();
                        let count = enumerate_dimers(&bg).unwrap().len();
                        assert_eq!(
                            kasteleyn_count(&bg),
                            BigInt::from(count),
                            "k={k} n={n} I={s}"
                        );
                    }
                }
            }
        }
    }
}

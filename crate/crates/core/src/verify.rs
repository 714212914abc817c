//! Seeded verification sweeps over random generic points.
//!
//! Each suite checks a family of identities exhaustively over subsets and
//! over a fixed number of random points. Work fans out per subset with
//! rayon; results are folded in subset order so the report, including the
//! first counterexample, is independent of scheduling.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::bfz::{bfz_relation_rhs, bfz_twist_point, cell_membership, phi, GrassmannPermutation};
use crate::combinatorics::{
    double_twist_formula, iterated_double_twist, periodicity_coefficient,
    twist_formula_two_interval, two_interval_decompose, KSubset, ShortPlucker,
};
use crate::dimer::{scaled_partition_function, WeightedGraph};
use crate::error::{Error, Result};
use crate::exact::{
    double_twist_prediction, random_nonvanishing_point, rational_to_string, twist_matrix,
    GrassPoint, Rational,
};
use crate::plabic::{
    blow_down, build_regular, build_regular_star, canonical_form, random_blow_up,
    random_quad_moves, PlabicGraph,
};
use crate::symbolic::LaurentPolynomial;

/// The identity families that can be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    /// `Đ̃_{G(I)}(p) = twist[I](p)` on the regular and regular-star graphs.
    Main,
    /// Double twist, entrywise and on Plücker coordinates, and periodicity.
    Twist2,
    /// The map `φ`, its minors, cell membership and the relation between twists.
    Bfz,
    /// Short Plücker relations among the `Đ̃_{G(I)}`.
    Condensation,
    /// Invariance under random quadrilateral moves and blow-up/blow-down pairs.
    Moves,
    /// The monomial formula for two-interval subsets.
    Formula,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Main,
        Suite::Twist2,
        Suite::Bfz,
        Suite::Condensation,
        Suite::Moves,
        Suite::Formula,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Main => "main",
            Suite::Twist2 => "twist2",
            Suite::Bfz => "bfz",
            Suite::Condensation => "condensation",
            Suite::Moves => "moves",
            Suite::Formula => "formula",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`")))
    }
}

/// Parameters of one verification run.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub k: usize,
    pub n: usize,
    /// Random generic points per identity.
    pub points: usize,
    pub seed: u64,
    /// Length of the random walk in the `moves` suite.
    pub random_moves: usize,
    /// Blow-up/blow-down pairs in the `moves` suite.
    pub blow_pairs: usize,
}

impl VerifyOptions {
    pub fn new(k: usize, n: usize) -> Self {
        Self {
            k,
            n,
            points: 5,
            seed: 0,
            random_moves: 20,
            blow_pairs: 5,
        }
    }
}

/// Outcome of a suite. The wall time is kept out of the JSON so that equal
/// seeds give byte-identical reports.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub suite: Suite,
    pub k_range: (usize, usize),
    pub n_range: (usize, usize),
    pub checked: u64,
    pub passed: u64,
    pub counterexample: Option<Value>,
    pub wall_time_ms: Option<u128>,
}

impl VerificationReport {
    pub fn is_pass(&self) -> bool {
        self.passed == self.checked
    }

    /// Combines two reports of the same suite; the earlier counterexample
    /// wins.
    pub fn merge(mut self, other: Self) -> Self {
        self.k_range = (
            self.k_range.0.min(other.k_range.0),
            self.k_range.1.max(other.k_range.1),
        );
        self.n_range = (
            self.n_range.0.min(other.n_range.0),
            self.n_range.1.max(other.n_range.1),
        );
        self.checked += other.checked;
        self.passed += other.passed;
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample;
        }
        self.wall_time_ms = match (self.wall_time_ms, other.wall_time_ms) {
            (Some(a), Some(b)) => Some(a + b),
            (a, b) => a.or(b),
        };
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "k": [self.k_range.0, self.k_range.1],
            "n": [self.n_range.0, self.n_range.1],
            "checked": self.checked,
            "passed": self.passed,
            "counterexample": self.counterexample,
        })
    }
}

/// Running count of checked and passed identities with the first failure.
#[derive(Default, Debug)]
pub struct Tally {
    pub checked: u64,
    pub passed: u64,
    pub first: Option<Value>,
}

impl Tally {
    pub fn record(&mut self, ok: bool, payload: impl FnOnce() -> Value) {
        self.checked += 1;
        if ok {
            self.passed += 1;
        } else if self.first.is_none() {
            self.first = Some(payload());
        }
    }

    pub fn absorb(&mut self, other: Tally) {
        self.checked += other.checked;
        self.passed += other.passed;
        if self.first.is_none() {
            self.first = other.first;
        }
    }
}

fn fold(parts: Vec<Tally>) -> Tally {
    let mut t = Tally::default();
    for p in parts {
        t.absorb(p);
    }
    t
}

fn q(x: &Rational) -> Value {
    json!(rational_to_string(x))
}

fn point_json(p: &GrassPoint) -> Value {
    p.matrix().to_json()
}

/// The rng for a given seed and shape; distinct shapes draw independent
/// streams from the same seed.
pub fn shape_rng(seed: u64, k: usize, n: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((k as u64) << 32) | n as u64);
    rng
}

fn sample_points(rng: &mut ChaCha8Rng, k: usize, n: usize, count: usize) -> Vec<GrassPoint> {
    (0..count)
        .map(|_| random_nonvanishing_point(k, n, rng))
        .collect()
}

/// Runs one suite for a single `(k, n)`.
pub fn verify(suite: Suite, opts: &VerifyOptions) -> Result<VerificationReport> {
    let (k, n) = (opts.k, opts.n);
    if k == 0 || k >= n {
        return Err(Error::Range(format!("need 1 <= k < n, got k={k}, n={n}")));
    }
    if opts.points == 0 {
        return Err(Error::Range("at least one point is needed".into()));
    }
    let start = Instant::now();
    let mut rng = shape_rng(opts.seed, k, n);
    let points = sample_points(&mut rng, k, n, opts.points);
    let tally = match suite {
        Suite::Main => main_suite(k, n, &points)?,
        Suite::Twist2 => twist2_suite(k, n, &points)?,
        Suite::Bfz => bfz_suite(k, n, &points)?,
        Suite::Condensation => condensation_suite(k, n, &points)?,
        Suite::Moves => moves_suite(k, n, &points, opts, &mut rng)?,
        Suite::Formula => formula_suite(k, n, &points)?,
    };
    Ok(VerificationReport {
        suite,
        k_range: (k, k),
        n_range: (n, n),
        checked: tally.checked,
        passed: tally.passed,
        counterexample: tally.first,
        wall_time_ms: Some(start.elapsed().as_millis()),
    })
}

/// Runs a suite for every `(k, n)` with `2 ≤ k ≤ n − 2` and
/// `n_min ≤ n ≤ n_max`, merging the reports.
pub fn verify_sweep(
    suite: Suite,
    n_min: usize,
    n_max: usize,
    points: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let mut report: Option<VerificationReport> = None;
    for n in n_min.max(4)..=n_max {
        for k in 2..=n - 2 {
            let opts = VerifyOptions {
                points,
                seed,
                ..VerifyOptions::new(k, n)
            };
            let r = verify(suite, &opts)?;
            report = Some(match report {
                None => r,
                Some(acc) => acc.merge(r),
            });
        }
    }
    report.ok_or_else(|| Error::Range(format!("no shapes with n in {n_min}..={n_max}")))
}

/// Checks `Đ̃_{G(I)}(p) = twist[I](p)` for every subset and point.
pub fn check_theorem(graph_name: &str, g: &PlabicGraph, points: &[GrassPoint]) -> Result<Tally> {
    let k = g.k();
    let n = g.n();
    let wg = WeightedGraph::new(g.clone())?;
    let twisted: Vec<GrassPoint> = points.iter().map(twist_matrix).collect::<Result<_>>()?;
    let parts = KSubset::all(k, n)
        .par_iter()
        .map(|s| -> Result<Tally> {
            let d = scaled_partition_function(&wg, s)?;
            let mut t = Tally::default();
            for (p, tp) in points.iter().zip(&twisted) {
                let got = d.evaluate(p)?;
                let want = tp.plucker(s)?;
                t.record(got == want, || {
                    json!({
                        "identity": "scaled partition function equals twisted Plucker coordinate",
                        "graph": graph_name,
                        "subset": s,
                        "point": point_json(p),
                        "scaled_partition_function": d.to_string(),
                        "got": q(&got),
                        "expected": q(&want),
                    })
                });
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold(parts))
}

fn main_suite(k: usize, n: usize, points: &[GrassPoint]) -> Result<Tally> {
    let mut t = check_theorem("regular", &build_regular(k, n)?.graph, points)?;
    t.absorb(check_theorem(
        "regular_star",
        &build_regular_star(k, n)?.graph,
        points,
    )?);
    Ok(t)
}

fn twist2_suite(k: usize, n: usize, points: &[GrassPoint]) -> Result<Tally> {
    if k < 2 {
        return Err(Error::Range("the double twist suite needs k > 1".into()));
    }
    let mut t = Tally::default();
    let mut doubles = Vec::with_capacity(points.len());
    let mut quadruples = Vec::with_capacity(points.len());
    for p in points {
        let t2 = twist_matrix(&twist_matrix(p)?)?;
        let predicted = double_twist_prediction(p)?;
        t.record(t2.matrix() == &predicted, || {
            json!({ "identity": "double twist entrywise", "point": point_json(p), "got": t2.matrix().to_json(), "expected": predicted.to_json() })
        });
        quadruples.push(twist_matrix(&twist_matrix(&t2)?)?);
        doubles.push(t2);
    }
    let parts = KSubset::all(k, n)
        .par_iter()
        .map(|s| -> Result<Tally> {
            let mut t = Tally::default();
            let once = double_twist_formula(s)?;
            let twice = iterated_double_twist(s, 2)?;
            for ((p, t2), t4) in points.iter().zip(&doubles).zip(&quadruples) {
                let (got, want) = (t2.plucker(s)?, once.evaluate(p)?);
                t.record(got == want, || {
                    json!({ "identity": "double twist of a Plucker coordinate", "subset": s, "point": point_json(p), "got": q(&got), "expected": q(&want) })
                });
                let (got, want) = (t4.plucker(s)?, twice.evaluate(p)?);
                t.record(got == want, || {
                    json!({ "identity": "fourfold twist of a Plucker coordinate", "subset": s, "point": point_json(p), "got": q(&got), "expected": q(&want) })
                });
            }
            let periodic = periodicity_coefficient(s);
            t.record(periodic.is_ok(), || {
                json!({ "identity": "periodicity modulo coefficients", "subset": s, "error": periodic.as_ref().err().map(|e| e.to_string()) })
            });
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;
    t.absorb(fold(parts));
    Ok(t)
}

fn bfz_suite(k: usize, n: usize, points: &[GrassPoint]) -> Result<Tally> {
    let w = GrassmannPermutation::new(k, n)?;
    let mut t = Tally::default();
    for p in points {
        let x = phi(p)?;
        t.record(cell_membership(&x, &w), || {
            json!({ "identity": "phi lands in the unipotent cell", "point": point_json(p), "phi": x.matrix().to_json() })
        });
        let coeff: Vec<Rational> = (1..=n)
            .map(|i| p.coefficient_minor(i))
            .collect::<Result<_>>()?;
        for j in KSubset::all(k, n) {
            let j1 = j.elements()[0];
            let pj = p.plucker(&j)?;
            for r in 0..j1.min(n - k + 1) {
                let rows: Vec<usize> = (r + 1..=r + k).collect();
                let got = x.minor(&rows, j.elements())?;
                let want = &pj / &coeff[r + k - 1];
                t.record(got == want, || {
                    json!({ "identity": "phi minor on consecutive rows", "rows": rows, "columns": j, "point": point_json(p), "got": q(&got), "expected": q(&want) })
                });
            }
        }
        if k < n {
            for j in KSubset::all(k + 1, n) {
                let j1 = j.elements()[0];
                for r in 1..j1.min(n - k + 1) {
                    let rows: Vec<usize> = (r..=r + k).collect();
                    let got = x.minor(&rows, j.elements())?;
                    t.record(got.is_zero(), || {
                        json!({ "identity": "phi minor vanishes", "rows": rows, "columns": j, "point": point_json(p), "got": q(&got) })
                    });
                }
            }
        }
        let b = bfz_twist_point(p)?;
        let bk = b.coefficient_minor(k)?;
        let want = &coeff[n - 1] / &coeff[k - 1];
        t.record(bk == want, || {
            json!({ "identity": "leading minor of w phi^T", "point": point_json(p), "got": q(&bk), "expected": q(&want) })
        });
        let tp = twist_matrix(p)?;
        for s in KSubset::all(k, n) {
            let got = b.plucker(&s)? / &bk;
            let want = bfz_relation_rhs(p, &s, &tp.plucker(&s)?)?;
            t.record(got == want, || {
                json!({ "identity": "relation between the twists", "subset": s, "point": point_json(p), "got": q(&got), "expected": q(&want) })
            });
        }
    }
    Ok(t)
}

/// All short Plücker relations `(J, a < b < c < d)` for `k`-subsets of `[n]`.
pub fn short_plucker_relations(k: usize, n: usize) -> Vec<ShortPlucker> {
    if k < 2 || n < k + 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let base: Vec<KSubset> = if k == 2 {
        vec![KSubset::new(n, []).expect("empty set")]
    } else {
        KSubset::all(k - 2, n)
    };
    for j in base {
        let rest: Vec<usize> = (1..=n).filter(|&x| !j.contains(x)).collect();
        for quad in KSubset::all(4, rest.len()) {
            let e = quad.elements();
            let abcd = [
                rest[e[0] - 1],
                rest[e[1] - 1],
                rest[e[2] - 1],
                rest[e[3] - 1],
            ];
            out.push(ShortPlucker::new(j.clone(), abcd).expect("indices lie outside J"));
        }
    }
    out
}

fn condensation_suite(k: usize, n: usize, points: &[GrassPoint]) -> Result<Tally> {
    let relations = short_plucker_relations(k, n);
    let mut t = Tally::default();
    for (name, g) in [
        ("regular", build_regular(k, n)?.graph),
        ("regular_star", build_regular_star(k, n)?.graph),
    ] {
        let wg = WeightedGraph::new(g)?;
        let subsets = KSubset::all(k, n);
        let values: Vec<Vec<Rational>> = subsets
            .par_iter()
            .map(|s| -> Result<Vec<Rational>> {
                let d = scaled_partition_function(&wg, s)?;
                points.iter().map(|p| d.evaluate(p)).collect()
            })
            .collect::<Result<_>>()?;
        let index = |s: &KSubset| {
            subsets
                .binary_search_by(|x| x.elements().cmp(s.elements()))
                .expect("subset listed")
        };
        for rel in &relations {
            let [ac, bd, ab, cd, ad, bc] = rel.subsets().map(|s| index(&s));
            for (pi, p) in points.iter().enumerate() {
                let v = |i: usize| &values[i][pi];
                let lhs = v(ac) * v(bd);
                let rhs = v(ab) * v(cd) + v(ad) * v(bc);
                t.record(lhs == rhs, || {
                    json!({ "identity": "short Plucker relation", "graph": name, "j": rel.j, "abcd": rel.abcd, "point": point_json(p), "lhs": q(&lhs), "rhs": q(&rhs) })
                });
            }
        }
    }
    Ok(t)
}

fn moves_suite(
    k: usize,
    n: usize,
    points: &[GrassPoint],
    opts: &VerifyOptions,
    rng: &mut ChaCha8Rng,
) -> Result<Tally> {
    let (g, _, path) = random_quad_moves(&build_regular(k, n)?.graph, opts.random_moves, rng)?;
    let mut t = check_theorem("after random quadrilateral moves", &g, points)?;
    let base = WeightedGraph::new(g.clone())?;
    let subsets = KSubset::all(k, n);
    let reference: Vec<LaurentPolynomial> = subsets
        .par_iter()
        .map(|s| scaled_partition_function(&base, s))
        .collect::<Result<_>>()?;
    for _ in 0..opts.blow_pairs {
        let (blown, mid) = random_blow_up(&g, rng)?;
        let wb = WeightedGraph::new(blown.clone())?;
        let parts = subsets
            .par_iter()
            .zip(&reference)
            .map(|(s, want)| -> Result<Tally> {
                let got = scaled_partition_function(&wb, s)?;
                let mut t = Tally::default();
                t.record(&got == want, || {
                    json!({ "identity": "blow-up leaves the scaled partition function unchanged", "subset": s, "moves": path, "got": got.to_string(), "expected": want.to_string() })
                });
                Ok(t)
            })
            .collect::<Result<Vec<_>>>()?;
        t.absorb(fold(parts));
        let back = blow_down(&blown, mid)?.graph;
        t.record(
            canonical_form(&back) == canonical_form(&g),
            || json!({ "identity": "blow-down undoes blow-up", "moves": path, "vertex": mid }),
        );
    }
    Ok(t)
}

fn formula_suite(k: usize, n: usize, points: &[GrassPoint]) -> Result<Tally> {
    let twisted: Vec<GrassPoint> = points.iter().map(twist_matrix).collect::<Result<_>>()?;
    let subsets: Vec<KSubset> = KSubset::all(k, n)
        .into_iter()
        .filter(|s| two_interval_decompose(s).is_some())
        .collect();
    let parts = subsets
        .par_iter()
        .map(|s| -> Result<Tally> {
            let m = twist_formula_two_interval(s)?;
            let mut t = Tally::default();
            t.record(m.is_multiplicity_free(), || {
                json!({ "identity": "two-interval formula is multiplicity free", "subset": s, "monomial": m.to_string() })
            });
            for (p, tp) in points.iter().zip(&twisted) {
                let (got, want) = (m.evaluate(p)?, tp.plucker(s)?);
                t.record(got == want, || {
                    json!({ "identity": "two-interval formula", "subset": s, "monomial": m.to_string(), "point": point_json(p), "got": q(&got), "expected": q(&want) })
                });
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold(parts))
}

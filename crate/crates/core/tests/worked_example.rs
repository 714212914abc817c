use std::collections::BTreeSet;

use dimertwist::combinatorics::KSubset;
use dimertwist::dimer::{DimerReport, WeightedGraph};
use dimertwist::exact::{random_nonvanishing_point, twist_plucker};
use dimertwist::plabic::{build_regular, canonical_form, graph_from_json, search_by_quad_moves};
use dimertwist::symbolic::Monomial;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn s(x: &str) -> KSubset {
    KSubset::parse(6, x).unwrap()
}

fn mono(xs: &[&str]) -> Monomial {
    let sets: Vec<KSubset> = xs.iter().map(|x| s(x)).collect();
    Monomial::product(&sets)
}

fn fixture() -> WeightedGraph {
    let text = include_str!("fixtures/worked_3_6.json");
    let g = graph_from_json(&serde_json::from_str(text).unwrap()).unwrap();
    WeightedGraph::new(g).unwrap()
}

#[test]
fn fixture_has_the_expected_shape_and_labels() {
    let wg = fixture();
    let g = &wg.graph;
    assert_eq!(
        (g.vertices().len(), g.edges().len(), g.faces().len()),
        (13, 16, 10)
    );
    let internal: BTreeSet<KSubset> = g
        .internal_faces()
        .map(|f| wg.labels.label(f).clone())
        .collect();
    assert_eq!(
        internal,
        ["235", "135", "356", "125"].iter().map(|x| s(x)).collect()
    );
}

#[test]
fn fixture_is_reachable_from_the_regular_graph() {
    let target: BTreeSet<KSubset> = ["235", "135", "356", "125"].iter().map(|x| s(x)).collect();
    let (g, path) = search_by_quad_moves(&build_regular(3, 6).unwrap().graph, &target, 4)
        .unwrap()
        .unwrap();
    assert_eq!(path.len(), 3);
    assert_eq!(canonical_form(&g), canonical_form(&fixture().graph));
}

#[test]
fn six_matchings_with_the_listed_weights() {
    let wg = fixture();
    let report = DimerReport::compute(&wg, &s("256")).unwrap();
    assert_eq!(report.matchings.len(), 6);
    let mut got: Vec<String> = report.weights.iter().map(|m| m.to_string()).collect();
    got.sort();
    let mut want: Vec<String> = [
        mono(&["123", "156", "156", "235", "345", "345"]),
        mono(&["123", "135", "156", "235", "345", "456"]),
        mono(&["123", "125", "156", "345", "345", "356"]),
        mono(&["125", "135", "156", "234", "345", "356"]),
        mono(&["126", "135", "156", "235", "345", "345"]),
        mono(&["126", "135", "135", "235", "345", "456"]),
    ]
    .iter()
    .map(|m| m.to_string())
    .collect();
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn partition_function_values() {
    let wg = fixture();
    let report = DimerReport::compute(&wg, &s("256")).unwrap();
    let full = mono(&["125", "135", "146", "235", "345", "356"]);
    let scaled = mono(&["146", "345"]);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..20 {
        let p = random_nonvanishing_point(3, 6, &mut rng);
        assert_eq!(
            report.partition.evaluate(&p).unwrap(),
            full.evaluate(&p).unwrap()
        );
        assert_eq!(
            report.scaled.evaluate(&p).unwrap(),
            scaled.evaluate(&p).unwrap()
        );
        assert_eq!(
            report.scaled.evaluate(&p).unwrap(),
            twist_plucker(&p, &s("256")).unwrap()
        );
    }
}

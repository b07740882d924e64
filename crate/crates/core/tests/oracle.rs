//! Detectors against the brute-force oracle on small random hypergraphs.

use berge_ramsey::detect::{contains_berge_biclique, contains_berge_cycle, naive_berge_contains, CorePattern};
use berge_ramsey::model::{Edge, Hypergraph, Pattern, Vertex, Witness};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_hypergraph(rng: &mut impl Rng) -> Hypergraph {
    let n = rng.gen_range(3..=9);
    let m = rng.gen_range(0..=8);
    let mut all: Vec<Edge> = berge_ramsey::model::complete_edges(n, 3).unwrap().collect();
    all.shuffle(rng);
    all.truncate(m);
    Hypergraph::new(n, 3, all).unwrap()
}

fn detect(h: &Hypergraph, p: Pattern) -> Option<Witness> {
    match p {
        Pattern::Cycle(g) => contains_berge_cycle(h, g),
        Pattern::Biclique(a, b) => contains_berge_biclique(h, a, b),
    }
}

const PATTERNS: [Pattern; 5] =
    [Pattern::Cycle(2), Pattern::Cycle(3), Pattern::Cycle(4), Pattern::Cycle(5), Pattern::Biclique(2, 2)];

#[test]
fn detectors_match_oracle_on_600_seeded_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut hits = [0usize; PATTERNS.len()];
    for _ in 0..600 {
        let h = random_hypergraph(&mut rng);
        for (k, p) in PATTERNS.iter().enumerate() {
            let fast = detect(&h, *p);
            let slow = naive_berge_contains(&h, &CorePattern::from_pattern(*p)).unwrap();
            assert_eq!(fast.is_some(), slow, "{p} on {:?}", h.edges().collect::<Vec<_>>());
            if let Some(w) = fast {
                w.validate(&h).unwrap();
                hits[k] += 1;
            }
        }
    }
    // the sample must exercise both outcomes of every detector
    assert!(hits.iter().all(|&c| c > 0 && c < 600), "{hits:?}");
}

#[test]
fn berge_k22_is_berge_c4() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let h = random_hypergraph(&mut rng);
        assert_eq!(contains_berge_biclique(&h, 2, 2).is_some(), contains_berge_cycle(&h, 4).is_some());
    }
}

fn arb_hypergraph() -> impl Strategy<Value = (usize, Vec<Vec<Vertex>>)> {
    (4usize..=10).prop_flat_map(|n| {
        let edge = proptest::sample::subsequence((0..n as Vertex).collect::<Vec<_>>(), 3);
        (Just(n), proptest::collection::vec(edge, 0..14))
    })
}

fn build(n: usize, edges: &[Vec<Vertex>]) -> Hypergraph {
    let mut list: Vec<Edge> = edges.iter().map(|e| Edge::new(e, n).unwrap()).collect();
    list.sort();
    list.dedup();
    Hypergraph::new(n, 3, list).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn witnesses_validate((n, edges) in arb_hypergraph()) {
        let h = build(n, &edges);
        for p in PATTERNS {
            if let Some(w) = detect(&h, p) {
                prop_assert_eq!(w.kind, p);
                prop_assert!(w.validate(&h).is_ok());
            }
        }
    }

    #[test]
    fn adding_edges_is_monotone((n, edges) in arb_hypergraph(), extra in 0usize..6) {
        let keep = edges.len().saturating_sub(extra);
        let small = build(n, &edges[..keep]);
        let big = build(n, &edges);
        for p in PATTERNS {
            if detect(&small, p).is_some() {
                prop_assert!(detect(&big, p).is_some());
            }
        }
    }

    #[test]
    fn edge_order_is_irrelevant((n, edges) in arb_hypergraph(), seed in any::<u64>()) {
        let h = build(n, &edges);
        let mut shuffled = edges.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        for e in shuffled.iter_mut() {
            e.reverse();
        }
        let g = build(n, &shuffled);
        for p in PATTERNS {
            prop_assert_eq!(detect(&h, p), detect(&g, p));
        }
    }
}

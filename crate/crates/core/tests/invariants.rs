//! Module-level invariant sweeps: exhaustive small cases plus seeded
//! randomized instances, with independent oracles wherever an
//! operation's contract admits one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::HashSet;

use cclines_core::betweenness::longest_geodesic;
use cclines_core::graph::{enumerate, gen_path, gen_subdivided_path, Graph};
use cclines_core::lines::all_lines;
use cclines_core::metric::{MetricSpace, PointId};
use cclines_core::poset::AnchoredPoset;
use cclines_core::relations::{is_parallelogram, parallelogram_metric_iff};
use cclines_core::verify::random_metric_space;
use cclines_core::Betweenness;

fn connected_metrics(n: usize) -> Vec<MetricSpace> {
    enumerate::connected_graphs(n)
        .expect("small n")
        .into_iter()
        .map(|g| g.metric().expect("connected"))
        .collect()
}

/// Brute force longest geodesic: DFS over extendable sequences.
fn brute_longest(m: &MetricSpace) -> usize {
    fn extend(m: &MetricSpace, seq: &mut Vec<PointId>, best: &mut usize) {
        *best = (*best).max(seq.len());
        for p in 0..m.n() {
            if seq.contains(&p) {
                continue;
            }
            let ok =
                (0..seq.len()).all(|r| ((r + 1)..seq.len()).all(|s| m.between(seq[r], seq[s], p)));
            if ok {
                seq.push(p);
                extend(m, seq, best);
                seq.pop();
            }
        }
    }
    let mut best = 2.min(m.n());
    for a in 0..m.n() {
        let mut seq = vec![a];
        extend(m, &mut seq, &mut best);
    }
    best
}

#[test]
fn longest_geodesic_matches_brute_force_exhaustively() {
    for n in 2..=6 {
        for m in connected_metrics(n) {
            assert_eq!(longest_geodesic(&m).unwrap().len(), brute_longest(&m));
        }
    }
}

#[test]
fn all_lines_matches_naive_oracle_exhaustively() {
    for n in 2..=7 {
        connected_metrics(n).par_iter().for_each(|m| {
            let ls = all_lines(m).unwrap();
            let mut naive: HashSet<Vec<PointId>> = HashSet::new();
            for a in 0..m.n() {
                for b in (a + 1)..m.n() {
                    let mut members = vec![a, b];
                    for c in 0..m.n() {
                        if c == a || c == b {
                            continue;
                        }
                        let (dab, dac, dbc) = (m.dist(a, b), m.dist(a, c), m.dist(b, c));
                        if dab == dac + dbc || dac == dab + dbc || dbc == dab + dac {
                            members.push(c);
                        }
                    }
                    members.sort_unstable();
                    naive.insert(members);
                }
            }
            let got: HashSet<Vec<PointId>> = ls.iter().map(|(k, _)| k.to_vec()).collect();
            assert_eq!(got, naive);
        });
    }
}

#[test]
fn graph_metrics_pass_full_validation() {
    for n in 2..=7 {
        for g in enumerate::connected_graphs(n).unwrap() {
            let m = g.metric().unwrap();
            let rows: Vec<Vec<i64>> = (0..m.n())
                .map(|i| (0..m.n()).map(|j| m.dist(i, j) as i64).collect())
                .collect();
            let revalidated = MetricSpace::from_matrix(&rows, 1).expect("BFS metric is valid");
            assert_eq!(revalidated, m);
        }
    }
}

#[test]
fn path_metric_has_one_universal_line_from_the_endpoints() {
    for n in 2..=9 {
        let m = gen_path(n).unwrap().metric().unwrap();
        let ls = all_lines(&m).unwrap();
        let universal = ls.universal().expect("path line is universal");
        let gens = ls.generators(&universal.members).unwrap();
        assert!(gens.contains(&(0, n - 1)), "endpoints generate the line");
    }
}

#[test]
fn subdivided_path_vertex_counts() {
    // detours carry s interior vertices each (length s+1 in edges), so
    // the count is s^3 + 1 main vertices plus s^2 * s detour interiors
    for s in 2..=6 {
        let g = gen_subdivided_path(s).unwrap();
        assert_eq!(g.n(), 2 * s * s * s + 1);
        assert!(g.is_connected());
    }
}

#[test]
fn parallelogram_characterization_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9A);
    let metrics: Vec<MetricSpace> = (0..10_000)
        .map(|_| {
            let n = rng.gen_range(4..=8);
            random_metric_space(n, 6, &mut rng)
        })
        .collect();
    metrics.par_iter().for_each(|m| {
        let n = m.n();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        if a == b || a == c || a == d || b == c || b == d || c == d {
                            continue;
                        }
                        assert_eq!(
                            is_parallelogram(m, (a, b, c, d)).unwrap(),
                            parallelogram_metric_iff(m, (a, b, c, d)).unwrap(),
                        );
                    }
                }
            }
        }
    });
}

#[test]
fn induced_betweenness_is_pseudometric_on_random_spaces() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9B);
    for _ in 0..300 {
        let n = rng.gen_range(2..=9);
        let m = random_metric_space(n, 6, &mut rng);
        // construction re-validates M0-M3 and panics on failure
        let rel = m.induced_betweenness();
        assert_eq!(rel.n(), n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    assert_eq!(rel.between(a, b, c), m.between(a, b, c));
                }
            }
        }
    }
}

#[test]
fn anchored_posets_are_valid_on_random_spaces() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9C);
    for _ in 0..300 {
        let n = rng.gen_range(2..=10);
        let m = random_metric_space(n, 6, &mut rng);
        for a in 0..n {
            AnchoredPoset::anchored_at(&m, a).expect("metric posets satisfy the laws");
        }
    }
}

#[test]
fn mirsky_duality_up_to_ground_ten() {
    // chain length == minimum antichain cover size, incl. ground set 10
    let mut spaces: Vec<MetricSpace> = vec![
        gen_path(11).unwrap().metric().unwrap(),
        cclines_core::graph::gen_cycle(11)
            .unwrap()
            .metric()
            .unwrap(),
        cclines_core::graph::gen_complete(11)
            .unwrap()
            .metric()
            .unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x9D);
    for _ in 0..100 {
        spaces.push(random_metric_space(11, 5, &mut rng));
    }
    for m in &spaces {
        for a in 0..m.n() {
            let poset = AnchoredPoset::anchored_at(m, a).unwrap();
            assert_eq!(poset.max_chain().len(), poset.antichain_cover_size());
            let (chain, antichain) = poset.dilworth_decompose();
            for w in chain.windows(2) {
                assert!(poset.le(w[0], w[1]));
            }
            for (i, &x) in antichain.iter().enumerate() {
                for &y in &antichain[i + 1..] {
                    assert!(!poset.le(x, y) && !poset.le(y, x));
                }
            }
        }
    }
}

#[test]
fn graph6_round_trips_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9E);
    for _ in 0..500 {
        let n = rng.gen_range(1..=70);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen_bool(0.3) {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::from_edges(n, edges).unwrap();
        let encoded = g.to_graph6();
        assert_eq!(Graph::parse_graph6(&encoded).unwrap(), g);
    }
}

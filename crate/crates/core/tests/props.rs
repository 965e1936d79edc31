//! Property tests over randomized structures.

use proptest::prelude::*;

use cclines_core::graph::Graph;
use cclines_core::lines::{all_lines, line, prune_to_min_degree, PointSet};
use cclines_core::metric::MetricSpace;
use cclines_core::verify::random_metric_space;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_metric() -> impl Strategy<Value = MetricSpace> {
    (2usize..=9, 1u64..=6, any::<u64>()).prop_map(|(n, max_dist, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_metric_space(n, max_dist, &mut rng)
    })
}

proptest! {
    #[test]
    fn metric_json_round_trip(m in arb_metric()) {
        let text = m.to_json();
        let back = MetricSpace::from_json(&text).unwrap();
        prop_assert_eq!(&m, &back);
        prop_assert_eq!(text, back.to_json());
    }

    #[test]
    fn relation_json_round_trip(m in arb_metric()) {
        let rel = m.induced_betweenness();
        let text = rel.to_json();
        let back = cclines_core::BetweennessRelation::from_json(&text).unwrap();
        prop_assert_eq!(&rel, &back);
        prop_assert_eq!(text, back.to_json());
    }

    #[test]
    fn line_is_reversal_symmetric_and_contains_generators(m in arb_metric()) {
        for a in 0..m.n() {
            for b in (a + 1)..m.n() {
                let l = line(&m, a, b).unwrap();
                prop_assert_eq!(&l, &line(&m, b, a).unwrap());
                prop_assert!(l.members.contains(a) && l.members.contains(b));
            }
        }
    }

    #[test]
    fn generator_sets_partition_all_pairs(m in arb_metric()) {
        let ls = all_lines(&m).unwrap();
        let total: usize = ls.iter().map(|(_, gens)| gens.len()).sum();
        prop_assert_eq!(total, m.n() * (m.n() - 1) / 2);
        // every line also appears as the line of each of its generators
        for (key, gens) in ls.iter() {
            for &(a, b) in gens {
                prop_assert_eq!(&line(&m, a, b).unwrap().members, key);
            }
        }
    }

    #[test]
    fn subspace_preserves_collinearity(m in arb_metric(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let keep: Vec<usize> = (0..m.n())
            .filter(|_| rand::Rng::gen_bool(&mut rng, 0.7))
            .collect();
        if keep.len() >= 3 {
            let sub = m.subspace(&keep).unwrap();
            let k = sub.space.n();
            for i in 0..k {
                for j in 0..k {
                    for l in 0..k {
                        prop_assert_eq!(
                            sub.space.between(i, j, l),
                            m.between(sub.original[i], sub.original[j], sub.original[l])
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn k_core_is_idempotent_and_meets_degree(
        n in 3usize..=10,
        seed in any::<u64>(),
        k in 1usize..=4,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if rand::Rng::gen_bool(&mut rng, 0.45) {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::from_edges(n, edges.clone()).unwrap();
        let m = match g.metric() {
            Ok(m) => m,
            Err(_) => return Ok(()), // disconnected sample
        };
        let ls = all_lines(&m).unwrap();
        let (key, _) = ls.iter().next().unwrap();
        let h = cclines_core::lines::generator_graph(&m, &ls, key, None).unwrap();
        let once = prune_to_min_degree(&h, k);
        let twice = prune_to_min_degree(&once, k);
        prop_assert_eq!(&once, &twice);
        let degrees = once.degrees();
        for d in degrees {
            prop_assert!(d == 0 || d >= k);
        }
    }

    #[test]
    fn pointset_order_matches_member_lists(
        xs in proptest::collection::btree_set(0usize..30, 0..12),
        ys in proptest::collection::btree_set(0usize..30, 0..12),
    ) {
        let a = PointSet::from_members(30, xs.iter().copied());
        let b = PointSet::from_members(30, ys.iter().copied());
        let lex = xs.iter().copied().collect::<Vec<_>>()
            .cmp(&ys.iter().copied().collect::<Vec<_>>());
        prop_assert_eq!(a.cmp(&b), lex);
        prop_assert_eq!(a.len(), xs.len());
    }
}

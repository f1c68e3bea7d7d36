mod common;

use auction_graph::parallel::BarrierView;
use auction_graph::{
    auction_b_rounds, auction_multibid, exact_assignment, exact_bmatching, gen_uniform_bipartite,
    gen_uniform_unipartite, knn_select, run_parallel_auction, run_parallel_auction_observed, sparsify, symmetrize_max,
    to_bipartite_shadow, EpsilonPolicy, Method, ProfitFloor, SparsifyConfig, WeightedGraph,
};
use common::*;
use proptest::prelude::*;

/// Best sum of `k` weights in `row`, by enumerating every k-subset.
fn brute_row(row: &[f64], k: usize) -> f64 {
    fn go(row: &[f64], k: usize, start: usize, acc: f64) -> f64 {
        if k == 0 {
            return acc;
        }
        (start..row.len()).map(|t| go(row, k - 1, t + 1, acc + row[t])).fold(f64::MIN, f64::max)
    }
    go(row, k.min(row.len()), 0, 0.0)
}

#[test]
fn knn_matches_brute_force_rows() {
    for seed in 0..10 {
        let g = gen_uniform_unipartite(8, 400 + seed).unwrap();
        let sel = knn_select(&g, 3).unwrap();
        for i in 0..8 {
            let picked: f64 = sel.objects_of(i).map(|j| g.weight(i, j).unwrap()).sum();
            let row: Vec<f64> = g.neighbors(i).iter().map(|nb| nb.weight).collect();
            assert!((picked - brute_row(&row, 3)).abs() < 1e-12, "seed {seed} row {i}");
        }
    }
}

#[test]
fn knn_hub_exceeds_k_after_max() {
    // every spoke prefers the hub, so the hub ends with degree 4 > k
    let mut edges = vec![(0, 1, 10.0), (0, 2, 10.0), (0, 3, 10.0), (0, 4, 10.0)];
    edges.extend([(1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (1, 4, 1.0)]);
    let g = WeightedGraph::new(5, false, edges).unwrap();
    let sel = symmetrize_max(&knn_select(&g, 2).unwrap());
    assert!(sel.is_symmetric());
    assert_eq!(projected_degrees(&sel)[0], 4);
}

#[test]
fn exact_assignment_dominates_single_cap_auctions() {
    for seed in 0..10 {
        let g = gen_uniform_unipartite(7, 800 + seed).unwrap();
        let p = to_bipartite_shadow(&g).unwrap();
        let exact = exact_assignment(&p).unwrap().weight;
        let out = auction_multibid(&p, &SparsifyConfig::new(1, Method::AuctionMultibid)).unwrap();
        assert!(exact >= out.total_weight(&p) - 1e-12);
    }
}

#[test]
fn library_bmatching_oracle_matches_enumeration() {
    for seed in 0..6 {
        let g = gen_uniform_unipartite(6, 900 + seed).unwrap();
        for b in 1..=3 {
            let lib = exact_bmatching(&g, b).unwrap();
            assert!((lib - brute_bmatching(&g, b)).abs() < 1e-9, "seed {seed} b {b}");
        }
    }
}

#[test]
fn library_assignment_oracle_matches_hungarian() {
    for seed in 0..10 {
        let rows = random_real_matrix(9, 600 + seed);
        let lib = exact_assignment(&dense_problem(&rows)).unwrap().weight;
        assert!((lib - hungarian_max(&rows)).abs() < 1e-9);
    }
}

#[test]
fn bmatching_oracle_is_monotone_in_b() {
    let g = gen_uniform_unipartite(7, 3).unwrap();
    let values: Vec<f64> = (1..=4).map(|b| exact_bmatching(&g, b).unwrap()).collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]), "{values:?}");
}

#[test]
fn b_rounds_saturates_at_b_on_complete_graphs() {
    let g = gen_uniform_unipartite(12, 21).unwrap();
    let p = to_bipartite_shadow(&g).unwrap();
    for b in [1, 3, 4] {
        let out = auction_b_rounds(&p, &SparsifyConfig::new(b, Method::AuctionRounds)).unwrap();
        assert_eq!(out.rounds.len(), b.div_ceil(2));
        assert!(projected_degrees(&out.selection).iter().all(|&d| d <= b));
    }
}

#[test]
fn partition_counts_agree_for_single_edge_auctions() {
    // with one object per buyer, every L stays within n eps of the optimum
    for seed in 0..10 {
        let p = gen_uniform_bipartite(20, 1200 + seed).unwrap();
        let exact = exact_assignment(&p).unwrap().weight;
        let eps = 0.01;
        for l in [1, 2, 4, 8] {
            let cfg = SparsifyConfig {
                epsilon: EpsilonPolicy::Fixed(eps),
                partitions: l,
                ..SparsifyConfig::new(1, Method::AuctionMultibid)
            };
            let w = run_parallel_auction(&p, &cfg).unwrap().total_weight(&p);
            assert!(w >= exact - 10.0 * eps - 1e-12, "seed {seed} L {l}: {w} vs {exact}");
        }
    }
}

#[test]
fn sparsify_rejects_directed_input() {
    let g = WeightedGraph::new(3, true, [(0, 1, 1.0)]).unwrap();
    assert!(sparsify(&g, &SparsifyConfig::default()).is_err());
}

#[derive(Debug, Clone)]
struct Case {
    n: usize,
    b: usize,
    partitions: usize,
    seed: u64,
}

fn case() -> impl Strategy<Value = Case> {
    (4usize..30, 1usize..5, 1usize..=8, any::<u64>()).prop_map(|(n, b, l, seed)| Case {
        n,
        b,
        partitions: l.min(n),
        seed,
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 80, ..ProptestConfig::default() })]

    #[test]
    fn barrier_prices_monotone_and_caps_hold(c in case()) {
        let g = gen_uniform_unipartite(c.n, c.seed).unwrap();
        let p = to_bipartite_shadow(&g).unwrap();
        let cfg = SparsifyConfig {
            partitions: c.partitions,
            profit_floor: ProfitFloor::Auto,
            ..SparsifyConfig::new(c.b, Method::AuctionMultibid)
        };
        let mut last = vec![0.0; c.n];
        let mut problems = Vec::new();
        run_parallel_auction_observed(&p, &cfg, |view: &BarrierView<'_>| {
            if view.prices.iter().zip(&last).any(|(now, before)| now < before) {
                problems.push(format!("price dropped at iteration {}", view.iteration));
            }
            last.copy_from_slice(view.prices);
            let sel = view.selection();
            if sel.buyer_degrees().iter().chain(sel.object_degrees()).any(|&d| d > c.b) {
                problems.push(format!("cap exceeded at iteration {}", view.iteration));
            }
        }).unwrap();
        prop_assert!(problems.is_empty(), "{:?}", problems);
    }

    #[test]
    fn single_partition_engine_equals_serial(c in case()) {
        let g = gen_uniform_unipartite(c.n, c.seed).unwrap();
        let p = to_bipartite_shadow(&g).unwrap();
        let cfg = SparsifyConfig::new(c.b, Method::AuctionMultibid);
        prop_assert_eq!(run_parallel_auction(&p, &cfg).unwrap(), auction_multibid(&p, &cfg).unwrap());
    }

    #[test]
    fn parallel_runs_are_deterministic(c in case()) {
        let g = gen_uniform_unipartite(c.n, c.seed).unwrap();
        let p = to_bipartite_shadow(&g).unwrap();
        let cfg = SparsifyConfig { partitions: c.partitions, ..SparsifyConfig::new(c.b, Method::AuctionMultibid) };
        let inline = SparsifyConfig { execution: auction_graph::Execution::Inline, ..cfg.clone() };
        let a = run_parallel_auction(&p, &cfg).unwrap();
        prop_assert_eq!(&a, &run_parallel_auction(&p, &cfg).unwrap());
        prop_assert_eq!(&a, &run_parallel_auction(&p, &inline).unwrap());
    }

    #[test]
    fn handshake_identity(c in case()) {
        let g = gen_uniform_unipartite(c.n, c.seed).unwrap();
        let out = sparsify(&g, &SparsifyConfig::new(c.b, Method::AuctionMultibid)).unwrap();
        let r = auction_graph::evaluate(&g, &out.selection, None, &Default::default()).unwrap();
        prop_assert!((r.degree_mean * c.n as f64 - 2.0 * r.selected_edges as f64).abs() < 1e-9);
        prop_assert!(r.is_symmetric);
    }
}

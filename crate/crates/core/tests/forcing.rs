//! Forcing searches against a naive oracle written from the propagation
//! rules alone.

use proptest::prelude::*;
use steiner_msr::zeroforcing::{
    brute_force_min_forcing, closure, min_forcing, min_forcing_with, ForcingVariant, SearchOptions,
};
use steiner_msr::{Execution, Graph};

mod common;
use common::{as_mask, atlas, oracle_closure, oracle_min};

const VARIANTS: [ForcingVariant; 2] = [ForcingVariant::Standard, ForcingVariant::Psd];

#[test]
fn atlas_minimum_forcing_numbers() {
    for (g, _) in atlas() {
        for variant in VARIANTS {
            let want = oracle_min(&g, variant);
            let r = min_forcing(&g, variant, None).unwrap();
            assert!(r.exact, "{}", g.to_graph6());
            assert_eq!(r.size, want, "{variant} {}", g.to_graph6());
            assert_eq!(r.lower_bound, want);
            assert!(oracle_closure(&g, variant, &r.witness).iter().all(|&b| b));
            let brute = brute_force_min_forcing(&g, variant, Execution::Sequential).unwrap();
            assert_eq!(brute.len(), want);
        }
    }
}

#[test]
fn atlas_girth() {
    for (g, girth) in atlas() {
        assert_eq!(g.girth().to_string(), girth, "{}", g.to_graph6());
    }
}

#[test]
fn psd_forcing_never_exceeds_standard() {
    for (g, _) in atlas() {
        let psd = min_forcing(&g, ForcingVariant::Psd, None).unwrap().size;
        let std = min_forcing(&g, ForcingVariant::Standard, None).unwrap().size;
        assert!(psd <= std);
    }
}

fn graph_strategy(min: usize, max: usize) -> impl Strategy<Value = Graph> {
    (min..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        edges.push((i, j));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn subset(n: usize, bits: u64) -> Vec<usize> {
    (0..n).filter(|i| bits >> i & 1 == 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn search_matches_oracle_up_to_ten(g in graph_strategy(8, 10), seed in any::<u64>()) {
        for variant in VARIANTS {
            let opts = SearchOptions { seed, exec: Execution::Sequential, ..SearchOptions::default() };
            let r = min_forcing_with(&g, variant, opts).unwrap();
            prop_assert!(r.exact);
            prop_assert_eq!(r.size, oracle_min(&g, variant));
        }
    }

    #[test]
    fn closure_matches_sequential_forcing(g in graph_strategy(1, 12), bits in any::<u64>()) {
        let set = subset(g.n(), bits);
        for variant in VARIANTS {
            let cl = closure(&g, variant, &set).unwrap();
            prop_assert_eq!(as_mask(g.n(), &cl), oracle_closure(&g, variant, &set));
        }
    }

    #[test]
    fn closure_is_monotone_and_idempotent(g in graph_strategy(1, 12), a in any::<u64>(), b in any::<u64>()) {
        let small = subset(g.n(), a & b);
        let large = subset(g.n(), a);
        for variant in VARIANTS {
            let cs = closure(&g, variant, &small).unwrap();
            let cl = closure(&g, variant, &large).unwrap();
            prop_assert!(cs.iter().all(|v| cl.contains(v)));
            prop_assert_eq!(closure(&g, variant, &cl).unwrap(), cl);
        }
    }

    #[test]
    fn psd_closure_contains_standard(g in graph_strategy(1, 12), bits in any::<u64>()) {
        let set = subset(g.n(), bits);
        let std = closure(&g, ForcingVariant::Standard, &set).unwrap();
        let psd = closure(&g, ForcingVariant::Psd, &set).unwrap();
        prop_assert!(std.iter().all(|v| psd.contains(v)));
    }

    #[test]
    fn witness_is_independent_of_execution(g in graph_strategy(6, 10), seed in any::<u64>()) {
        let run = |exec| {
            let opts = SearchOptions { seed, exec, ..SearchOptions::default() };
            min_forcing_with(&g, ForcingVariant::Psd, opts).unwrap()
        };
        prop_assert_eq!(run(Execution::Sequential), run(Execution::Parallel));
    }
}

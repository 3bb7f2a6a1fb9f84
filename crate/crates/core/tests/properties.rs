mod common;

use common::{close, naive_opt};
use maxqp::io::{format_instance, parse_instance};
use maxqp::schemes::{baker_k, baker_pieces};
use maxqp::{
    bfs_layers, brute_force, combine_disjoint, extend_from_induced, generate, normalize_nonneg, solve_bounded_degree,
    solve_dense, solve_exact_auto, GeneratorSpec, PartialAssignment, Spin, WeightedGraph,
};
use proptest::prelude::*;

const CAP: usize = 28;

fn weight() -> impl Strategy<Value = f64> {
    prop_oneof![
        Just(1.0),
        Just(-1.0),
        (-4i32..=4).prop_filter("nonzero", |w| *w != 0).prop_map(f64::from),
        (-1.0f64..1.0).prop_filter("nonzero", |w| *w != 0.0),
    ]
}

fn graph(max_n: usize) -> impl Strategy<Value = WeightedGraph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n, weight()), 0..3 * n)
            .prop_map(move |raw| {
                let entries = raw.into_iter().filter(|&(u, v, _)| u != v).map(|(u, v, w)| (u.min(v), u.max(v), w));
                // Keep the first weight per pair so no averaging cancels to zero.
                let mut seen = std::collections::HashSet::new();
                let entries: Vec<_> = entries.filter(|&(u, v, _)| seen.insert((u, v))).collect();
                WeightedGraph::from_entries(n, entries).unwrap()
            })
    })
}

fn unit_graph(max_n: usize) -> impl Strategy<Value = WeightedGraph> {
    graph(max_n).prop_map(|g| {
        let e: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, e.weight.signum())).collect();
        WeightedGraph::from_entries(g.vertex_count(), e).unwrap()
    })
}

fn with_spins(max_n: usize) -> impl Strategy<Value = (WeightedGraph, Vec<Spin>)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], n))
    })
}

fn opt(g: &WeightedGraph) -> f64 {
    brute_force(g, CAP).unwrap().value()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn value_is_invariant_under_global_flip((g, x) in with_spins(12)) {
        let flipped: Vec<Spin> = x.iter().map(|s| -s).collect();
        prop_assert_eq!(g.evaluate(&x).unwrap(), g.evaluate(&flipped).unwrap());
    }

    #[test]
    fn flip_delta_matches_reevaluation((g, x) in with_spins(12), pick in any::<prop::sample::Index>()) {
        let v = pick.index(g.vertex_count());
        let mut y = x.clone();
        y[v] = -y[v];
        let delta = g.evaluate(&y).unwrap() - g.evaluate(&x).unwrap();
        prop_assert!(close(g.flip_delta(&x, v), delta));
    }

    #[test]
    fn optimum_lies_between_zero_and_abs_weight(g in graph(12)) {
        let o = opt(&g);
        prop_assert!(o >= 0.0);
        prop_assert!(o <= g.abs_weight() + 1e-9);
    }

    #[test]
    fn brute_force_matches_naive_enumeration(g in graph(10)) {
        let x = brute_force(&g, CAP).unwrap();
        prop_assert!(close(x.value(), naive_opt(&g)));
        prop_assert!(close(x.value(), g.evaluate(x.spins()).unwrap()));
    }

    #[test]
    fn treewidth_dp_matches_brute_force(g in graph(12)) {
        let exact = solve_exact_auto(&g, 20).unwrap();
        prop_assert!(close(exact.assignment.value(), opt(&g)));
    }

    #[test]
    fn optimum_ignores_entry_order(g in graph(10), seed in any::<u64>()) {
        let mut entries: Vec<_> = g.edges().iter().map(|e| (e.v, e.u, e.weight)).collect();
        let mut rng = maxqp::generate::SeededRng::new(seed);
        rng.shuffle(&mut entries);
        let h = WeightedGraph::from_entries(g.vertex_count(), entries).unwrap();
        prop_assert_eq!(&g, &h);
        prop_assert_eq!(opt(&g), opt(&h));
    }

    #[test]
    fn normalized_assignment_is_nonnegative((g, x) in with_spins(20)) {
        let y = normalize_nonneg(&g, Some(&x)).unwrap();
        prop_assert!(y.value() >= 0.0);
    }

    #[test]
    fn combining_disjoint_parts_keeps_both_values((g, x) in with_spins(14), cut in any::<prop::sample::Index>()) {
        let n = g.vertex_count();
        let k = cut.index(n + 1);
        let p1 = PartialAssignment::new((0..k).collect(), x[..k].to_vec()).unwrap();
        let p2 = PartialAssignment::new((k..n).collect(), x[k..].to_vec()).unwrap();
        let z = p1.value_on(&g).unwrap() + p2.value_on(&g).unwrap();
        let joined = combine_disjoint(&g, &p1, &p2).unwrap();
        prop_assert!(joined.value_on(&g).unwrap() >= z - 1e-9);
    }

    #[test]
    fn extension_keeps_induced_value((g, x) in with_spins(14), mask in any::<u16>()) {
        let h: Vec<usize> = (0..g.vertex_count()).filter(|v| mask >> v & 1 == 1).collect();
        let spins = h.iter().map(|&v| x[v]).collect();
        let p = PartialAssignment::new(h, spins).unwrap();
        let full = extend_from_induced(&g, &p).unwrap();
        prop_assert!(full.value() >= p.value_on(&g).unwrap() - 1e-9);
    }

    #[test]
    fn greedy_driver_meets_its_guarantee(g in graph(12)) {
        let r = solve_bounded_degree(&g).unwrap();
        prop_assert!(r.value() >= r.guarantee * opt(&g) - 1e-9);
    }

    #[test]
    fn star_driver_meets_its_guarantee(g in unit_graph(12)) {
        prop_assume!(g.isolated_count() == 0);
        let r = solve_dense(&g).unwrap();
        prop_assert!(r.value() >= r.guarantee * opt(&g) - 1e-9);
    }

    #[test]
    fn bfs_layers_differ_by_at_most_one_across_edges(g in graph(20)) {
        let layers = bfs_layers(&g, 0).unwrap();
        for e in g.edges() {
            prop_assert!(layers.layer_of(e.u).abs_diff(layers.layer_of(e.v)) <= 1);
        }
    }

    #[test]
    fn neighbourhood_pieces_sum_to_at_most_four_optima(g in graph(12), eps in prop_oneof![Just(0.5), Just(0.75), Just(1.0)]) {
        let layers = bfs_layers(&g, 0).unwrap();
        let k = baker_k(eps).unwrap();
        let total: f64 = (0..k)
            .map(|i| {
                let (_, h) = baker_pieces(&g, &layers, k, i);
                opt(&g.induced(&h).unwrap().graph)
            })
            .sum();
        prop_assert!(total <= 4.0 * opt(&g) + 1e-9);
    }

    #[test]
    fn instances_survive_a_file_round_trip(g in graph(30)) {
        let back = parse_instance(&format_instance(&g, &[])).unwrap();
        prop_assert_eq!(back.vertex_count(), g.vertex_count());
        for (a, b) in back.edges().iter().zip(g.edges()) {
            prop_assert_eq!((a.u, a.v), (b.u, b.v));
            prop_assert!(close(a.weight, b.weight));
        }
    }

    #[test]
    fn generated_instances_round_trip(seed in any::<u64>(), kind in 0usize..4) {
        let text = [
            "kind=grid-spin-glass rows=4 cols=5",
            "kind=sparse-random n=20 m=35 weights=real",
            "kind=planar-triangulation n=15",
            "kind=degenerate n=18 d=3",
        ][kind];
        let spec: GeneratorSpec = format!("{text} seed={seed}").parse().unwrap();
        let again: GeneratorSpec = spec.to_string().parse().unwrap();
        prop_assert_eq!(&spec, &again);
        let g = generate(&spec).unwrap();
        prop_assert_eq!(&g, &generate(&again).unwrap());
        let back = parse_instance(&format_instance(&g, &[])).unwrap();
        prop_assert_eq!(back.edge_count(), g.edge_count());
    }
}

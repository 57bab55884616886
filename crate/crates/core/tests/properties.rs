use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bihole::bounds;
use bihole::constructive::{
    bihole_general_delta, bihole_maxdeg2, bihole_maxdeg2_detailed, bihole_xi_chain,
    DEFAULT_MAX_RETRIES,
};
use bihole::exact::{brute_force_bihole, max_bihole};
use bihole::generators::{
    count_ktt, ktt_free_construction, pairing_model, per_vertex_ktt, trim_to_low_degree,
};
use bihole::harness::random_bounded_degree_graph;
use bihole::{verify_bihole, BiHoleCertificate, BipartiteGraph, Side};

fn graph(max_a: usize, max_b: usize) -> impl Strategy<Value = BipartiteGraph> {
    (0..=max_a, 0..=max_b).prop_flat_map(|(n_a, n_b)| {
        proptest::collection::vec(any::<bool>(), n_a * n_b).prop_map(move |bits| {
            let edges: Vec<_> = (0..n_a)
                .flat_map(|a| (0..n_b).map(move |b| (a, b)))
                .filter(|&(a, b)| bits[a * n_b + b])
                .collect();
            BipartiteGraph::new(n_a, n_b, &edges).unwrap()
        })
    })
}

fn bounded_square(n_max: usize, delta: usize) -> impl Strategy<Value = (BipartiteGraph, usize)> {
    (delta.max(2)..=n_max, any::<u64>()).prop_map(move |(n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (random_bounded_degree_graph(n, delta, &mut rng), n)
    })
}

fn subset_of(n: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(any::<bool>(), n).prop_map(|bits| {
        bits.iter()
            .enumerate()
            .filter(|p| *p.1)
            .map(|p| p.0)
            .collect()
    })
}

/// Largest k with a K_{k,k} in the complement, by enumerating every pair of
/// subsets and checking all pairs with `has_edge`.
fn biclique_enumeration(g: &BipartiteGraph) -> usize {
    let comp = g.complement();
    let mut best = 0;
    for xm in 0u32..(1 << g.n_a()) {
        let xs: Vec<usize> = (0..g.n_a()).filter(|&a| xm >> a & 1 == 1).collect();
        if xs.len() <= best {
            continue;
        }
        for ym in 0u32..(1 << g.n_b()) {
            if ym.count_ones() as usize != xs.len() {
                continue;
            }
            let complete = xs.iter().all(|&a| {
                (0..g.n_b())
                    .filter(|&b| ym >> b & 1 == 1)
                    .all(|b| comp.has_edge(a, b))
            });
            if complete {
                best = xs.len();
                break;
            }
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn complement_is_an_involution(g in graph(12, 12)) {
        prop_assert_eq!(g.complement().complement(), g);
    }

    #[test]
    fn degrees_of_graph_and_complement_sum_to_area(g in graph(12, 12)) {
        let total: usize = (0..g.n_a()).map(|a| g.degree(a) + g.complement().degree(a)).sum();
        prop_assert_eq!(total, g.n_a() * g.n_b());
    }

    #[test]
    fn verify_matches_complement_biclique(
        (g, xs, ys) in graph(8, 8).prop_flat_map(|g| {
            let (na, nb) = (g.n_a(), g.n_b());
            (Just(g), subset_of(na), subset_of(nb))
        })
    ) {
        let comp = g.complement();
        let biclique = xs.iter().all(|&a| ys.iter().all(|&b| comp.has_edge(a, b)));
        let c = BiHoleCertificate::new(xs.clone(), ys.clone());
        let expected = biclique && xs.len() == ys.len();
        prop_assert_eq!(verify_bihole(&g, &c).unwrap(), expected);
    }

    #[test]
    fn solver_agrees_with_brute_force(g in graph(10, 10)) {
        let r = max_bihole(&g, None);
        prop_assert_eq!(r.k, brute_force_bihole(&g).unwrap().k);
        prop_assert!(verify_bihole(&g, &r.certificate).unwrap());
        prop_assert_eq!(r.certificate.size(), r.k);
    }

    #[test]
    fn solver_is_dual_to_complement_bicliques(g in graph(6, 6)) {
        prop_assert_eq!(max_bihole(&g, None).k, biclique_enumeration(&g));
    }

    #[test]
    fn adding_an_edge_never_helps(g in graph(9, 9), a in 0usize..9, b in 0usize..9) {
        prop_assume!(g.n_a() > 0 && g.n_b() > 0);
        let h = g.with_edges(&[(a % g.n_a(), b % g.n_b())]).unwrap();
        prop_assert!(max_bihole(&h, None).k <= max_bihole(&g, None).k);
    }

    #[test]
    fn budgeted_certificates_verify(g in graph(10, 10), budget in 1u64..50) {
        let r = max_bihole(&g, Some(budget));
        prop_assert!(verify_bihole(&g, &r.certificate).unwrap());
        prop_assert!(r.k <= brute_force_bihole(&g).unwrap().k);
    }

    #[test]
    fn maxdeg2_meets_guarantee_and_oracle((g, n) in bounded_square(12, 2)) {
        let out = bihole_maxdeg2_detailed(&g).unwrap();
        let c = &out.certificate;
        prop_assert!(verify_bihole(&g, c).unwrap());
        prop_assert!(c.size() >= n.div_ceil(2) - 1);
        prop_assert!(c.size() <= max_bihole(&g, None).k);
        prop_assert!(out.selected_vertices <= n / 2 + 1);
        // The padded graph has more edges, and the certificate holds there too.
        let padded = g.pad_a_degrees(2);
        prop_assert!(verify_bihole(&padded, c).unwrap());
    }

    #[test]
    fn maxdeg2_counting_on_larger_graphs((g, n) in bounded_square(60, 2)) {
        let out = bihole_maxdeg2_detailed(&g).unwrap();
        prop_assert!(out.selected_vertices <= n / 2 + 1);
        prop_assert!(verify_bihole(&g, &out.certificate).unwrap());
        if let Some(aux) = &out.aux {
            prop_assert_eq!(aux.edges.len(), n);
            for comp in &aux.components {
                prop_assert_eq!(comp.dense, comp.edges.len() >= comp.vertices.len());
            }
        }
    }

    #[test]
    fn general_delta_meets_guarantee(delta in 2usize..=6, seed: u64, n in 6usize..=12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_bounded_degree_graph(n, delta, &mut rng);
        let c = bihole_general_delta(&g, delta).unwrap();
        prop_assert!(verify_bihole(&g, &c).unwrap());
        prop_assert!(c.size() >= (n - 2) / delta);
        prop_assert!(c.size() <= max_bihole(&g, None).k);
    }

    #[test]
    fn xi_chain_trace_and_soundness(delta in 3usize..=5, seed: u64, n in 10usize..=40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_bounded_degree_graph(n, delta, &mut rng);
        if let Ok((c, trace)) = bihole_xi_chain(&g, delta, &mut rng, DEFAULT_MAX_RETRIES) {
            prop_assert!(verify_bihole(&g, &c).unwrap());
            if !trace.short_circuit {
                prop_assert_eq!(trace.terminal_delta, 2);
                prop_assert_eq!(trace.levels.len(), delta - 2);
                for (i, level) in trace.levels.iter().enumerate() {
                    prop_assert_eq!(level.delta, delta - i);
                }
            }
        }
    }

    #[test]
    fn count_ktt_is_transpose_symmetric(g in graph(8, 8), t in 1usize..=3) {
        prop_assert_eq!(count_ktt(&g, t), count_ktt(&g.transpose(), t));
    }

    #[test]
    fn count_k22_matches_codegree_formula(g in graph(9, 9)) {
        // Each pair of A-vertices with codegree d spans C(d, 2) copies.
        let mut expected = 0u64;
        for a in 0..g.n_a() {
            for a2 in a + 1..g.n_a() {
                let d = g.row(a).intersection_count(g.row(a2)) as u64;
                expected += d * d.saturating_sub(1) / 2;
            }
        }
        prop_assert_eq!(count_ktt(&g, 2), expected);
        let per_a: u64 = (0..g.n_a()).map(|a| per_vertex_ktt(&g, 2, Side::A, a)).sum();
        prop_assert_eq!(per_a, 2 * expected);
    }

    #[test]
    fn trim_output_shape(seed: u64, cap in 1usize..5, target in 1usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_bounded_degree_graph(20, 6, &mut rng);
        if let Ok(h) = trim_to_low_degree(&g, cap, target, &mut rng) {
            prop_assert_eq!((h.n_a(), h.n_b()), (target, target));
            prop_assert!(h.max_a_degree() <= cap);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pairing_model_is_regular_and_simple(n in 1usize..=15, delta in 1usize..=3, seed: u64) {
        prop_assume!(delta <= n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = pairing_model(n, delta, &mut rng, 100_000).unwrap().graph;
        prop_assert_eq!(g.edge_count(), n * delta);
        for side in [Side::A, Side::B] {
            let p = g.degree_profile(side);
            prop_assert_eq!((p.min, p.max), (delta, delta));
        }
    }

    #[test]
    fn ktt_free_repair_invariants(n in 8usize..=24, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, rep) = ktt_free_construction(n, 2, 0.5, &mut rng, 1000).unwrap();
        prop_assert_eq!(count_ktt(&g, 2), 0);
        prop_assert!(rep.edges_removed <= rep.copies_before);
        for (a, &x) in rep.per_vertex_copy_counts.iter().enumerate() {
            prop_assert!(g.degree(a) as u64 + x >= rep.degree_floor as u64);
        }
    }

    #[test]
    fn h_routes_agree(delta in 2usize..=40, extra in 0usize..400) {
        let n = bounds::random_subset_regime_n(delta).max(delta + 4) + extra;
        let x = bounds::random_subset_x(delta);
        let exact = bounds::h_value(x, n, delta).unwrap();
        let approx = bounds::h_value_lgamma(x, n, delta).unwrap();
        let exact = num_traits::ToPrimitive::to_f64(&exact).unwrap();
        prop_assert!(((exact - approx) / exact).abs() < 1e-10, "{} vs {}", exact, approx);
    }

    #[test]
    fn h_inequality_holds_past_delta0(delta in 6usize..=48, extra in 0usize..2000) {
        let n = bounds::random_subset_regime_n(delta) + extra;
        prop_assert!(bounds::check_h_inequality(n, delta).unwrap().holds);
    }
}

#[test]
fn maxdeg2_rejects_degree_three() {
    let g = BipartiteGraph::new(3, 3, &[(0, 0), (0, 1), (0, 2)]).unwrap();
    assert!(bihole_maxdeg2(&g).is_err());
}

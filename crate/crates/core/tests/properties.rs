use proptest::prelude::*;

use farey_lab::amalgam::{free_amalgam, Glue};
use farey_lab::decomp::{build_g_tree, is_independent};
use farey_lab::farey::build_level;
use farey_lab::graph::{canonical_form, find_isomorphism, Graph, VertexId};
use farey_lab::kclass::{brute_force_k_check, is_in_k, is_strong};
use farey_lab::lprime::{enumerate_cycle_types, eval_p_c, eval_p_delta, p_delta_witnesses, CycleCatalog};
use farey_lab::model::{build_generic, build_tree_model, t_compliance, ExtensionWeights, ModelSpec, SpecEdge, SpecNode};

fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len)
            .prop_map(move |keep| Graph::new(n, pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e)).unwrap())
    })
}

fn relabel(g: &Graph, perm: &[VertexId]) -> Graph {
    Graph::new(g.vertex_count(), g.edges().iter().map(|e| (perm[e.lo()], perm[e.hi()]))).unwrap()
}

fn catalog() -> &'static CycleCatalog {
    static CAT: std::sync::OnceLock<CycleCatalog> = std::sync::OnceLock::new();
    CAT.get_or_init(|| enumerate_cycle_types(7).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn membership_matches_brute_force(g in small_graph(8)) {
        let r = is_in_k(&g);
        prop_assert_eq!(r.member, brute_force_k_check(&g).unwrap());
        if let Some(p) = r.peel {
            prop_assert!(p.replay(&g).is_ok());
        }
    }

    #[test]
    fn canonical_code_ignores_labels(g in small_graph(9), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut perm: Vec<VertexId> = g.vertices().collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let h = relabel(&g, &perm);
        prop_assert_eq!(canonical_form(&g, &[]).unwrap(), canonical_form(&h, &[]).unwrap());
        prop_assert!(find_isomorphism(&g, &h, &[]).unwrap().is_some());
    }

    #[test]
    fn json_round_trip(g in small_graph(10)) {
        let text = serde_json::to_string(&g).unwrap();
        let back: Graph = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn generic_graphs_satisfy_the_axioms(seed in any::<u64>(), steps in 0usize..60) {
        let (g, log) = build_generic(seed, steps, ExtensionWeights::default()).unwrap();
        prop_assert_eq!(log.len(), steps);
        let r = t_compliance(&g);
        prop_assert!(r.k_member);
        prop_assert!(r.edges_violating.is_empty());
        prop_assert_eq!(r.edges_two_triangles + r.edges_one_triangle + r.edges_no_triangle, g.edge_count());
    }

    #[test]
    fn free_amalgam_is_symmetric(b in small_graph(6), c in small_graph(6)) {
        // glue along vertex 0 on both sides, which always induces the same one-point graph
        let glue = Glue::new(vec![0], vec![0]);
        let bc = free_amalgam(&b, &c, &glue).unwrap();
        let cb = free_amalgam(&c, &b, &glue).unwrap();
        prop_assert!(find_isomorphism(&bc.graph, &cb.graph, &[]).unwrap().is_some());
        prop_assert_eq!(bc.graph.edge_count(), b.edge_count() + c.edge_count());
    }

    #[test]
    fn strong_sets_of_members_contain_a_full_peel(g in small_graph(8), mask in any::<u8>()) {
        prop_assume!(is_in_k(&g).member);
        let a: Vec<VertexId> = g.vertices().filter(|&v| mask >> v & 1 == 1).collect();
        if let Some(p) = is_strong(&a, &g).unwrap().peel() {
            prop_assert!(p.replay(&g).is_ok());
            prop_assert_eq!(&p.base, &a);
        }
    }

    #[test]
    fn independence_is_symmetric(x in 0usize..32, y in 0usize..32, z in 0usize..32) {
        let g = build_level(4).unwrap().into_graph();
        prop_assert!(build_g_tree(&g).is_forest());
        let fwd = is_independent(&g, &[x], &[z], &[y]).unwrap().independent;
        let back = is_independent(&g, &[y], &[z], &[x]).unwrap().independent;
        prop_assert_eq!(fwd, back);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn p_c_is_symmetric(x in 0usize..32, y in 0usize..32, t in 0usize..7) {
        let g = build_level(4).unwrap().into_graph();
        let ty = &catalog().types[t % catalog().types.len()];
        prop_assert_eq!(eval_p_c(&g, ty, x, y).unwrap().is_some(), eval_p_c(&g, ty, y, x).unwrap().is_some());
    }

    #[test]
    fn p_delta_witnesses_replay(x in 0usize..32, y in 0usize..32, picks in proptest::collection::vec(0usize..7, 0..4)) {
        let g = build_level(4).unwrap().into_graph();
        let names: Vec<&str> = picks.iter().map(|&i| catalog().types[i % catalog().types.len()].name.as_str()).collect();
        let d = catalog().delta(&names.join(",")).unwrap();
        let ws = p_delta_witnesses(&g, &d, x, y, None).unwrap();
        prop_assert_eq!(ws.is_empty(), eval_p_delta(&g, &d, x, y).unwrap().is_none());
        for w in &ws {
            prop_assert_eq!(g.distance(x, y).unwrap(), Some(d.total_span()));
            for (i, pair) in w.connecting_points.windows(2).enumerate() {
                prop_assert!(eval_p_c(&g, &d.items[i], pair[0], pair[1]).unwrap().is_some());
            }
        }
    }
}

/// All sequences of up to `max_len` catalog types.
fn sequences(max_len: usize) -> Vec<Vec<&'static str>> {
    let names: Vec<&str> = catalog().types.iter().map(|t| t.name.as_str()).collect();
    let mut out: Vec<Vec<&str>> = vec![vec![]];
    let mut layer = out.clone();
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|s| names.iter().map(move |n| [s.clone(), vec![*n]].concat()))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn chain_model() -> Graph {
    let spec = ModelSpec {
        nodes: vec![SpecNode { id: 0, level: 2 }, SpecNode { id: 1, level: 2 }, SpecNode { id: 2, level: 1 }],
        edges: vec![
            SpecEdge { u: 0, v: 1, attach_u: 6, attach_v: 0 },
            SpecEdge { u: 1, v: 2, attach_u: 7, attach_v: 2 },
        ],
    };
    build_tree_model(&spec).unwrap().graph
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// For a shortest satisfied δ the connecting points do not depend on the witness.
    #[test]
    fn minimal_sequences_fix_connecting_points(x in 0usize..19, y in 0usize..19) {
        let g = chain_model();
        prop_assume!(x < g.vertex_count() && y < g.vertex_count() && x != y);
        let mut best: Option<usize> = None;
        for names in sequences(3) {
            if best.is_some_and(|b| names.len() > b) {
                break;
            }
            let d = catalog().delta(&names.join(",")).unwrap();
            let ws = p_delta_witnesses(&g, &d, x, y, None).unwrap();
            if ws.is_empty() {
                continue;
            }
            best = Some(names.len());
            let first = &ws[0].connecting_points;
            prop_assert!(ws.iter().all(|w| &w.connecting_points == first), "{:?} {} {}", names, x, y);
        }
    }
}

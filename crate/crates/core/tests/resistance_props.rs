mod common;

use std::collections::BTreeSet;

use kcoal_core::family::{build_family, Family, FamilySpec};
use kcoal_core::graph::{k_coalescence, make_standard, Graph, StandardKind};
use kcoal_core::resistance::{closed_form, rd_dandelion, rd_kcoal_complete, resistance_oracle, ResistanceMatrix};
use proptest::prelude::*;

fn spec(s: &str) -> FamilySpec {
    s.parse().unwrap()
}

/// One representative per family, plus a few larger cases.
fn sample_specs() -> Vec<FamilySpec> {
    [
        "kcoal:p1=3,p2=2,k=1",
        "kcoal:p1=6,p2=4,k=3",
        "kcoal:p1=5,p2=5,k=5",
        "windmill:n=3,t=4",
        "rose3",
        "join:p=4,k=2,g=P3",
        "join:p=3,k=1,g=N2",
        "starjoin:p=4,g=C4",
        "bistar:p=3,q=2,n=4",
        "bicomplete:p=2,q=3,n=4",
        "bicomplete:p=4,q=1,n=1",
        "pineapple:p=5,q=3",
        "kite:p=6",
        "dandelion:n=9,l=4",
    ]
    .iter()
    .map(|s| spec(s))
    .collect()
}

fn cut_vertex_violations(g: &Graph, r: &ResistanceMatrix, tol: f64) -> Vec<(usize, usize, usize)> {
    let n = g.order();
    let adj = g.adjacency_lists();
    let mut bad = Vec::new();
    for v in 0..n {
        // Components of g - v.
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for s in (0..n).filter(|&s| s != v) {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            comp[s] = count;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if y != v && comp[y] == usize::MAX {
                        comp[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        if count < 2 {
            continue;
        }
        for x in (0..n).filter(|&x| x != v) {
            for y in (x + 1..n).filter(|&y| y != v && comp[y] != comp[x]) {
                if (r.get(x, y) - r.get(x, v) - r.get(v, y)).abs() > tol {
                    bad.push((x, v, y));
                }
            }
        }
    }
    bad
}

#[test]
fn closed_forms_match_oracle_on_samples() {
    for s in sample_specs() {
        let g = build_family(&s).unwrap();
        let (dev, at) = closed_form(&s).unwrap().max_deviation(&resistance_oracle(&g).unwrap()).unwrap();
        assert!(dev <= 1e-10, "{s}: deviation {dev} at {at:?}");
    }
}

#[test]
fn every_route_produces_a_metric() {
    for s in sample_specs() {
        let g = build_family(&s).unwrap();
        closed_form(&s).unwrap().check_metric(1e-9).unwrap_or_else(|e| panic!("{s} closed: {e:?}"));
        resistance_oracle(&g).unwrap().check_metric(1e-9).unwrap_or_else(|e| panic!("{s} oracle: {e:?}"));
    }
    let mut rng = common::rng(3);
    for trial in 0..60 {
        let g = common::random_connected(&mut rng, 2 + trial % 11, 0.3);
        resistance_oracle(&g).unwrap().check_metric(1e-9).unwrap();
    }
}

#[test]
fn cut_vertex_additivity() {
    for s in sample_specs() {
        let g = build_family(&s).unwrap();
        let r = closed_form(&s).unwrap();
        let bad = cut_vertex_violations(&g, &r, 1e-9);
        assert!(bad.is_empty(), "{s}: {:?}", &bad[..bad.len().min(5)]);
    }
}

#[test]
fn cut_vertex_additivity_holds_for_every_k1_family_member() {
    let k1: Vec<FamilySpec> = (2..=6)
        .flat_map(|p| {
            [
                format!("kcoal:p1={p},p2=3,k=1"),
                format!("windmill:n={p},t=3"),
                format!("pineapple:p={p},q=2"),
                format!("kite:p={p}"),
                format!("starjoin:p={p},g=P3"),
                format!("bistar:p={p},q=2,n=3"),
                format!("bicomplete:p={p},q=2,n=3"),
                format!("dandelion:n={},l=3", p + 3),
            ]
        })
        .map(|s| spec(&s))
        .collect();
    for s in k1 {
        let g = build_family(&s).unwrap();
        assert!(cut_vertex_violations(&g, &closed_form(&s).unwrap(), 1e-9).is_empty(), "{s}");
    }
}

#[test]
fn edge_and_distance_bounds() {
    let mut rng = common::rng(5);
    let graphs: Vec<Graph> = sample_specs()
        .iter()
        .map(|s| build_family(s).unwrap())
        .chain((0..40).map(|t| common::random_connected(&mut rng, 2 + t % 11, 0.25)))
        .collect();
    for g in graphs {
        let r = resistance_oracle(&g).unwrap();
        let d = g.distance_matrix().unwrap();
        for i in 0..g.order() {
            for j in 0..g.order() {
                assert!(r.get(i, j) <= d[i][j] as f64 + 1e-9);
                if g.has_edge(i, j) {
                    assert!(r.get(i, j) <= 1.0 + 1e-9);
                }
            }
        }
    }
}

#[test]
fn dandelion_resistance_is_tree_distance_exactly() {
    for n in 3..=15 {
        for l in 2..n {
            let g = build_family(&FamilySpec::Dandelion { n, l }).unwrap();
            let d = g.distance_matrix().unwrap();
            let r = rd_dandelion(n, l).unwrap();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(r.get(i, j), d[i][j] as f64, "D({n},{l}) at ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn kite_spot_values() {
    let r = rd_kcoal_complete(3, 2, 1).unwrap();
    // Order: identified vertex, two other triangle vertices, pendant vertex.
    assert!((r.get(0, 3) - 1.0).abs() <= 1e-12);
    assert!((r.get(0, 1) - 2.0 / 3.0).abs() <= 1e-12);
    assert!((r.get(1, 2) - 2.0 / 3.0).abs() <= 1e-12);
    assert!((r.get(1, 3) - 5.0 / 3.0).abs() <= 1e-12);
}

#[test]
fn kcoal_family_equals_manual_coalescence() {
    for p1 in 1..=6 {
        for p2 in 1..=p1 {
            for k in 1..=p2 {
                let s = FamilySpec::KCoalComplete { p1, p2, k };
                if s.validate().is_err() {
                    continue;
                }
                let built = build_family(&s).unwrap();
                let g = make_standard(StandardKind::Complete, &[p1]).unwrap();
                let h = make_standard(StandardKind::Complete, &[p2]).unwrap();
                let ids: Vec<usize> = (0..k).collect();
                let manual = k_coalescence(&g, &ids, &h, &ids).unwrap();
                assert_eq!(built.order(), manual.order());
                assert_eq!(built.edges().collect::<Vec<_>>(), manual.edges().collect::<Vec<_>>(), "{s}");
                assert_eq!(built.order(), p1 + p2 - k);
                assert_eq!(built.size(), p1 * (p1 - 1) / 2 + p2 * (p2 - 1) / 2 - k * (k - 1) / 2);
            }
        }
    }
}

#[test]
fn coalescence_of_random_graphs_has_expected_order_and_size() {
    let mut rng = common::rng(17);
    for trial in 0..50 {
        let k = 1 + trial % 3;
        let g = common::random_graph(&mut rng, k + 1 + trial % 5, 0.4);
        let h = common::random_graph(&mut rng, k + trial % 4, 0.4);
        // Make the identified sets cliques in both operands.
        let ids: Vec<usize> = (0..k).collect();
        let g = with_clique(&g, &ids);
        let h = with_clique(&h, &ids);
        let c = k_coalescence(&g, &ids, &h, &ids).unwrap();
        assert_eq!(c.order(), g.order() + h.order() - k);
        assert_eq!(c.size(), g.size() + h.size() - k * (k - 1) / 2);
    }
}

fn with_clique(g: &Graph, ids: &[usize]) -> Graph {
    let mut edges: BTreeSet<(usize, usize)> = g.edges().collect();
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    Graph::new(g.order(), edges).unwrap()
}

#[test]
fn windmill_block_values() {
    let r = closed_form(&spec("windmill:n=2,t=2")).unwrap();
    // Hub, then blade 1 (1, 2), then blade 2 (3, 4).
    assert!((r.get(1, 2) - 2.0 / 3.0).abs() <= 1e-12);
    assert!((r.get(1, 3) - 4.0 / 3.0).abs() <= 1e-12);
}

#[test]
fn every_family_builds_graph_of_declared_order() {
    for fam in Family::ALL {
        let s = sample_specs().into_iter().find(|s| s.family() == fam).unwrap();
        assert_eq!(build_family(&s).unwrap().order(), s.order(), "{s}");
        assert_eq!(s.block_sizes().iter().sum::<usize>(), s.order(), "{s}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kcoal_closed_form_matches_oracle(p1 in 1usize..10, p2 in 1usize..10, k in 1usize..10) {
        let s = FamilySpec::KCoalComplete { p1, p2, k };
        prop_assume!(s.validate().is_ok());
        let r = closed_form(&s).unwrap();
        let (dev, _) = r.max_deviation(&resistance_oracle(&build_family(&s).unwrap()).unwrap()).unwrap();
        prop_assert!(dev <= 1e-9);
    }

    #[test]
    fn join_closed_form_matches_oracle_for_any_g(seed in any::<u64>(), p in 1usize..6, k in 1usize..4, n in 1usize..8) {
        prop_assume!(p >= k);
        let mut rng = common::rng(seed);
        let g = common::random_graph(&mut rng, n, 0.4);
        for s in [FamilySpec::JoinCoal { p, k, g: g.clone() }, FamilySpec::StarJoinCoal { p: p.max(2), g }] {
            let r = closed_form(&s).unwrap();
            let (dev, _) = r.max_deviation(&resistance_oracle(&build_family(&s).unwrap()).unwrap()).unwrap();
            prop_assert!(dev <= 1e-9, "{}: {}", s, dev);
        }
    }

    #[test]
    fn oracle_is_relabeling_equivariant(seed in any::<u64>(), n in 2usize..10) {
        let mut rng = common::rng(seed);
        let g = common::random_connected(&mut rng, n, 0.3);
        let perm = common::random_perm(&mut rng, n);
        let r = resistance_oracle(&g).unwrap();
        let rp = resistance_oracle(&g.permuted(&perm).unwrap()).unwrap();
        let (dev, _) = rp.max_deviation(&r.permuted(&perm)).unwrap();
        prop_assert!(dev <= 1e-10);
    }
}

use std::sync::Arc;

use oriented_spanner::dilation::all_pairs_dijkstra;
use oriented_spanner::oracles::{bellman_ford_apsp, exhaustive_best_orientation};
use oriented_spanner::*;
use proptest::prelude::*;

fn point_set(dim: usize, max: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::vec(prop::collection::vec(-100.0f64..100.0, dim), 3..max)
        .prop_filter_map("duplicates", move |rows| PointSet::new(dim, rows).ok())
}

fn check_oriented(g: &OrientedGraph) -> Result<(), TestCaseError> {
    for (u, v) in g.edges() {
        prop_assert!(u != v && !g.has_edge(v, u));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn perimeter_ignores_vertex_order(ps in point_set(3, 8)) {
        let a = ps.perimeter(0, 1, 2);
        for (p, q, r) in [(0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
            prop_assert_eq!(a.to_bits(), ps.perimeter(p, q, r).to_bits());
        }
    }

    #[test]
    fn approximate_triangle_within_factor(ps in point_set(2, 60), eps1 in 0.2f64..1.5, seed in any::<u64>()) {
        let n = ps.len();
        let (p, q) = ((seed % n as u64) as usize, ((seed / 7 + 1) % n as u64) as usize);
        prop_assume!(p != q);
        let ps = Arc::new(ps);
        let mut index = AnnIndex::build(ps.clone());
        let cfg = TriangleQueryConfig::new(eps1, 2).unwrap();
        let got = approx_min_triangle(&mut index, p, q, &cfg).unwrap();
        let best = exact_min_triangle(ps.as_ref(), p, q).unwrap();
        prop_assert!(got.perimeter <= (1.0 + eps1) * best.perimeter);
        prop_assert!(got.r != p && got.r != q);
        prop_assert_eq!(index.members(), (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn spanner_is_oriented_and_bounded(ps in point_set(2, 30)) {
        let cfg = SpannerConfig::theorem(1.5).unwrap();
        let sp = build_oriented_spanner(&ps, &cfg).unwrap();
        check_oriented(&sp.graph)?;
        prop_assert!(sp.stats.edges <= 3 * sp.stats.triples);
        let value = exact_oriented_dilation(&ps, &sp.graph).unwrap().value;
        prop_assert!(value >= 1.0 && value <= 2.0 + cfg.eps, "dilation {}", value);
    }

    #[test]
    fn greedy_orientation_meets_triple_bound(ps in point_set(2, 25)) {
        let n = ps.len();
        let triples: Vec<TriangleTriple> = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| exact_min_triangle(&ps, p, q).unwrap())
            .collect();
        let eps1 = 0.01;
        let g = greedy_orient(&ps, eps1, &triples).unwrap();
        check_oriented(&g)?;
        let d = bellman_ford_apsp(&ps, &g);
        for t in &triples {
            let walk = d.get(t.p, t.q) + d.get(t.q, t.p);
            prop_assert!(walk <= (2.0 + 2.0 * eps1) * t.perimeter);
        }
    }

    #[test]
    fn approximate_dilation_never_exceeds_exact(ps in point_set(2, 40), eps in 0.3f64..1.0) {
        let sp = build_oriented_spanner(&ps, &SpannerConfig::practical(1.0).unwrap()).unwrap();
        let exact = exact_oriented_dilation(&ps, &sp.graph).unwrap().value;
        let cfg = ApproxDilationConfig::theorem(eps).unwrap();
        let approx = approx_oriented_dilation(&ps, &sp.graph, &cfg, &mut dijkstra_oracle(&sp.graph, &ps)).unwrap().value;
        prop_assert!(approx <= exact);
        prop_assert!((1.0 - eps) * exact <= approx);
    }

    #[test]
    fn shortest_path_methods_agree(ps in point_set(2, 25), raw in prop::collection::vec((0usize..25, 0usize..25), 0..60)) {
        let n = ps.len();
        let mut g = OrientedGraph::empty(n);
        for (u, v) in raw {
            let _ = g.add_edge(u % n, v % n);
        }
        let a = all_pairs_dijkstra(&ps, &g);
        let b = bellman_ford_apsp(&ps, &g);
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (a.get(i, j), b.get(i, j));
                prop_assert!(x == y || (x - y).abs() <= 1e-12 * x.max(y));
            }
        }
    }

    #[test]
    fn ann_query_within_factor(ps in point_set(3, 80), q in prop::collection::vec(-120.0f64..120.0, 3), eps in 0.0f64..2.0) {
        let ps = Arc::new(ps);
        let index = AnnIndex::build(ps.clone());
        let j = index.query(&q, eps).unwrap();
        let d = |i: usize| distance(&q, ps.point(i)).unwrap();
        let best = (0..ps.len()).map(d).fold(f64::INFINITY, f64::min);
        prop_assert!(d(j) <= (1.0 + eps) * best);
    }
}

#[test]
fn exhaustive_search_never_beaten_by_spanner() {
    let ps = PointSet::new(
        2,
        vec![vec![0.0, 0.0], vec![2.0, 0.1], vec![1.1, 1.7], vec![3.0, 2.0], vec![0.4, 2.6]],
    )
    .unwrap();
    let sp = build_oriented_spanner(&ps, &SpannerConfig::theorem(1.0).unwrap()).unwrap();
    let support = sp.graph.support();
    let best = exhaustive_best_orientation(&ps, &support).unwrap();
    let ours = exact_oriented_dilation(&ps, &sp.graph).unwrap().value;
    assert!(best.best_value <= ours);
    assert!(ours <= 3.0);
}

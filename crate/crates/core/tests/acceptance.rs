//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::HashSet;
use std::sync::Arc;
use std::time::Instant;

use oriented_spanner::dilation::{all_pairs_dijkstra, exact_oriented_dilation_with, floyd_warshall};
use oriented_spanner::gen::uniform;
use oriented_spanner::oracles::{bellman_ford_apsp, exhaustive_best_orientation, scan_min_triangle};
use oriented_spanner::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Largest edges/n ratio allowed in practical mode: 907 edges measured at
/// n = 50 (seed 127).
const PRACTICAL_EDGE_RATIO: f64 = 18.14;

fn four_point_bound() -> Outcome {
    let t0 = Instant::now();
    let h = 3f64.sqrt() / 2.0;
    let ps = PointSet::new(
        2,
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h], vec![0.5, h / 3.0]],
    )
    .unwrap();
    let edges: Vec<(usize, usize)> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
    let r = exhaustive_best_orientation(&ps, &edges).map_err(|e| e.to_string())?;
    let secs = t0.elapsed().as_secs_f64();
    let want = 2.0 * 3f64.sqrt() - 2.0;
    let msg = format!("best={} want={want} time={secs:.3}s", r.best_value);
    if (r.best_value - want).abs() <= 1e-9 && secs < 1.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Theorem-default spanners at eps = 1.9: dilation bound and per-triple bound.
fn spanner_runs() -> (Outcome, Outcome) {
    let cfg = SpannerConfig::theorem(1.9).unwrap();
    let (mut worst, mut worst_triple) = (0.0f64, 0.0f64);
    let (mut bad, mut bad_triples, mut trials, mut triples) = (Vec::new(), 0usize, 0, 0usize);
    for n in [50, 100, 200] {
        for trial in 0..20u64 {
            let ps = uniform(n, 2, 1000 * n as u64 + trial);
            let sp = build_oriented_spanner(&ps, &cfg).unwrap();
            let apsp = all_pairs_dijkstra(&ps, &sp.graph);
            let value = exact_oriented_dilation_with(&ps, &apsp).unwrap().value;
            trials += 1;
            worst = worst.max(value);
            if !(value <= 2.0 + cfg.eps) {
                bad.push(format!("n={n} trial={trial} value={value}"));
            }
            for t in &sp.triples {
                let walk = apsp.get(t.p, t.q) + apsp.get(t.q, t.p);
                let star = exact_min_triangle(&ps, t.p, t.q).unwrap().perimeter;
                triples += 1;
                worst_triple = worst_triple.max(walk / star);
                if !(walk <= (2.0 + 2.0 * cfg.eps1) * star) {
                    bad_triples += 1;
                }
            }
        }
    }
    let a = if bad.is_empty() {
        Ok(format!("{trials} spanners, worst dilation {worst:.4} <= 3.9"))
    } else {
        Err(format!("violations: {}", bad.join("; ")))
    };
    let msg = format!(
        "{triples} triples, worst walk/perimeter {worst_triple:.4} <= {}, {bad_triples} violations",
        2.0 + 2.0 * cfg.eps1
    );
    let b = if bad_triples == 0 { Ok(msg) } else { Err(msg) };
    (a, b)
}

fn practical_edge_density() -> Outcome {
    let mut ratios = Vec::new();
    for n in [50, 100, 200, 500, 1000, 2000] {
        let ps = uniform(n, 2, 77 + n as u64);
        let sp = build_oriented_spanner(&ps, &SpannerConfig::practical(1.0).unwrap()).unwrap();
        ratios.push((n, sp.stats.edges as f64 / n as f64));
    }
    let msg = ratios
        .iter()
        .map(|(n, r)| format!("n={n}:{r:.3}"))
        .collect::<Vec<_>>()
        .join(" ");
    if ratios.iter().all(|&(_, r)| r <= PRACTICAL_EDGE_RATIO) {
        Ok(format!("edges/n {msg} <= {PRACTICAL_EDGE_RATIO}"))
    } else {
        Err(format!("edges/n {msg} cap {PRACTICAL_EDGE_RATIO}"))
    }
}

fn triangle_queries() -> Outcome {
    let ps = Arc::new(uniform(500, 2, 4242));
    let everyone: Vec<usize> = (0..500).collect();
    let mut summary = Vec::new();
    for eps1 in [0.25, 0.5, 1.0] {
        let cfg = TriangleQueryConfig::new(eps1, 2).unwrap();
        let mut index = AnnIndex::build(ps.clone());
        let mut rng = ChaCha8Rng::seed_from_u64((eps1 * 1000.0) as u64);
        let mut worst = 1.0f64;
        for _ in 0..1000 {
            let p = rng.random_range(0..500);
            let mut q = rng.random_range(0..499);
            if q >= p {
                q += 1;
            }
            let detail = oriented_spanner::min_triangle::approx_min_triangle_detailed(&mut index, p, q, &cfg)
                .map_err(|e| e.to_string())?;
            if ((detail.ann_queries + detail.updates) as f64) > cfg.max_ann_queries(2) {
                return Err(format!("eps1={eps1} ({p},{q}): {} index operations", detail.ann_queries + detail.updates));
            }
            let got = detail.triple;
            let best = exact_min_triangle(ps.as_ref(), p, q).unwrap();
            worst = worst.max(got.perimeter / best.perimeter);
            if !(got.perimeter <= (1.0 + eps1) * best.perimeter) {
                return Err(format!("eps1={eps1} ({p},{q}): {} vs {}", got.perimeter, best.perimeter));
            }
            if index.len() != 500 || index.members() != everyone {
                return Err(format!("eps1={eps1} ({p},{q}): index not restored"));
            }
        }
        summary.push(format!("eps1={eps1}: worst ratio {worst:.4}"));
    }
    Ok(format!("3000 queries, index restored after each; {}", summary.join(", ")))
}

/// Returns the true distance on some pairs and twice it on the others.
struct Doubling<'a> {
    inner: DijkstraOracle<'a, PointSet>,
}

impl DistanceOracle for Doubling<'_> {
    fn distance(&mut self, u: usize, v: usize) -> f64 {
        let d = self.inner.distance(u, v);
        if (u * 7 + v * 13) % 3 == 0 {
            d
        } else {
            2.0 * d
        }
    }

    fn factor(&self) -> f64 {
        2.0
    }

    fn cost_class(&self) -> &'static str {
        "test stub"
    }
}

fn random_strong_orientation(n: usize, extra: usize, rng: &mut ChaCha8Rng) -> OrientedGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut g = OrientedGraph::empty(n);
    for i in 0..n {
        g.add_edge(order[i], order[(i + 1) % n]).unwrap();
    }
    let mut added = 0;
    while added < extra {
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        if u != v && !g.has_edge(u, v) && !g.has_edge(v, u) {
            g.add_edge(u, v).unwrap();
            added += 1;
        }
    }
    g
}

fn sandwich() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut lines = Vec::new();
    for trial in 0..20u64 {
        let eps = if trial % 2 == 0 { 0.2 } else { 0.1 };
        let n = [60, 100, 150][(trial / 2 % 3) as usize];
        let ps = uniform(n, 2, 9000 + trial);
        let g = if trial < 10 {
            build_oriented_spanner(&ps, &SpannerConfig::practical(1.0).unwrap()).unwrap().graph
        } else {
            random_strong_orientation(n, 2 * n, &mut rng)
        };
        let exact = exact_oriented_dilation(&ps, &g).unwrap().value;
        let cfg = ApproxDilationConfig::theorem(eps).unwrap();
        let one = approx_oriented_dilation(&ps, &g, &cfg, &mut dijkstra_oracle(&g, &ps)).unwrap().value;
        let two = approx_oriented_dilation(&ps, &g, &cfg, &mut Doubling { inner: dijkstra_oracle(&g, &ps) })
            .unwrap()
            .value;
        let ok = (1.0 - eps) * exact <= one && one <= exact && (1.0 - eps) * exact <= two && two <= 2.0 * exact;
        let line = format!("trial {trial} n={n} eps={eps}: exact={exact:.5} k1={one:.5} k2={two:.5}");
        if !ok {
            return Err(line);
        }
        lines.push(line);
    }
    Ok(format!("20 graphs within bounds; last: {}", lines.last().unwrap()))
}

fn wspd_checks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let mut total_pairs = 0;
    for n in [20, 100, 500] {
        let ps = uniform(n, 2, 600 + n as u64);
        let tree = SplitTree::build(&ps).unwrap();
        for s in [2.0, 8.0, 50.0] {
            let pairs = compute_wspd(&tree, s).unwrap();
            total_pairs += pairs.len();
            let mut covered = vec![false; n * n];
            for pair in &pairs {
                let (a, b) = (tree.points(pair.a), tree.points(pair.b));
                for &x in a {
                    for &y in b {
                        let k = x.min(y) * n + x.max(y);
                        if x == y || covered[k] {
                            return Err(format!("n={n} s={s}: pair ({x},{y}) covered twice"));
                        }
                        covered[k] = true;
                    }
                }
                for _ in 0..100 {
                    let (x, x2) = (a[rng.random_range(0..a.len())], a[rng.random_range(0..a.len())]);
                    let (y, y2) = (b[rng.random_range(0..b.len())], b[rng.random_range(0..b.len())]);
                    let ab = ps.dist(x, y);
                    if !(ps.dist(x, x2) <= 2.0 / s * ab && ps.dist(y, y2) <= 2.0 / s * ab) {
                        return Err(format!("n={n} s={s}: property (i) fails on ({x},{x2},{y})"));
                    }
                    if !(ps.dist(x2, y2) <= (1.0 + 4.0 / s) * ab) {
                        return Err(format!("n={n} s={s}: property (ii) fails on ({x},{x2},{y},{y2})"));
                    }
                }
            }
            let count = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| covered[i * n + j]).count();
            if count != n * (n - 1) / 2 {
                return Err(format!("n={n} s={s}: {count} of {} pairs covered", n * (n - 1) / 2));
            }
        }
    }
    Ok(format!("9 decompositions, {total_pairs} pairs, every point pair covered once"))
}

fn oracle_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst = 0.0f64;
    for trial in 0..10u64 {
        let n = 40 + 10 * trial as usize;
        let ps = uniform(n, 2, 700 + trial);
        let g = random_strong_orientation(n, n, &mut rng);
        let fw = floyd_warshall(&ps, &g);
        let bf = bellman_ford_apsp(&ps, &g);
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (fw.get(i, j), bf.get(i, j));
                let rel = if a == b { 0.0 } else { (a - b).abs() / a.abs().max(b.abs()) };
                worst = worst.max(rel);
                if !(rel <= 1e-12) {
                    return Err(format!("trial {trial} ({i},{j}): {a} vs {b}"));
                }
            }
        }
    }
    let ps = uniform(300, 3, 4321);
    let mut seen = HashSet::new();
    for _ in 0..10_000 {
        let p = rng.random_range(0..300);
        let q = (p + rng.random_range(1..300)) % 300;
        let a = exact_min_triangle(&ps, p, q).unwrap();
        let b = scan_min_triangle(&ps, p, q).unwrap();
        if a.r != b.r || a.perimeter.to_bits() != b.perimeter.to_bits() {
            return Err(format!("({p},{q}): r {} vs {}", a.r, b.r));
        }
        seen.insert((p, q));
    }
    Ok(format!(
        "FW vs BF worst relative gap {worst:e}; 10000 triangle scans identical ({} distinct pairs)",
        seen.len()
    ))
}

fn ann_contract() -> Outcome {
    let mut summary = Vec::new();
    for eps in [0.0, 0.5] {
        let ps = Arc::new(uniform(600, 2, 88));
        let mut rng = ChaCha8Rng::seed_from_u64(99 + (eps * 10.0) as u64);
        let mut members: Vec<bool> = (0..600).map(|i| i % 2 == 0).collect();
        let mut index = AnnIndex::with_members(ps.clone(), (0..600).filter(|i| i % 2 == 0).collect());
        let (mut queries, mut worst) = (0, 1.0f64);
        for _ in 0..10_000 {
            let i = rng.random_range(0..600);
            match rng.random_range(0..3) {
                0 if members[i] => {
                    index.delete(i).unwrap();
                    members[i] = false;
                }
                0 | 1 if !members[i] => {
                    index.insert(i).unwrap();
                    members[i] = true;
                }
                _ => {
                    let q = [rng.random_range(-0.2..1.2), rng.random_range(-0.2..1.2)];
                    let best = (0..600)
                        .filter(|&j| members[j])
                        .map(|j| dist(&q, ps.point(j)))
                        .fold(f64::INFINITY, f64::min);
                    match index.query(&q, eps) {
                        Ok(j) => {
                            queries += 1;
                            let got = dist(&q, ps.point(j));
                            if !members[j] || !(got <= (1.0 + eps) * best) {
                                return Err(format!("eps={eps}: returned {j} at {got}, nearest {best}"));
                            }
                            if best > 0.0 {
                                worst = worst.max(got / best);
                            }
                        }
                        Err(e) if best.is_infinite() => drop(e),
                        Err(e) => return Err(e.to_string()),
                    }
                }
            }
        }
        summary.push(format!("eps={eps}: {queries} queries, worst {worst:.4}"));
    }
    Ok(format!("10000 ops per eps; {}", summary.join(", ")))
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn main() {
    let t0 = Instant::now();
    let results: Vec<(&str, Outcome, f64)> = std::thread::scope(|scope| {
        let timed = |f: fn() -> Outcome| {
            move || {
                let t = Instant::now();
                let r = f();
                (r, t.elapsed().as_secs_f64())
            }
        };
        let spanner = scope.spawn(|| {
            let t = Instant::now();
            let r = spanner_runs();
            (r, t.elapsed().as_secs_f64())
        });
        let jobs: Vec<(&str, _)> = vec![
            ("four-point lower bound", scope.spawn(timed(four_point_bound))),
            ("practical edge density", scope.spawn(timed(practical_edge_density))),
            ("approximate minimum triangle", scope.spawn(timed(triangle_queries))),
            ("approximate dilation sandwich", scope.spawn(timed(sandwich))),
            ("WSPD correctness", scope.spawn(timed(wspd_checks))),
            ("oracle cross-agreement", scope.spawn(timed(oracle_agreement))),
            ("ANN contract", scope.spawn(timed(ann_contract))),
        ];
        let mut done: Vec<(&str, Outcome, f64)> =
            jobs.into_iter().map(|(name, h)| { let (r, t) = h.join().unwrap(); (name, r, t) }).collect();
        let ((dil, per_triple), t) = spanner.join().unwrap();
        done.insert(1, ("spanner dilation bound", dil, t));
        done.insert(3, ("per-triple walk bound", per_triple, t));
        done
    });
    let mut failed = 0;
    for (i, (name, outcome, secs)) in results.iter().enumerate() {
        match outcome {
            Ok(msg) => println!("PASS [{}] {name} ({secs:.1}s): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL [{}] {name} ({secs:.1}s): {msg}", i + 1)
            }
        }
    }
    println!("{} of {} criteria passed in {:.1}s", results.len() - failed, results.len(), t0.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}

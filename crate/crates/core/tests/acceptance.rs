//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Oracle comparisons are exact; the scaling gate bounds wall-time
//! growth across doublings of the input size.
//!
//! The tests share a lock so the scaling measurements are not disturbed by
//! concurrent sweeps.

use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bubblegraph::feedback::{feedback_arcs_directed, feedback_edges_tipless_bidirected};
use bubblegraph::graph::{BidirectedGraph, DirectedGraph, GraphBuilder, Sign, UndirectedView};
use bubblegraph::oracle;
use bubblegraph::report::NamedSide;
use bubblegraph::snarls::find_snarl_representation;
use bubblegraph::superbubbles::find_superbubbles;
use bubblegraph::ultrabubbles::find_ultrabubbles;

fn lock() -> MutexGuard<'static, ()> {
    static LOCK: OnceLock<Mutex<()>> = OnceLock::new();
    LOCK.get_or_init(|| Mutex::new(()))
        .lock()
        .unwrap_or_else(|e| e.into_inner())
}

fn passfail(criterion: &str, ok: bool) {
    println!("[{}] {}", if ok { "PASS" } else { "FAIL" }, criterion);
    assert!(ok, "{criterion}");
}

fn superbubble_names(d: &DirectedGraph) -> Vec<(String, String)> {
    let mut v: Vec<(String, String)> =
        find_superbubbles(d).into_iter().map(|r| (r.entry, r.exit)).collect();
    v.sort();
    v
}

fn oracle_superbubble_names(d: &DirectedGraph) -> Vec<(String, String)> {
    let mut v: Vec<(String, String)> = oracle::oracle_superbubbles(d)
        .into_iter()
        .map(|(s, t)| (d.name(s).to_string(), d.name(t).to_string()))
        .collect();
    v.sort();
    v
}

fn named_pairs(
    g: &BidirectedGraph,
    pairs: Vec<(bubblegraph::graph::VertexSide, bubblegraph::graph::VertexSide)>,
) -> Vec<(NamedSide, NamedSide)> {
    let mut v: Vec<(NamedSide, NamedSide)> = pairs
        .into_iter()
        .map(|(a, b)| {
            let an = (g.name(a.vertex).to_string(), a.sign);
            let bn = (g.name(b.vertex).to_string(), b.sign);
            if an <= bn {
                (an, bn)
            } else {
                (bn, an)
            }
        })
        .collect();
    v.sort();
    v
}

fn digraph_from_mask(n: usize, slots: &[(u32, u32)], pick: impl Fn(usize) -> bool) -> DirectedGraph {
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.intern(&format!("v{i}"));
    }
    for (i, &(u, v)) in slots.iter().enumerate() {
        if pick(i) {
            b.add_edge(u, Sign::Plus, v, Sign::Minus).unwrap();
        }
    }
    b.build().as_directed().unwrap()
}

/// Criterion 1: superbubble oracle equivalence, exhaustively for 4 vertices,
/// over an edge-probability grid for 5 and 6 vertices, and on 1000 seeded
/// random digraphs with up to 12 vertices.
#[test]
fn criterion_1_superbubble_oracle_equivalence() {
    let _g = lock();
    // exhaustive on 4 vertices
    let slots4: Vec<(u32, u32)> = (0..4u32)
        .flat_map(|i| (0..4u32).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    for mask in 0u32..(1 << slots4.len()) {
        let d = digraph_from_mask(4, &slots4, |i| mask >> i & 1 == 1);
        assert_eq!(superbubble_names(&d), oracle_superbubble_names(&d), "mask {mask:#b}");
    }
    // probability grid on 5 and 6 vertices
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for n in [5usize, 6] {
        let slots: Vec<(u32, u32)> = (0..n as u32)
            .flat_map(|i| (0..n as u32).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        for p10 in 1..=9u32 {
            for _ in 0..120 {
                let p = p10 as f64 / 10.0;
                let picks: Vec<bool> = (0..slots.len()).map(|_| rng.gen_bool(p)).collect();
                let d = digraph_from_mask(n, &slots, |i| picks[i]);
                assert_eq!(superbubble_names(&d), oracle_superbubble_names(&d));
            }
        }
    }
    // 1000 seeded random digraphs up to 12 vertices
    for seed in 0..1000u64 {
        let n = 4 + (seed as usize % 9);
        let m = n + (seed as usize % (2 * n));
        let d = oracle::gen_random_digraph(n, m, seed).unwrap();
        assert_eq!(superbubble_names(&d), oracle_superbubble_names(&d), "seed {seed}");
    }
    passfail("criterion 1: superbubble oracle equivalence (exact)", true);
}

fn fig_style_fixtures() -> Vec<BidirectedGraph> {
    let build = |edges: &[(&str, Sign, &str, Sign)]| {
        let mut b = GraphBuilder::new();
        for &(u, su, v, sv) in edges {
            b.add_edge_by_name(u, su, v, sv).unwrap();
        }
        b.build()
    };
    use Sign::{Minus as M, Plus as P};
    vec![
        // path with a sign-consistent cutvertex
        build(&[("a", P, "b", M), ("b", P, "c", M)]),
        // P-node partition: two branches out of a+, one back branch
        build(&[
            ("a", P, "x", M),
            ("x", P, "b", M),
            ("a", P, "y", M),
            ("y", P, "b", M),
            ("b", P, "z", M),
            ("z", P, "a", M),
        ]),
        // two rigid parts glued at a separation pair with opposite signs
        build(&[
            ("c", P, "p", M),
            ("p", P, "d", M),
            ("c", P, "q", M),
            ("q", P, "d", M),
            ("p", P, "q", M),
            ("c", M, "r", M),
            ("r", P, "d", P),
            ("c", M, "s", M),
            ("s", P, "d", P),
            ("r", P, "s", M),
        ]),
        // an edge snarl inside a rigid block
        build(&[
            ("u", P, "v", M),
            ("u", M, "x", P),
            ("u", M, "y", P),
            ("v", P, "x", M),
            ("v", P, "y", M),
            ("x", P, "y", M),
        ]),
        // mixed cutvertex that must not be split
        build(&[
            ("a", P, "d", M),
            ("d", P, "a", M),
            ("d", P, "e", M),
            ("e", P, "d", M),
        ]),
        // multi-bridge hosting edge snarls whose component spans blocks
        build(&[
            ("x", P, "w", M),
            ("x", M, "w", P),
            ("w", P, "y", M),
            ("w", P, "z", M),
            ("y", P, "z", M),
            ("z", P, "y", P),
        ]),
    ]
}

/// Criterion 2: snarl representation equivalence on 2000 seeded random
/// bidirected graphs with up to 5 vertices plus the hand-built fixtures.
#[test]
fn criterion_2_snarl_representation_equivalence() {
    let _g = lock();
    for g in fig_style_fixtures() {
        let got = find_snarl_representation(&g).expand();
        let want = named_pairs(&g, oracle::oracle_snarls(&g));
        assert_eq!(got, want, "fixture {:?}", g.edges());
    }
    for seed in 0..2000u64 {
        let n = 2 + (seed as usize % 4); // 2..=5
        let slots = 4 * n * (n - 1) / 2;
        let m = 1 + (seed as usize % slots);
        let g = oracle::gen_random_bidirected(n, m, seed).unwrap();
        let got = find_snarl_representation(&g).expand();
        let want = named_pairs(&g, oracle::oracle_snarls(&g));
        assert_eq!(got, want, "seed {seed} graph {:?}", g.edges());
    }
    passfail("criterion 2: snarl representation oracle equivalence (exact)", true);
}

/// Criterion 3: ultrabubble oracle equivalence on the same instance
/// families, plus containment of every ultrabubble in the expanded snarls.
#[test]
fn criterion_3_ultrabubble_oracle_equivalence() {
    let _g = lock();
    let check = |g: &BidirectedGraph, label: &str| {
        let mut got: Vec<(NamedSide, NamedSide)> =
            find_ultrabubbles(g).into_iter().map(|r| (r.a, r.b)).collect();
        got.sort();
        let want = named_pairs(g, oracle::oracle_ultrabubbles(g));
        assert_eq!(got, want, "{label} graph {:?}", g.edges());
        let snarls = find_snarl_representation(g).expand();
        for p in &got {
            assert!(snarls.contains(p), "{label}: ultrabubble {p:?} missing from snarls");
        }
    };
    for (i, g) in fig_style_fixtures().iter().enumerate() {
        check(g, &format!("fixture {i}"));
    }
    for seed in 0..2000u64 {
        let n = 2 + (seed as usize % 4);
        let slots = 4 * n * (n - 1) / 2;
        let m = 1 + (seed as usize % slots);
        let g = oracle::gen_random_bidirected(n, m, seed).unwrap();
        check(&g, &format!("seed {seed}"));
    }
    passfail("criterion 3: ultrabubble oracle equivalence and snarl containment (exact)", true);
}

/// Criterion 4: linear-size representation on tip cliques; the expanded
/// pair count is quadratic while the encoding stays linear.
#[test]
fn criterion_4_tip_clique_representation_size() {
    let _g = lock();
    for m in [10usize, 100, 1000] {
        let g = oracle::gen_tip_clique(m);
        let rep = find_snarl_representation(&g);
        assert_eq!(rep.tip_entries(), m, "tip entries for m={m}");
        assert_eq!(rep.pairs.len(), 0, "explicit pairs for m={m}");
        assert_eq!(rep.expand().len(), m * (m - 1) / 2, "expanded count for m={m}");
    }
    passfail("criterion 4: tip-clique representation size bounds (exact)", true);
}

/// Criterion 5: feedback routines equal the remove-and-test oracles on 500
/// seeded instances each.
#[test]
fn criterion_5_feedback_correctness() {
    let _g = lock();
    for seed in 0..500u64 {
        let n = 4 + (seed as usize % 47); // up to 50
        let m = n + (seed as usize % (2 * n));
        let d = oracle::gen_random_digraph(n, m, seed).unwrap();
        let mut got = feedback_arcs_directed(&d).edges;
        got.sort_unstable();
        let mut want = oracle::oracle_feedback_arcs(&d);
        want.sort_unstable();
        assert_eq!(got, want, "directed seed {seed}");
    }
    for seed in 0..500u64 {
        let n = 3 + (seed as usize % 8); // up to 10
        let m = n + (seed as usize % n);
        let g = oracle::gen_random_tipless(n, m, seed).unwrap();
        let mut got = feedback_edges_tipless_bidirected(&g).unwrap().edges;
        got.sort_unstable();
        let want = oracle::oracle_feedback_edges(&g);
        assert_eq!(got, want, "bidirected seed {seed} graph {:?}", g.edges());
    }
    passfail("criterion 5: feedback arc/edge oracle equivalence (exact)", true);
}

/// Criterion 6: the tripartite reduction has a feedback edge exactly when
/// the tripartite graph is triangle-free; exhaustive for parts of size <= 2.
#[test]
fn criterion_6_hardness_reduction_property() {
    let _g = lock();
    let mut tested = 0usize;
    for a in 0..=2usize {
        for b in 0..=2usize {
            for c in 0..=2usize {
                let mut slots = Vec::new();
                for i in 0..a as u32 {
                    for j in 0..b as u32 {
                        slots.push(((0u8, i), (1u8, j)));
                    }
                }
                for i in 0..a as u32 {
                    for j in 0..c as u32 {
                        slots.push(((0u8, i), (2u8, j)));
                    }
                }
                for i in 0..b as u32 {
                    for j in 0..c as u32 {
                        slots.push(((1u8, i), (2u8, j)));
                    }
                }
                for mask in 0u32..(1 << slots.len()) {
                    let edges: Vec<_> = slots
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &e)| e)
                        .collect();
                    let g3 = oracle::TripartiteGraph::new([a, b, c], edges).unwrap();
                    let reduced = oracle::reduce_tripartite(&g3);
                    let feedback_empty = oracle::oracle_feedback_edges(&reduced).is_empty();
                    assert_eq!(
                        feedback_empty,
                        g3.has_triangle(),
                        "parts ({a},{b},{c}) mask {mask:#b}"
                    );
                    tested += 1;
                }
            }
        }
    }
    assert!(tested > 5000, "exhausted {tested} tripartite graphs");
    passfail("criterion 6: hardness-reduction feedback property (exact, exhaustive)", true);
}

/// Criterion 7: tree-derived separation pairs equal brute force on 500
/// seeded 2-connected graphs with up to 9 vertices.
#[test]
fn criterion_7_spqr_separation_pair_completeness() {
    let _g = lock();
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    let mut tested = 0usize;
    while tested < 500 {
        let n = rng.gen_range(3..=9usize);
        let m = rng.gen_range(n..=3 * n);
        let ends: Vec<(u32, u32)> = (0..m)
            .map(|_| {
                let a = rng.gen_range(0..n as u32);
                let mut b = rng.gen_range(0..n as u32 - 1);
                if b >= a {
                    b += 1;
                }
                (a, b)
            })
            .collect();
        let view = UndirectedView { vertex_count: n, ends };
        if !is_biconnected(&view) {
            continue;
        }
        let tree = bubblegraph::connectivity::spqr_tree(&view).unwrap();
        assert_eq!(
            tree.separation_pairs(),
            brute_separation_pairs(&view),
            "graph {:?}",
            view.ends
        );
        tested += 1;
    }
    passfail("criterion 7: SPQR separation-pair completeness (exact, 500 samples)", true);
}

fn component_count(v: &UndirectedView, removed: &[u32]) -> usize {
    let sub = UndirectedView {
        vertex_count: v.vertex_count,
        ends: v
            .ends
            .iter()
            .copied()
            .filter(|&(a, b)| !removed.contains(&a) && !removed.contains(&b))
            .collect(),
    };
    let comp = oracle::undirected_components(&sub);
    let mut ids: Vec<u32> = (0..v.vertex_count as u32)
        .filter(|x| !removed.contains(x))
        .map(|x| comp[x as usize])
        .collect();
    ids.sort_unstable();
    ids.dedup();
    ids.len()
}

fn is_biconnected(v: &UndirectedView) -> bool {
    v.vertex_count >= 3
        && component_count(v, &[]) == 1
        && (0..v.vertex_count as u32).all(|x| component_count(v, &[x]) == 1)
}

fn brute_separation_pairs(v: &UndirectedView) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for a in 0..v.vertex_count as u32 {
        for b in (a + 1)..v.vertex_count as u32 {
            if component_count(v, &[a, b]) > 1 {
                out.push((a, b));
            }
        }
    }
    out
}

/// Criterion 8: wall time of each finder grows by at most a factor of 3 per
/// doubling of the edge count, with an absolute budget of 60 s per run.
#[test]
fn criterion_8_linear_scaling_gate() {
    let _g = lock();
    let sizes = [250_000usize, 500_000, 1_000_000];
    let budget = Duration::from_secs(60);
    let floor_ms = 80.0; // measurement noise floor

    let mut ok = true;
    let mut report = String::new();

    // two timed runs per size; the minimum damps cache and scheduler noise
    fn timed<T>(budget: Duration, ok: &mut bool, mut f: impl FnMut() -> T) -> (f64, T) {
        let t0 = Instant::now();
        let out = f();
        let first = t0.elapsed();
        let t1 = Instant::now();
        let _ = f();
        let second = t1.elapsed();
        *ok &= first < budget && second < budget;
        (first.min(second).as_secs_f64() * 1e3, out)
    }

    // digraph side: superbubbles and feedback arcs
    let mut times_sb = Vec::new();
    let mut times_fa = Vec::new();
    for (i, &m) in sizes.iter().enumerate() {
        let n = (2 * m) / 3;
        let d = oracle::gen_random_digraph(n, m, 4242 + i as u64).unwrap();
        let (t_sb, sb) = timed(budget, &mut ok, || find_superbubbles(&d));
        let (t_fa, fa) = timed(budget, &mut ok, || feedback_arcs_directed(&d));
        report += &format!(
            "  |E|={m}: superbubbles {t_sb:.0} ms ({} reports), feedback-arcs {t_fa:.0} ms ({} arcs)\n",
            sb.len(),
            fa.edges.len()
        );
        times_sb.push(t_sb);
        times_fa.push(t_fa);
    }
    // bidirected side: snarls and ultrabubbles
    let mut times_sn = Vec::new();
    let mut times_ub = Vec::new();
    for (i, &m) in sizes.iter().enumerate() {
        let n = (2 * m) / 3;
        let g = oracle::gen_random_bidirected(n, m, 999 + i as u64).unwrap();
        let (t_sn, rep) = timed(budget, &mut ok, || find_snarl_representation(&g));
        let (t_ub, ub) = timed(budget, &mut ok, || find_ultrabubbles(&g));
        report += &format!(
            "  |E|={m}: snarls {t_sn:.0} ms (size {}), ultrabubbles {t_ub:.0} ms ({} reports)\n",
            rep.size(),
            ub.len()
        );
        times_sn.push(t_sn);
        times_ub.push(t_ub);
    }
    for (name, times) in [
        ("superbubbles", &times_sb),
        ("feedback-arcs", &times_fa),
        ("snarls", &times_sn),
        ("ultrabubbles", &times_ub),
    ] {
        for w in times.windows(2) {
            let (a, b) = (w[0].max(floor_ms), w[1]);
            if b > 3.0 * a {
                ok = false;
                report += &format!("  {name}: growth {:.0} -> {:.0} ms exceeds 3x\n", w[0], w[1]);
            }
        }
    }
    print!("{report}");
    passfail("criterion 8: linear scaling gate (<= 3x per doubling, <= 60 s per run)", ok);
}

/// Criterion 9: on digraphic inputs, ultrabubbles with the back-edge
/// condition re-imposed coincide with the superbubbles of the directed
/// interpretation.
#[test]
fn criterion_9_directed_bidirected_consistency() {
    let _g = lock();
    for seed in 0..500u64 {
        let n = 4 + (seed as usize % 7); // up to 10
        let m = n + (seed as usize % (2 * n));
        let d = oracle::gen_random_digraph(n, m, 31_000 + seed).unwrap();
        let g = d.to_bidirected();

        // re-impose the back-edge condition on the ultrabubbles and map
        // {s+, t-} pairs to directed (s, t) pairs
        let mut mapped: Vec<(String, String)> = Vec::new();
        for r in find_ultrabubbles(&g) {
            let (s, t) = match ((r.a.1), (r.b.1)) {
                (Sign::Plus, Sign::Minus) => (r.a.0.clone(), r.b.0.clone()),
                (Sign::Minus, Sign::Plus) => (r.b.0.clone(), r.a.0.clone()),
                _ => panic!("digraphic graphs admit only opposite-sign ultrabubbles: {r:?}"),
            };
            let sv = d.vertex_by_name(&s).unwrap();
            let tv = d.vertex_by_name(&t).unwrap();
            if d.has_arc(tv, sv) {
                continue; // the re-imposed back-edge condition
            }
            mapped.push((s, t));
        }
        mapped.sort();
        mapped.dedup();
        assert_eq!(mapped, superbubble_names(&d), "seed {seed}");
    }
    passfail("criterion 9: directed/bidirected consistency (exact, 500 samples)", true);
}

//! Brute-force definitional checkers and seeded instance generators.
//!
//! Everything in here favors literal fidelity to the definitions over speed
//! and is the ground truth for the property and acceptance tests. The cycloid
//! enumeration is guarded by [`ORACLE_VERTEX_LIMIT`]; exceeding it is a usage
//! error, not silent slowness.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{
    BidirectedGraph, Cycloid, DirectedGraph, EdgeId, GraphBuilder, Sign, VertexId, VertexSide,
};
use crate::GraphError;

/// Hard cap for the exponential-time cycloid enumeration.
pub const ORACLE_VERTEX_LIMIT: usize = 16;

// ---------------------------------------------------------------------------
// Reachability helpers (directed)
// ---------------------------------------------------------------------------

/// Vertices reachable from `start`, optionally treating `avoid` as deleted.
/// If `start == avoid` the result is empty.
pub fn reach_avoiding(d: &DirectedGraph, start: VertexId, avoid: Option<VertexId>) -> Vec<bool> {
    let n = d.vertex_count();
    let mut seen = vec![false; n];
    if Some(start) == avoid {
        return seen;
    }
    let mut stack = vec![start];
    seen[start as usize] = true;
    while let Some(v) = stack.pop() {
        for a in d.out_arcs(v) {
            if Some(a.head) == avoid || seen[a.head as usize] {
                continue;
            }
            seen[a.head as usize] = true;
            stack.push(a.head);
        }
    }
    seen
}

/// Vertices that reach `target`.
pub fn co_reach(d: &DirectedGraph, target: VertexId) -> Vec<bool> {
    let n = d.vertex_count();
    let mut seen = vec![false; n];
    let mut stack = vec![target];
    seen[target as usize] = true;
    while let Some(v) = stack.pop() {
        for a in d.in_arcs(v) {
            if !seen[a.tail as usize] {
                seen[a.tail as usize] = true;
                stack.push(a.tail);
            }
        }
    }
    seen
}

/// Directed acyclicity with an optional deleted arc (by arc index).
pub fn directed_acyclic_without(d: &DirectedGraph, skip: Option<usize>) -> bool {
    let n = d.vertex_count();
    // iterative three-color DFS
    let mut color = vec![0u8; n];
    let adj: Vec<Vec<VertexId>> = {
        let mut adj = vec![Vec::new(); n];
        for (i, a) in d.arcs().iter().enumerate() {
            if Some(i) != skip {
                adj[a.tail as usize].push(a.head);
            }
        }
        adj
    };
    let mut stack: Vec<(VertexId, usize)> = Vec::new();
    for s in 0..n as u32 {
        if color[s as usize] != 0 {
            continue;
        }
        color[s as usize] = 1;
        stack.push((s, 0));
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < adj[v as usize].len() {
                let w = adj[v as usize][*i];
                *i += 1;
                match color[w as usize] {
                    0 => {
                        color[w as usize] = 1;
                        stack.push((w, 0));
                    }
                    1 => return false,
                    _ => {}
                }
            } else {
                color[v as usize] = 2;
                stack.pop();
            }
        }
    }
    true
}

pub fn directed_acyclic(d: &DirectedGraph) -> bool {
    directed_acyclic_without(d, None)
}

// ---------------------------------------------------------------------------
// Cycloid search
// ---------------------------------------------------------------------------

/// Finds a cycloid by enumerating vertex-simple closed walks, or `None` if
/// the graph is acyclic in the bidirected sense.
pub fn oracle_has_cycloid(g: &BidirectedGraph) -> Option<Cycloid> {
    assert!(
        g.vertex_count() <= ORACLE_VERTEX_LIMIT,
        "oracle_has_cycloid is a brute-force check; refusing {} vertices (limit {})",
        g.vertex_count(),
        ORACLE_VERTEX_LIMIT
    );
    // Canonical start: the smallest vertex on the cycle. Only vertices >= s
    // may appear, so each cycle is tried from a bounded number of states.
    let n = g.vertex_count() as u32;
    for s in 0..n {
        let mut on_path = vec![false; n as usize];
        on_path[s as usize] = true;
        for sign in [Sign::Plus, Sign::Minus] {
            for &e0 in g.incident(s, sign) {
                let first = g.edge(e0);
                let w = first.other(s);
                if w.vertex < s {
                    continue;
                }
                let mut edges = vec![e0];
                if let Some(cyc) = extend_cycloid(
                    g,
                    s,
                    sign,
                    w.vertex,
                    w.sign,
                    None,
                    &mut on_path,
                    &mut edges,
                ) {
                    return Some(cyc);
                }
            }
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn extend_cycloid(
    g: &BidirectedGraph,
    start: VertexId,
    start_sign: Sign,
    v: VertexId,
    arrive: Sign,
    exceptional: Option<VertexId>,
    on_path: &mut Vec<bool>,
    edges: &mut Vec<EdgeId>,
) -> Option<Cycloid> {
    // Try to close the walk at `start`.
    for sign in [Sign::Plus, Sign::Minus] {
        if sign == arrive && exceptional.is_some() {
            continue; // would need a second exceptional vertex at v
        }
        let exc_v = if sign == arrive { Some(v) } else { exceptional };
        for &e in g.incident(v, sign) {
            let other = g.edge(e).other(v);
            if other.vertex != start {
                continue;
            }
            if edges.len() == 1 && e == edges[0] {
                continue; // a single edge traversed twice is not a walk
            }
            // Alternation at the closure vertex.
            let exc = if other.sign == start_sign {
                if exc_v.is_some() {
                    continue;
                }
                Some(start)
            } else {
                exc_v
            };
            let mut seq = edges.clone();
            seq.push(e);
            return Some(Cycloid { edges: seq, exceptional_vertex: exc });
        }
    }
    // Extend to unvisited vertices above the canonical start.
    for sign in [Sign::Plus, Sign::Minus] {
        if sign == arrive && exceptional.is_some() {
            continue;
        }
        let exc_v = if sign == arrive { Some(v) } else { exceptional };
        for &e in g.incident(v, sign) {
            let other = g.edge(e).other(v);
            if other.vertex <= start || on_path[other.vertex as usize] {
                continue;
            }
            on_path[other.vertex as usize] = true;
            edges.push(e);
            if let Some(cyc) =
                extend_cycloid(g, start, start_sign, other.vertex, other.sign, exc_v, on_path, edges)
            {
                return Some(cyc);
            }
            edges.pop();
            on_path[other.vertex as usize] = false;
        }
    }
    None
}

/// Validates that `cyc` really is a cycloid of `g` (used in tests).
pub fn check_cycloid(g: &BidirectedGraph, cyc: &Cycloid) -> bool {
    let k = cyc.edges.len();
    if k < 2 {
        return false;
    }
    // Reconstruct the vertex sequence.
    let e0 = g.edge(cyc.edges[0]);
    let e1 = g.edge(cyc.edges[1]);
    let shared = if e0.a.vertex == e1.a.vertex || e0.a.vertex == e1.b.vertex {
        e0.a.vertex
    } else {
        e0.b.vertex
    };
    let start = e0.other(shared).vertex;
    let mut vseq = vec![start];
    let mut cur = start;
    for &e in &cyc.edges {
        cur = g.edge(e).other(cur).vertex;
        vseq.push(cur);
    }
    if *vseq.last().unwrap() != start {
        return false;
    }
    let interior = &vseq[1..k];
    let mut distinct: HashSet<VertexId> = interior.iter().copied().collect();
    distinct.insert(start);
    if distinct.len() != k {
        return false;
    }
    let mut exceptional = 0;
    for i in 0..k {
        let at = vseq[(i + 1) % (k + 1)];
        let at = if i + 1 == k { start } else { at };
        let prev = g.edge(cyc.edges[i]).side_at(at);
        let next = g.edge(cyc.edges[(i + 1) % k]).side_at(at);
        if prev == next {
            exceptional += 1;
        }
    }
    exceptional <= 1
}

// ---------------------------------------------------------------------------
// Superbubbloids / superbubbles
// ---------------------------------------------------------------------------

/// Checks the six superbubbloid conditions literally; on success returns the
/// vertex set `X` of the superbubbloid graph.
pub fn oracle_is_superbubbloid(
    d: &DirectedGraph,
    s: VertexId,
    t: VertexId,
) -> Option<Vec<VertexId>> {
    if s == t {
        return None;
    }
    let n = d.vertex_count();
    // X = vertices reachable from s without passing through t, plus t.
    let mut in_x = reach_avoiding(d, s, Some(t));
    in_x[t as usize] = true;

    // 1. every u in X is reachable from s
    let rs = reach_avoiding(d, s, None);
    for u in 0..n {
        if in_x[u] && !rs[u] {
            return None;
        }
    }
    // 2. t is reachable from every u in X
    let rt = co_reach(d, t);
    for u in 0..n {
        if in_x[u] && !rt[u] {
            return None;
        }
    }
    // 3. w outside, u inside: every w-u path contains s
    for w in 0..n as u32 {
        if in_x[w as usize] {
            continue;
        }
        let rw = reach_avoiding(d, w, Some(s));
        for u in 0..n {
            if in_x[u] && u != s as usize && rw[u] {
                return None;
            }
        }
    }
    // 4. u inside, w outside: every u-w path contains t
    for u in 0..n as u32 {
        if !in_x[u as usize] || u == t {
            continue;
        }
        let ru = reach_avoiding(d, u, Some(t));
        for w in 0..n {
            if !in_x[w] && ru[w] {
                return None;
            }
        }
    }
    // 5. uv an edge of G[X]: every v-u path contains both t and s
    for a in d.arcs() {
        if in_x[a.tail as usize] && in_x[a.head as usize] {
            let no_s = reach_avoiding(d, a.head, Some(s));
            let no_t = reach_avoiding(d, a.head, Some(t));
            if no_s[a.tail as usize] || no_t[a.tail as usize] {
                return None;
            }
        }
    }
    // 6. no edge ts
    if d.has_arc(t, s) {
        return None;
    }
    Some((0..n as u32).filter(|&u| in_x[u as usize]).collect())
}

/// Superbubbloid plus entry minimality.
pub fn oracle_is_superbubble(d: &DirectedGraph, s: VertexId, t: VertexId) -> bool {
    let Some(x) = oracle_is_superbubbloid(d, s, t) else {
        return false;
    };
    for &s2 in &x {
        if s2 != s && s2 != t && oracle_is_superbubbloid(d, s2, t).is_some() {
            return false;
        }
    }
    true
}

/// Enumerates all superbubbles over all ordered vertex pairs.
pub fn oracle_superbubbles(d: &DirectedGraph) -> Vec<(VertexId, VertexId)> {
    let n = d.vertex_count() as u32;
    let mut out = Vec::new();
    for s in 0..n {
        for t in 0..n {
            if s != t && oracle_is_superbubble(d, s, t) {
                out.push((s, t));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Separability / snarls / ultrabubbles
// ---------------------------------------------------------------------------

/// The component of a separable pair, as the split graph plus the vertex and
/// edge sets (in terms of the original graph's ids) of the component.
pub struct SnarlComponent {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    /// The component as a standalone graph (original vertex names).
    pub subgraph: BidirectedGraph,
}

/// Performs both splits explicitly and checks that `u` and `v` end up in one
/// component that excludes both split copies.
pub fn oracle_is_separable(
    g: &BidirectedGraph,
    us: VertexSide,
    vs: VertexSide,
) -> Option<SnarlComponent> {
    assert_ne!(us.vertex, vs.vertex, "separability requires distinct vertices");
    let (g1, u_copy) = g.split(us);
    let (g2, v_copy) = g1.split(vs);
    let view = g2.underlying_undirected();
    let comp = undirected_components(&view);
    let cu = comp[us.vertex as usize];
    if comp[vs.vertex as usize] != cu
        || comp[u_copy as usize] == cu
        || comp[v_copy as usize] == cu
    {
        return None;
    }
    // Edge ids in g2 correspond one-to-one with edge ids in g.
    let mut vertices = Vec::new();
    for v in 0..g.vertex_count() as u32 {
        if comp[v as usize] == cu {
            vertices.push(v);
        }
    }
    let mut edges = Vec::new();
    let mut sub = GraphBuilder::new();
    for (i, e) in g2.edges().iter().enumerate() {
        if comp[e.a.vertex as usize] == cu {
            edges.push(i as EdgeId);
            let an = sub.intern(g2.name(e.a.vertex));
            let bn = sub.intern(g2.name(e.b.vertex));
            sub.add_edge(an, e.a.sign, bn, e.b.sign).expect("no self loops in split graph");
        }
    }
    // Isolated u or v still belong to the component only if connected; the
    // component test above already handled that.
    Some(SnarlComponent { vertices, edges, subgraph: sub.build() })
}

/// Definitional snarl check: separability plus minimality.
pub fn oracle_is_snarl(g: &BidirectedGraph, us: VertexSide, vs: VertexSide) -> bool {
    let Some(comp) = oracle_is_separable(g, us, vs) else {
        return false;
    };
    snarl_minimal(g, us, vs, &comp.vertices)
}

fn snarl_minimal(
    g: &BidirectedGraph,
    us: VertexSide,
    vs: VertexSide,
    component: &[VertexId],
) -> bool {
    for &z in component {
        if z == us.vertex || z == vs.vertex {
            continue;
        }
        for sign in [Sign::Plus, Sign::Minus] {
            let zg = VertexSide::new(z, sign);
            if oracle_is_separable(g, us, zg).is_some()
                && oracle_is_separable(g, zg.opposite(), vs).is_some()
            {
                return false;
            }
        }
    }
    true
}

/// Definitional ultrabubble check: separable, tipless interior, acyclic
/// component, minimal.
pub fn oracle_is_ultrabubble(g: &BidirectedGraph, us: VertexSide, vs: VertexSide) -> bool {
    let Some(comp) = oracle_is_separable(g, us, vs) else {
        return false;
    };
    let sub = &comp.subgraph;
    for v in sub.vertices() {
        let name = sub.name(v);
        if name == g.name(us.vertex) || name == g.name(vs.vertex) {
            continue;
        }
        if sub.is_tip(v).is_some() {
            return false;
        }
    }
    if oracle_has_cycloid(sub).is_some() {
        return false;
    }
    snarl_minimal(g, us, vs, &comp.vertices)
}

/// Enumerates all snarls over all pairs of vertex-sides.
pub fn oracle_snarls(g: &BidirectedGraph) -> Vec<(VertexSide, VertexSide)> {
    enumerate_pairs(g, |us, vs| oracle_is_snarl(g, us, vs))
}

/// Enumerates all ultrabubbles over all pairs of vertex-sides.
pub fn oracle_ultrabubbles(g: &BidirectedGraph) -> Vec<(VertexSide, VertexSide)> {
    enumerate_pairs(g, |us, vs| oracle_is_ultrabubble(g, us, vs))
}

fn enumerate_pairs(
    g: &BidirectedGraph,
    mut pred: impl FnMut(VertexSide, VertexSide) -> bool,
) -> Vec<(VertexSide, VertexSide)> {
    let n = g.vertex_count() as u32;
    let mut out = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            for su in [Sign::Plus, Sign::Minus] {
                for sv in [Sign::Plus, Sign::Minus] {
                    let us = VertexSide::new(u, su);
                    let vs = VertexSide::new(v, sv);
                    if pred(us, vs) {
                        out.push((us, vs));
                    }
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Remove-and-test feedback oracles
// ---------------------------------------------------------------------------

/// Arcs whose individual removal makes the digraph acyclic. On an acyclic
/// input this is every arc.
pub fn oracle_feedback_arcs(d: &DirectedGraph) -> Vec<EdgeId> {
    (0..d.arc_count())
        .filter(|&i| directed_acyclic_without(d, Some(i)))
        .map(|i| d.arcs()[i].edge)
        .collect()
}

/// Edges whose individual removal makes the bidirected graph cycloid-free.
pub fn oracle_feedback_edges(g: &BidirectedGraph) -> Vec<EdgeId> {
    (0..g.edge_count() as EdgeId)
        .filter(|&i| oracle_has_cycloid(&remove_edge(g, i)).is_none())
        .collect()
}

fn remove_edge(g: &BidirectedGraph, skip: EdgeId) -> BidirectedGraph {
    let mut b = GraphBuilder::new();
    for v in g.vertices() {
        b.intern(g.name(v));
    }
    for (i, e) in g.edges().iter().enumerate() {
        if i as EdgeId != skip {
            b.add_edge(e.a.vertex, e.a.sign, e.b.vertex, e.b.sign).unwrap();
        }
    }
    b.build()
}

// ---------------------------------------------------------------------------
// Undirected components
// ---------------------------------------------------------------------------

/// Component index per vertex of an undirected view.
pub fn undirected_components(view: &crate::graph::UndirectedView) -> Vec<u32> {
    let n = view.vertex_count;
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in &view.ends {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let mut comp = vec![u32::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if comp[s] != u32::MAX {
            continue;
        }
        comp[s] = next;
        let mut stack = vec![s as u32];
        while let Some(v) = stack.pop() {
            for &w in &adj[v as usize] {
                if comp[w as usize] == u32::MAX {
                    comp[w as usize] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    comp
}

// ---------------------------------------------------------------------------
// Hardness-reduction construction
// ---------------------------------------------------------------------------

/// Three disjoint vertex sets with edges only across sets.
#[derive(Clone, Debug)]
pub struct TripartiteGraph {
    pub sizes: [usize; 3],
    /// Edges as ((part, index), (part, index)) with part in 0..3.
    pub edges: Vec<((u8, u32), (u8, u32))>,
}

impl TripartiteGraph {
    pub fn new(sizes: [usize; 3], edges: Vec<((u8, u32), (u8, u32))>) -> Result<Self, GraphError> {
        for &((pu, iu), (pv, iv)) in &edges {
            if pu == pv {
                return Err(GraphError::Input {
                    reason: format!("intra-set edge within part {pu} ({iu}, {iv})"),
                });
            }
            if pu > 2 || pv > 2 {
                return Err(GraphError::Input { reason: "part index out of range".into() });
            }
            if iu as usize >= sizes[pu as usize] || iv as usize >= sizes[pv as usize] {
                return Err(GraphError::Input { reason: "vertex index out of range".into() });
            }
        }
        Ok(TripartiteGraph { sizes, edges })
    }

    /// Does the graph contain a triangle (one vertex per part, all adjacent)?
    pub fn has_triangle(&self) -> bool {
        let has = |pu: u8, iu: u32, pv: u8, iv: u32| {
            self.edges.iter().any(|&(x, y)| {
                (x == (pu, iu) && y == (pv, iv)) || (x == (pv, iv) && y == (pu, iu))
            })
        };
        for a in 0..self.sizes[0] as u32 {
            for b in 0..self.sizes[1] as u32 {
                if !has(0, a, 1, b) {
                    continue;
                }
                for c in 0..self.sizes[2] as u32 {
                    if has(0, a, 2, c) && has(1, b, 2, c) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// The reduction from tripartite triangle finding to bidirected feedback
/// edges: sign patterns encode the part pair, plus an auxiliary directed
/// 3-cycle on fresh vertices x, y, z.
pub fn reduce_tripartite(g3: &TripartiteGraph) -> BidirectedGraph {
    let part_name = |p: u8, i: u32| match p {
        0 => format!("a{i}"),
        1 => format!("b{i}"),
        _ => format!("c{i}"),
    };
    let mut b = GraphBuilder::new();
    for p in 0..3u8 {
        for i in 0..g3.sizes[p as usize] as u32 {
            b.intern(&part_name(p, i));
        }
    }
    for &(x, y) in &g3.edges {
        // Orient so the smaller part comes first.
        let ((pu, iu), (pv, iv)) = if x.0 <= y.0 { (x, y) } else { (y, x) };
        let u = part_name(pu, iu);
        let v = part_name(pv, iv);
        let (su, sv) = match (pu, pv) {
            (0, 1) => (Sign::Minus, Sign::Plus),
            (0, 2) => (Sign::Plus, Sign::Minus),
            (1, 2) => (Sign::Minus, Sign::Minus),
            _ => unreachable!("validated tripartite edge"),
        };
        b.add_edge_by_name(&u, su, &v, sv).unwrap();
    }
    b.add_edge_by_name("x", Sign::Plus, "y", Sign::Minus).unwrap();
    b.add_edge_by_name("y", Sign::Plus, "z", Sign::Minus).unwrap();
    b.add_edge_by_name("z", Sign::Plus, "x", Sign::Minus).unwrap();
    b.build()
}

// ---------------------------------------------------------------------------
// Seeded generators
// ---------------------------------------------------------------------------

/// `m` mutually adjacent vertices joined by all-minus edges; every vertex is
/// a tip, and every pair of tips is a snarl.
pub fn gen_tip_clique(m: usize) -> BidirectedGraph {
    let mut b = GraphBuilder::new();
    for i in 0..m {
        b.intern(&format!("t{i}"));
    }
    for i in 0..m as u32 {
        for j in (i + 1)..m as u32 {
            b.add_edge(i, Sign::Minus, j, Sign::Minus).unwrap();
        }
    }
    b.build()
}

/// Samples `count` distinct values in `0..total` (Floyd's algorithm).
fn sample_distinct(rng: &mut ChaCha8Rng, total: u64, count: u64) -> Vec<u64> {
    use std::collections::HashMap;
    let mut chosen: HashSet<u64> = HashSet::new();
    let mut remap: HashMap<u64, u64> = HashMap::new();
    let mut out = Vec::with_capacity(count as usize);
    for i in (total - count)..total {
        let r = rng.gen_range(0..=i);
        let pick = if chosen.contains(&r) { *remap.get(&r).unwrap_or(&i) } else { r };
        let pick = if chosen.contains(&pick) { i } else { pick };
        chosen.insert(pick);
        remap.insert(r, i);
        out.push(pick);
    }
    out
}

/// Random bidirected graph with `n` vertices and `m` distinct edges, uniform
/// over all non-loop sign patterns. Reproducible from the seed alone.
pub fn gen_random_bidirected(n: usize, m: usize, seed: u64) -> Result<BidirectedGraph, GraphError> {
    let slots = 4 * (n as u64) * (n as u64 - 1) / 2;
    if n < 2 && m > 0 || m as u64 > slots {
        return Err(GraphError::Input {
            reason: format!("cannot place {m} bidirected edges on {n} vertices"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.intern(&format!("v{i}"));
    }
    for slot in sample_distinct(&mut rng, slots, m as u64) {
        let pair = slot / 4;
        let combo = (slot % 4) as usize;
        let (u, v) = unrank_pair(pair, n as u64);
        let signs = [
            (Sign::Plus, Sign::Plus),
            (Sign::Plus, Sign::Minus),
            (Sign::Minus, Sign::Plus),
            (Sign::Minus, Sign::Minus),
        ][combo];
        b.add_edge(u as VertexId, signs.0, v as VertexId, signs.1)?;
    }
    Ok(b.build())
}

/// Random digraph with `m` distinct arcs (no self-loops).
pub fn gen_random_digraph(n: usize, m: usize, seed: u64) -> Result<DirectedGraph, GraphError> {
    let slots = (n as u64) * (n as u64 - 1);
    if m as u64 > slots {
        return Err(GraphError::Input { reason: format!("cannot place {m} arcs on {n} vertices") });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.intern(&format!("v{i}"));
    }
    for slot in sample_distinct(&mut rng, slots, m as u64) {
        let u = slot / (n as u64 - 1);
        let mut v = slot % (n as u64 - 1);
        if v >= u {
            v += 1;
        }
        b.add_edge(u as VertexId, Sign::Plus, v as VertexId, Sign::Minus)?;
    }
    b.build().as_directed()
}

/// Random DAG: arcs respect a random topological order.
pub fn gen_random_dag(n: usize, m: usize, seed: u64) -> Result<DirectedGraph, GraphError> {
    let slots = (n as u64) * (n as u64 - 1) / 2;
    if m as u64 > slots {
        return Err(GraphError::Input {
            reason: format!("cannot place {m} forward arcs on {n} vertices"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(&mut rng);
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.intern(&format!("v{i}"));
    }
    for slot in sample_distinct(&mut rng, slots, m as u64) {
        let (i, j) = unrank_pair(slot, n as u64);
        b.add_edge(order[i as usize], Sign::Plus, order[j as usize], Sign::Minus)?;
    }
    b.build().as_directed()
}

/// Random bidirected graph repaired to have no tips: every vertex that ends
/// up single-signed gets an extra opposite-side edge to a seeded partner.
pub fn gen_random_tipless(n: usize, m: usize, seed: u64) -> Result<BidirectedGraph, GraphError> {
    if n < 2 {
        return Err(GraphError::Input { reason: "tipless graphs need at least two vertices".into() });
    }
    let base = gen_random_bidirected(n, m, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7de3_a1c5_9b42_e8f1);
    let mut b = GraphBuilder::new();
    for v in base.vertices() {
        b.intern(base.name(v));
    }
    for e in base.edges() {
        b.add_edge(e.a.vertex, e.a.sign, e.b.vertex, e.b.sign)?;
    }
    let mut g = b.build();
    loop {
        let tip = g.vertices().find(|&v| g.is_tip(v).is_some());
        let Some(v) = tip else { break };
        let missing = match g.is_tip(v).unwrap() {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        };
        let mut w = rng.gen_range(0..n as u32 - 1);
        if w >= v {
            w += 1;
        }
        let ws = if rng.gen() { Sign::Plus } else { Sign::Minus };
        let mut b = GraphBuilder::new();
        for x in g.vertices() {
            b.intern(g.name(x));
        }
        for e in g.edges() {
            b.add_edge(e.a.vertex, e.a.sign, e.b.vertex, e.b.sign)?;
        }
        b.add_edge(v, missing, w, ws)?;
        g = b.build();
    }
    Ok(g)
}

/// Connected bidirected graph with exactly two tips (the path endpoints),
/// plus seed-determined extra edges that preserve the tip set.
pub fn gen_two_tip_connected(n: usize, seed: u64) -> Result<BidirectedGraph, GraphError> {
    if n < 2 {
        return Err(GraphError::Input { reason: "two tips need at least two vertices".into() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.intern(&format!("v{i}"));
    }
    for i in 0..n as u32 - 1 {
        b.add_edge(i, Sign::Plus, i + 1, Sign::Minus)?;
    }
    let extras = rng.gen_range(0..=n);
    let last = n as u32 - 1;
    for _ in 0..extras {
        let u = rng.gen_range(0..n as u32);
        let v = rng.gen_range(0..n as u32);
        if u == v {
            continue;
        }
        let su = if u == 0 {
            Sign::Plus
        } else if u == last {
            Sign::Minus
        } else if rng.gen() {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let sv = if v == 0 {
            Sign::Plus
        } else if v == last {
            Sign::Minus
        } else if rng.gen() {
            Sign::Plus
        } else {
            Sign::Minus
        };
        b.add_edge(u, su, v, sv)?;
    }
    Ok(b.build())
}

fn unrank_pair(rank: u64, n: u64) -> (u64, u64) {
    // (u, v) with u < v in lexicographic order; closed form with an integer
    // fixup to absorb floating-point error
    let before = |u: u64| u * (2 * n - u - 1) / 2;
    let disc = ((2 * n - 1) * (2 * n - 1)) as f64 - 8.0 * rank as f64;
    let mut u = (((2 * n - 1) as f64 - disc.max(0.0).sqrt()) / 2.0).floor() as u64;
    u = u.min(n - 2);
    while before(u) > rank {
        u -= 1;
    }
    while before(u + 1) <= rank {
        u += 1;
    }
    (u, u + 1 + (rank - before(u)))
}

#[cfg(test)]
mod unrank_tests {
    use super::unrank_pair;

    #[test]
    fn unranking_is_a_bijection() {
        for n in [2u64, 3, 5, 17, 100] {
            let mut seen = std::collections::HashSet::new();
            for r in 0..n * (n - 1) / 2 {
                let (u, v) = unrank_pair(r, n);
                assert!(u < v && v < n, "n={n} r={r} -> ({u},{v})");
                assert!(seen.insert((u, v)));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    fn bd(edges: &[(&str, Sign, &str, Sign)]) -> BidirectedGraph {
        let mut b = GraphBuilder::new();
        for &(u, su, v, sv) in edges {
            b.add_edge_by_name(u, su, v, sv).unwrap();
        }
        b.build()
    }

    #[test]
    fn cycloid_in_mixed_triangle() {
        let g = bd(&[
            ("u", Sign::Plus, "v", Sign::Plus),
            ("v", Sign::Minus, "w", Sign::Plus),
            ("w", Sign::Minus, "u", Sign::Minus),
        ]);
        let cyc = oracle_has_cycloid(&g).expect("triangle cycloid");
        assert!(check_cycloid(&g, &cyc));
    }

    #[test]
    fn no_cycloid_in_two_tip_path() {
        let g = bd(&[
            ("a", Sign::Plus, "b", Sign::Minus),
            ("b", Sign::Plus, "c", Sign::Minus),
        ]);
        assert!(oracle_has_cycloid(&g).is_none());
    }

    #[test]
    fn dag_viewed_bidirected_has_no_cycloid() {
        let d = gen_random_dag(6, 9, 7).unwrap();
        assert!(oracle_has_cycloid(&d.to_bidirected()).is_none());
    }

    #[test]
    fn parallel_pair_cycloid() {
        // Two parallel edges with one shared side form a length-2 cycloid.
        let g = bd(&[
            ("u", Sign::Plus, "v", Sign::Minus),
            ("u", Sign::Plus, "v", Sign::Plus),
        ]);
        let cyc = oracle_has_cycloid(&g).expect("2-cycloid");
        assert_eq!(cyc.edges.len(), 2);
        assert!(check_cycloid(&g, &cyc));
    }

    #[test]
    fn diamond_superbubble() {
        let d = DirectedGraph::from_named_arcs([("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
            .unwrap();
        let a = d.vertex_by_name("a").unwrap();
        let dd = d.vertex_by_name("d").unwrap();
        assert!(oracle_is_superbubble(&d, a, dd));
        assert!(!oracle_is_superbubble(&d, dd, a));
    }

    #[test]
    fn two_cycle_is_not_a_superbubbloid() {
        let d = DirectedGraph::from_named_arcs([("a", "b"), ("b", "a")]).unwrap();
        let a = d.vertex_by_name("a").unwrap();
        let b = d.vertex_by_name("b").unwrap();
        assert!(oracle_is_superbubbloid(&d, a, b).is_none());
    }

    #[test]
    fn chained_diamonds_respect_minimality() {
        // a->(b|c)->d->(e|f)->g: (a,d) and (d,g) are superbubbles, (a,g) is
        // a superbubbloid but not a superbubble.
        let d = DirectedGraph::from_named_arcs([
            ("a", "b"),
            ("a", "c"),
            ("b", "d"),
            ("c", "d"),
            ("d", "e"),
            ("d", "f"),
            ("e", "g"),
            ("f", "g"),
        ])
        .unwrap();
        let a = d.vertex_by_name("a").unwrap();
        let dv = d.vertex_by_name("d").unwrap();
        let g = d.vertex_by_name("g").unwrap();
        assert!(oracle_is_superbubbloid(&d, a, g).is_some());
        assert!(!oracle_is_superbubble(&d, a, g));
        assert!(oracle_is_superbubble(&d, a, dv));
        assert!(oracle_is_superbubble(&d, dv, g));
    }

    #[test]
    fn trivial_edge_superbubble() {
        let d = DirectedGraph::from_named_arcs([("a", "b")]).unwrap();
        let a = d.vertex_by_name("a").unwrap();
        let b = d.vertex_by_name("b").unwrap();
        assert!(oracle_is_superbubble(&d, a, b));
    }

    #[test]
    fn path_sides_are_snarls() {
        let g = bd(&[
            ("a", Sign::Plus, "b", Sign::Minus),
            ("b", Sign::Plus, "c", Sign::Minus),
        ]);
        let a = g.vertex_by_name("a").unwrap();
        let b = g.vertex_by_name("b").unwrap();
        let c = g.vertex_by_name("c").unwrap();
        assert!(oracle_is_snarl(&g, VertexSide::new(a, Sign::Plus), VertexSide::new(b, Sign::Minus)));
        assert!(oracle_is_snarl(&g, VertexSide::new(b, Sign::Plus), VertexSide::new(c, Sign::Minus)));
        // Non-minimal pair: interior b violates minimality.
        assert!(!oracle_is_snarl(&g, VertexSide::new(a, Sign::Plus), VertexSide::new(c, Sign::Minus)));
    }

    #[test]
    fn tip_clique_pairwise_snarls() {
        let g = gen_tip_clique(5);
        let snarls = oracle_snarls(&g);
        assert_eq!(snarls.len(), 10);
        for (us, vs) in snarls {
            assert_eq!(us.sign, Sign::Minus);
            assert_eq!(vs.sign, Sign::Minus);
        }
    }

    #[test]
    fn diamond_ultrabubble_matches_superbubble() {
        let d = DirectedGraph::from_named_arcs([("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
            .unwrap();
        let g = d.to_bidirected();
        let a = g.vertex_by_name("a").unwrap();
        let dd = g.vertex_by_name("d").unwrap();
        assert!(oracle_is_ultrabubble(
            &g,
            VertexSide::new(a, Sign::Plus),
            VertexSide::new(dd, Sign::Minus)
        ));
    }

    #[test]
    fn ultrabubble_implies_snarl_on_samples() {
        for seed in 0..40 {
            let g = gen_random_bidirected(5, 7, seed).unwrap();
            let ultra = oracle_ultrabubbles(&g);
            let snarls = oracle_snarls(&g);
            for pair in &ultra {
                assert!(snarls.contains(pair), "seed {seed}: {pair:?} not a snarl");
            }
        }
    }

    #[test]
    fn feedback_oracle_on_single_cycle() {
        let d = DirectedGraph::from_named_arcs([("a", "b"), ("b", "c"), ("c", "a")]).unwrap();
        assert_eq!(oracle_feedback_arcs(&d).len(), 3);
    }

    #[test]
    fn feedback_oracle_on_disjoint_cycles() {
        let d = DirectedGraph::from_named_arcs([
            ("a", "b"),
            ("b", "a"),
            ("c", "d"),
            ("d", "c"),
        ])
        .unwrap();
        assert!(oracle_feedback_arcs(&d).is_empty());
    }

    #[test]
    fn reduction_triangle_has_no_feedback_edge() {
        let g3 = TripartiteGraph::new(
            [1, 1, 1],
            vec![((0, 0), (1, 0)), ((0, 0), (2, 0)), ((1, 0), (2, 0))],
        )
        .unwrap();
        assert!(g3.has_triangle());
        let g = reduce_tripartite(&g3);
        assert!(oracle_feedback_edges(&g).is_empty());
    }

    #[test]
    fn reduction_single_edge_has_feedback() {
        let g3 = TripartiteGraph::new([1, 1, 0], vec![((0, 0), (1, 0))]).unwrap();
        assert!(!g3.has_triangle());
        let g = reduce_tripartite(&g3);
        let fb = oracle_feedback_edges(&g);
        assert!(!fb.is_empty());
    }

    #[test]
    fn reduction_empty_graph_aux_cycle_feedback() {
        let g3 = TripartiteGraph::new([0, 0, 0], vec![]).unwrap();
        let g = reduce_tripartite(&g3);
        assert_eq!(oracle_feedback_edges(&g).len(), 3);
    }

    #[test]
    fn generators_are_reproducible() {
        let a = gen_random_bidirected(8, 12, 99).unwrap();
        let b = gen_random_bidirected(8, 12, 99).unwrap();
        assert_eq!(a.edges(), b.edges());
        let c = gen_random_dag(8, 12, 99).unwrap();
        let d = gen_random_dag(8, 12, 99).unwrap();
        assert_eq!(c.arcs(), d.arcs());
        assert!(directed_acyclic(&c));
    }

    #[test]
    fn tip_clique_shape() {
        let g = gen_tip_clique(3);
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        for v in g.vertices() {
            assert_eq!(g.is_tip(v), Some(Sign::Minus));
        }
    }

    #[test]
    fn two_tip_generator_has_two_tips() {
        for seed in 0..30 {
            let g = gen_two_tip_connected(7, seed).unwrap();
            let tips: Vec<_> = g.vertices().filter(|&v| g.is_tip(v).is_some()).collect();
            assert_eq!(tips.len(), 2, "seed {seed}");
            let comp = undirected_components(&g.underlying_undirected());
            assert!(comp.iter().all(|&c| c == 0), "seed {seed} connected");
        }
    }
}

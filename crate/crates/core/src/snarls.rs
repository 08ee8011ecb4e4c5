//! Linear-size snarl representation of bidirected graphs: sign-cut
//! decomposition, per-component tip-lists, and the S-node, P-node, R-R, and
//! edge-case snarl finders.
//!
//! Tip pairs are encoded implicitly by one tip-list per sign-cut graph;
//! non-tip snarls are found on the SPQR trees of the 2-connected blocks and
//! listed explicitly. Everything is reported in original vertex names.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::connectivity::{
    block_cut_tree, expansion_counts, spqr_tree, BlockCutTree, ExpansionCounts, NodeId, NodeKind,
    SkelEdgeKind, SpqrTree, TreeEdgeId,
};
use crate::graph::{BidirectedGraph, EdgeId, GraphBuilder, Sign, VertexId};
use crate::report::{NamedSide, SnarlRepresentation};

/// The sign-cut graphs of a bidirected graph: the components left after
/// splitting every sign-consistent cutvertex, with relabeling.
pub struct SignCutDecomposition {
    /// One graph per sign-cut component, in block discovery order.
    pub graphs: Vec<BidirectedGraph>,
    /// For every original vertex, its (graph index, vertex in that graph)
    /// homes; two entries iff the vertex is sign-consistent with edges of
    /// both signs.
    pub vertex_homes: Vec<Vec<(u32, VertexId)>>,
    /// Sign-cut graph index of every edge.
    pub edge_home: Vec<u32>,
    pub sign_consistent: Vec<bool>,
    /// Number of blocks with both signs at each vertex.
    pub mixed_blocks: Vec<u32>,
    /// Per block, aligned with its vertex list: mixed signs at that vertex.
    pub block_mixed: Vec<Vec<bool>>,
    pub block_cut: BlockCutTree,
    /// Class (sign-cut graph) of every block.
    pub class_of_block: Vec<u32>,
}

impl SignCutDecomposition {
    /// True iff some block other than `block` carries opposite signs at
    /// `v`. Constant time after construction.
    pub fn has_dangling(&self, block: u32, v: VertexId) -> bool {
        let b = &self.block_cut.blocks[block as usize];
        let own = match b.vertices.iter().position(|&x| x == v) {
            Some(i) => self.block_mixed[block as usize][i] as u32,
            None => 0,
        };
        self.mixed_blocks[v as usize] > own
    }
}

/// Internal per-run analysis shared by the public entry points.
struct SignCuts {
    bc: BlockCutTree,
    class_of_block: Vec<u32>,
    class_count: usize,
    sign_consistent: Vec<bool>,
    /// per vertex: number of incident blocks carrying both signs at it
    mixed_count: Vec<u32>,
    /// per block: mixed flag per block-local vertex
    block_mixed: Vec<Vec<bool>>,
    /// per vertex: (class, side counts within that class), at most two
    class_signs: Vec<Vec<(u32, [u32; 2])>>,
}

fn analyze(g: &BidirectedGraph) -> SignCuts {
    let n = g.vertex_count();
    let view = g.underlying_undirected();
    let bc = block_cut_tree(&view);

    // per-(block, vertex) sign counts
    let mut block_signs: Vec<Vec<[u32; 2]>> = Vec::with_capacity(bc.blocks.len());
    let mut idx_of = vec![u32::MAX; n];
    for b in &bc.blocks {
        for (i, &v) in b.vertices.iter().enumerate() {
            idx_of[v as usize] = i as u32;
        }
        let mut counts = vec![[0u32; 2]; b.vertices.len()];
        for &e in &b.edges {
            let edge = g.edge(e);
            counts[idx_of[edge.a.vertex as usize] as usize][edge.a.sign.idx()] += 1;
            counts[idx_of[edge.b.vertex as usize] as usize][edge.b.sign.idx()] += 1;
        }
        block_signs.push(counts);
    }

    // per vertex, the incident blocks with their sign class at the vertex
    // (0 pure +, 1 pure -, 2 mixed); avoids positional lookups later
    let mut vertex_incident: Vec<Vec<(u32, u8)>> = vec![Vec::new(); n];
    let mut mixed_count = vec![0u32; n];
    let mut block_mixed: Vec<Vec<bool>> = Vec::with_capacity(bc.blocks.len());
    for (bi, b) in bc.blocks.iter().enumerate() {
        let mixed: Vec<bool> = block_signs[bi].iter().map(|c| c[0] > 0 && c[1] > 0).collect();
        for (i, &v) in b.vertices.iter().enumerate() {
            let class = if mixed[i] {
                mixed_count[v as usize] += 1;
                2
            } else if block_signs[bi][i][0] > 0 {
                0
            } else {
                1
            };
            vertex_incident[v as usize].push((bi as u32, class));
        }
        block_mixed.push(mixed);
    }

    // a cutvertex is sign-consistent iff every incident block carries a
    // single sign at it
    let sign_consistent: Vec<bool> =
        (0..n).map(|v| bc.is_cutvertex[v] && mixed_count[v] == 0).collect();

    // union blocks: all blocks at a plain cutvertex; same-signed blocks at a
    // sign-consistent cutvertex
    let nb = bc.blocks.len();
    let mut dsu: Vec<u32> = (0..nb as u32).collect();
    fn find(dsu: &mut [u32], x: u32) -> u32 {
        let mut r = x;
        while dsu[r as usize] != r {
            r = dsu[r as usize];
        }
        let mut c = x;
        while dsu[c as usize] != r {
            let nx = dsu[c as usize];
            dsu[c as usize] = r;
            c = nx;
        }
        r
    }
    for v in 0..n as u32 {
        let incident = &vertex_incident[v as usize];
        if incident.len() < 2 {
            continue;
        }
        if !sign_consistent[v as usize] {
            for w in incident.windows(2) {
                let (a, b) = (find(&mut dsu, w[0].0), find(&mut dsu, w[1].0));
                if a != b {
                    dsu[a as usize] = b;
                }
            }
        } else {
            // group by the single sign each block has at v
            let mut rep = [u32::MAX; 2];
            for &(bi, class) in incident {
                let s = class as usize;
                debug_assert!(s < 2, "sign-consistent vertices have no mixed blocks");
                if rep[s] == u32::MAX {
                    rep[s] = bi;
                } else {
                    let (a, b) = (find(&mut dsu, rep[s]), find(&mut dsu, bi));
                    if a != b {
                        dsu[a as usize] = b;
                    }
                }
            }
        }
    }

    // dense class ids in block-discovery order
    let mut class_of_block = vec![u32::MAX; nb];
    let mut class_count = 0usize;
    let mut class_of_root = vec![u32::MAX; nb];
    for b in 0..nb as u32 {
        let r = find(&mut dsu, b);
        if class_of_root[r as usize] == u32::MAX {
            class_of_root[r as usize] = class_count as u32;
            class_count += 1;
        }
        class_of_block[b as usize] = class_of_root[r as usize];
    }

    // per-(vertex, class) sign counts
    let mut class_signs: Vec<Vec<(u32, [u32; 2])>> = vec![Vec::new(); n];
    for (bi, b) in bc.blocks.iter().enumerate() {
        let class = class_of_block[bi];
        for (i, &v) in b.vertices.iter().enumerate() {
            let c = block_signs[bi][i];
            let entry = class_signs[v as usize].iter_mut().find(|(cl, _)| *cl == class);
            match entry {
                Some((_, acc)) => {
                    acc[0] += c[0];
                    acc[1] += c[1];
                }
                None => class_signs[v as usize].push((class, c)),
            }
        }
    }
    debug_assert!(class_signs.iter().all(|e| e.len() <= 2));

    SignCuts { bc, class_of_block, class_count, sign_consistent, mixed_count, block_mixed, class_signs }
}

impl SignCuts {
    fn tip_sign_in_class(&self, v: VertexId, class: u32) -> Option<Sign> {
        let (_, c) = self.class_signs[v as usize].iter().find(|(cl, _)| *cl == class)?;
        match (c[0] > 0, c[1] > 0) {
            (true, false) => Some(Sign::Plus),
            (false, true) => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// Identifies the sign-consistent cutvertices via the block-cut tree, splits
/// them, relabels, and materializes the resulting sign-cut graphs.
pub fn sign_cut_graphs(g: &BidirectedGraph) -> SignCutDecomposition {
    let sc = analyze(g);
    let n = g.vertex_count();
    let mut builders: Vec<GraphBuilder> =
        (0..sc.class_count).map(|_| GraphBuilder::new()).collect();
    let mut edge_home = vec![u32::MAX; g.edge_count()];
    for (bi, b) in sc.bc.blocks.iter().enumerate() {
        let class = sc.class_of_block[bi];
        let builder = &mut builders[class as usize];
        for &e in &b.edges {
            let edge = g.edge(e);
            edge_home[e as usize] = class;
            builder
                .add_edge_by_name(
                    g.name(edge.a.vertex),
                    edge.a.sign,
                    g.name(edge.b.vertex),
                    edge.b.sign,
                )
                .expect("no self loops in a built graph");
        }
    }
    let graphs: Vec<BidirectedGraph> = builders.into_iter().map(|b| b.build()).collect();
    let mut vertex_homes: Vec<Vec<(u32, VertexId)>> = vec![Vec::new(); n];
    for (ci, f) in graphs.iter().enumerate() {
        for v in f.vertices() {
            if let Some(orig) = g.vertex_by_name(f.name(v)) {
                vertex_homes[orig as usize].push((ci as u32, v));
            }
        }
    }
    SignCutDecomposition {
        graphs,
        vertex_homes,
        edge_home,
        sign_consistent: sc.sign_consistent.clone(),
        mixed_blocks: sc.mixed_count.clone(),
        block_mixed: sc.block_mixed.clone(),
        block_cut: sc.bc,
        class_of_block: sc.class_of_block,
    }
}

/// Computes the linear-size snarl representation: one tip-list per sign-cut
/// graph plus the explicitly found non-tip pairs.
pub fn find_snarl_representation(g: &BidirectedGraph) -> SnarlRepresentation {
    let sc = analyze(g);

    // tip-lists per class
    let mut tip_sets: Vec<Vec<NamedSide>> = vec![Vec::new(); sc.class_count];
    for v in 0..g.vertex_count() as u32 {
        for &(class, c) in &sc.class_signs[v as usize] {
            match (c[0] > 0, c[1] > 0) {
                (true, false) => tip_sets[class as usize].push((g.name(v).to_string(), Sign::Plus)),
                (false, true) => {
                    tip_sets[class as usize].push((g.name(v).to_string(), Sign::Minus))
                }
                _ => {}
            }
        }
    }
    for t in &mut tip_sets {
        t.sort();
    }

    // explicit pairs from every block
    let per_block: Vec<Vec<(NamedSide, NamedSide)>> = (0..sc.bc.blocks.len())
        .into_par_iter()
        .map_init(
            || vec![u32::MAX; g.vertex_count()],
            |scratch, bi| block_snarls(g, &sc, bi as u32, scratch),
        )
        .collect();
    let mut pairs: BTreeSet<(NamedSide, NamedSide)> = BTreeSet::new();
    for list in per_block {
        for (a, b) in list {
            pairs.insert(if a <= b { (a, b) } else { (b, a) });
        }
    }

    SnarlRepresentation { tip_sets, pairs: pairs.into_iter().collect() }
}

/// Per-block finder context: local SPQR tree, side counts, and guards.
struct BlockCtx<'a> {
    g: &'a BidirectedGraph,
    sc: &'a SignCuts,
    class: u32,
    /// block-local vertex -> input vertex
    verts: Vec<VertexId>,
    /// block edges: (local u, sign at u, local v, sign at v, edge id)
    edges: Vec<(u32, Sign, u32, Sign, EdgeId)>,
    /// side counts per block-local vertex
    block_sides: Vec<[u32; 2]>,
    tree: Option<SpqrTree>,
    counts: Option<ExpansionCounts>,
    /// node and skeleton index holding each real block edge
    edge_node: Vec<(NodeId, usize)>,
}

impl<'a> BlockCtx<'a> {
    fn tip_in_f(&self, local: u32) -> Option<Sign> {
        self.sc.tip_sign_in_class(self.verts[local as usize], self.class)
    }

    /// Some block other than this one has both signs at the vertex.
    fn dangling(&self, local: u32) -> bool {
        let v = self.verts[local as usize];
        let own = &self.block_sides[local as usize];
        let own_mixed = (own[0] > 0 && own[1] > 0) as u32;
        self.sc.mixed_count[v as usize] > own_mixed
    }

    fn named(&self, local: u32, sign: Sign) -> NamedSide {
        (self.g.name(self.verts[local as usize]).to_string(), sign)
    }

    /// Sign-count at a pole inside one skeleton edge's expansion.
    fn count_at_pole(&self, node: NodeId, skel_idx: usize, pole: u32, sign: Sign) -> u32 {
        let tree = self.tree.as_ref().unwrap();
        let counts = self.counts.as_ref().unwrap();
        let nd = tree.node(node);
        let e = &nd.edges[skel_idx];
        match e.kind {
            SkelEdgeKind::Real(id) => {
                let (lu, su, lv, sv, _) = self.edges[id as usize];
                (lu == pole && su == sign) as u32 + (lv == pole && sv == sign) as u32
            }
            SkelEdgeKind::Virtual(te) => {
                let poles = tree.tree_edge(te).poles;
                if poles.0 != pole && poles.1 != pole {
                    return 0;
                }
                let slot = if poles.0 == pole { 0 } else { 1 };
                if nd.parent == Some(te) {
                    counts.up(te, slot, sign.idx(), pole)
                } else {
                    counts.down[te as usize][slot][sign.idx()]
                }
            }
        }
    }

    /// Total sign-count of a vertex within the block.
    fn total(&self, local: u32, sign: Sign) -> u32 {
        self.counts.as_ref().unwrap().total[local as usize][sign.idx()]
    }
}

fn block_snarls(
    g: &BidirectedGraph,
    sc: &SignCuts,
    block: u32,
    scratch: &mut [u32],
) -> Vec<(NamedSide, NamedSide)> {
    let b = &sc.bc.blocks[block as usize];
    let class = sc.class_of_block[block as usize];

    let mut verts: Vec<u32> = Vec::new();
    let mut edges = Vec::with_capacity(b.edges.len());
    for &e in &b.edges {
        let edge = g.edge(e);
        for x in [edge.a.vertex, edge.b.vertex] {
            if scratch[x as usize] == u32::MAX {
                scratch[x as usize] = verts.len() as u32;
                verts.push(x);
            }
        }
        edges.push((
            scratch[edge.a.vertex as usize],
            edge.a.sign,
            scratch[edge.b.vertex as usize],
            edge.b.sign,
            e,
        ));
    }
    for &v in &verts {
        scratch[v as usize] = u32::MAX;
    }

    let mut block_sides = vec![[0u32; 2]; verts.len()];
    for &(lu, su, lv, sv, _) in &edges {
        block_sides[lu as usize][su.idx()] += 1;
        block_sides[lv as usize][sv.idx()] += 1;
    }
    let mut ctx = BlockCtx {
        g,
        sc,
        class,
        verts,
        edges,
        block_sides,
        tree: None,
        counts: None,
        edge_node: Vec::new(),
    };

    let mut out = Vec::new();
    if ctx.verts.len() >= 3 {
        let ends: Vec<(u32, u32)> = ctx.edges.iter().map(|&(u, _, v, _, _)| (u, v)).collect();
        let tree = spqr_tree(&crate::graph::UndirectedView {
            vertex_count: ctx.verts.len(),
            ends: ends.clone(),
        })
        .expect("blocks are biconnected");
        let counts = expansion_counts(
            &tree,
            ctx.verts.len(),
            |e, x| {
                let (lu, su, _lv, sv, _) = ctx.edges[e as usize];
                if lu == x {
                    su.idx()
                } else {
                    sv.idx()
                }
            },
            &ends,
        );
        let mut edge_node = vec![(0u32, 0usize); ctx.edges.len()];
        for (ni, node) in tree.nodes.iter().enumerate() {
            for (i, e) in node.edges.iter().enumerate() {
                if let SkelEdgeKind::Real(id) = e.kind {
                    edge_node[id as usize] = (ni as u32, i);
                }
            }
        }
        ctx.tree = Some(tree);
        ctx.counts = Some(counts);
        ctx.edge_node = edge_node;

        find_snarls_s(&ctx, &mut out);
        find_snarls_p(&ctx, &mut out);
        find_snarls_rr(&ctx, &mut out);
    }
    find_edge_snarls(&ctx, &mut out);
    out
}

/// Good vertices of each S-node, paired consecutively around the cycle.
fn find_snarls_s(ctx: &BlockCtx, out: &mut Vec<(NamedSide, NamedSide)>) {
    let tree = ctx.tree.as_ref().unwrap();
    for node in 0..tree.nodes.len() as NodeId {
        let nd = tree.node(node);
        if nd.kind != NodeKind::S {
            continue;
        }
        // walk the cycle: (vertex, left edge, right edge) triples
        let k = nd.edges.len();
        let mut adj: std::collections::HashMap<u32, Vec<usize>> = std::collections::HashMap::new();
        for (i, e) in nd.edges.iter().enumerate() {
            adj.entry(e.u).or_default().push(i);
            adj.entry(e.v).or_default().push(i);
        }
        let start = *nd.vertices.iter().min().unwrap();
        let mut cycle: Vec<(u32, usize, usize)> = Vec::with_capacity(k);
        let mut prev_edge = adj[&start][0];
        let mut cur = start;
        for _ in 0..k {
            let es = &adj[&cur];
            let next_edge = if es[0] == prev_edge { es[1] } else { es[0] };
            cycle.push((cur, prev_edge, next_edge));
            let e = &nd.edges[next_edge];
            cur = if e.u == cur { e.v } else { e.u };
            prev_edge = next_edge;
        }
        debug_assert_eq!(cur, start);

        let mut w: Vec<NamedSide> = Vec::new();
        for &(v, left, right) in &cycle {
            if ctx.tip_in_f(v).is_some() || ctx.dangling(v) {
                continue;
            }
            let lp = ctx.count_at_pole(node, left, v, Sign::Plus);
            let rp = ctx.count_at_pole(node, right, v, Sign::Plus);
            let lm = ctx.count_at_pole(node, left, v, Sign::Minus);
            let rm = ctx.count_at_pole(node, right, v, Sign::Minus);
            // good: one sign entirely to the left, the other to the right
            if (lp == 0 || rp == 0) && (lm == 0 || rm == 0) {
                let alpha = if rp > 0 { Sign::Plus } else { Sign::Minus };
                w.push(ctx.named(v, alpha.opposite()));
                w.push(ctx.named(v, alpha));
            }
        }
        if w.len() >= 4 {
            // consecutive pairs starting from the second element, wrapping
            let q = w.len() / 2;
            for j in 0..q {
                let a = w[(2 * j + 1) % w.len()].clone();
                let b = w[(2 * j + 2) % w.len()].clone();
                out.push((a, b));
            }
        }
    }
}

/// Sign partitions across the parallel edges of P-nodes.
fn find_snarls_p(ctx: &BlockCtx, out: &mut Vec<(NamedSide, NamedSide)>) {
    let tree = ctx.tree.as_ref().unwrap();
    for node in 0..tree.nodes.len() as NodeId {
        let nd = tree.node(node);
        if nd.kind != NodeKind::P {
            continue;
        }
        let (u, v) = (nd.vertices[0], nd.vertices[1]);
        if ctx.tip_in_f(u).is_some()
            || ctx.tip_in_f(v).is_some()
            || ctx.dangling(u)
            || ctx.dangling(v)
        {
            continue;
        }
        let k = nd.edges.len();
        // per parallel edge: which signs appear at u and at v inside it
        let mut has_u = vec![[false; 2]; k];
        let mut has_v = vec![[false; 2]; k];
        for i in 0..k {
            for s in [Sign::Plus, Sign::Minus] {
                has_u[i][s.idx()] = ctx.count_at_pole(node, i, u, s) > 0;
                has_v[i][s.idx()] = ctx.count_at_pole(node, i, v, s) > 0;
            }
        }
        let disjoint_u = (0..k).all(|i| !(has_u[i][0] && has_u[i][1]));
        let disjoint_v = (0..k).all(|i| !(has_v[i][0] && has_v[i][1]));
        if !disjoint_u || !disjoint_v {
            continue;
        }
        for beta in [Sign::Plus, Sign::Minus] {
            if (0..k).any(|i| has_u[i][Sign::Plus.idx()] != has_v[i][beta.idx()]) {
                continue;
            }
            if !(0..k).any(|i| has_u[i][Sign::Plus.idx()]) {
                continue;
            }
            // {u+, v beta} and the complementary {u-, v beta^}
            for (alpha, b) in [(Sign::Plus, beta), (Sign::Minus, beta.opposite())] {
                let members: Vec<usize> = (0..k).filter(|&i| has_u[i][alpha.idx()]).collect();
                let suppressed = members.len() == 1 && pertains_to_s(ctx, node, members[0]);
                if !suppressed {
                    out.push((ctx.named(u, alpha), ctx.named(v, b)));
                }
            }
            break; // the opposite beta cannot also match
        }
    }
}

fn pertains_to_s(ctx: &BlockCtx, node: NodeId, skel_idx: usize) -> bool {
    let tree = ctx.tree.as_ref().unwrap();
    match tree.node(node).edges[skel_idx].kind {
        SkelEdgeKind::Real(_) => false,
        SkelEdgeKind::Virtual(te) => {
            let edge = tree.tree_edge(te);
            let other = if tree.node(node).parent == Some(te) { edge.parent } else { edge.child };
            tree.node(other).kind == NodeKind::S
        }
    }
}

/// Sign partitions across tree edges joining two R-nodes.
fn find_snarls_rr(ctx: &BlockCtx, out: &mut Vec<(NamedSide, NamedSide)>) {
    let tree = ctx.tree.as_ref().unwrap();
    for te in 0..tree.tree_edges.len() as TreeEdgeId {
        let edge = tree.tree_edge(te);
        if tree.node(edge.parent).kind != NodeKind::R || tree.node(edge.child).kind != NodeKind::R
        {
            continue;
        }
        let (u, v) = edge.poles;
        if ctx.tip_in_f(u).is_some()
            || ctx.tip_in_f(v).is_some()
            || ctx.dangling(u)
            || ctx.dangling(v)
        {
            continue;
        }
        let counts = ctx.counts.as_ref().unwrap();
        // the child side must be single-signed at each pole, with the other
        // sign entirely on the parent side
        let side_sign = |slot: usize, pole: u32| -> Option<Sign> {
            let down_p = counts.down[te as usize][slot][Sign::Plus.idx()];
            let down_m = counts.down[te as usize][slot][Sign::Minus.idx()];
            let tot_p = ctx.total(pole, Sign::Plus);
            let tot_m = ctx.total(pole, Sign::Minus);
            if down_p == tot_p && down_m == 0 && tot_p > 0 && tot_m > 0 {
                Some(Sign::Plus)
            } else if down_m == tot_m && down_p == 0 && tot_m > 0 && tot_p > 0 {
                Some(Sign::Minus)
            } else {
                None
            }
        };
        let (Some(alpha), Some(beta)) = (side_sign(0, u), side_sign(1, v)) else {
            continue;
        };
        out.push((ctx.named(u, alpha), ctx.named(v, beta)));
        out.push((ctx.named(u, alpha.opposite()), ctx.named(v, beta.opposite())));
    }
}

/// Single-edge snarls: edges whose two sides are exclusive at both
/// endpoints within their block. Side-exclusivity is tested against the
/// block rather than the whole sign-cut graph: same-side edges in other
/// blocks hang inside the snarl component and do not break separability,
/// while tips and dangling blocks are ruled out by the usual guards. The
/// opposite-sign pair is also a snarl unless an S-node skeleton contains
/// both endpoints.
fn find_edge_snarls(ctx: &BlockCtx, out: &mut Vec<(NamedSide, NamedSide)>) {
    let block_sides = &ctx.block_sides;
    for (i, &(lu, su, lv, sv, _)) in ctx.edges.iter().enumerate() {
        if ctx.tip_in_f(lu).is_some() || ctx.tip_in_f(lv).is_some() {
            continue;
        }
        if ctx.dangling(lu) || ctx.dangling(lv) {
            continue;
        }
        if block_sides[lu as usize][su.idx()] != 1 || block_sides[lv as usize][sv.idx()] != 1 {
            continue;
        }
        out.push((ctx.named(lu, su), ctx.named(lv, sv)));
        // the opposite pair, unless an S-node skeleton contains both ends
        let s_node_shared = match &ctx.tree {
            None => false, // bridge or multi-bridge: no S-nodes at all
            Some(tree) => {
                let (node, _) = ctx.edge_node[i];
                match tree.node(node).kind {
                    NodeKind::S => true,
                    NodeKind::R => false,
                    NodeKind::P => tree.node(node).edges.iter().any(|e| {
                        matches!(e.kind, SkelEdgeKind::Virtual(te) if {
                            let ed = tree.tree_edge(te);
                            let other = if tree.node(node).parent == Some(te) { ed.parent } else { ed.child };
                            tree.node(other).kind == NodeKind::S
                        })
                    }),
                }
            }
        };
        if !s_node_shared {
            out.push((ctx.named(lu, su.opposite()), ctx.named(lv, sv.opposite())));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn bd(edges: &[(&str, Sign, &str, Sign)]) -> BidirectedGraph {
        let mut b = GraphBuilder::new();
        for &(u, su, v, sv) in edges {
            b.add_edge_by_name(u, su, v, sv).unwrap();
        }
        b.build()
    }

    fn oracle_pairs(g: &BidirectedGraph) -> Vec<(NamedSide, NamedSide)> {
        let mut v: Vec<(NamedSide, NamedSide)> = oracle::oracle_snarls(g)
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

    fn check(g: &BidirectedGraph) -> SnarlRepresentation {
        let rep = find_snarl_representation(g);
        assert_eq!(rep.expand(), oracle_pairs(g), "graph {:?}", g.edges());
        rep
    }

    #[test]
    fn path_tip_lists() {
        let g = bd(&[
            ("a", Sign::Plus, "b", Sign::Minus),
            ("b", Sign::Plus, "c", Sign::Minus),
        ]);
        let rep = check(&g);
        assert_eq!(rep.tip_sets.len(), 2);
        assert!(rep.pairs.is_empty());
        let mut sets = rep.tip_sets.clone();
        sets.sort();
        assert_eq!(
            sets,
            vec![
                vec![("a".to_string(), Sign::Plus), ("b".to_string(), Sign::Minus)],
                vec![("b".to_string(), Sign::Plus), ("c".to_string(), Sign::Minus)],
            ]
        );
    }

    #[test]
    fn mixed_cutvertex_is_not_split() {
        // d has both signs toward each neighbor block: not sign-consistent
        let g = bd(&[
            ("a", Sign::Plus, "d", Sign::Minus),
            ("d", Sign::Plus, "a", Sign::Minus),
            ("d", Sign::Plus, "e", Sign::Minus),
            ("e", Sign::Plus, "d", Sign::Minus),
        ]);
        let dec = sign_cut_graphs(&g);
        let d = g.vertex_by_name("d").unwrap();
        assert!(dec.block_cut.is_cutvertex[d as usize]);
        assert!(!dec.sign_consistent[d as usize]);
        assert_eq!(dec.graphs.len(), 1);
        check(&g);
    }

    #[test]
    fn sign_consistent_cutvertex_splits() {
        let g = bd(&[
            ("a", Sign::Plus, "b", Sign::Minus),
            ("b", Sign::Plus, "c", Sign::Minus),
        ]);
        let dec = sign_cut_graphs(&g);
        let b = g.vertex_by_name("b").unwrap();
        assert!(dec.sign_consistent[b as usize]);
        assert_eq!(dec.graphs.len(), 2);
        assert_eq!(dec.vertex_homes[b as usize].len(), 2);
    }

    #[test]
    fn dangling_block_query() {
        // u joins a 2-cycle block (mixed at u) and a pendant edge block
        let g = bd(&[
            ("u", Sign::Plus, "w", Sign::Minus),
            ("w", Sign::Plus, "u", Sign::Minus),
            ("u", Sign::Plus, "p", Sign::Minus),
        ]);
        let dec = sign_cut_graphs(&g);
        let u = g.vertex_by_name("u").unwrap();
        let pendant = (0..dec.block_cut.blocks.len() as u32)
            .find(|&b| dec.block_cut.blocks[b as usize].edges.len() == 1)
            .unwrap();
        let cycle = 1 - pendant;
        assert!(dec.has_dangling(pendant, u), "the 2-cycle dangles off u");
        assert!(!dec.has_dangling(cycle, u));
        check(&g);
    }

    #[test]
    fn tip_clique_representation_is_linear() {
        let g = oracle::gen_tip_clique(5);
        let rep = check(&g);
        assert_eq!(rep.tip_entries(), 5);
        assert!(rep.pairs.is_empty());
        assert_eq!(rep.expand().len(), 10);
    }

    #[test]
    fn p_node_partition_instance() {
        // three parallel branches between a and b; two leave a on +, one
        // returns on -
        let g = bd(&[
            ("a", Sign::Plus, "x", Sign::Minus),
            ("x", Sign::Plus, "b", Sign::Minus),
            ("a", Sign::Plus, "y", Sign::Minus),
            ("y", Sign::Plus, "b", Sign::Minus),
            ("b", Sign::Plus, "z", Sign::Minus),
            ("z", Sign::Plus, "a", Sign::Minus),
        ]);
        let rep = check(&g);
        let pair = (("a".to_string(), Sign::Plus), ("b".to_string(), Sign::Minus));
        assert!(rep.pairs.contains(&pair), "pairs {:?}", rep.pairs);
    }

    #[test]
    fn rr_partition_instance() {
        // two rigid parts glued at {c, d} with opposite signs across
        let g = bd(&[
            ("c", Sign::Plus, "p", Sign::Minus),
            ("p", Sign::Plus, "d", Sign::Minus),
            ("c", Sign::Plus, "q", Sign::Minus),
            ("q", Sign::Plus, "d", Sign::Minus),
            ("p", Sign::Plus, "q", Sign::Minus),
            ("c", Sign::Minus, "r", Sign::Minus),
            ("r", Sign::Plus, "d", Sign::Plus),
            ("c", Sign::Minus, "s", Sign::Minus),
            ("s", Sign::Plus, "d", Sign::Plus),
            ("r", Sign::Plus, "s", Sign::Minus),
        ]);
        let rep = check(&g);
        let p1 = (("c".to_string(), Sign::Plus), ("d".to_string(), Sign::Minus));
        let p2 = (("c".to_string(), Sign::Minus), ("d".to_string(), Sign::Plus));
        assert!(rep.pairs.contains(&p1) && rep.pairs.contains(&p2), "pairs {:?}", rep.pairs);
    }

    #[test]
    fn edge_snarl_in_rigid_block() {
        // K4 where the u-v edge has exclusive sides at both endpoints
        let g = bd(&[
            ("u", Sign::Plus, "v", Sign::Minus),
            ("u", Sign::Minus, "x", Sign::Plus),
            ("u", Sign::Minus, "y", Sign::Plus),
            ("v", Sign::Plus, "x", Sign::Minus),
            ("v", Sign::Plus, "y", Sign::Minus),
            ("x", Sign::Plus, "y", Sign::Minus),
        ]);
        let rep = check(&g);
        let p1 = (("u".to_string(), Sign::Minus), ("v".to_string(), Sign::Plus));
        let p2 = (("u".to_string(), Sign::Plus), ("v".to_string(), Sign::Minus));
        assert!(rep.pairs.contains(&p1) && rep.pairs.contains(&p2), "pairs {:?}", rep.pairs);
    }

    #[test]
    fn random_bidirected_graphs_match_the_oracle() {
        for seed in 0..500u64 {
            let n = 3 + (seed as usize % 3);
            let max_slots = 4 * n * (n - 1) / 2;
            let m = 2 + (seed as usize % (max_slots.min(3 * n)));
            let g = oracle::gen_random_bidirected(n, m, seed).unwrap();
            check(&g);
        }
    }

    #[test]
    fn digraphic_random_graphs_match_the_oracle() {
        for seed in 0..120u64 {
            let n = 4 + (seed as usize % 3);
            let m = n + (seed as usize % n);
            let d = oracle::gen_random_digraph(n, m, seed).unwrap();
            check(&d.to_bidirected());
        }
    }

    #[test]
    fn size_bounds_hold_on_samples() {
        for seed in 0..50u64 {
            let g = oracle::gen_random_bidirected(6, 10, seed).unwrap();
            let rep = find_snarl_representation(&g);
            assert!(rep.tip_entries() <= 2 * g.vertex_count());
            assert!(rep.pairs.len() <= 4 * g.vertex_count());
        }
    }
}

//! Block-cut trees and SPQR trees over the undirected view, with
//! expansion-graph queries and directed/bidirected skeleton assembly.

mod block_cut;
mod spqr;
pub(crate) mod tric;

pub use block_cut::{block_cut_tree, Block, BlockCutTree};
pub use spqr::{
    NodeId, NodeKind, SkelEdge, SkelEdgeKind, SpqrNode, SpqrTree, SpqrTreeEdge, TreeEdgeId,
};

#[doc(hidden)]
pub use spqr::validate as validate_spqr;

use crate::graph::{EdgeId, Sign, UndirectedView, VertexId};
use crate::GraphError;

/// Builds the SPQR tree of one 2-connected block given as an undirected
/// multigraph. The block must have at least three vertices; multi-bridges
/// and single edges are handled by the callers.
pub fn spqr_tree(block: &UndirectedView) -> Result<SpqrTree, GraphError> {
    SpqrTree::build(block.vertex_count, &block.ends)
}

/// Neighborhood counts per tree edge: for each pole of the tree edge and
/// each of two per-endpoint colors, the number of block edges of that color
/// incident to the pole inside the child-side expansion.
///
/// The color abstracts over in/out arcs (directed) and +/- vertex-sides
/// (bidirected). Complement counts follow by subtracting from `total`.
pub struct ExpansionCounts {
    pub down: Vec<[[u32; 2]; 2]>,
    pub total: Vec<[u32; 2]>,
    /// Number of interior vertices (excluding the two poles) per tree edge,
    /// child side.
    pub interior: Vec<u32>,
}

impl ExpansionCounts {
    pub fn up(&self, te: TreeEdgeId, pole_slot: usize, color: usize, pole: VertexId) -> u32 {
        self.total[pole as usize][color] - self.down[te as usize][pole_slot][color]
    }
}

/// One bottom-up pass over the tree; each real edge is charged at most at
/// its two endpoints once.
pub fn expansion_counts(
    tree: &SpqrTree,
    nv: usize,
    color: impl Fn(EdgeId, VertexId) -> usize,
    block_edges: &[(VertexId, VertexId)],
) -> ExpansionCounts {
    let mut total = vec![[0u32; 2]; nv];
    for (i, &(u, v)) in block_edges.iter().enumerate() {
        total[u as usize][color(i as EdgeId, u)] += 1;
        total[v as usize][color(i as EdgeId, v)] += 1;
    }
    let mut down = vec![[[0u32; 2]; 2]; tree.tree_edges.len()];
    let mut interior = vec![0u32; tree.tree_edges.len()];
    let order = tree.topo_order();
    for &n in order.iter().rev() {
        let node = tree.node(n);
        let Some(parent_te) = node.parent else { continue };
        let (s, t) = tree.tree_edge(parent_te).poles;
        let mut acc = [[0u32; 2]; 2];
        let mut inner = node.vertices.len() as u32 - 2;
        for e in &node.edges {
            match e.kind {
                SkelEdgeKind::Real(id) => {
                    for (slot, pole) in [(0, s), (1, t)] {
                        if e.u == pole || e.v == pole {
                            acc[slot][color(id, pole)] += 1;
                        }
                    }
                }
                SkelEdgeKind::Virtual(te2) if te2 != parent_te => {
                    let child_poles = tree.tree_edge(te2).poles;
                    inner += interior[te2 as usize];
                    for (slot, pole) in [(0, s), (1, t)] {
                        if child_poles.0 == pole {
                            for c in 0..2 {
                                acc[slot][c] += down[te2 as usize][0][c];
                            }
                        } else if child_poles.1 == pole {
                            for c in 0..2 {
                                acc[slot][c] += down[te2 as usize][1][c];
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        down[parent_te as usize] = acc;
        interior[parent_te as usize] = inner;
    }
    ExpansionCounts { down, total, interior }
}

/// Sign-based edge colors for bidirected blocks: color 0 is `+`.
pub fn sign_color(sign: Sign) -> usize {
    sign.idx()
}

/// A directed skeleton: one arc per per-edge reachability flag, tagged with
/// the skeleton edge index it came from.
#[derive(Clone, Debug)]
pub struct DirectedSkeleton {
    /// (tail, head, index of the skeleton edge in the node's edge list)
    pub arcs: Vec<(VertexId, VertexId, usize)>,
}

/// Assembles the directed skeleton of a node from per-edge reachability
/// flags `(u reaches v, v reaches u)` within each edge's expansion.
pub fn directed_skeleton(
    node: &SpqrNode,
    reach: &[(bool, bool)],
) -> Result<DirectedSkeleton, GraphError> {
    if reach.len() != node.edges.len() {
        return Err(GraphError::ContractViolation {
            reason: format!(
                "directed_skeleton needs one flag pair per skeleton edge ({} != {})",
                reach.len(),
                node.edges.len()
            ),
        });
    }
    let mut arcs = Vec::new();
    for (i, (e, &(st, ts))) in node.edges.iter().zip(reach).enumerate() {
        if st {
            arcs.push((e.u, e.v, i));
        }
        if ts {
            arcs.push((e.v, e.u, i));
        }
    }
    Ok(DirectedSkeleton { arcs })
}

/// A bidirected skeleton: one bidirected edge per true sign-pair flag.
#[derive(Clone, Debug)]
pub struct BidirectedSkeleton {
    /// (u, sign at u, v, sign at v, index of the skeleton edge)
    pub edges: Vec<(VertexId, Sign, VertexId, Sign, usize)>,
}

/// Flag order for [`bidirected_skeleton`]: `(u+,v+), (u+,v-), (u-,v+),
/// (u-,v-)`.
pub const SIGN_PAIRS: [(Sign, Sign); 4] = [
    (Sign::Plus, Sign::Plus),
    (Sign::Plus, Sign::Minus),
    (Sign::Minus, Sign::Plus),
    (Sign::Minus, Sign::Minus),
];

pub fn bidirected_skeleton(
    node: &SpqrNode,
    reach4: &[[bool; 4]],
) -> Result<BidirectedSkeleton, GraphError> {
    if reach4.len() != node.edges.len() {
        return Err(GraphError::ContractViolation {
            reason: format!(
                "bidirected_skeleton needs one flag quad per skeleton edge ({} != {})",
                reach4.len(),
                node.edges.len()
            ),
        });
    }
    let mut edges = Vec::new();
    for (i, (e, flags)) in node.edges.iter().zip(reach4).enumerate() {
        for (k, &(su, sv)) in SIGN_PAIRS.iter().enumerate() {
            if flags[k] {
                edges.push((e.u, su, e.v, sv, i));
            }
        }
    }
    Ok(BidirectedSkeleton { edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::undirected_components;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn view(n: usize, ends: &[(u32, u32)]) -> UndirectedView {
        UndirectedView { vertex_count: n, ends: ends.to_vec() }
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
        let comp = undirected_components(&sub);
        let mut ids: Vec<u32> = (0..v.vertex_count as u32)
            .filter(|x| !removed.contains(x))
            .map(|x| comp[x as usize])
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }

    fn is_biconnected(v: &UndirectedView) -> bool {
        if v.vertex_count < 3 {
            return false;
        }
        if component_count(v, &[]) != 1 {
            return false;
        }
        (0..v.vertex_count as u32).all(|x| component_count(v, &[x]) == 1)
    }

    fn brute_separation_pairs(v: &UndirectedView) -> Vec<(u32, u32)> {
        let base = component_count(v, &[]);
        let mut out = Vec::new();
        for a in 0..v.vertex_count as u32 {
            for b in (a + 1)..v.vertex_count as u32 {
                if component_count(v, &[a, b]) > base {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn check_block(v: &UndirectedView) {
        let tree = spqr_tree(v).expect("biconnected block");
        validate_spqr(&tree, v.vertex_count, &v.ends);
        assert_eq!(tree.separation_pairs(), brute_separation_pairs(v), "graph {:?}", v.ends);
    }

    #[test]
    fn k4_is_a_single_r_node() {
        let v = view(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let tree = spqr_tree(&v).unwrap();
        assert_eq!(tree.nodes.len(), 1);
        assert_eq!(tree.nodes[0].kind, NodeKind::R);
        assert!(tree.separation_pairs().is_empty());
    }

    #[test]
    fn cycle_is_a_single_s_node() {
        let v = view(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let tree = spqr_tree(&v).unwrap();
        assert_eq!(tree.nodes.len(), 1);
        assert_eq!(tree.nodes[0].kind, NodeKind::S);
        // nonadjacent cycle pairs are exactly the separation pairs
        assert_eq!(tree.separation_pairs(), brute_separation_pairs(&v));
    }

    #[test]
    fn theta_graph_is_p_node_with_three_s_children() {
        // two vertices joined by three internally-disjoint length-2 paths
        let v = view(5, &[(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]);
        let tree = spqr_tree(&v).unwrap();
        let p_nodes: Vec<_> = tree.nodes.iter().filter(|n| n.kind == NodeKind::P).collect();
        let s_nodes: Vec<_> = tree.nodes.iter().filter(|n| n.kind == NodeKind::S).collect();
        assert_eq!(p_nodes.len(), 1);
        assert_eq!(s_nodes.len(), 3);
        assert_eq!(p_nodes[0].vertices, vec![0, 1]);
        assert_eq!(p_nodes[0].edges.len(), 3);
        for s in s_nodes {
            assert_eq!(s.edges.len(), 3);
        }
        validate_spqr(&tree, 5, &v.ends);
    }

    #[test]
    fn doubled_triangle_edge_gives_p_node() {
        let v = view(3, &[(0, 1), (0, 1), (1, 2), (2, 0)]);
        let tree = spqr_tree(&v).unwrap();
        let kinds: Vec<_> = tree.nodes.iter().map(|n| n.kind).collect();
        assert!(kinds.contains(&NodeKind::P));
        assert!(kinds.contains(&NodeKind::S));
        validate_spqr(&tree, 3, &v.ends);
    }

    #[test]
    fn non_biconnected_input_is_rejected() {
        let v = view(3, &[(0, 1), (1, 2)]);
        assert!(spqr_tree(&v).is_err());
    }

    #[test]
    fn exhaustive_simple_graphs_up_to_six_vertices() {
        for n in [4usize, 5, 6] {
            let pairs: Vec<(u32, u32)> = (0..n as u32)
                .flat_map(|i| ((i + 1)..n as u32).map(move |j| (i, j)))
                .collect();
            for mask in 0u32..(1 << pairs.len()) {
                let ends: Vec<(u32, u32)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &p)| p)
                    .collect();
                let v = view(n, &ends);
                if is_biconnected(&v) {
                    check_block(&v);
                }
            }
        }
    }

    #[test]
    fn random_multigraph_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(20240811);
        let mut tested = 0usize;
        while tested < 400 {
            let n = rng.gen_range(3..=9);
            let m = rng.gen_range(n..=(3 * n));
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
            let v = view(n, &ends);
            if !is_biconnected(&v) {
                continue;
            }
            check_block(&v);
            tested += 1;
        }
    }

    #[test]
    fn medium_random_blocks_match_brute_force_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut tested = 0usize;
        while tested < 12 {
            let n = 40usize;
            let m = rng.gen_range(30..90);
            // cycle scaffold keeps most samples biconnected
            let mut ends: Vec<(u32, u32)> =
                (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
            for _ in 0..m {
                let a = rng.gen_range(0..n as u32);
                let mut b = rng.gen_range(0..n as u32 - 1);
                if b >= a {
                    b += 1;
                }
                ends.push((a, b));
            }
            let v = view(n, &ends);
            if !is_biconnected(&v) {
                continue;
            }
            let tree = spqr_tree(&v).unwrap();
            validate_spqr(&tree, n, &ends);
            assert_eq!(tree.separation_pairs(), brute_separation_pairs(&v));
            tested += 1;
        }
    }

    #[test]
    fn rerooting_preserves_the_unrooted_tree() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut tested = 0;
        while tested < 50 {
            let n = rng.gen_range(4..=8);
            let m = rng.gen_range(n + 1..=2 * n);
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
            let v = view(n, &ends);
            if !is_biconnected(&v) {
                continue;
            }
            // rotating the edge list changes the reference edge and the DFS
            let mut rotated = ends.clone();
            rotated.rotate_left(m / 2);
            let a = canonical_shape(&spqr_tree(&v).unwrap(), &ends);
            let b = canonical_shape(&spqr_tree(&view(n, &rotated)).unwrap(), &rotated);
            assert_eq!(a, b, "edges {ends:?}");
            tested += 1;
        }
    }

    /// Canonical unrooted form: per node, the multiset of real edges (as
    /// sorted endpoint pairs) and virtual pole pairs.
    fn canonical_shape(
        tree: &SpqrTree,
        edges: &[(u32, u32)],
    ) -> Vec<(NodeKind, Vec<(u32, u32)>, Vec<(u32, u32)>)> {
        let mut nodes: Vec<(NodeKind, Vec<(u32, u32)>, Vec<(u32, u32)>)> = tree
            .nodes
            .iter()
            .map(|n| {
                let mut real: Vec<(u32, u32)> = n
                    .edges
                    .iter()
                    .filter_map(|e| match e.kind {
                        SkelEdgeKind::Real(id) => {
                            let (a, b) = edges[id as usize];
                            Some((a.min(b), a.max(b)))
                        }
                        _ => None,
                    })
                    .collect();
                let mut virt: Vec<(u32, u32)> = n
                    .edges
                    .iter()
                    .filter_map(|e| match e.kind {
                        SkelEdgeKind::Virtual(_) => Some((e.u.min(e.v), e.u.max(e.v))),
                        _ => None,
                    })
                    .collect();
                real.sort_unstable();
                virt.sort_unstable();
                (n.kind, real, virt)
            })
            .collect();
        nodes.sort();
        nodes
    }

    #[test]
    fn expansion_counts_match_materialized_expansions() {
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        let mut tested = 0;
        while tested < 60 {
            let n = rng.gen_range(4..=9);
            let m = rng.gen_range(n + 1..=2 * n + 2);
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
            let v = view(n, &ends);
            if !is_biconnected(&v) {
                continue;
            }
            let tree = spqr_tree(&v).unwrap();
            // color: parity mix of edge id and endpoint, an arbitrary
            // deterministic 2-coloring
            let color = |e: EdgeId, x: VertexId| ((e as usize + x as usize) % 2) as usize;
            let counts = expansion_counts(&tree, n, color, &ends);
            for te in 0..tree.tree_edges.len() as u32 {
                let inside = tree.expansion_real_edges(te);
                let poles = tree.tree_edge(te).poles;
                for (slot, pole) in [(0usize, poles.0), (1, poles.1)] {
                    for c in 0..2usize {
                        let expected = inside
                            .iter()
                            .filter(|&&e| {
                                let (a, b) = ends[e as usize];
                                (a == pole || b == pole) && color(e, pole) == c
                            })
                            .count() as u32;
                        assert_eq!(
                            counts.down[te as usize][slot][c], expected,
                            "edges {ends:?} te {te} pole {pole} color {c}"
                        );
                    }
                }
                // interior vertex count
                let mut vs: Vec<u32> = inside
                    .iter()
                    .flat_map(|&e| [ends[e as usize].0, ends[e as usize].1])
                    .filter(|&x| x != poles.0 && x != poles.1)
                    .collect();
                vs.sort_unstable();
                vs.dedup();
                assert_eq!(counts.interior[te as usize] as usize, vs.len());
            }
            tested += 1;
        }
    }
}

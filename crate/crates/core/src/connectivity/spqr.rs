//! SPQR tree assembly on top of the split components: adjacent bonds and
//! adjacent polygons are merged, the remaining components become S/P/R
//! nodes, and virtual-edge pairs become tree edges. Q-nodes are omitted:
//! skeleton edges are real or virtual.

use crate::connectivity::tric::{self, CompKind};
use crate::graph::{EdgeId, VertexId};
use crate::GraphError;

pub type NodeId = u32;
pub type TreeEdgeId = u32;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum NodeKind {
    S,
    P,
    R,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SkelEdgeKind {
    /// An edge of the block, by the caller's edge index.
    Real(EdgeId),
    /// A virtual edge; its pertinent tree edge links the two skeletons
    /// sharing it.
    Virtual(TreeEdgeId),
}

#[derive(Clone, Copy, Debug)]
pub struct SkelEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub kind: SkelEdgeKind,
}

#[derive(Clone, Debug)]
pub struct SpqrNode {
    pub kind: NodeKind,
    pub edges: Vec<SkelEdge>,
    /// Distinct skeleton vertices.
    pub vertices: Vec<VertexId>,
    pub parent: Option<TreeEdgeId>,
    pub children: Vec<TreeEdgeId>,
}

#[derive(Clone, Copy, Debug)]
pub struct SpqrTreeEdge {
    pub parent: NodeId,
    pub child: NodeId,
    pub poles: (VertexId, VertexId),
}

/// Rooted SPQR tree of one biconnected block. Vertex ids are the caller's
/// (block-local) ids; real edge ids index the caller's edge list.
#[derive(Clone, Debug)]
pub struct SpqrTree {
    pub nodes: Vec<SpqrNode>,
    pub tree_edges: Vec<SpqrTreeEdge>,
    pub root: NodeId,
    /// Vertex count of the block the tree was built from.
    pub block_vertex_count: usize,
}

impl SpqrTree {
    /// Builds the SPQR tree of a biconnected multigraph with `nv >= 3`
    /// vertices. The tree is rooted at the node containing the smallest
    /// real edge id, which makes the output deterministic.
    pub fn build(nv: usize, edges: &[(VertexId, VertexId)]) -> Result<SpqrTree, GraphError> {
        let sc = tric::split_components(nv, edges)?;
        Ok(assemble(sc, nv))
    }

    /// Interior vertex count (poles excluded) of the child-side expansion of
    /// every tree edge, bottom-up in one pass.
    pub fn subtree_interiors(&self) -> Vec<u32> {
        let mut interior = vec![0u32; self.tree_edges.len()];
        let order = self.topo_order();
        for &n in order.iter().rev() {
            let node = &self.nodes[n as usize];
            let Some(parent_te) = node.parent else { continue };
            let mut inner = node.vertices.len() as u32 - 2;
            for e in &node.edges {
                if let SkelEdgeKind::Virtual(te2) = e.kind {
                    if te2 != parent_te {
                        inner += interior[te2 as usize];
                    }
                }
            }
            interior[parent_te as usize] = inner;
        }
        interior
    }

    pub fn node(&self, id: NodeId) -> &SpqrNode {
        &self.nodes[id as usize]
    }

    pub fn tree_edge(&self, id: TreeEdgeId) -> &SpqrTreeEdge {
        &self.tree_edges[id as usize]
    }

    /// Nodes in root-first order such that parents precede children.
    pub fn topo_order(&self) -> Vec<NodeId> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(n) = stack.pop() {
            order.push(n);
            for &te in &self.nodes[n as usize].children {
                stack.push(self.tree_edges[te as usize].child);
            }
        }
        order
    }

    /// All separation pairs encoded by the tree: poles of virtual edges plus
    /// nonadjacent vertex pairs of S-node skeletons. Pole pairs whose tree
    /// edge has an interior-free side are split pairs that merely reflect
    /// parallel edges and are excluded. Quadratic in S-node sizes; intended
    /// for verification.
    pub fn separation_pairs(&self) -> Vec<(VertexId, VertexId)> {
        let interiors = self.subtree_interiors();
        let total_interior = self.block_vertex_count as u32 - 2;
        let mut out: Vec<(VertexId, VertexId)> = Vec::new();
        for (i, te) in self.tree_edges.iter().enumerate() {
            let inside = interiors[i];
            if inside == 0 || inside == total_interior {
                continue;
            }
            let (a, b) = te.poles;
            out.push((a.min(b), a.max(b)));
        }
        for node in &self.nodes {
            if node.kind != NodeKind::S {
                continue;
            }
            for (i, &x) in node.vertices.iter().enumerate() {
                for &y in node.vertices.iter().skip(i + 1) {
                    let adjacent = node
                        .edges
                        .iter()
                        .any(|e| (e.u == x && e.v == y) || (e.u == y && e.v == x));
                    if !adjacent {
                        out.push((x.min(y), x.max(y)));
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Real edges in the expansion on the child side of a tree edge,
    /// materialized. Intended for tests and oracles, not the linear-time
    /// paths.
    pub fn expansion_real_edges(&self, te: TreeEdgeId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        let mut stack = vec![self.tree_edges[te as usize].child];
        while let Some(n) = stack.pop() {
            for e in &self.nodes[n as usize].edges {
                match e.kind {
                    SkelEdgeKind::Real(id) => out.push(id),
                    SkelEdgeKind::Virtual(t2) => {
                        if t2 != te && self.tree_edges[t2 as usize].parent == n {
                            stack.push(self.tree_edges[t2 as usize].child);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Real edges of the expansion on the parent side (the complement).
    pub fn complement_real_edges(&self, te: TreeEdgeId, total_real: usize) -> Vec<EdgeId> {
        let inside: std::collections::HashSet<EdgeId> =
            self.expansion_real_edges(te).into_iter().collect();
        (0..total_real as EdgeId).filter(|e| !inside.contains(e)).collect()
    }

    /// DOT rendering for debugging; not a stability-guaranteed format.
    pub fn to_dot(&self, name_of: impl Fn(VertexId) -> String) -> String {
        use std::fmt::Write;
        let mut s = String::from("graph spqr {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let kind = match n.kind {
                NodeKind::S => "S",
                NodeKind::P => "P",
                NodeKind::R => "R",
            };
            let vs: Vec<String> = n.vertices.iter().map(|&v| name_of(v)).collect();
            writeln!(s, "  n{i} [label=\"{kind}: {}\"];", vs.join(",")).unwrap();
        }
        for te in &self.tree_edges {
            writeln!(
                s,
                "  n{} -- n{} [label=\"{},{}\"];",
                te.parent,
                te.child,
                name_of(te.poles.0),
                name_of(te.poles.1)
            )
            .unwrap();
        }
        s.push_str("}\n");
        s
    }
}

fn assemble(sc: tric::SplitComponents, nv: usize) -> SpqrTree {
    let ncomp = sc.comps.len();
    let nedges = sc.ends.len();

    // which components contain each edge (real: one, virtual: two)
    let mut owner: Vec<[u32; 2]> = vec![[u32::MAX; 2]; nedges];
    for (ci, c) in sc.comps.iter().enumerate() {
        for &e in &c.edges {
            let slot = &mut owner[e as usize];
            if slot[0] == u32::MAX {
                slot[0] = ci as u32;
            } else {
                debug_assert_eq!(slot[1], u32::MAX, "edge in more than two components");
                slot[1] = ci as u32;
            }
        }
    }

    // union adjacent same-kind bonds / polygons
    let mut dsu: Vec<u32> = (0..ncomp as u32).collect();
    fn find(dsu: &mut [u32], x: u32) -> u32 {
        let mut r = x;
        while dsu[r as usize] != r {
            r = dsu[r as usize];
        }
        let mut c = x;
        while dsu[c as usize] != r {
            let n = dsu[c as usize];
            dsu[c as usize] = r;
            c = n;
        }
        r
    }
    let mut dead = vec![false; nedges];
    for e in sc.real_edge_count..nedges {
        let [c1, c2] = owner[e];
        debug_assert_ne!(c2, u32::MAX, "virtual edge must be shared by two components");
        let k1 = sc.comps[c1 as usize].kind;
        let k2 = sc.comps[c2 as usize].kind;
        if k1 == k2 && k1 != CompKind::Triconnected {
            let r1 = find(&mut dsu, c1);
            let r2 = find(&mut dsu, c2);
            if r1 != r2 {
                dsu[r1 as usize] = r2;
            }
            dead[e] = true;
        }
    }

    // nodes = unmerged classes
    let mut class_node = vec![u32::MAX; ncomp];
    let mut nodes: Vec<SpqrNode> = Vec::new();
    for c in 0..ncomp as u32 {
        let r = find(&mut dsu, c);
        if class_node[r as usize] == u32::MAX {
            class_node[r as usize] = nodes.len() as u32;
            nodes.push(SpqrNode {
                kind: match sc.comps[r as usize].kind {
                    CompKind::Bond => NodeKind::P,
                    CompKind::Polygon => NodeKind::S,
                    CompKind::Triconnected => NodeKind::R,
                },
                edges: Vec::new(),
                vertices: Vec::new(),
                parent: None,
                children: Vec::new(),
            });
        }
    }
    let node_of = |dsu: &mut [u32], class_node: &[u32], c: u32| -> u32 {
        class_node[find(dsu, c) as usize]
    };

    // alive virtual edges become tree edges
    let mut tree_edge_of: Vec<u32> = vec![u32::MAX; nedges];
    let mut raw_tree_edges: Vec<(u32, u32, (u32, u32))> = Vec::new(); // node, node, poles
    for e in sc.real_edge_count..nedges {
        if dead[e] {
            continue;
        }
        let [c1, c2] = owner[e];
        let n1 = node_of(&mut dsu, &class_node, c1);
        let n2 = node_of(&mut dsu, &class_node, c2);
        debug_assert_ne!(n1, n2, "alive virtual edge inside one node");
        tree_edge_of[e] = raw_tree_edges.len() as u32;
        raw_tree_edges.push((n1, n2, sc.ends[e]));
    }

    // distribute skeleton edges
    for (ci, comp) in sc.comps.iter().enumerate() {
        for &e in &comp.edges {
            if dead[e as usize] {
                continue;
            }
            let n = node_of(&mut dsu, &class_node, ci as u32);
            let (u, v) = sc.ends[e as usize];
            let kind = if (e as usize) < sc.real_edge_count {
                SkelEdgeKind::Real(e)
            } else {
                SkelEdgeKind::Virtual(tree_edge_of[e as usize])
            };
            nodes[n as usize].edges.push(SkelEdge { u, v, kind });
        }
    }
    for n in &mut nodes {
        let mut vs: Vec<u32> = n.edges.iter().flat_map(|e| [e.u, e.v]).collect();
        vs.sort_unstable();
        vs.dedup();
        n.vertices = vs;
    }

    // root at the node holding the smallest real edge and orient
    let root = node_of(&mut dsu, &class_node, owner[0][0]);
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); nodes.len()];
    for (i, &(a, b, _)) in raw_tree_edges.iter().enumerate() {
        adj[a as usize].push(i as u32);
        adj[b as usize].push(i as u32);
    }
    let mut tree_edges: Vec<SpqrTreeEdge> = raw_tree_edges
        .iter()
        .map(|&(a, b, poles)| SpqrTreeEdge { parent: a, child: b, poles })
        .collect();
    let mut seen = vec![false; nodes.len()];
    seen[root as usize] = true;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(n) = queue.pop_front() {
        for &tei in &adj[n as usize] {
            let (a, b, _) = raw_tree_edges[tei as usize];
            let other = if a == n { b } else { a };
            if seen[other as usize] {
                continue;
            }
            seen[other as usize] = true;
            tree_edges[tei as usize].parent = n;
            tree_edges[tei as usize].child = other;
            nodes[n as usize].children.push(tei);
            nodes[other as usize].parent = Some(tei);
            queue.push_back(other);
        }
    }
    debug_assert!(seen.iter().all(|&s| s), "SPQR tree must be connected");

    SpqrTree { nodes, tree_edges, root, block_vertex_count: nv }
}

/// Structural validation used by the test suite: skeleton shapes, adjacency
/// rules, the real-edge partition, and reassembly of the block.
#[doc(hidden)]
pub fn validate(tree: &SpqrTree, nv: usize, block_edges: &[(VertexId, VertexId)]) {
    use std::collections::HashMap;

    let mut real_seen = vec![false; block_edges.len()];
    for node in &tree.nodes {
        let mut deg: HashMap<u32, usize> = HashMap::new();
        for e in &node.edges {
            *deg.entry(e.u).or_default() += 1;
            *deg.entry(e.v).or_default() += 1;
            if let SkelEdgeKind::Real(id) = e.kind {
                assert!(!real_seen[id as usize], "real edge in two skeletons");
                real_seen[id as usize] = true;
                let (a, b) = block_edges[id as usize];
                assert!(
                    (a, b) == (e.u, e.v) || (a, b) == (e.v, e.u),
                    "skeleton endpoints disagree with block edge"
                );
            }
        }
        match node.kind {
            NodeKind::S => {
                assert!(node.edges.len() >= 3, "S skeleton is a cycle of length >= 3");
                assert_eq!(node.edges.len(), node.vertices.len());
                assert!(deg.values().all(|&d| d == 2), "S skeleton must be a cycle");
                assert!(connected_skeleton(node), "S skeleton connected");
            }
            NodeKind::P => {
                assert_eq!(node.vertices.len(), 2);
                assert!(node.edges.len() >= 3, "P skeleton needs >= 3 parallel edges");
            }
            NodeKind::R => {
                assert!(node.vertices.len() >= 4, "R skeleton has >= 4 vertices");
                // simple
                let mut pairs: Vec<(u32, u32)> = node
                    .edges
                    .iter()
                    .map(|e| (e.u.min(e.v), e.u.max(e.v)))
                    .collect();
                pairs.sort_unstable();
                let before = pairs.len();
                pairs.dedup();
                assert_eq!(before, pairs.len(), "R skeleton must be simple");
                if nv <= 24 {
                    assert!(skeleton_triconnected(node), "R skeleton must be 3-connected");
                }
            }
        }
    }
    assert!(real_seen.iter().all(|&s| s), "every block edge lives in one skeleton");

    // adjacency rules
    for te in &tree.tree_edges {
        let pk = tree.nodes[te.parent as usize].kind;
        let ck = tree.nodes[te.child as usize].kind;
        assert!(
            !(pk == NodeKind::S && ck == NodeKind::S),
            "adjacent S-nodes must be merged"
        );
        assert!(
            !(pk == NodeKind::P && ck == NodeKind::P),
            "adjacent P-nodes must be merged"
        );
    }

    // every expansion together with its complement covers the block
    for te in 0..tree.tree_edges.len() as u32 {
        let inside = tree.expansion_real_edges(te);
        let outside = tree.complement_real_edges(te, block_edges.len());
        assert_eq!(inside.len() + outside.len(), block_edges.len());
        assert!(!inside.is_empty() && !outside.is_empty());
    }

    let _ = nv;
}

fn connected_skeleton(node: &SpqrNode) -> bool {
    use std::collections::{HashMap, HashSet};
    let mut adj: HashMap<u32, Vec<u32>> = HashMap::new();
    for e in &node.edges {
        adj.entry(e.u).or_default().push(e.v);
        adj.entry(e.v).or_default().push(e.u);
    }
    let mut seen: HashSet<u32> = HashSet::new();
    let mut stack = vec![node.vertices[0]];
    seen.insert(node.vertices[0]);
    while let Some(v) = stack.pop() {
        for &w in adj.get(&v).map(|x| x.as_slice()).unwrap_or(&[]) {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == node.vertices.len()
}

/// Brute-force triconnectivity of a small skeleton: no pair of vertices
/// disconnects it.
fn skeleton_triconnected(node: &SpqrNode) -> bool {
    let vs = &node.vertices;
    let n = vs.len();
    if n < 4 {
        return false;
    }
    let idx = |v: u32| vs.iter().position(|&x| x == v).unwrap();
    for a in 0..n {
        for b in (a + 1)..n {
            let mut adj = vec![Vec::new(); n];
            for e in &node.edges {
                let (x, y) = (idx(e.u), idx(e.v));
                if x != a && x != b && y != a && y != b {
                    adj[x].push(y);
                    adj[y].push(x);
                }
            }
            let start = (0..n).find(|&x| x != a && x != b).unwrap();
            let mut seen = vec![false; n];
            seen[start] = true;
            let mut stack = vec![start];
            let mut cnt = 1;
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        cnt += 1;
                        stack.push(w);
                    }
                }
            }
            if cnt != n - 2 {
                return false;
            }
        }
    }
    true
}

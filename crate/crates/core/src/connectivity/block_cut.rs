//! Block-cut tree of an undirected multigraph: maximal 2-connected blocks,
//! bridges, multi-bridges, and cutvertices.

use crate::graph::{EdgeId, UndirectedView, VertexId};

/// One block: an edge set together with its derived vertex set. Parallel
/// edges between two vertices form a single block (a multi-bridge).
#[derive(Clone, Debug)]
pub struct Block {
    pub edges: Vec<EdgeId>,
    pub vertices: Vec<VertexId>,
}

impl Block {
    /// A bridge is a single-edge block; a multi-bridge has two vertices and
    /// at least two parallel edges.
    pub fn is_multi_bridge(&self) -> bool {
        self.vertices.len() == 2
    }
}

/// Blocks, cutvertices, and the bipartite tree structure connecting them.
/// Disconnected inputs produce a forest.
#[derive(Clone, Debug)]
pub struct BlockCutTree {
    pub blocks: Vec<Block>,
    pub is_cutvertex: Vec<bool>,
    /// Block index containing each edge (blocks partition the edge set).
    pub block_of_edge: Vec<u32>,
    /// Block indices incident to each vertex, in discovery order.
    pub blocks_at_vertex: Vec<Vec<u32>>,
}

impl BlockCutTree {
    pub fn cutvertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.is_cutvertex
            .iter()
            .enumerate()
            .filter_map(|(v, &c)| if c { Some(v as VertexId) } else { None })
    }

    /// Tree adjacency: for each cutvertex, the incident block nodes.
    pub fn tree_neighbors(&self, v: VertexId) -> &[u32] {
        &self.blocks_at_vertex[v as usize]
    }

    /// DOT rendering of the block-cut tree for debugging. Not a stable
    /// format.
    pub fn to_dot(&self, name_of: impl Fn(VertexId) -> String) -> String {
        use std::fmt::Write;
        let mut s = String::from("graph blockcut {\n");
        for (i, b) in self.blocks.iter().enumerate() {
            let kind = if b.edges.len() == 1 {
                "bridge"
            } else if b.is_multi_bridge() {
                "multi-bridge"
            } else {
                "block"
            };
            writeln!(s, "  b{i} [shape=box,label=\"{kind} |E|={}\"];", b.edges.len()).unwrap();
        }
        for v in 0..self.is_cutvertex.len() {
            if self.is_cutvertex[v] {
                writeln!(s, "  c{v} [label=\"{}\"];", name_of(v as VertexId)).unwrap();
                for &b in &self.blocks_at_vertex[v] {
                    writeln!(s, "  c{v} -- b{b};").unwrap();
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Computes the block-cut tree with an iterative lowpoint DFS. Linear time.
pub fn block_cut_tree(view: &UndirectedView) -> BlockCutTree {
    let n = view.vertex_count;
    let m = view.ends.len();

    // adjacency as (edge id, other endpoint)
    let mut adj: Vec<Vec<(EdgeId, VertexId)>> = vec![Vec::new(); n];
    for (i, &(u, v)) in view.ends.iter().enumerate() {
        adj[u as usize].push((i as EdgeId, v));
        adj[v as usize].push((i as EdgeId, u));
    }

    let mut disc = vec![u32::MAX; n];
    let mut low = vec![u32::MAX; n];
    let mut is_cut = vec![false; n];
    let mut timer = 0u32;
    let mut edge_stack: Vec<EdgeId> = Vec::new();
    let mut edge_seen = vec![false; m];
    let mut blocks: Vec<Block> = Vec::new();
    let mut block_of_edge = vec![u32::MAX; m];

    // frame: (vertex, adjacency cursor, entering edge, child count at root)
    struct Frame {
        v: VertexId,
        i: usize,
        enter: Option<EdgeId>,
        root_children: u32,
    }

    for start in 0..n as u32 {
        if disc[start as usize] != u32::MAX {
            continue;
        }
        disc[start as usize] = timer;
        low[start as usize] = timer;
        timer += 1;
        let mut stack = vec![Frame { v: start, i: 0, enter: None, root_children: 0 }];
        while let Some(top) = stack.last_mut() {
            let v = top.v;
            if top.i < adj[v as usize].len() {
                let (e, w) = adj[v as usize][top.i];
                top.i += 1;
                if Some(e) == top.enter || edge_seen[e as usize] {
                    continue;
                }
                edge_seen[e as usize] = true;
                edge_stack.push(e);
                if disc[w as usize] == u32::MAX {
                    if v == start {
                        top.root_children += 1;
                    }
                    disc[w as usize] = timer;
                    low[w as usize] = timer;
                    timer += 1;
                    stack.push(Frame { v: w, i: 0, enter: Some(e), root_children: 0 });
                } else {
                    low[v as usize] = low[v as usize].min(disc[w as usize]);
                }
            } else {
                let enter = top.enter;
                let root_children = top.root_children;
                stack.pop();
                if let Some(parent) = stack.last_mut() {
                    let p = parent.v;
                    low[p as usize] = low[p as usize].min(low[v as usize]);
                    if low[v as usize] >= disc[p as usize] {
                        // pop one block, delimited by the entering edge
                        let mut edges = Vec::new();
                        loop {
                            let e = edge_stack.pop().expect("block delimiter on edge stack");
                            edges.push(e);
                            if Some(e) == enter {
                                break;
                            }
                        }
                        push_block(&mut blocks, &mut block_of_edge, view, edges);
                        // the root is a cutvertex iff it has more than one
                        // DFS child, handled when its frame pops
                        if p != start {
                            is_cut[p as usize] = true;
                        }
                    }
                } else {
                    // start vertex popped; root is a cutvertex iff it has
                    // more than one DFS child
                    if root_children > 1 {
                        is_cut[v as usize] = true;
                    }
                    debug_assert!(edge_stack.is_empty());
                }
                let _ = root_children;
            }
        }
    }

    let mut blocks_at_vertex: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (i, b) in blocks.iter().enumerate() {
        for &v in &b.vertices {
            blocks_at_vertex[v as usize].push(i as u32);
        }
    }

    BlockCutTree { blocks, is_cutvertex: is_cut, block_of_edge, blocks_at_vertex }
}

fn push_block(
    blocks: &mut Vec<Block>,
    block_of_edge: &mut [u32],
    view: &UndirectedView,
    edges: Vec<EdgeId>,
) {
    let id = blocks.len() as u32;
    let mut vertices = Vec::new();
    for &e in &edges {
        block_of_edge[e as usize] = id;
        let (u, v) = view.ends[e as usize];
        vertices.push(u);
        vertices.push(v);
    }
    vertices.sort_unstable();
    vertices.dedup();
    blocks.push(Block { edges, vertices });
}

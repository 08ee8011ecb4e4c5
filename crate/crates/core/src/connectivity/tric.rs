//! Decomposition of a biconnected multigraph into its split components
//! (triple bonds, triangles, and triconnected graphs), following
//! Hopcroft-Tarjan with the corrections of Gutwenger-Mutzel.
//!
//! The input is a block given by local vertex ids `0..nv` and an edge list;
//! the output is the list of split components over an edge arena in which
//! ids below the input edge count are real and the rest are virtual. Every
//! virtual edge belongs to exactly two components; merging bond-bond and
//! polygon-polygon pairs along virtual edges afterwards yields the SPQR
//! tree (done in `spqr.rs`).
//!
//! All traversals are iterative; blocks can be millions of edges deep.

use crate::GraphError;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CompKind {
    Bond,
    Polygon,
    Triconnected,
}

#[derive(Clone, Debug)]
pub struct Comp {
    pub kind: CompKind,
    pub edges: Vec<u32>,
}

pub struct SplitComponents {
    /// Endpoints per edge id; input edges first, then virtual edges.
    pub ends: Vec<(u32, u32)>,
    pub real_edge_count: usize,
    pub comps: Vec<Comp>,
}

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, PartialEq, Eq)]
enum EType {
    Unseen,
    Tree,
    Frond,
    /// killed into a bundle bond before the search
    Dead,
}

/// Intrusive circular doubly-linked lists: one sentinel per vertex, one node
/// per edge. Used for the dynamic adjacency rings (firstChild queries) and
/// the high-point lists.
struct Rings {
    nv: usize,
    next: Vec<u32>,
    prev: Vec<u32>,
}

impl Rings {
    fn new(nv: usize, ne: usize) -> Self {
        let cap = nv + ne;
        Rings { nv, next: (0..cap as u32).collect(), prev: (0..cap as u32).collect() }
    }

    fn grow(&mut self) {
        let id = self.next.len() as u32;
        self.next.push(id);
        self.prev.push(id);
    }

    fn node(&self, e: u32) -> u32 {
        self.nv as u32 + e
    }

    fn push_back(&mut self, v: u32, e: u32) {
        let x = self.node(e);
        debug_assert_eq!(self.next[x as usize], x, "edge already linked");
        let head = v;
        let tail = self.prev[head as usize];
        self.next[tail as usize] = x;
        self.prev[x as usize] = tail;
        self.next[x as usize] = head;
        self.prev[head as usize] = x;
    }

    fn push_front(&mut self, v: u32, e: u32) {
        let x = self.node(e);
        debug_assert_eq!(self.next[x as usize], x, "edge already linked");
        let head = v;
        let first = self.next[head as usize];
        self.next[head as usize] = x;
        self.prev[x as usize] = head;
        self.next[x as usize] = first;
        self.prev[first as usize] = x;
    }

    /// Unlinks an edge if present; no-op otherwise.
    fn unlink(&mut self, e: u32) {
        let x = self.node(e);
        let (p, n) = (self.prev[x as usize], self.next[x as usize]);
        if n == x {
            return;
        }
        self.next[p as usize] = n;
        self.prev[n as usize] = p;
        self.next[x as usize] = x;
        self.prev[x as usize] = x;
    }

    fn first(&self, v: u32) -> Option<u32> {
        let n = self.next[v as usize];
        if n == v {
            None
        } else {
            Some(n - self.nv as u32)
        }
    }
}

struct Tric {
    nv: usize,
    ne_real: usize,
    /// oriented endpoints (tail, head); tree arcs parent->child, fronds
    /// descendant->ancestor
    ends: Vec<(u32, u32)>,
    etype: Vec<EType>,
    starts_path: Vec<bool>,

    number: Vec<u32>,
    newnum: Vec<u32>,
    node_at: Vec<u32>,
    nd: Vec<u32>,
    lowpt1: Vec<u32>,
    lowpt2: Vec<u32>,
    father: Vec<u32>,
    tree_arc: Vec<u32>,
    degree: Vec<u32>,
    /// tree out-edges of each vertex not yet descended into
    unvisited_tree: Vec<u32>,

    /// static scan order (phi-sorted out-edges), CSR layout
    adj_head: Vec<u32>,
    adj_items: Vec<u32>,
    /// dynamic adjacency rings keyed by tail vertex
    ring: Rings,
    /// fronds into each vertex, front = current highpoint
    high: Rings,

    estack: Vec<u32>,
    tstack: Vec<(u32, u32, u32)>,

    comps: Vec<Comp>,
    root: u32,
}

impl Tric {
    fn new_virtual(&mut self, tail: u32, head: u32) -> u32 {
        let e = self.ends.len() as u32;
        self.ends.push((tail, head));
        self.etype.push(EType::Unseen);
        self.starts_path.push(false);
        self.ring.grow();
        self.high.grow();
        e
    }

    /// Removes an alive edge from the dynamic structures ahead of placing it
    /// into a component.
    fn consume(&mut self, e: u32) {
        self.ring.unlink(e);
        self.high.unlink(e);
        let (t, h) = self.ends[e as usize];
        self.degree[t as usize] -= 1;
        self.degree[h as usize] -= 1;
    }

    fn high(&self, v: u32) -> u32 {
        match self.high.first(v) {
            Some(e) => self.newnum[self.ends[e as usize].0 as usize],
            None => 0,
        }
    }

    fn first_child(&self, v: u32) -> Option<u32> {
        self.ring.first(v).map(|e| self.ends[e as usize].1)
    }

    fn nnum(&self, e: u32) -> (u32, u32) {
        let (t, h) = self.ends[e as usize];
        (self.newnum[t as usize], self.newnum[h as usize])
    }

    fn adj(&self, v: u32) -> &[u32] {
        &self.adj_items[self.adj_head[v as usize] as usize..self.adj_head[v as usize + 1] as usize]
    }
}

/// Stable counting sort of `order` by a small integer key.
fn counting_sort(order: &mut Vec<u32>, bound: usize, key: impl Fn(u32) -> u32) {
    let mut cnt = vec![0u32; bound + 1];
    for &e in order.iter() {
        cnt[key(e) as usize] += 1;
    }
    let mut sum = 0u32;
    for c in cnt.iter_mut() {
        let x = *c;
        *c = sum;
        sum += x;
    }
    let mut out = vec![0u32; order.len()];
    for &e in order.iter() {
        let k = key(e) as usize;
        out[cnt[k] as usize] = e;
        cnt[k] += 1;
    }
    *order = out;
}

/// Splits off every bundle of parallel edges into a bond component headed by
/// a fresh virtual edge; the virtual edge stands in for the bundle.
fn split_multi_edges(t: &mut Tric) -> Vec<u32> {
    let ne = t.ends.len();
    // two stable counting sorts order edges by (min, max)
    let key = |(u, v): (u32, u32)| if u < v { (u, v) } else { (v, u) };
    let mut order: Vec<u32> = (0..ne as u32).collect();
    counting_sort(&mut order, t.nv, |e| key(t.ends[e as usize]).1);
    counting_sort(&mut order, t.nv, |e| key(t.ends[e as usize]).0);

    let mut alive = Vec::with_capacity(ne);
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        let k = key(t.ends[order[i] as usize]);
        while j < order.len() && key(t.ends[order[j] as usize]) == k {
            j += 1;
        }
        if j - i >= 2 {
            let virt = t.new_virtual(k.0, k.1);
            let mut edges = vec![virt];
            for &e in &order[i..j] {
                t.etype[e as usize] = EType::Dead;
                edges.push(e);
            }
            t.comps.push(Comp { kind: CompKind::Bond, edges });
            alive.push(virt);
        } else {
            alive.push(order[i]);
        }
        i = j;
    }
    alive
}

/// First DFS: numbering, lowpoints, subtree sizes, edge classification and
/// orientation. Returns an error if the graph is not biconnected.
fn dfs1(t: &mut Tric, alive: &[u32]) -> Result<(), GraphError> {
    let nv = t.nv;
    // flat incidence (CSR)
    let mut head = vec![0u32; nv + 1];
    for &e in alive {
        let (u, v) = t.ends[e as usize];
        head[u as usize + 1] += 1;
        head[v as usize + 1] += 1;
        t.degree[u as usize] += 1;
        t.degree[v as usize] += 1;
    }
    for i in 0..nv {
        head[i + 1] += head[i];
    }
    let mut items = vec![0u32; 2 * alive.len()];
    let mut cursor = head.clone();
    for &e in alive {
        let (u, v) = t.ends[e as usize];
        items[cursor[u as usize] as usize] = e;
        cursor[u as usize] += 1;
        items[cursor[v as usize] as usize] = e;
        cursor[v as usize] += 1;
    }
    let incidence = |v: u32| &items[head[v as usize] as usize..head[v as usize + 1] as usize];

    let root = t.root;
    let mut timer = 1u32;
    t.number[root as usize] = 1;
    t.lowpt1[root as usize] = 1;
    t.lowpt2[root as usize] = 1;

    // frame: (vertex, cursor)
    let mut stack: Vec<(u32, usize)> = vec![(root, 0)];
    let mut root_children = 0u32;
    loop {
        let Some(&(v, i)) = stack.last() else { break };
        if i < incidence(v).len() {
            stack.last_mut().unwrap().1 += 1;
            let e = incidence(v)[i];
            if t.etype[e as usize] != EType::Unseen {
                continue;
            }
            let (a, b) = t.ends[e as usize];
            let w = if a == v { b } else { a };
            if t.number[w as usize] == 0 {
                t.etype[e as usize] = EType::Tree;
                t.ends[e as usize] = (v, w);
                t.tree_arc[w as usize] = e;
                t.father[w as usize] = v;
                t.unvisited_tree[v as usize] += 1;
                timer += 1;
                t.number[w as usize] = timer;
                t.lowpt1[w as usize] = timer;
                t.lowpt2[w as usize] = timer;
                if v == root {
                    root_children += 1;
                }
                stack.push((w, 0));
            } else if t.number[w as usize] < t.number[v as usize] {
                t.etype[e as usize] = EType::Frond;
                t.ends[e as usize] = (v, w);
                let nw = t.number[w as usize];
                if nw < t.lowpt1[v as usize] {
                    t.lowpt2[v as usize] = t.lowpt1[v as usize];
                    t.lowpt1[v as usize] = nw;
                } else if nw > t.lowpt1[v as usize] {
                    t.lowpt2[v as usize] = t.lowpt2[v as usize].min(nw);
                }
            } else {
                // the mate will classify it as a frond from the other side
                continue;
            }
        } else {
            let (v, _) = stack.pop().unwrap();
            if let Some(&(p, _)) = stack.last() {
                t.nd[p as usize] += t.nd[v as usize];
                let (l1v, l2v) = (t.lowpt1[v as usize], t.lowpt2[v as usize]);
                let l1p = t.lowpt1[p as usize];
                if l1v < l1p {
                    t.lowpt2[p as usize] = l1p.min(l2v);
                    t.lowpt1[p as usize] = l1v;
                } else if l1v == l1p {
                    t.lowpt2[p as usize] = t.lowpt2[p as usize].min(l2v);
                } else {
                    t.lowpt2[p as usize] = t.lowpt2[p as usize].min(l1v);
                }
                // biconnectivity: every non-root child subtree must reach
                // strictly above its parent
                if p != root && l1v >= t.number[p as usize] {
                    return Err(GraphError::ContractViolation {
                        reason: "spqr_tree requires a biconnected block".into(),
                    });
                }
            }
        }
    }
    if timer as usize != nv || root_children != 1 {
        return Err(GraphError::ContractViolation {
            reason: "spqr_tree requires a connected biconnected block".into(),
        });
    }
    Ok(())
}

/// Sorts the adjacency lists by the classic phi potential so that each DFS
/// path descends as low as possible before ending in a frond.
fn build_acceptable_adj(t: &mut Tric, alive: &[u32]) {
    let n = t.nv as u32;
    let phi = |t: &Tric, e: u32| -> u32 {
        let (v, w) = t.ends[e as usize];
        match t.etype[e as usize] {
            EType::Frond => 3 * t.number[w as usize] + 1,
            EType::Tree => {
                if t.lowpt2[w as usize] < t.number[v as usize] {
                    3 * t.lowpt1[w as usize]
                } else {
                    3 * t.lowpt1[w as usize] + 2
                }
            }
            _ => unreachable!("dead edges are not alive"),
        }
    };
    // order by phi, then stably by tail: each tail's slice stays phi-sorted
    let mut order: Vec<u32> = alive.to_vec();
    counting_sort(&mut order, (3 * n + 3) as usize, |e| phi(t, e));
    counting_sort(&mut order, t.nv, |e| t.ends[e as usize].0);
    t.adj_head = vec![0u32; t.nv + 1];
    for &e in &order {
        t.adj_head[t.ends[e as usize].0 as usize + 1] += 1;
    }
    for i in 0..t.nv {
        t.adj_head[i + 1] += t.adj_head[i];
    }
    for &e in &order {
        t.ring.push_back(t.ends[e as usize].0, e);
    }
    t.adj_items = order;
}

/// Second DFS over the ordered adjacency: assigns the path-based numbering,
/// marks path starts, and fills the high-point lists.
fn dfs2(t: &mut Tric) {
    let mut numcount = t.nv as u32;
    let mut newpath = true;
    let root = t.root;
    t.newnum[root as usize] = numcount - t.nd[root as usize] + 1;

    let mut stack: Vec<(u32, usize)> = vec![(root, 0)];
    loop {
        let Some(&(v, i)) = stack.last() else { break };
        if i < t.adj(v).len() {
            stack.last_mut().unwrap().1 += 1;
            let e = t.adj(v)[i];
            if newpath {
                newpath = false;
                t.starts_path[e as usize] = true;
            }
            let w = t.ends[e as usize].1;
            if t.etype[e as usize] == EType::Tree {
                t.newnum[w as usize] = numcount - t.nd[w as usize] + 1;
                stack.push((w, 0));
            } else {
                t.high.push_back(w, e);
                newpath = true;
            }
        } else {
            stack.pop();
            if !stack.is_empty() {
                numcount -= 1;
            }
        }
    }

    // translate lowpoints into the new numbering
    let mut old2new = vec![0u32; t.nv + 1];
    for v in 0..t.nv {
        old2new[t.number[v] as usize] = t.newnum[v];
    }
    for v in 0..t.nv {
        t.node_at[t.newnum[v] as usize] = v as u32;
        t.lowpt1[v] = old2new[t.lowpt1[v] as usize];
        t.lowpt2[v] = old2new[t.lowpt2[v] as usize];
    }
}

/// The main search. Finds type-1 and type-2 separation pairs and splits off
/// their components, leaving the last component on the edge stack.
fn path_search(t: &mut Tric) {
    t.tstack.push((0, 0, 0)); // bottom
    struct Frame {
        v: u32,
        i: usize,
        /// child currently being visited, processed when control returns
        pending: Option<(u32, u32)>, // (scanned edge, child vertex)
    }
    let mut frames = vec![Frame { v: t.root, i: 0, pending: None }];

    'outer: loop {
        let (v, pending) = {
            let Some(top) = frames.last_mut() else { break };
            (top.v, top.pending.take())
        };
        if let Some((e_scanned, w0)) = pending {
            post_tree_edge(t, v, w0, e_scanned);
        }
        loop {
            let i = {
                let top = frames.last_mut().unwrap();
                if top.i >= t.adj(v).len() {
                    break;
                }
                top.i += 1;
                top.i - 1
            };
            let e = t.adj(v)[i];
            let vnum = t.newnum[v as usize];
            let w = t.ends[e as usize].1;
            if t.etype[e as usize] == EType::Tree {
                if t.starts_path[e as usize] {
                    let h_new = t.newnum[w as usize] + t.nd[w as usize] - 1;
                    tstack_update_for_path(t, t.lowpt1[w as usize], h_new, vnum);
                    t.tstack.push((0, 0, 0)); // end-of-stack marker
                }
                t.unvisited_tree[v as usize] -= 1;
                frames.last_mut().unwrap().pending = Some((e, w));
                frames.push(Frame { v: w, i: 0, pending: None });
                continue 'outer;
            } else {
                // frond
                let wnum = t.newnum[w as usize];
                if t.starts_path[e as usize] {
                    tstack_update_for_path(t, wnum, vnum, vnum);
                }
                if w == t.father[v as usize] {
                    // parallel to the tree arc entering v: immediate bond
                    let old = t.tree_arc[v as usize];
                    t.consume(e);
                    t.consume(old);
                    let virt = t.new_virtual(w, v);
                    t.comps.push(Comp { kind: CompKind::Bond, edges: vec![virt, e, old] });
                    t.degree[w as usize] += 1;
                    t.degree[v as usize] += 1;
                    t.ring.push_back(w, virt);
                    t.etype[virt as usize] = EType::Tree;
                    t.tree_arc[v as usize] = virt;
                } else {
                    t.estack.push(e);
                }
            }
        }
        frames.pop();
    }

    // the last component
    let mut edges = std::mem::take(&mut t.estack);
    for &e in &edges {
        t.consume(e);
    }
    if !edges.is_empty() {
        edges.reverse();
        t.comps.push(Comp { kind: CompKind::Triconnected, edges });
    }
}

/// TSTACK maintenance when a new path starts: merge all triples whose `a` is
/// above the new path's lowpoint.
fn tstack_update_for_path(t: &mut Tric, low: u32, h_new: u32, vnum: u32) {
    let mut y = 0u32;
    let mut last_b = None;
    while let Some(&(h, a, b)) = t.tstack.last() {
        if a > low {
            y = y.max(h);
            last_b = Some(b);
            t.tstack.pop();
        } else {
            break;
        }
    }
    match last_b {
        None => t.tstack.push((h_new, low, vnum)),
        Some(b) => t.tstack.push((y, low, b)),
    }
}

/// Everything that happens at the tail of a tree edge once its subtree has
/// been fully searched.
fn post_tree_edge(t: &mut Tric, v: u32, mut w: u32, e_scanned: u32) {
    let vnum = t.newnum[v as usize];
    t.estack.push(t.tree_arc[w as usize]);
    let mut wnum = t.newnum[w as usize];

    // type-2 pairs
    while vnum != 1 {
        let &(h, a, b) = t.tstack.last().unwrap();
        let deg2 = t.degree[w as usize] == 2
            && t
                .first_child(w)
                .map(|c| t.newnum[c as usize] > wnum)
                .unwrap_or(false);
        if !(a == vnum || deg2) {
            break;
        }
        if a == vnum && t.father[t.node_at[b as usize] as usize] == t.node_at[a as usize] {
            t.tstack.pop();
            continue;
        }

        let mut e_ab: Option<u32> = None;
        let mut e_virt;
        if deg2 {
            // {v, x}: pop the degree-2 chain vertex w between them
            let e1 = t.estack.pop().expect("tree arc on estack");
            let e2 = t.estack.pop().expect("chain edge on estack");
            let x = t.ends[e2 as usize].1;
            t.consume(e1);
            t.consume(e2);
            e_virt = t.new_virtual(v, x);
            t.comps.push(Comp { kind: CompKind::Polygon, edges: vec![e1, e2, e_virt] });
            if let Some(&cand) = t.estack.last() {
                let (p, q) = t.ends[cand as usize];
                if (p == x && q == v) || (p == v && q == x) {
                    t.estack.pop();
                    t.consume(cand);
                    e_ab = Some(cand);
                }
            }
            w = x;
            wnum = t.newnum[w as usize];
        } else {
            // a == vnum: pop everything numbered within [a, h]
            t.tstack.pop();
            let mut edges = Vec::new();
            while let Some(&xy) = t.estack.last() {
                let (x, y) = t.nnum(xy);
                if !(a <= x && x <= h && a <= y && y <= h) {
                    break;
                }
                t.estack.pop();
                if (x == a && y == b) || (x == b && y == a) {
                    t.consume(xy);
                    e_ab = Some(xy);
                } else {
                    t.consume(xy);
                    edges.push(xy);
                }
            }
            let bv = t.node_at[b as usize];
            e_virt = t.new_virtual(v, bv);
            edges.push(e_virt);
            let kind = if edges.len() >= 4 { CompKind::Triconnected } else { CompKind::Polygon };
            t.comps.push(Comp { kind, edges });
            w = bv;
            wnum = b;
        }

        if let Some(eab) = e_ab {
            let prev = e_virt;
            e_virt = t.new_virtual(v, w);
            t.comps.push(Comp { kind: CompKind::Bond, edges: vec![eab, prev, e_virt] });
        }
        t.estack.push(e_virt);
        t.ring.push_back(v, e_virt);
        t.degree[v as usize] += 1;
        t.degree[w as usize] += 1;
        t.father[w as usize] = v;
        t.tree_arc[w as usize] = e_virt;
        t.etype[e_virt as usize] = EType::Tree;
    }

    // type-1 pair {lowpt1(w), v}
    if t.lowpt2[w as usize] >= vnum
        && t.lowpt1[w as usize] < vnum
        && (t.father[v as usize] != t.root || t.unvisited_tree[v as usize] >= 1)
    {
        let mut edges = Vec::new();
        let lo = wnum;
        let hi = wnum + t.nd[w as usize];
        while let Some(&xy) = t.estack.last() {
            let (x, y) = t.nnum(xy);
            if !((lo <= x && x < hi) || (lo <= y && y < hi)) {
                break;
            }
            t.estack.pop();
            t.consume(xy);
            edges.push(xy);
        }
        let z = t.node_at[t.lowpt1[w as usize] as usize];
        let mut e_virt = t.new_virtual(v, z);
        edges.push(e_virt);
        let kind = if edges.len() >= 4 { CompKind::Triconnected } else { CompKind::Polygon };
        t.comps.push(Comp { kind, edges });

        if let Some(&cand) = t.estack.last() {
            let (p, q) = t.ends[cand as usize];
            if (p == v && q == z) || (p == z && q == v) {
                t.estack.pop();
                t.consume(cand);
                let prev = e_virt;
                e_virt = t.new_virtual(v, z);
                t.comps.push(Comp { kind: CompKind::Bond, edges: vec![cand, prev, e_virt] });
            }
        }

        if z != t.father[v as usize] {
            t.estack.push(e_virt);
            t.ring.push_back(v, e_virt);
            t.degree[v as usize] += 1;
            t.degree[z as usize] += 1;
            t.etype[e_virt as usize] = EType::Frond;
            if t.high(z) < vnum {
                t.high.push_front(z, e_virt);
            }
        } else {
            // bond with the tree arc entering v
            let old = t.tree_arc[v as usize];
            t.consume(old);
            let prev = e_virt;
            e_virt = t.new_virtual(z, v);
            t.comps.push(Comp { kind: CompKind::Bond, edges: vec![prev, old, e_virt] });
            t.degree[z as usize] += 1;
            t.degree[v as usize] += 1;
            t.ring.push_back(z, e_virt);
            t.tree_arc[v as usize] = e_virt;
            t.etype[e_virt as usize] = EType::Tree;
        }
    }

    // path bookkeeping on the scanned edge
    if t.starts_path[e_scanned as usize] {
        while let Some(&top) = t.tstack.last() {
            t.tstack.pop();
            if top == (0, 0, 0) {
                break;
            }
        }
    }
    while let Some(&(h, a, b)) = t.tstack.last() {
        if (h, a, b) != (0, 0, 0) && a != vnum && b != vnum && t.high(v) > h {
            t.tstack.pop();
        } else {
            break;
        }
    }
}

/// Decomposes a biconnected multigraph into split components.
///
/// `nv >= 3` and the graph must be biconnected; otherwise an error is
/// returned. Runs in linear time.
pub fn split_components(nv: usize, edges: &[(u32, u32)]) -> Result<SplitComponents, GraphError> {
    if nv < 3 {
        return Err(GraphError::ContractViolation {
            reason: format!("split_components requires >= 3 vertices, got {nv}"),
        });
    }
    let ne = edges.len();
    let mut t = Tric {
        nv,
        ne_real: ne,
        ends: edges.to_vec(),
        etype: vec![EType::Unseen; ne],
        starts_path: vec![false; ne],
        number: vec![0; nv],
        newnum: vec![0; nv],
        node_at: vec![NONE; nv + 1],
        nd: vec![1; nv],
        lowpt1: vec![0; nv],
        lowpt2: vec![0; nv],
        father: vec![NONE; nv],
        tree_arc: vec![NONE; nv],
        degree: vec![0; nv],
        unvisited_tree: vec![0; nv],
        adj_head: Vec::new(),
        adj_items: Vec::new(),
        ring: Rings::new(nv, ne),
        high: Rings::new(nv, ne),
        estack: Vec::new(),
        tstack: Vec::new(),
        comps: Vec::new(),
        root: 0,
    };
    for &(u, v) in edges {
        if u == v || u as usize >= nv || v as usize >= nv {
            return Err(GraphError::Input { reason: "bad edge endpoints".into() });
        }
    }
    let prof = std::env::var("TRIC_PROF").is_ok() && edges.len() > 100_000;
    let t0 = std::time::Instant::now();
    let alive = split_multi_edges(&mut t);
    if alive.len() < 2 {
        return Err(GraphError::ContractViolation {
            reason: "biconnected block on >= 3 vertices must keep >= 3 simple edges".into(),
        });
    }
    if prof { eprintln!("  tric split_multi {:?}", t0.elapsed()); }
    let t1 = std::time::Instant::now();
    dfs1(&mut t, &alive)?;
    if prof { eprintln!("  tric dfs1 {:?}", t1.elapsed()); }
    let t2 = std::time::Instant::now();
    build_acceptable_adj(&mut t, &alive);
    if prof { eprintln!("  tric adj {:?}", t2.elapsed()); }
    let t3 = std::time::Instant::now();
    dfs2(&mut t);
    if prof { eprintln!("  tric dfs2 {:?}", t3.elapsed()); }
    let t4 = std::time::Instant::now();
    path_search(&mut t);
    if prof { eprintln!("  tric path_search {:?}", t4.elapsed()); }

    // reclassify by shape: a component with two distinct vertices is a bond,
    // one with as many edges as vertices is a polygon, the rest are
    // triconnected
    let ends = t.ends;
    for c in &mut t.comps {
        let mut vs: Vec<u32> = c
            .edges
            .iter()
            .flat_map(|&e| [ends[e as usize].0, ends[e as usize].1])
            .collect();
        vs.sort_unstable();
        vs.dedup();
        c.kind = if vs.len() == 2 {
            CompKind::Bond
        } else if vs.len() == c.edges.len() {
            CompKind::Polygon
        } else {
            CompKind::Triconnected
        };
    }

    Ok(SplitComponents { ends, real_edge_count: t.ne_real, comps: t.comps })
}

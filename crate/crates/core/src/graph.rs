//! Bidirected graph data model: vertex-sides, splitting, flipping, tips, and
//! the underlying undirected multigraph view.
//!
//! Vertices carry opaque string names mapped to dense internal ids; the dense
//! ids never appear in output. Graphs are immutable after construction.

use std::collections::HashMap;
use std::fmt;

use crate::GraphError;

/// Sign of a vertex-side.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    #[inline]
    pub fn opposite(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    #[inline]
    pub fn idx(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Dense internal vertex index, valid only for the graph that produced it.
pub type VertexId = u32;

/// Dense edge index into [`BidirectedGraph::edges`].
pub type EdgeId = u32;

/// A vertex paired with a sign, written `v+` or `v-`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexSide {
    pub vertex: VertexId,
    pub sign: Sign,
}

impl VertexSide {
    pub fn new(vertex: VertexId, sign: Sign) -> Self {
        VertexSide { vertex, sign }
    }

    pub fn opposite(self) -> VertexSide {
        VertexSide { vertex: self.vertex, sign: self.sign.opposite() }
    }
}

/// An unordered pair of vertex-sides. Canonicalized so that `a <= b`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BidirectedEdge {
    pub a: VertexSide,
    pub b: VertexSide,
}

impl BidirectedEdge {
    pub fn new(x: VertexSide, y: VertexSide) -> Self {
        if x <= y {
            BidirectedEdge { a: x, b: y }
        } else {
            BidirectedEdge { a: y, b: x }
        }
    }

    /// The side of this edge at `v`. Panics if `v` is not an endpoint.
    pub fn side_at(&self, v: VertexId) -> Sign {
        if self.a.vertex == v {
            self.a.sign
        } else {
            debug_assert_eq!(self.b.vertex, v);
            self.b.sign
        }
    }

    /// The endpoint other than `v`.
    pub fn other(&self, v: VertexId) -> VertexSide {
        if self.a.vertex == v {
            self.b
        } else {
            self.a
        }
    }
}

/// Immutable bidirected graph.
///
/// Self-loops are rejected at construction and exact-duplicate edges (same
/// unordered pair of vertex-sides) are deduplicated. Up to four distinct
/// edges may exist between the same vertex pair, one per sign combination.
#[derive(Clone, Debug)]
pub struct BidirectedGraph {
    names: Vec<String>,
    name_index: HashMap<String, VertexId>,
    edges: Vec<BidirectedEdge>,
    /// Per vertex, incident edge ids partitioned by the sign at that vertex.
    incidence: Vec<[Vec<EdgeId>; 2]>,
}

impl BidirectedGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::new()
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.names.len() as u32
    }

    pub fn edges(&self) -> &[BidirectedEdge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &BidirectedEdge {
        &self.edges[e as usize]
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v as usize]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.name_index.get(name).copied()
    }

    /// Incident edges at `v` whose side at `v` carries `sign`.
    pub fn incident(&self, v: VertexId, sign: Sign) -> &[EdgeId] {
        &self.incidence[v as usize][sign.idx()]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        let inc = &self.incidence[v as usize];
        inc[0].len() + inc[1].len()
    }

    pub fn side_degree(&self, v: VertexId, sign: Sign) -> usize {
        self.incidence[v as usize][sign.idx()].len()
    }

    pub fn has_edge(&self, x: VertexSide, y: VertexSide) -> bool {
        let probe = BidirectedEdge::new(x, y);
        self.incident(x.vertex, x.sign)
            .iter()
            .any(|&e| self.edges[e as usize] == probe)
    }

    /// Returns the unique incident sign if `v` is a tip, `None` otherwise.
    /// Isolated vertices are classified as tips with canonical sign `+`.
    pub fn is_tip(&self, v: VertexId) -> Option<Sign> {
        let plus = self.side_degree(v, Sign::Plus);
        let minus = self.side_degree(v, Sign::Minus);
        match (plus, minus) {
            (0, 0) => Some(Sign::Plus),
            (_, 0) => Some(Sign::Plus),
            (0, _) => Some(Sign::Minus),
            _ => None,
        }
    }

    /// Splits the vertex-side `vs`: all edges incident to `vs.vertex` with
    /// the opposite sign are re-attached to a fresh vertex. Returns the new
    /// graph and the id of the fresh vertex; `self` is unchanged.
    pub fn split(&self, vs: VertexSide) -> (BidirectedGraph, VertexId) {
        let mut builder = GraphBuilder::new();
        for name in &self.names {
            builder.intern(name);
        }
        let copy_name = self.fresh_copy_name(vs.vertex);
        let copy = builder.intern(&copy_name);
        let off = vs.sign.opposite();
        for edge in &self.edges {
            let map = |side: VertexSide| {
                if side.vertex == vs.vertex && side.sign == off {
                    VertexSide::new(copy, side.sign)
                } else {
                    side
                }
            };
            builder.push_edge(map(edge.a), map(edge.b));
        }
        (builder.build_unchecked(), copy)
    }

    /// All signs at `v` inverted on every incident edge.
    pub fn flip_vertex(&self, v: VertexId) -> BidirectedGraph {
        let mut builder = GraphBuilder::new();
        for name in &self.names {
            builder.intern(name);
        }
        for edge in &self.edges {
            let map = |side: VertexSide| {
                if side.vertex == v {
                    side.opposite()
                } else {
                    side
                }
            };
            builder.push_edge(map(edge.a), map(edge.b));
        }
        builder.build_unchecked()
    }

    /// Sign-stripped multigraph view; edge identifiers are preserved.
    pub fn underlying_undirected(&self) -> UndirectedView {
        UndirectedView {
            vertex_count: self.vertex_count(),
            ends: self
                .edges
                .iter()
                .map(|e| (e.a.vertex, e.b.vertex))
                .collect(),
        }
    }

    /// Interprets the graph as directed. Succeeds iff every edge has one `+`
    /// and one `-` side; otherwise reports a witness edge.
    pub fn as_directed(&self) -> Result<DirectedGraph, GraphError> {
        let mut arcs = Vec::with_capacity(self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            if e.a.sign == e.b.sign {
                return Err(GraphError::NotDigraphic {
                    edge: format!(
                        "{{{}{}, {}{}}}",
                        self.name(e.a.vertex),
                        e.a.sign,
                        self.name(e.b.vertex),
                        e.b.sign
                    ),
                });
            }
            let (tail, head) = if e.a.sign == Sign::Plus {
                (e.a.vertex, e.b.vertex)
            } else {
                (e.b.vertex, e.a.vertex)
            };
            arcs.push(Arc { tail, head, edge: i as EdgeId });
        }
        Ok(DirectedGraph::from_parts(self.names.clone(), self.name_index.clone(), arcs))
    }

    fn fresh_copy_name(&self, v: VertexId) -> String {
        let mut name = format!("{}'", self.name(v));
        while self.name_index.contains_key(&name) {
            name.push('\'');
        }
        name
    }
}

/// Builder for [`BidirectedGraph`]. Vertices are interned in first-use order.
#[derive(Default)]
pub struct GraphBuilder {
    names: Vec<String>,
    name_index: HashMap<String, VertexId>,
    edges: Vec<BidirectedEdge>,
    seen: HashMap<BidirectedEdge, ()>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> VertexId {
        if let Some(&v) = self.name_index.get(name) {
            return v;
        }
        let v = self.names.len() as VertexId;
        self.names.push(name.to_string());
        self.name_index.insert(name.to_string(), v);
        v
    }

    /// Adds an edge between interned vertex ids. Duplicate edges (identical
    /// sign pattern) are dropped; self-loops are an error.
    pub fn add_edge(
        &mut self,
        u: VertexId,
        us: Sign,
        v: VertexId,
        vs: Sign,
    ) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop { vertex: self.names[u as usize].clone() });
        }
        self.push_edge(VertexSide::new(u, us), VertexSide::new(v, vs));
        Ok(())
    }

    pub fn add_edge_by_name(
        &mut self,
        u: &str,
        us: Sign,
        v: &str,
        vs: Sign,
    ) -> Result<(), GraphError> {
        let ui = self.intern(u);
        let vi = self.intern(v);
        self.add_edge(ui, us, vi, vs)
    }

    fn push_edge(&mut self, x: VertexSide, y: VertexSide) {
        let e = BidirectedEdge::new(x, y);
        if self.seen.insert(e, ()).is_none() {
            self.edges.push(e);
        }
    }

    pub fn build(self) -> BidirectedGraph {
        self.build_unchecked()
    }

    fn build_unchecked(self) -> BidirectedGraph {
        let mut incidence: Vec<[Vec<EdgeId>; 2]> = vec![Default::default(); self.names.len()];
        for (i, e) in self.edges.iter().enumerate() {
            incidence[e.a.vertex as usize][e.a.sign.idx()].push(i as EdgeId);
            incidence[e.b.vertex as usize][e.b.sign.idx()].push(i as EdgeId);
        }
        BidirectedGraph {
            names: self.names,
            name_index: self.name_index,
            edges: self.edges,
            incidence,
        }
    }
}

/// A directed arc; `edge` ties it back to the bidirected edge it encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
    pub edge: EdgeId,
}

/// Directed graph, the all-opposite-signs special case of bidirected graphs.
#[derive(Clone, Debug)]
pub struct DirectedGraph {
    names: Vec<String>,
    name_index: HashMap<String, VertexId>,
    arcs: Vec<Arc>,
    out: Vec<Vec<u32>>,
    inn: Vec<Vec<u32>>,
}

impl DirectedGraph {
    pub(crate) fn from_parts(
        names: Vec<String>,
        name_index: HashMap<String, VertexId>,
        arcs: Vec<Arc>,
    ) -> Self {
        let n = names.len();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for (i, a) in arcs.iter().enumerate() {
            out[a.tail as usize].push(i as u32);
            inn[a.head as usize].push(i as u32);
        }
        DirectedGraph { names, name_index, arcs, out, inn }
    }

    /// Builds a digraph from named arcs, deduplicating parallel arcs and
    /// rejecting self-loops.
    pub fn from_named_arcs<'a>(
        arcs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<DirectedGraph, GraphError> {
        let mut builder = GraphBuilder::new();
        for (u, v) in arcs {
            builder.add_edge_by_name(u, Sign::Plus, v, Sign::Minus)?;
        }
        builder.build().as_directed()
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v as usize]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.name_index.get(name).copied()
    }

    pub fn out_arcs(&self, v: VertexId) -> impl Iterator<Item = &Arc> {
        self.out[v as usize].iter().map(move |&i| &self.arcs[i as usize])
    }

    pub fn in_arcs(&self, v: VertexId) -> impl Iterator<Item = &Arc> {
        self.inn[v as usize].iter().map(move |&i| &self.arcs[i as usize])
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out[v as usize].len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.inn[v as usize].len()
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.out_arcs(u).any(|a| a.head == v)
    }

    /// Underlying undirected multigraph; arc ids become edge ids.
    pub fn underlying_undirected(&self) -> UndirectedView {
        UndirectedView {
            vertex_count: self.vertex_count(),
            ends: self.arcs.iter().map(|a| (a.tail, a.head)).collect(),
        }
    }

    /// The bidirected encoding of this digraph (`uv` becomes `{u+, v-}`).
    pub fn to_bidirected(&self) -> BidirectedGraph {
        let mut builder = GraphBuilder::new();
        for name in &self.names {
            builder.intern(name);
        }
        for a in &self.arcs {
            builder.push_edge(
                VertexSide::new(a.tail, Sign::Plus),
                VertexSide::new(a.head, Sign::Minus),
            );
        }
        builder.build_unchecked()
    }
}

/// Sign-stripped undirected multigraph. Parallel edges are retained and the
/// edge index is a bijection with the source graph's edges.
#[derive(Clone, Debug)]
pub struct UndirectedView {
    pub vertex_count: usize,
    /// Edge endpoints, indexed by the originating edge id.
    pub ends: Vec<(VertexId, VertexId)>,
}

impl UndirectedView {
    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }
}

/// A closed bidirected walk without repeated vertices in which at most one
/// vertex (the exceptional vertex) does not alternate signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycloid {
    /// Edge ids in traversal order; consecutive edges share a vertex.
    pub edges: Vec<EdgeId>,
    pub exceptional_vertex: Option<VertexId>,
}

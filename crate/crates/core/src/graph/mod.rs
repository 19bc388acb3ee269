//! Directed acyclic graphs, partially directed graphs and local essential graphs.

mod dsep;
mod orient;
mod text;

use std::collections::{BTreeSet, VecDeque};

pub use dsep::{d_connected_set, d_separated};
pub use orient::{
    apply_meek_rules, cde_identifiable_from_graph, dag_to_cpdag, orient_unshielded_colliders, OrientConflict,
};
pub(crate) use orient::{meek_closure, orient_colliders_with};
pub use text::{parse_dag, parse_leg, write_dag, write_leg};

use crate::error::GraphError;

pub type NodeId = usize;

/// Anything with an undirected skeleton.
pub trait Skeleton {
    fn node_count(&self) -> usize;
    fn adjacent_nodes(&self, v: NodeId) -> Vec<NodeId>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dag {
    parents: Vec<Vec<NodeId>>,
    children: Vec<Vec<NodeId>>,
}

impl Dag {
    pub fn empty(n: usize) -> Self {
        Dag { parents: vec![Vec::new(); n], children: vec![Vec::new(); n] }
    }

    pub fn new(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self, GraphError> {
        let mut g = Dag::empty(n);
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Adds `a -> b`, rejecting self-loops, duplicates and cycles.
    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> Result<(), GraphError> {
        let n = self.n();
        if a >= n {
            return Err(GraphError::NodeOutOfRange(a, n));
        }
        if b >= n {
            return Err(GraphError::NodeOutOfRange(b, n));
        }
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        if self.adjacent(a, b) {
            return Err(GraphError::DuplicateEdge(a, b));
        }
        if self.is_ancestor(b, a) {
            return Err(GraphError::Cycle(a, b));
        }
        insert_sorted(&mut self.children[a], b);
        insert_sorted(&mut self.parents[b], a);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.parents.len()
    }

    pub fn parents(&self, v: NodeId) -> &[NodeId] {
        &self.parents[v]
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v]
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.children[a].binary_search(&b).is_ok()
    }

    pub fn adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.has_edge(a, b) || self.has_edge(b, a)
    }

    pub fn neighbors(&self, v: NodeId) -> BTreeSet<NodeId> {
        self.parents[v].iter().chain(&self.children[v]).copied().collect()
    }

    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for (a, ch) in self.children.iter().enumerate() {
            for &b in ch {
                out.push((a, b));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    /// Strict descendants of `v`.
    pub fn descendants(&self, v: NodeId) -> BTreeSet<NodeId> {
        self.reach(v, |u| &self.children[u])
    }

    /// Strict ancestors of `v`.
    pub fn ancestors(&self, v: NodeId) -> BTreeSet<NodeId> {
        self.reach(v, |u| &self.parents[u])
    }

    fn is_ancestor(&self, a: NodeId, b: NodeId) -> bool {
        a == b || self.descendants(a).contains(&b)
    }

    fn reach<'a>(&'a self, v: NodeId, next: impl Fn(NodeId) -> &'a [NodeId]) -> BTreeSet<NodeId> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &w in next(u) {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub fn topological_order(&self) -> Vec<NodeId> {
        let n = self.n();
        let mut indeg: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut queue: VecDeque<NodeId> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &c in &self.children[v] {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    queue.push_back(c);
                }
            }
        }
        order
    }
}

impl Skeleton for Dag {
    fn node_count(&self) -> usize {
        self.n()
    }
    fn adjacent_nodes(&self, v: NodeId) -> Vec<NodeId> {
        self.neighbors(v).into_iter().collect()
    }
}

fn insert_sorted(v: &mut Vec<NodeId>, x: NodeId) {
    if let Err(pos) = v.binary_search(&x) {
        v.insert(pos, x);
    }
}

/// Nodes within `h` skeleton hops of `y`, including `y`.
pub fn hop_neighborhood<G: Skeleton + ?Sized>(g: &G, y: NodeId, h: usize) -> BTreeSet<NodeId> {
    hop_distances(g, y).into_iter().enumerate().filter_map(|(v, d)| d.filter(|&d| d <= h).map(|_| v)).collect()
}

/// Breadth-first skeleton distances from `y`; `None` for unreachable nodes.
pub fn hop_distances<G: Skeleton + ?Sized>(g: &G, y: NodeId) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.node_count()];
    dist[y] = Some(0);
    let mut queue = VecDeque::from([y]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].unwrap();
        for w in g.adjacent_nodes(v) {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Largest finite hop distance from `y`.
pub fn eccentricity<G: Skeleton + ?Sized>(g: &G, y: NodeId) -> usize {
    hop_distances(g, y).into_iter().flatten().max().unwrap_or(0)
}

/// Mark of an edge as seen from its first endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Link {
    Undirected,
    /// first -> second
    Out,
    /// first <- second
    In,
    DoubleBar,
}

impl Link {
    fn flip(self) -> Link {
        match self {
            Link::Out => Link::In,
            Link::In => Link::Out,
            other => other,
        }
    }

    fn code(self) -> u8 {
        match self {
            Link::Undirected => 1,
            Link::Out => 2,
            Link::In => 3,
            Link::DoubleBar => 4,
        }
    }

    fn decode(c: u8) -> Option<Link> {
        match c {
            1 => Some(Link::Undirected),
            2 => Some(Link::Out),
            3 => Some(Link::In),
            4 => Some(Link::DoubleBar),
            _ => None,
        }
    }

    pub fn is_arrow(self) -> bool {
        matches!(self, Link::Out | Link::In)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum EdgeMark {
    Undirected,
    Directed,
    DoubleBar,
}

/// Edge listing entry. For `Directed` the edge is `a -> b`; otherwise `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedEdge {
    pub a: NodeId,
    pub b: NodeId,
    pub mark: EdgeMark,
}

/// Partially directed graph with an extra double-bar mark for edges whose
/// second endpoint lies outside an explored region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pdag {
    n: usize,
    cells: Vec<u8>,
}

impl Pdag {
    pub fn new(n: usize) -> Self {
        Pdag { n, cells: vec![0; n * n] }
    }

    pub fn complete(n: usize) -> Self {
        let mut p = Pdag::new(n);
        for a in 0..n {
            for b in a + 1..n {
                p.set(a, b, Link::Undirected);
            }
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn link(&self, a: NodeId, b: NodeId) -> Option<Link> {
        Link::decode(self.cells[a * self.n + b])
    }

    pub fn set(&mut self, a: NodeId, b: NodeId, link: Link) {
        self.cells[a * self.n + b] = link.code();
        self.cells[b * self.n + a] = link.flip().code();
    }

    pub fn add_undirected(&mut self, a: NodeId, b: NodeId) {
        self.set(a, b, Link::Undirected);
    }

    pub fn orient(&mut self, from: NodeId, to: NodeId) {
        self.set(from, to, Link::Out);
    }

    pub fn remove(&mut self, a: NodeId, b: NodeId) {
        self.cells[a * self.n + b] = 0;
        self.cells[b * self.n + a] = 0;
    }

    pub fn adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.cells[a * self.n + b] != 0
    }

    pub fn is_undirected(&self, a: NodeId, b: NodeId) -> bool {
        self.link(a, b) == Some(Link::Undirected)
    }

    pub fn has_arrow(&self, from: NodeId, to: NodeId) -> bool {
        self.link(from, to) == Some(Link::Out)
    }

    pub fn neighbors(&self, v: NodeId) -> Vec<NodeId> {
        (0..self.n).filter(|&w| self.adjacent(v, w)).collect()
    }

    fn neighbors_with(&self, v: NodeId, pred: impl Fn(Link) -> bool) -> BTreeSet<NodeId> {
        (0..self.n).filter(|&w| self.link(v, w).is_some_and(&pred)).collect()
    }

    /// Nodes with a directed edge into `v`.
    pub fn parents(&self, v: NodeId) -> BTreeSet<NodeId> {
        self.neighbors_with(v, |l| l == Link::In)
    }

    pub fn children(&self, v: NodeId) -> BTreeSet<NodeId> {
        self.neighbors_with(v, |l| l == Link::Out)
    }

    pub fn undirected_neighbors(&self, v: NodeId) -> BTreeSet<NodeId> {
        self.neighbors_with(v, |l| l == Link::Undirected)
    }

    /// Neighbors joined by an undirected or double-bar edge.
    pub fn non_arrow_neighbors(&self, v: NodeId) -> BTreeSet<NodeId> {
        self.neighbors_with(v, |l| !l.is_arrow())
    }

    pub fn edges(&self) -> Vec<MarkedEdge> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                let Some(link) = self.link(a, b) else { continue };
                let (a, b, mark) = match link {
                    Link::Undirected => (a, b, EdgeMark::Undirected),
                    Link::DoubleBar => (a, b, EdgeMark::DoubleBar),
                    Link::Out => (a, b, EdgeMark::Directed),
                    Link::In => (b, a, EdgeMark::Directed),
                };
                out.push(MarkedEdge { a, b, mark });
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c != 0).count() / 2
    }

    /// Same skeleton with every edge undirected.
    pub fn skeleton_only(&self) -> Pdag {
        let mut p = Pdag::new(self.n);
        for e in self.edges() {
            p.add_undirected(e.a, e.b);
        }
        p
    }
}

impl Skeleton for Pdag {
    fn node_count(&self) -> usize {
        self.n
    }
    fn adjacent_nodes(&self, v: NodeId) -> Vec<NodeId> {
        self.neighbors(v)
    }
}

/// Local essential graph of a target at a given hop depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leg {
    pub graph: Pdag,
    pub target: NodeId,
    pub hop: usize,
}

impl Leg {
    pub fn new(n: usize, target: NodeId, hop: usize) -> Self {
        Leg { graph: Pdag::new(n), target, hop }
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Hop neighborhood of the target measured in this graph's skeleton.
    pub fn neighborhood(&self) -> BTreeSet<NodeId> {
        hop_neighborhood(&self.graph, self.target, self.hop)
    }
}

impl Skeleton for Leg {
    fn node_count(&self) -> usize {
        self.graph.n()
    }
    fn adjacent_nodes(&self, v: NodeId) -> Vec<NodeId> {
        self.graph.neighbors(v)
    }
}

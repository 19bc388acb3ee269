//! Structural characterisation of local essential graphs from a known DAG.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::graph::{d_connected_set, hop_distances, meek_closure, orient_colliders_with, Dag, Leg, Link, NodeId, Pdag};

fn separable_by_subset(g: &Dag, d: NodeId, b: NodeId, pool: &[NodeId], size: usize) -> bool {
    pool.iter().copied().filter(|&v| v != b).combinations(size).any(|z| !d_connected_set(g, d, &z)[b])
}

/// Level-wise candidate adjacency of `d` when a PC search is run from `d`
/// alone: `C_0 = V \ {d}` and `C_s` keeps the members of `C_{s-1}` that no
/// subset of size `s - 1` of the rest of `C_{s-1}` separates from `d`.
/// The returned vector has `n` entries; it is constant once the search stops.
pub fn adjacency_trace(g: &Dag, d: NodeId) -> Vec<BTreeSet<NodeId>> {
    let n = g.n();
    let mut trace = Vec::with_capacity(n);
    trace.push((0..n).filter(|&v| v != d).collect::<BTreeSet<_>>());
    for s in 1..n {
        let prev = &trace[s - 1];
        let size = s - 1;
        let next = if prev.len() > size {
            let pool: Vec<NodeId> = prev.iter().copied().collect();
            prev.iter().copied().filter(|&b| !separable_by_subset(g, d, b, &pool, size)).collect()
        } else {
            prev.clone()
        };
        trace.push(next);
    }
    trace
}

/// Members of the final candidate adjacency of `d` that are not neighbours.
pub fn spurious_neighbors(g: &Dag, d: NodeId) -> BTreeSet<NodeId> {
    let last = adjacency_trace(g, d).pop().unwrap_or_default();
    let ne = g.neighbors(d);
    last.difference(&ne).copied().collect()
}

/// Non-neighbours of `a` that no subset of `Ne(a)` separates from `a`.
pub fn descendant_inducing_neighbors(g: &Dag, a: NodeId) -> BTreeSet<NodeId> {
    let ne: Vec<NodeId> = g.neighbors(a).into_iter().collect();
    let mut open = vec![true; g.n()];
    for size in 0..=ne.len() {
        for z in ne.iter().copied().combinations(size) {
            let reach = d_connected_set(g, a, &z);
            for (v, o) in open.iter_mut().enumerate() {
                *o &= reach[v];
            }
        }
    }
    (0..g.n()).filter(|&v| v != a && open[v] && !ne.contains(&v)).collect()
}

/// A descendant inducing path together with its landmark sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DipWitness {
    pub path: Vec<NodeId>,
    pub landmarks: Vec<NodeId>,
}

fn landmarks_of(g: &Dag, path: &[NodeId]) -> Vec<NodeId> {
    let (a, b) = (path[0], path[path.len() - 1]);
    path.iter().copied().filter(|&v| v == a || v == b || g.adjacent(a, v)).collect()
}

fn is_collider(g: &Dag, prev: NodeId, v: NodeId, next: NodeId) -> bool {
    g.has_edge(prev, v) && g.has_edge(next, v)
}

/// Checks whether `path` is a descendant inducing path relative to
/// `landmarks`, which must be the endpoints plus the neighbours of the first
/// endpoint on the path, in path order.
pub fn check_dip(g: &Dag, path: &[NodeId], landmarks: &[NodeId]) -> bool {
    if path.len() < 2 || path.iter().any(|&v| v >= g.n()) {
        return false;
    }
    if !path.iter().all_unique() || !path.windows(2).all(|w| g.adjacent(w[0], w[1])) {
        return false;
    }
    let (a, b) = (path[0], path[path.len() - 1]);
    if g.adjacent(a, b) || landmarks_of(g, path) != landmarks {
        return false;
    }
    let interior: BTreeSet<NodeId> = landmarks[1..landmarks.len() - 1].iter().copied().collect();
    let colliders: BTreeSet<NodeId> =
        (1..path.len() - 1).filter(|&i| is_collider(g, path[i - 1], path[i], path[i + 1])).map(|i| path[i]).collect();
    colliders == interior && landmarks.windows(2).all(|w| g.descendants(w[0]).contains(&w[1]))
}

/// Searches simple skeleton paths from `a` to `b` for a descendant inducing path.
pub fn find_dip(g: &Dag, a: NodeId, b: NodeId) -> Option<DipWitness> {
    if a == b || g.adjacent(a, b) {
        return None;
    }
    let mut path = vec![a];
    let mut on_path = vec![false; g.n()];
    on_path[a] = true;
    dip_search(g, b, &mut path, &mut on_path)
}

fn dip_search(g: &Dag, b: NodeId, path: &mut Vec<NodeId>, on_path: &mut [bool]) -> Option<DipWitness> {
    let last = *path.last().unwrap();
    for w in g.neighbors(last) {
        if on_path[w] {
            continue;
        }
        path.push(w);
        if w == b {
            let landmarks = landmarks_of(g, path);
            if check_dip(g, path, &landmarks) {
                return Some(DipWitness { path: path.clone(), landmarks });
            }
        } else {
            on_path[w] = true;
            let found = dip_search(g, b, path, on_path);
            on_path[w] = false;
            if found.is_some() {
                return found;
            }
        }
        path.pop();
    }
    None
}

/// Descendant inducing neighbours found by explicit path search.
pub fn descendant_inducing_neighbors_by_paths(g: &Dag, a: NodeId) -> BTreeSet<NodeId> {
    (0..g.n()).filter(|&b| find_dip(g, a, b).is_some()).collect()
}

/// True local essential graph of `y` at depth `h`, built from `g` directly.
///
/// Edges inside the neighbourhood `N` are the true edges. Nodes at distance
/// exactly `h` also keep their edges to outside neighbours and outside
/// spurious neighbours. Colliders with a middle node in `N` orient their
/// in-`N` edges, Meek's rules run inside `N`, and outside edges become
/// double-bar when no outside node forms a non-collider with them.
pub fn build_true_leg(g: &Dag, y: NodeId, h: usize) -> Leg {
    let n = g.n();
    let dist = hop_distances(g, y);
    let in_n: Vec<bool> = dist.iter().map(|d| d.is_some_and(|d| d <= h)).collect();
    let boundary: Vec<NodeId> = (0..n).filter(|&v| dist[v] == Some(h)).collect();

    let mut p = Pdag::new(n);
    for (a, b) in g.edges() {
        if in_n[a] && in_n[b] {
            p.add_undirected(a, b);
        }
    }
    let mut spurious = vec![BTreeSet::new(); n];
    for &d in &boundary {
        spurious[d] = spurious_neighbors(g, d);
        for a in g.neighbors(d).union(&spurious[d]) {
            if !in_n[*a] {
                p.add_undirected(d, *a);
            }
        }
    }

    orient_colliders_with(&mut p, &in_n, |a, b, c| Some(g.has_edge(a, b) && g.has_edge(c, b)));
    meek_closure(&mut p, &in_n);

    for &d in &boundary {
        let excluded: BTreeSet<NodeId> = g.neighbors(d).union(&spurious[d]).copied().collect();
        for a in p.neighbors(d) {
            if in_n[a] || p.link(d, a) != Some(Link::Undirected) {
                continue;
            }
            // a spurious neighbour is a descendant, so `d` points towards it
            let d_into_a = g.has_edge(d, a) || spurious[d].contains(&a);
            let into_a = |w: NodeId| d_into_a && g.has_edge(w, a);
            let witnesses: Vec<NodeId> =
                g.neighbors(a).into_iter().filter(|&w| w != d && !in_n[w] && !excluded.contains(&w)).collect();
            if nnc_holds(witnesses.iter().map(|&w| Some(into_a(w)))) {
                p.set(d, a, Link::DoubleBar);
            }
        }
    }
    Leg { graph: p, target: y, hop: h }
}

/// Double-bar rule over the collider status of each witness triple: at least
/// one witness, and all of them colliders. `None` entries are candidates that
/// turned out not to be witnesses.
pub(crate) fn nnc_holds(colliders: impl Iterator<Item = Option<bool>>) -> bool {
    let mut any = false;
    for c in colliders.flatten() {
        if !c {
            return false;
        }
        any = true;
    }
    any
}

/// Closure of `seed` under undirected and double-bar edges inside the
/// neighbourhood of the target.
pub fn grow_noc_candidate(leg: &Leg, seed: &BTreeSet<NodeId>) -> BTreeSet<NodeId> {
    let nbhd = leg.neighborhood();
    let mut set = seed.clone();
    let mut stack: Vec<NodeId> = seed.iter().copied().collect();
    while let Some(d) = stack.pop() {
        for a in leg.graph.non_arrow_neighbors(d) {
            if nbhd.contains(&a) && set.insert(a) {
                stack.push(a);
            }
        }
    }
    set
}

/// No member of `dset` has an undirected edge leaving `dset`, and each has at
/// most one double-bar edge leaving it.
pub fn noc_satisfied(leg: &Leg, dset: &BTreeSet<NodeId>) -> bool {
    dset.iter().all(|&d| {
        let mut bars = 0;
        for a in leg.graph.neighbors(d) {
            if dset.contains(&a) {
                continue;
            }
            match leg.graph.link(d, a) {
                Some(Link::Undirected) => return false,
                Some(Link::DoubleBar) => bars += 1,
                _ => {}
            }
        }
        bars <= 1
    })
}

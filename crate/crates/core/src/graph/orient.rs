use log::debug;

use super::{Dag, Link, NodeId, Pdag};
use crate::ci::SepsetCache;
use crate::error::GraphError;

/// An edge for which two rules demanded opposite directions. The first
/// orientation is kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrientConflict {
    pub kept: (NodeId, NodeId),
}

/// Orients `a -> b <- c` for unshielded triples whose middle node is not in
/// the separating set of the endpoints. All three nodes must lie in `scope`;
/// triples whose endpoints have no recorded separating set are skipped.
pub fn orient_unshielded_colliders(
    skeleton: &Pdag,
    sepsets: &SepsetCache,
    scope: &[bool],
) -> (Pdag, Vec<OrientConflict>) {
    let mut p = skeleton.clone();
    let conflicts =
        orient_colliders_with(&mut p, scope, |a, b, c| sepsets.separating_set(a, c).map(|s| !s.contains(&b)));
    (p, conflicts)
}

pub(crate) fn orient_colliders_with(
    p: &mut Pdag,
    scope: &[bool],
    collider: impl Fn(NodeId, NodeId, NodeId) -> Option<bool>,
) -> Vec<OrientConflict> {
    let base = p.clone();
    let mut conflicts = Vec::new();
    for b in 0..base.n() {
        if !scope[b] {
            continue;
        }
        let nb = base.neighbors(b);
        for &a in &nb {
            if !scope[a] || base.link(a, b) != Some(Link::Undirected) {
                continue;
            }
            for &c in &nb {
                if c == a || !scope[c] || base.adjacent(a, c) {
                    continue;
                }
                if collider(a, b, c) != Some(true) {
                    continue;
                }
                match p.link(a, b) {
                    Some(Link::Undirected) => p.orient(a, b),
                    Some(Link::In) => {
                        debug!("collider at {b} conflicts with existing {b} -> {a}");
                        conflicts.push(OrientConflict { kept: (b, a) });
                    }
                    _ => {}
                }
            }
        }
    }
    conflicts
}

/// Closes `p` under Meek's rules R1-R4, considering only edges with both
/// endpoints in `scope`. Fails if a rule demands both directions of an edge.
pub fn apply_meek_rules(p: &Pdag, scope: &[bool]) -> Result<Pdag, GraphError> {
    let mut out = p.clone();
    match meek_closure(&mut out, scope).first() {
        Some(c) => Err(GraphError::Inconsistent(c.kept.0, c.kept.1)),
        None => Ok(out),
    }
}

/// In-place Meek closure. Conflicts are logged and resolved by keeping the
/// direction found first.
pub(crate) fn meek_closure(p: &mut Pdag, scope: &[bool]) -> Vec<OrientConflict> {
    let n = p.n();
    let mut conflicts = Vec::new();
    loop {
        let mut changed = false;
        for a in 0..n {
            if !scope[a] {
                continue;
            }
            for b in a + 1..n {
                if !scope[b] || !p.is_undirected(a, b) {
                    continue;
                }
                let fwd = meek_demands(p, a, b, scope);
                let bwd = meek_demands(p, b, a, scope);
                match (fwd, bwd) {
                    (true, true) => {
                        debug!("Meek rules demand both directions of {a} - {b}");
                        conflicts.push(OrientConflict { kept: (a, b) });
                        p.orient(a, b);
                        changed = true;
                    }
                    (true, false) => {
                        p.orient(a, b);
                        changed = true;
                    }
                    (false, true) => {
                        p.orient(b, a);
                        changed = true;
                    }
                    (false, false) => {}
                }
            }
        }
        if !changed {
            return conflicts;
        }
    }
}

/// Whether some rule orients the undirected edge `a - b` as `a -> b`.
fn meek_demands(p: &Pdag, a: NodeId, b: NodeId, scope: &[bool]) -> bool {
    let n = p.n();
    let inside = |v: NodeId| scope[v];
    for c in (0..n).filter(|&c| inside(c) && c != a && c != b) {
        // R1: c -> a - b, c and b nonadjacent
        if p.has_arrow(c, a) && !p.adjacent(c, b) {
            return true;
        }
        // R2: a -> c -> b
        if p.has_arrow(a, c) && p.has_arrow(c, b) {
            return true;
        }
    }
    // R3: a - c -> b, a - d -> b, c and d nonadjacent
    let mids: Vec<NodeId> =
        (0..n).filter(|&c| inside(c) && c != b && p.is_undirected(a, c) && p.has_arrow(c, b)).collect();
    for (i, &c) in mids.iter().enumerate() {
        if mids[i + 1..].iter().any(|&d| !p.adjacent(c, d)) {
            return true;
        }
    }
    // R4: a - c -> d -> b, c and b nonadjacent, a adjacent to d
    for c in (0..n).filter(|&c| inside(c) && c != b && p.is_undirected(a, c) && !p.adjacent(c, b)) {
        for d in (0..n).filter(|&d| inside(d) && d != a && d != b && d != c) {
            if p.has_arrow(c, d) && p.has_arrow(d, b) && p.adjacent(a, d) {
                return true;
            }
        }
    }
    false
}

/// Completed partially directed graph of the Markov equivalence class of `g`.
pub fn dag_to_cpdag(g: &Dag) -> Pdag {
    let n = g.n();
    let mut p = Pdag::new(n);
    for (a, b) in g.edges() {
        p.add_undirected(a, b);
    }
    let scope = vec![true; n];
    orient_colliders_with(&mut p, &scope, |a, b, c| Some(g.has_edge(a, b) && g.has_edge(c, b)));
    meek_closure(&mut p, &scope);
    p
}

/// The controlled direct effect on `y` is identifiable from `p` exactly when
/// no edge at `y` is left unoriented.
pub fn cde_identifiable_from_graph(p: &Pdag, y: NodeId) -> bool {
    p.non_arrow_neighbors(y).is_empty()
}

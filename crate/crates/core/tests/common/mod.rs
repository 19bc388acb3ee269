#![allow(dead_code)]

use std::collections::BTreeSet;

use locpc::graph::{d_connected_set, Dag, NodeId};

/// Named DAG used by golden tests.
pub struct Named {
    pub names: Vec<&'static str>,
    pub dag: Dag,
}

impl Named {
    pub fn new(names: &[&'static str], edges: &[(&str, &str)]) -> Self {
        let idx = |s: &str| names.iter().position(|n| *n == s).unwrap_or_else(|| panic!("{s}"));
        let e: Vec<(NodeId, NodeId)> = edges.iter().map(|(a, b)| (idx(a), idx(b))).collect();
        Named { names: names.to_vec(), dag: Dag::new(names.len(), &e).unwrap() }
    }

    pub fn id(&self, s: &str) -> NodeId {
        self.names.iter().position(|n| *n == s).unwrap_or_else(|| panic!("{s}"))
    }

    pub fn set(&self, xs: &[&str]) -> BTreeSet<NodeId> {
        xs.iter().map(|s| self.id(s)).collect()
    }
}

pub fn mediator_dag() -> Named {
    Named::new(
        &["X", "Y", "M", "Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7"],
        &[
            ("X", "Y"),
            ("X", "M"),
            ("M", "Y"),
            ("Y", "Z1"),
            ("Z2", "X"),
            ("Z2", "Y"),
            ("Z2", "Z3"),
            ("Z3", "X"),
            ("Z3", "Z1"),
            ("Z4", "Z1"),
            ("Z5", "Z3"),
            ("Z6", "Z3"),
            ("Z7", "Z4"),
        ],
    )
}

pub fn undecided_dag() -> Named {
    Named::new(
        &["X", "Y", "D1", "D2", "A1", "A2", "W1", "W2", "Z"],
        &[
            ("X", "Y"),
            ("X", "D1"),
            ("D1", "Y"),
            ("X", "A1"),
            ("Y", "D2"),
            ("D2", "A2"),
            ("W1", "A1"),
            ("A2", "W2"),
            ("W1", "Z"),
            ("Z", "W2"),
            ("A1", "D2"),
        ],
    )
}

pub fn spurious_dag() -> Named {
    Named::new(
        &["X", "Y", "Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7"],
        &[
            ("X", "Y"),
            ("Y", "Z1"),
            ("Z2", "X"),
            ("Z3", "X"),
            ("Z2", "Z5"),
            ("Z1", "Z4"),
            ("Z3", "Z1"),
            ("Z3", "Z4"),
            ("Z3", "Z6"),
            ("Z3", "Z5"),
            ("Z7", "Z4"),
            ("Z5", "Z6"),
        ],
    )
}

pub fn spurious_pair() -> Named {
    Named::new(&["D", "A", "B", "C"], &[("D", "A"), ("A", "B"), ("C", "A"), ("C", "B")])
}

pub fn pruned_pair() -> Named {
    Named::new(
        &["D", "A", "B", "C", "E", "F"],
        &[("D", "A"), ("A", "B"), ("C", "B"), ("C", "A"), ("F", "C"), ("D", "F"), ("E", "D"), ("E", "C")],
    )
}

pub fn dip_dag() -> Named {
    Named::new(
        &["D", "A", "B", "C", "E", "F", "G", "H", "I", "J", "K", "L", "M", "N", "O"],
        &[
            ("D", "A"),
            ("A", "B"),
            ("B", "E"),
            ("E", "F"),
            ("C", "A"),
            ("C", "B"),
            ("G", "E"),
            ("G", "F"),
            ("D", "H"),
            ("H", "I"),
            ("K", "I"),
            ("K", "J"),
            ("I", "J"),
            ("M", "L"),
            ("D", "L"),
            ("M", "N"),
            ("O", "N"),
            ("L", "O"),
            ("D", "E"),
        ],
    )
}

/// d-separation by enumerating every simple skeleton path.
pub fn d_separated_by_paths(g: &Dag, x: NodeId, y: NodeId, z: &[NodeId]) -> bool {
    let zs: BTreeSet<NodeId> = z.iter().copied().collect();
    let desc_or_self_in_z: Vec<bool> =
        (0..g.n()).map(|v| zs.contains(&v) || g.descendants(v).iter().any(|d| zs.contains(d))).collect();
    let mut path = vec![x];
    let mut on = vec![false; g.n()];
    on[x] = true;
    !any_active(g, y, &zs, &desc_or_self_in_z, &mut path, &mut on)
}

fn any_active(
    g: &Dag,
    y: NodeId,
    z: &BTreeSet<NodeId>,
    opens: &[bool],
    path: &mut Vec<NodeId>,
    on: &mut [bool],
) -> bool {
    let last = *path.last().unwrap();
    for w in g.neighbors(last) {
        if on[w] {
            continue;
        }
        path.push(w);
        let ok_so_far = path.len() < 3 || {
            let k = path.len() - 2;
            let (a, m, b) = (path[k - 1], path[k], path[k + 1]);
            if g.has_edge(a, m) && g.has_edge(b, m) {
                opens[m]
            } else {
                !z.contains(&m)
            }
        };
        if ok_so_far {
            if w == y {
                return true;
            }
            on[w] = true;
            let found = any_active(g, y, z, opens, path, on);
            on[w] = false;
            if found {
                return true;
            }
        }
        path.pop();
    }
    false
}

/// Cross-check helper: reachability and path enumeration agree everywhere.
pub fn dsep_agrees(g: &Dag, x: NodeId, y: NodeId, z: &[NodeId]) -> bool {
    d_separated_by_paths(g, x, y, z) == !d_connected_set(g, x, z)[y]
}

/// Local essential graph written edge by edge as `a-b`, `a->b` or `a||b`.
pub fn leg_from(nm: &Named, target: &str, hop: usize, edges: &[&str]) -> locpc::graph::Leg {
    let mut leg = locpc::graph::Leg::new(nm.names.len(), nm.id(target), hop);
    for e in edges {
        if let Some((a, b)) = e.split_once("->") {
            leg.graph.orient(nm.id(a), nm.id(b));
        } else if let Some((a, b)) = e.split_once("||") {
            leg.graph.set(nm.id(a), nm.id(b), locpc::graph::Link::DoubleBar);
        } else if let Some((a, b)) = e.split_once('-') {
            leg.graph.add_undirected(nm.id(a), nm.id(b));
        } else {
            panic!("bad edge {e}");
        }
    }
    leg
}

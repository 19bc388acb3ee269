use super::{Dag, NodeId};
use crate::error::GraphError;

/// True when every path between `x` and `y` is blocked by `z`.
pub fn d_separated(g: &Dag, x: NodeId, y: NodeId, z: &[NodeId]) -> Result<bool, GraphError> {
    let n = g.n();
    for &v in z.iter().chain([&x, &y]) {
        if v >= n {
            return Err(GraphError::NodeOutOfRange(v, n));
        }
    }
    if x == y || z.contains(&x) || z.contains(&y) {
        return Err(GraphError::InvalidQuery);
    }
    Ok(!d_connected_set(g, x, z)[y])
}

/// Nodes d-connected to `x` given `z`, by reachability over (node, direction)
/// states. Entries for `x` and members of `z` are false.
pub fn d_connected_set(g: &Dag, x: NodeId, z: &[NodeId]) -> Vec<bool> {
    let n = g.n();
    let mut in_z = vec![false; n];
    for &v in z {
        in_z[v] = true;
    }
    // ancestors of z, including z itself
    let mut anc = in_z.clone();
    let mut stack: Vec<NodeId> = z.to_vec();
    while let Some(v) = stack.pop() {
        for &p in g.parents(v) {
            if !anc[p] {
                anc[p] = true;
                stack.push(p);
            }
        }
    }

    // visited[v][0]: reached travelling against an edge (from a child)
    // visited[v][1]: reached along an edge (from a parent)
    let mut visited = vec![[false; 2]; n];
    let mut reach = vec![false; n];
    let mut stack = vec![(x, 0usize)];
    while let Some((v, dir)) = stack.pop() {
        if visited[v][dir] {
            continue;
        }
        visited[v][dir] = true;
        if v != x && !in_z[v] {
            reach[v] = true;
        }
        if dir == 0 {
            if !in_z[v] {
                stack.extend(g.parents(v).iter().map(|&p| (p, 0)));
                stack.extend(g.children(v).iter().map(|&c| (c, 1)));
            }
        } else {
            if !in_z[v] {
                stack.extend(g.children(v).iter().map(|&c| (c, 1)));
            }
            if anc[v] {
                stack.extend(g.parents(v).iter().map(|&p| (p, 0)));
            }
        }
    }
    reach
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collider_opens_on_descendant() {
        // 0 -> 2 <- 1, 2 -> 3
        let g = Dag::new(4, &[(0, 2), (1, 2), (2, 3)]).unwrap();
        assert!(d_separated(&g, 0, 1, &[]).unwrap());
        assert!(!d_separated(&g, 0, 1, &[3]).unwrap());
        assert!(!d_separated(&g, 0, 1, &[2]).unwrap());
    }

    #[test]
    fn chain_and_fork_block_on_middle() {
        let g = Dag::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!d_separated(&g, 0, 2, &[]).unwrap());
        assert!(d_separated(&g, 0, 2, &[1]).unwrap());
        let f = Dag::new(3, &[(1, 0), (1, 2)]).unwrap();
        assert!(d_separated(&f, 0, 2, &[1]).unwrap());
    }

    #[test]
    fn rejects_degenerate_queries() {
        let g = Dag::new(3, &[(0, 1)]).unwrap();
        assert_eq!(d_separated(&g, 0, 0, &[]), Err(GraphError::InvalidQuery));
        assert_eq!(d_separated(&g, 0, 1, &[1]), Err(GraphError::InvalidQuery));
        assert_eq!(d_separated(&g, 0, 7, &[]), Err(GraphError::NodeOutOfRange(7, 3)));
    }
}

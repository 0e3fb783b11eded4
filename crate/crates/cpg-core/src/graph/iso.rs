//! Isomorphism tests for small cubic multigraphs and rooted networks.
//!
//! Backtracking over vertex assignments in BFS order from an anchor; every
//! extension is checked against edge multiplicities (loops included), which
//! prunes hard on bounded-degree graphs. Exact at the sizes used by the
//! decomposition round-trip and enumeration tests.

use crate::graph::multigraph::CubicGraph;
use crate::graph::network::Network;
use std::collections::HashMap;

/// Neighbor multiplicity table: `adj[v][w]` = number of v-w edges; a loop
/// at v appears as `adj[v][v]` = loop count.
fn multiplicities(g: &CubicGraph) -> Vec<HashMap<usize, usize>> {
    let mut adj = vec![HashMap::new(); g.n()];
    for &(u, v) in g.edges() {
        if u == v {
            *adj[u].entry(u).or_insert(0) += 1;
        } else {
            *adj[u].entry(v).or_insert(0) += 1;
            *adj[v].entry(u).or_insert(0) += 1;
        }
    }
    adj
}

/// BFS vertex order from the given seeds (connected graphs: covers all).
fn bfs_order(adj: &[HashMap<usize, usize>], seeds: &[usize]) -> Vec<usize> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = std::collections::VecDeque::new();
    for &s in seeds {
        if !seen[s] {
            seen[s] = true;
            order.push(s);
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        let mut nbrs: Vec<usize> = adj[v].keys().copied().collect();
        nbrs.sort_unstable();
        for w in nbrs {
            if !seen[w] {
                seen[w] = true;
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    order
}

/// Extends a partial map over the remaining BFS order by backtracking.
fn extend(
    order: &[usize],
    pos: usize,
    adj_a: &[HashMap<usize, usize>],
    adj_b: &[HashMap<usize, usize>],
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if pos == order.len() {
        return true;
    }
    let v = order[pos];
    if map[v] != usize::MAX {
        return extend(order, pos + 1, adj_a, adj_b, map, used);
    }
    for cand in 0..adj_b.len() {
        if used[cand] || adj_b[cand].len() != adj_a[v].len() {
            continue;
        }
        let consistent = adj_a[v].iter().all(|(&w, &mult)| {
            if w == v {
                adj_b[cand].get(&cand) == Some(&mult)
            } else if map[w] != usize::MAX {
                adj_b[cand].get(&map[w]) == Some(&mult)
            } else {
                true
            }
        });
        if !consistent {
            continue;
        }
        map[v] = cand;
        used[cand] = true;
        if extend(order, pos + 1, adj_a, adj_b, map, used) {
            return true;
        }
        map[v] = usize::MAX;
        used[cand] = false;
    }
    false
}

fn complete_map(
    a: &CubicGraph,
    b: &CubicGraph,
    anchors: &[(usize, usize)],
) -> bool {
    let adj_a = multiplicities(a);
    let adj_b = multiplicities(b);
    let mut map = vec![usize::MAX; a.n()];
    let mut used = vec![false; b.n()];
    for &(v, w) in anchors {
        if map[v] != usize::MAX {
            if map[v] != w {
                return false;
            }
            continue;
        }
        if used[w] || adj_a[v].len() != adj_b[w].len() {
            return false;
        }
        map[v] = w;
        used[w] = true;
    }
    // Verify anchor adjacency consistency before extending.
    for &(v, _) in anchors {
        for (&w, &mult) in &adj_a[v] {
            if map[w] != usize::MAX && adj_b[map[v]].get(&map[w]) != Some(&mult) {
                return false;
            }
        }
    }
    let seeds: Vec<usize> = anchors.iter().map(|&(v, _)| v).collect();
    let order = bfs_order(&adj_a, &seeds);
    if order.len() != a.n() {
        return false;
    }
    extend(&order, 0, &adj_a, &adj_b, &mut map, &mut used)
}

/// Isomorphism of connected multigraphs (unrooted).
pub fn isomorphic_graphs(a: &CubicGraph, b: &CubicGraph) -> bool {
    if a.n() != b.n() || a.m() != b.m() {
        return false;
    }
    if a.n() == 0 {
        return true;
    }
    (0..b.n()).any(|w| complete_map(a, b, &[(0, w)]))
}

/// Root-preserving isomorphism of networks: poles map to poles in
/// orientation order and all edge multiplicities agree.
pub fn isomorphic_networks(a: &Network, b: &Network) -> bool {
    if a.graph.n() != b.graph.n() || a.graph.m() != b.graph.m() {
        return false;
    }
    let anchors = [(a.poles.0, b.poles.0), (a.poles.1, b.poles.1)];
    complete_map(&a.graph, &b.graph, &anchors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabeled_graphs_are_isomorphic() {
        let g = CubicGraph::prism();
        let perm = vec![3, 5, 1, 0, 2, 4];
        let h = g.relabeled(&perm);
        assert!(isomorphic_graphs(&g, &h));
    }

    #[test]
    fn prism_and_k33_are_not_isomorphic() {
        assert!(!isomorphic_graphs(&CubicGraph::prism(), &CubicGraph::k33()));
    }

    #[test]
    fn rooted_isomorphism_respects_orientation() {
        let a = Network::new(CubicGraph::k4(), 0, (0, 1)).unwrap();
        let b = Network::new(CubicGraph::k4(), 0, (1, 0)).unwrap();
        // K4 is edge-transitive with orientation-swapping automorphisms.
        assert!(isomorphic_networks(&a, &b));
    }

    #[test]
    fn multiplicity_matters() {
        let a = CubicGraph::new(2, vec![(0, 1), (0, 1), (0, 1)]).unwrap();
        let b = CubicGraph::new(2, vec![(0, 0), (0, 1), (1, 1)]).unwrap();
        assert!(!isomorphic_graphs(&a, &b));
    }
}

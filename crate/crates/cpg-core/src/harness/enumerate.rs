//! Exhaustive generation of small labelled cubic graphs and networks.
//!
//! Cubic multigraphs on a labelled vertex set are generated by a canonical
//! backtracking order: while `u` is the smallest vertex with residual
//! degree, all its remaining edges go to partners at least `u` in
//! non-decreasing order, so every multigraph is produced exactly once.
//! Filters carve out the simple, connected, planar subfamilies, and the
//! network list enumerates every valid oriented root edge.

use crate::error::{CpgError, Result};
use crate::graph::decompose::{recompose, DecompositionTree};
use crate::graph::iso::isomorphic_networks;
use crate::graph::map::PlanarMap;
use crate::graph::multigraph::CubicGraph;
use crate::graph::network::Network;
use crate::graph::planarity::is_planar;
use crate::sampler::blossom::{close_tree, Slot};
use std::collections::HashMap;

/// All cubic multigraphs (loops and parallel edges allowed) on `n`
/// labelled vertices, each exactly once.
pub fn enumerate_cubic_multigraphs(n: usize) -> Result<Vec<CubicGraph>> {
    if n == 0 || n % 2 != 0 {
        return Err(CpgError::Unsupported(
            "vertex count must be a positive even integer".into(),
        ));
    }
    if n > 8 {
        return Err(CpgError::Unsupported(
            "exhaustive enumeration supported up to 8 vertices".into(),
        ));
    }
    let mut out = Vec::new();
    let mut deg = vec![0u8; n];
    let mut edges = Vec::with_capacity(3 * n / 2);
    extend(n, &mut deg, &mut edges, 0, &mut out);
    Ok(out)
}

fn extend(
    n: usize,
    deg: &mut [u8],
    edges: &mut Vec<(usize, usize)>,
    min_w: usize,
    out: &mut Vec<CubicGraph>,
) {
    let Some(u) = deg.iter().position(|&d| d < 3) else {
        out.push(CubicGraph::new(n, edges.clone()).expect("degrees are 3 by construction"));
        return;
    };
    let floor = min_w.max(u);
    for w in floor..n {
        if w == u {
            if deg[u] > 1 {
                continue;
            }
            deg[u] += 2;
        } else {
            if deg[w] == 3 {
                continue;
            }
            deg[u] += 1;
            deg[w] += 1;
        }
        edges.push((u, w));
        let next_u = deg.iter().position(|&d| d < 3);
        let next_min = if next_u == Some(u) { w } else { 0 };
        extend(n, deg, edges, next_min, out);
        edges.pop();
        if w == u {
            deg[u] -= 2;
        } else {
            deg[u] -= 1;
            deg[w] -= 1;
        }
    }
}

/// All labelled connected cubic planar multigraphs on `n` vertices.
pub fn enumerate_connected_planar_multigraphs(n: usize) -> Result<Vec<CubicGraph>> {
    Ok(enumerate_cubic_multigraphs(n)?
        .into_iter()
        .filter(|g| g.is_connected() && is_planar(g))
        .collect())
}

/// All labelled connected simple cubic planar graphs on `n` vertices.
pub fn enumerate_cubic_planar(n: usize) -> Result<Vec<CubicGraph>> {
    Ok(enumerate_connected_planar_multigraphs(n)?
        .into_iter()
        .filter(|g| g.is_simple())
        .collect())
}

/// All networks on `n` labelled vertices: every connected planar cubic
/// multigraph together with every valid oriented root edge. A loop root is
/// counted once, any other root edge twice (once per orientation), and
/// parallel copies of an edge contribute one root position in total.
pub fn enumerate_networks(n: usize) -> Result<Vec<Network>> {
    let mut out = Vec::new();
    for g in enumerate_connected_planar_multigraphs(n)? {
        for e in 0..g.m() {
            let (u, v) = g.edge(e);
            // Parallel copies of one edge are indistinguishable in a
            // labelled multigraph; root only at the first copy.
            let duplicate = (0..e).any(|f| {
                let (a, b) = g.edge(f);
                (a, b) == (u, v) || (a, b) == (v, u)
            });
            if duplicate {
                continue;
            }
            if u == v {
                if let Ok(net) = Network::new(g.clone(), e, (u, u)) {
                    out.push(net);
                }
            } else {
                if let Ok(net) = Network::new(g.clone(), e, (u, v)) {
                    out.push(net);
                }
                if let Ok(net) = Network::new(g.clone(), e, (v, u)) {
                    out.push(net);
                }
            }
        }
    }
    Ok(out)
}

/// All rooted simple triangulations with `k` inner nodes, by exhaustive
/// closure of every blossoming tree, bud placement, and arc choice.
pub fn enumerate_triangulations(k: usize) -> Result<Vec<PlanarMap>> {
    if k == 0 || k > 7 {
        return Err(CpgError::Unsupported(
            "exhaustive triangulation generation supported for 1..=7 inner nodes".into(),
        ));
    }
    let mut maps: Vec<PlanarMap> = Vec::new();
    let mut codes = std::collections::HashSet::new();
    let mut offspring = Vec::with_capacity(k);
    let mut sequences = Vec::new();
    offspring_sequences(k, 0, 0, &mut offspring, &mut sequences);
    for seq in &sequences {
        let mut slots: Vec<Vec<Slot>> = Vec::with_capacity(k);
        bud_arrangements(seq, 0, &mut slots, &mut |slots| {
            for arc_flip in [false, true] {
                let map = close_tree(slots, arc_flip)?;
                if codes.insert(map.canonical_code()) {
                    maps.push(map);
                }
            }
            Ok(())
        })?;
    }
    Ok(maps)
}

/// Preorder offspring sequences of planted plane trees with `k` nodes.
fn offspring_sequences(
    k: usize,
    placed: usize,
    sum: usize,
    prefix: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if placed == k {
        if sum == k - 1 {
            out.push(prefix.clone());
        }
        return;
    }
    // Prefix condition: the walk must not close the tree early.
    for c in 0..=(k - 1 - sum) {
        let new_sum = sum + c;
        if placed + 1 < k && new_sum < placed + 1 {
            continue;
        }
        prefix.push(c);
        offspring_sequences(k, placed + 1, new_sum, prefix, out);
        prefix.pop();
    }
}

/// Visits every placement of the two buds among each node's slots.
fn bud_arrangements<F>(seq: &[usize], node: usize, slots: &mut Vec<Vec<Slot>>, f: &mut F) -> Result<()>
where
    F: FnMut(&[Vec<Slot>]) -> Result<()>,
{
    if node == seq.len() {
        return f(slots);
    }
    let len = seq[node] + 2;
    for first in 0..len {
        for second in (first + 1)..len {
            let mut arrangement = vec![Slot::Child; len];
            arrangement[first] = Slot::Bud;
            arrangement[second] = Slot::Bud;
            slots.push(arrangement);
            bud_arrangements(seq, node + 1, slots, f)?;
            slots.pop();
        }
    }
    Ok(())
}

type ClassSet = Vec<(DecompositionTree, Network)>;

/// One representative of every isomorphism class of networks with 4 to
/// `max_n` vertices, each paired with a derivation tree, generated
/// bottom-up through the grammar constructions.
pub fn enumerate_unlabelled_networks(max_n: usize) -> Result<HashMap<usize, ClassSet>> {
    if max_n > 12 {
        return Err(CpgError::Unsupported(
            "unlabelled generation supported up to 12 vertices".into(),
        ));
    }
    let mut loops: HashMap<usize, ClassSet> = HashMap::new();
    let mut others: HashMap<usize, ClassSet> = HashMap::new();
    let sizes: Vec<usize> = (4..=max_n).step_by(2).collect();
    for &n in &sizes {
        let mut bucket: ClassSet = Vec::new();
        // Polyhedral: a rooted 3-connected core with insertions.
        for k in 2..=(n / 2) {
            let budget = n - 2 * k;
            for (core, root_edge, poles) in rooted_cores(k)? {
                let free: Vec<usize> = (0..core.m()).filter(|&e| e != root_edge).collect();
                let mut children = vec![DecompositionTree::AtomEdge; core.m()];
                fill_edges(
                    &free,
                    0,
                    budget,
                    &mut children,
                    &d_union(&loops, &others),
                    &mut |children| {
                        let tree = DecompositionTree::Polyhedral {
                            core: core.clone(),
                            root_edge,
                            poles,
                            core_labels: (0..core.n()).collect(),
                            children: children.to_vec(),
                        };
                        push_unique(&mut bucket, tree)
                    },
                )?;
            }
        }
        // Series: non-series, non-isthmus head and arbitrary tail.
        for a in (4..n).step_by(2) {
            let b = n - a;
            for (ft, _) in heads(&loops, &others, a) {
                for (st, _) in d_union(&loops, &others).get(&b).cloned().unwrap_or_default() {
                    let tree = DecompositionTree::Series {
                        first: Box::new(ft.clone()),
                        second: Box::new(st.clone()),
                    };
                    push_unique(&mut bucket, tree)?;
                }
            }
        }
        // Parallel: doubled root edge, or an unordered pair.
        if n >= 6 {
            for (ct, _) in d_union(&loops, &others).get(&(n - 2)).cloned().unwrap_or_default() {
                let tree = DecompositionTree::ParallelDouble {
                    child: Box::new(ct.clone()),
                };
                push_unique(&mut bucket, tree)?;
            }
        }
        for a in (4..=n.saturating_sub(2 + 4)).step_by(2) {
            let b = n - 2 - a;
            let d = d_union(&loops, &others);
            for (ft, _) in d.get(&a).cloned().unwrap_or_default() {
                for (st, _) in d.get(&b).cloned().unwrap_or_default() {
                    let tree = DecompositionTree::ParallelPair {
                        first: Box::new(ft.clone()),
                        second: Box::new(st.clone()),
                    };
                    push_unique(&mut bucket, tree)?;
                }
            }
        }
        // Isthmus: an ordered pair of loop networks.
        for a in (6..=n.saturating_sub(4)).step_by(2) {
            let b = n + 2 - a;
            for (st, _) in loops.get(&a).cloned().unwrap_or_default() {
                for (nt, _) in loops.get(&b).cloned().unwrap_or_default() {
                    let tree = DecompositionTree::Isthmus {
                        south: Box::new(st.clone()),
                        north: Box::new(nt.clone()),
                    };
                    push_unique(&mut bucket, tree)?;
                }
            }
        }
        others.insert(n, bucket);
        // Loop: a non-loop or isthmus child two vertices smaller. Loops do
        // not belong to D's series/parallel/polyhedral buckets directly,
        // but they do feed loops of larger sizes and the isthmus class, so
        // they are grown after the non-loop classes of size n - 2 exist.
        let mut loop_bucket: ClassSet = Vec::new();
        if n >= 6 {
            if let Some(children) = others.get(&(n - 2)) {
                for (ct, _) in children.clone() {
                    let tree = DecompositionTree::Loop {
                        child: Box::new(ct.clone()),
                    };
                    push_unique(&mut loop_bucket, tree)?;
                }
            }
        }
        loops.insert(n, loop_bucket);
    }
    let mut all: HashMap<usize, ClassSet> = HashMap::new();
    for &n in &sizes {
        let mut bucket = others.remove(&n).unwrap_or_default();
        bucket.extend(loops.remove(&n).unwrap_or_default());
        all.insert(n, bucket);
    }
    Ok(all)
}

/// Unlabelled rooted 3-connected cores with `2k` vertices: duals of the
/// rooted triangulations with `k` inner nodes, in both reflections.
fn rooted_cores(k: usize) -> Result<Vec<(CubicGraph, usize, (usize, usize))>> {
    let mut out: Vec<(CubicGraph, usize, (usize, usize))> = Vec::new();
    let mut seen: Vec<Network> = Vec::new();
    for tri in enumerate_triangulations(k)? {
        for map in [tri.dual(), tri.dual().mirror()] {
            let core = map.to_graph();
            let root_dart = map.root();
            let root_edge = root_dart / 2;
            let (u, v) = core.edge(root_edge);
            let poles = if root_dart % 2 == 0 { (u, v) } else { (v, u) };
            let net = Network::new_unchecked(core.clone(), root_edge, poles);
            if !seen.iter().any(|x| isomorphic_networks(x, &net)) {
                seen.push(net);
                out.push((core, root_edge, poles));
            }
        }
    }
    Ok(out)
}

/// Merged loop/series/parallel/polyhedral buckets (the class D) by size.
/// Isthmus networks feed only the loop construction, not D.
fn d_union(
    loops: &HashMap<usize, ClassSet>,
    others: &HashMap<usize, ClassSet>,
) -> HashMap<usize, ClassSet> {
    let mut d: HashMap<usize, ClassSet> = HashMap::new();
    for (n, set) in others {
        for (t, net) in set {
            if !matches!(t, DecompositionTree::Isthmus { .. }) {
                d.entry(*n).or_default().push((t.clone(), net.clone()));
            }
        }
    }
    for (n, set) in loops {
        d.entry(*n).or_default().extend(set.clone());
    }
    d
}

/// Valid series heads of one size: loop, parallel, and polyhedral trees.
fn heads(
    loops: &HashMap<usize, ClassSet>,
    others: &HashMap<usize, ClassSet>,
    n: usize,
) -> ClassSet {
    let mut out: ClassSet = loops.get(&n).cloned().unwrap_or_default();
    for (t, net) in others.get(&n).cloned().unwrap_or_default() {
        if !matches!(t, DecompositionTree::Series { .. } | DecompositionTree::Isthmus { .. }) {
            out.push((t, net));
        }
    }
    out
}

/// Assigns insertion subtrees to the free core edges so the inserted sizes
/// sum to `budget`, visiting every combination.
fn fill_edges<F>(
    free: &[usize],
    pos: usize,
    budget: usize,
    children: &mut Vec<DecompositionTree>,
    d: &HashMap<usize, ClassSet>,
    f: &mut F,
) -> Result<()>
where
    F: FnMut(&[DecompositionTree]) -> Result<()>,
{
    if pos == free.len() {
        if budget == 0 {
            f(children)?;
        }
        return Ok(());
    }
    fill_edges(free, pos + 1, budget, children, d, f)?;
    for a in (4..=budget).step_by(2) {
        for (t, _) in d.get(&a).cloned().unwrap_or_default() {
            children[free[pos]] = t.clone();
            fill_edges(free, pos + 1, budget - a, children, d, f)?;
            children[free[pos]] = DecompositionTree::AtomEdge;
        }
    }
    Ok(())
}

/// Recomposes `tree` and keeps it if no kept network is isomorphic to it.
fn push_unique(bucket: &mut ClassSet, tree: DecompositionTree) -> Result<()> {
    let net = recompose(&tree)?;
    if !bucket.iter().any(|(_, x)| isomorphic_networks(x, &net)) {
        bucket.push((tree, net));
    }
    Ok(())
}

/// Number of automorphisms of the network: vertex permutations fixing both
/// poles that preserve the edge multiset.
pub fn network_automorphisms(net: &Network) -> usize {
    let n = net.n();
    let (s, t) = net.poles;
    let base = edge_multiset(&net.graph, &(0..n).collect::<Vec<_>>());
    let mut free: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0usize;
    permute(&mut free, 0, &mut |order| {
        let targets: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
        for (slot, &v) in order.iter().enumerate() {
            perm[v] = targets[slot];
        }
        perm[s] = s;
        perm[t] = t;
        if edge_multiset(&net.graph, &perm) == base {
            count += 1;
        }
    });
    count
}

fn edge_multiset(g: &CubicGraph, perm: &[usize]) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (perm[u], perm[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    edges
}

fn permute<F: FnMut(&[usize])>(items: &mut Vec<usize>, k: usize, f: &mut F) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

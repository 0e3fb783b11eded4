//! Recursive decomposition of cubic networks and its inverse.
//!
//! Every network splits, according to its class, into smaller networks:
//! a loop network exposes one non-loop child, an isthmus network an ordered
//! pair of loop networks, a series network a non-series head and an
//! arbitrary tail, a parallel network one child (double root edge) or an
//! unordered pair, and a polyhedral network a simple 3-connected core with
//! a component on every non-root edge. Recomposing the tree reproduces the
//! network up to label-preserving isomorphism. The 3-connected cores found
//! along the way are the 3-connected components of the underlying graph.

use crate::error::{CpgError, Result};
use crate::graph::multigraph::CubicGraph;
use crate::graph::network::{
    bridges_without_edge, component_without, Network, NetworkClass,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Label used for vertices introduced during decomposition (the synthetic
/// loop poles of isthmus children); they never survive into cores.
const SYNTHETIC: usize = usize::MAX;

/// Derivation tree of a network under the five-class grammar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecompositionTree {
    /// A plain edge of a polyhedral core (empty insertion).
    AtomEdge,
    Loop {
        child: Box<DecompositionTree>,
    },
    Isthmus {
        south: Box<DecompositionTree>,
        north: Box<DecompositionTree>,
    },
    Series {
        first: Box<DecompositionTree>,
        second: Box<DecompositionTree>,
    },
    ParallelDouble {
        child: Box<DecompositionTree>,
    },
    ParallelPair {
        first: Box<DecompositionTree>,
        second: Box<DecompositionTree>,
    },
    Polyhedral {
        core: CubicGraph,
        root_edge: usize,
        poles: (usize, usize),
        /// Original vertex labels of the core vertices in the input graph.
        core_labels: Vec<usize>,
        /// One entry per core edge, `AtomEdge` for plain edges; the entry
        /// for `root_edge` is always `AtomEdge`. Children are oriented so
        /// that the south pole joins the first endpoint of the core edge.
        children: Vec<DecompositionTree>,
    },
}

impl DecompositionTree {
    /// Number of graph vertices the recomposed subtree contributes.
    pub fn size(&self) -> usize {
        match self {
            DecompositionTree::AtomEdge => 0,
            DecompositionTree::Loop { child } => child.size() + 2,
            DecompositionTree::Isthmus { south, north } => south.size() + north.size() - 2,
            DecompositionTree::Series { first, second } => first.size() + second.size(),
            DecompositionTree::ParallelDouble { child } => child.size() + 2,
            DecompositionTree::ParallelPair { first, second } => {
                first.size() + second.size() + 2
            }
            DecompositionTree::Polyhedral { core, children, .. } => {
                core.n() + children.iter().map(|c| c.size()).sum::<usize>()
            }
        }
    }

    /// All polyhedral cores in the subtree, with their original labels.
    pub fn cores(&self) -> Vec<(CubicGraph, Vec<usize>)> {
        let mut out = Vec::new();
        self.collect_cores(&mut out);
        out
    }

    fn collect_cores(&self, out: &mut Vec<(CubicGraph, Vec<usize>)>) {
        match self {
            DecompositionTree::AtomEdge => {}
            DecompositionTree::Loop { child } | DecompositionTree::ParallelDouble { child } => {
                child.collect_cores(out)
            }
            DecompositionTree::Isthmus { south, north } => {
                south.collect_cores(out);
                north.collect_cores(out);
            }
            DecompositionTree::Series { first, second }
            | DecompositionTree::ParallelPair { first, second } => {
                first.collect_cores(out);
                second.collect_cores(out);
            }
            DecompositionTree::Polyhedral {
                core,
                core_labels,
                children,
                ..
            } => {
                out.push((core.clone(), core_labels.clone()));
                for c in children {
                    c.collect_cores(out);
                }
            }
        }
    }
}

struct SubNet {
    net: Network,
    labels: Vec<usize>,
}

/// Induced sub-network on the masked vertices plus a fresh root edge
/// between `root_ends` (equal ends produce a loop root).
fn sub_network(
    g: &CubicGraph,
    labels: &[usize],
    mask: &[bool],
    root_ends: (usize, usize),
) -> SubNet {
    let mut new_id = vec![usize::MAX; g.n()];
    let mut sub_labels = Vec::new();
    for v in 0..g.n() {
        if mask[v] {
            new_id[v] = sub_labels.len();
            sub_labels.push(labels[v]);
        }
    }
    let mut edges = Vec::new();
    for &(u, v) in g.edges() {
        if mask[u] && mask[v] {
            edges.push((new_id[u], new_id[v]));
        }
    }
    let poles = (new_id[root_ends.0], new_id[root_ends.1]);
    edges.push(poles);
    let root = edges.len() - 1;
    let graph = CubicGraph::new(sub_labels.len(), edges).expect("relabeled in range");
    SubNet {
        net: Network::new_unchecked(graph, root, poles),
        labels: sub_labels,
    }
}

/// Loop network made of one side of an isthmus plus a synthetic loop pole.
fn loop_side(g: &CubicGraph, labels: &[usize], mask: &[bool], attach: usize) -> SubNet {
    let mut new_id = vec![usize::MAX; g.n()];
    let mut sub_labels = Vec::new();
    for v in 0..g.n() {
        if mask[v] {
            new_id[v] = sub_labels.len();
            sub_labels.push(labels[v]);
        }
    }
    let z = sub_labels.len();
    sub_labels.push(SYNTHETIC);
    let mut edges = Vec::new();
    for &(u, v) in g.edges() {
        if mask[u] && mask[v] {
            edges.push((new_id[u], new_id[v]));
        }
    }
    edges.push((z, new_id[attach]));
    edges.push((z, z));
    let root = edges.len() - 1;
    let graph = CubicGraph::new(sub_labels.len(), edges).expect("relabeled in range");
    SubNet {
        net: Network::new_unchecked(graph, root, (z, z)),
        labels: sub_labels,
    }
}

/// Decomposes a valid network into its derivation tree.
pub fn decompose(net: &Network) -> Result<DecompositionTree> {
    net.validate()?;
    let labels: Vec<usize> = (0..net.n()).collect();
    decompose_labeled(net, &labels)
}

fn decompose_labeled(net: &Network, labels: &[usize]) -> Result<DecompositionTree> {
    let g = &net.graph;
    let (s, t) = net.poles;
    match net.classify() {
        NetworkClass::Loop => {
            let inc = g.incidence();
            let s_prime = inc[s]
                .iter()
                .find(|&&(e, _)| e != net.root_edge)
                .map(|&(_, w)| w)
                .ok_or_else(|| CpgError::InvalidGraph("loop pole has no exit edge".into()))?;
            let nbrs: Vec<usize> = inc[s_prime]
                .iter()
                .filter(|&&(_, w)| w != s)
                .map(|&(_, w)| w)
                .collect();
            if nbrs.len() != 2 || nbrs[0] == nbrs[1] {
                return Err(CpgError::InvalidGraph(
                    "loop network attachment must reach two distinct vertices".into(),
                ));
            }
            let (a, b) = (nbrs[0].min(nbrs[1]), nbrs[0].max(nbrs[1]));
            let mut mask = vec![true; g.n()];
            mask[s] = false;
            mask[s_prime] = false;
            let child = sub_network(g, labels, &mask, (a, b));
            Ok(DecompositionTree::Loop {
                child: Box::new(decompose_labeled(&child.net, &child.labels)?),
            })
        }
        NetworkClass::Isthmus => {
            let side_s = component_without(g, &[net.root_edge], s);
            let side_t: Vec<bool> = side_s.iter().map(|&x| !x).collect();
            let south = loop_side(g, labels, &side_s, s);
            let north = loop_side(g, labels, &side_t, t);
            Ok(DecompositionTree::Isthmus {
                south: Box::new(decompose_labeled(&south.net, &south.labels)?),
                north: Box::new(decompose_labeled(&north.net, &north.labels)?),
            })
        }
        NetworkClass::Series => {
            let (bridge, u, v) = net
                .separating_bridge_nearest_south()
                .ok_or_else(|| CpgError::InvalidGraph("series network without bridge".into()))?;
            let side_s = component_without(g, &[net.root_edge, bridge], s);
            let side_t: Vec<bool> = side_s.iter().map(|&x| !x).collect();
            let first = sub_network(g, labels, &side_s, (s, u));
            let second = sub_network(g, labels, &side_t, (v, t));
            Ok(DecompositionTree::Series {
                first: Box::new(decompose_labeled(&first.net, &first.labels)?),
                second: Box::new(decompose_labeled(&second.net, &second.labels)?),
            })
        }
        NetworkClass::Parallel => {
            let double = g.edges().iter().enumerate().find(|&(e, &(a, b))| {
                e != net.root_edge && ((a, b) == (s, t) || (a, b) == (t, s))
            });
            let mut mask = vec![true; g.n()];
            mask[s] = false;
            mask[t] = false;
            if let Some((dbl, _)) = double {
                let third = |pole: usize| {
                    g.incidence()[pole]
                        .iter()
                        .find(|&&(e, _)| e != net.root_edge && e != dbl)
                        .map(|&(_, w)| w)
                };
                let a = third(s).ok_or_else(|| {
                    CpgError::InvalidGraph("double-edge pole lacks a third edge".into())
                })?;
                let b = third(t).ok_or_else(|| {
                    CpgError::InvalidGraph("double-edge pole lacks a third edge".into())
                })?;
                let child = sub_network(g, labels, &mask, (a, b));
                return Ok(DecompositionTree::ParallelDouble {
                    child: Box::new(decompose_labeled(&child.net, &child.labels)?),
                });
            }
            // Two components between the poles; south/north attachments.
            let inc = g.incidence();
            let s_nbrs: Vec<usize> = inc[s]
                .iter()
                .filter(|&&(e, _)| e != net.root_edge)
                .map(|&(_, w)| w)
                .collect();
            if s_nbrs.len() != 2 {
                return Err(CpgError::InvalidGraph("pole degree violation".into()));
            }
            let mut parts = Vec::new();
            for &a in &s_nbrs {
                let mut comp = mask_component(g, &mask, a);
                // Attachment of t in this component.
                let b = inc[t]
                    .iter()
                    .filter(|&&(e, _)| e != net.root_edge)
                    .map(|&(_, w)| w)
                    .find(|&w| comp[w])
                    .ok_or_else(|| {
                        CpgError::InvalidGraph(
                            "parallel component not attached to both poles".into(),
                        )
                    })?;
                comp[s] = false;
                comp[t] = false;
                parts.push(sub_network(g, labels, &comp, (a, b)));
            }
            if parts.len() != 2 {
                return Err(CpgError::InvalidGraph("parallel split must be a pair".into()));
            }
            if parts[0].net.n() + parts[1].net.n() + 2 != g.n() {
                return Err(CpgError::InvalidGraph(
                    "parallel components must partition the non-pole vertices".into(),
                ));
            }
            let second = parts.pop().expect("two parts");
            let first = parts.pop().expect("two parts");
            Ok(DecompositionTree::ParallelPair {
                first: Box::new(decompose_labeled(&first.net, &first.labels)?),
                second: Box::new(decompose_labeled(&second.net, &second.labels)?),
            })
        }
        NetworkClass::Polyhedral => decompose_polyhedral(net, labels),
    }
}

/// Component of the masked subgraph containing `start` (mask entries stay
/// true only inside the component; s and t are outside the mask already).
fn mask_component(g: &CubicGraph, mask: &[bool], start: usize) -> Vec<bool> {
    let inc = g.incidence();
    let mut seen = vec![false; g.n()];
    seen[start] = true;
    let mut q = std::collections::VecDeque::from([start]);
    while let Some(x) = q.pop_front() {
        for &(_, y) in &inc[x] {
            if mask[y] && !seen[y] {
                seen[y] = true;
                q.push_back(y);
            }
        }
    }
    seen
}

/// All maximal 2-edge-cut pieces of a polyhedral network: vertex sets not
/// containing the poles, attached to the rest by exactly two edges.
fn maximal_pieces(net: &Network) -> Result<Vec<Vec<usize>>> {
    let g = &net.graph;
    let s = net.poles.0;
    let mut pieces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for f in 0..g.m() {
        if f == net.root_edge {
            continue;
        }
        for gedge in bridges_without_edge(g, f) {
            if gedge <= f || gedge == net.root_edge {
                continue;
            }
            let side = component_without(g, &[f, gedge], s);
            let (fa, fb) = g.edge(f);
            let (ga, gb) = g.edge(gedge);
            if side[fa] == side[fb] || side[ga] == side[gb] {
                continue;
            }
            let piece: Vec<usize> = (0..g.n()).filter(|&v| !side[v]).collect();
            // When one cut edge is a bridge the complement can be a union
            // of unrelated hanging components; only connected complements
            // are insertion pieces.
            let mut mask = vec![false; g.n()];
            for &v in &piece {
                mask[v] = true;
            }
            let comp = mask_component(g, &mask, piece[0]);
            if piece.iter().any(|&v| !comp[v]) {
                continue;
            }
            pieces.insert(piece);
        }
    }
    let mut sorted: Vec<Vec<usize>> = pieces.into_iter().collect();
    sorted.sort_by_key(|p| std::cmp::Reverse(p.len()));
    let mut chosen: Vec<Vec<usize>> = Vec::new();
    let mut covered = vec![false; g.n()];
    for p in sorted {
        if p.iter().all(|&v| !covered[v]) {
            for &v in &p {
                covered[v] = true;
            }
            chosen.push(p);
        } else if !p.iter().all(|&v| covered[v]) {
            return Err(CpgError::InvalidGraph(
                "crossing 2-edge-cut pieces in a polyhedral network".into(),
            ));
        } else {
            // Fully inside an already chosen piece: subsumed.
            let inside_one = chosen.iter().any(|c| p.iter().all(|v| c.contains(v)));
            if !inside_one {
                return Err(CpgError::InvalidGraph(
                    "crossing 2-edge-cut pieces in a polyhedral network".into(),
                ));
            }
        }
    }
    Ok(chosen)
}

fn decompose_polyhedral(net: &Network, labels: &[usize]) -> Result<DecompositionTree> {
    let g = &net.graph;
    let pieces = maximal_pieces(net)?;
    let mut piece_of = vec![usize::MAX; g.n()];
    for (i, p) in pieces.iter().enumerate() {
        for &v in p {
            piece_of[v] = i;
        }
    }
    // Core vertices keep their relative order.
    let mut core_id = vec![usize::MAX; g.n()];
    let mut core_labels = Vec::new();
    for v in 0..g.n() {
        if piece_of[v] == usize::MAX {
            core_id[v] = core_labels.len();
            core_labels.push(labels[v]);
        }
    }
    let mut core_edges: Vec<(usize, usize)> = Vec::new();
    let mut core_root = usize::MAX;
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if piece_of[u] == usize::MAX && piece_of[v] == usize::MAX {
            if e == net.root_edge {
                core_root = core_edges.len();
            }
            core_edges.push((core_id[u], core_id[v]));
        }
    }
    let mut children = vec![DecompositionTree::AtomEdge; core_edges.len()];
    for (i, piece) in pieces.iter().enumerate() {
        // Boundary edges in id order determine the core edge orientation.
        let mut boundary = Vec::new();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let ui = piece_of[u] == i;
            let vi = piece_of[v] == i;
            if ui != vi {
                let (outside, inside) = if ui { (v, u) } else { (u, v) };
                boundary.push((e, outside, inside));
            }
        }
        if boundary.len() != 2 {
            return Err(CpgError::InvalidGraph(format!(
                "piece with {} boundary edges in a polyhedral network",
                boundary.len()
            )));
        }
        let (_, x, a) = boundary[0];
        let (_, y, b) = boundary[1];
        if piece_of[x] != usize::MAX || piece_of[y] != usize::MAX {
            return Err(CpgError::InvalidGraph(
                "piece boundary must land in the core".into(),
            ));
        }
        let mut mask = vec![false; g.n()];
        for &v in piece {
            mask[v] = true;
        }
        let child = sub_network(g, labels, &mask, (a, b));
        let tree = decompose_labeled(&child.net, &child.labels)?;
        children.push(tree);
        core_edges.push((core_id[x], core_id[y]));
    }
    if core_root == usize::MAX {
        return Err(CpgError::InvalidGraph(
            "root edge must survive into the polyhedral core".into(),
        ));
    }
    let core = CubicGraph::new(core_labels.len(), core_edges)?;
    if !is_three_connected(&core) {
        return Err(CpgError::InvalidGraph(
            "polyhedral core is not 3-connected cubic planar simple".into(),
        ));
    }
    let poles = (core_id[net.poles.0], core_id[net.poles.1]);
    Ok(DecompositionTree::Polyhedral {
        core,
        root_edge: core_root,
        poles,
        core_labels,
        children,
    })
}

/// 3-connectivity test for connected simple cubic graphs, where vertex and
/// edge connectivity coincide: no bridge and no proper 2-edge-cut.
pub fn is_three_connected(g: &CubicGraph) -> bool {
    if g.n() < 4 || !g.is_cubic() || !g.is_simple() || !g.is_connected() {
        return false;
    }
    if !g.bridges().is_empty() {
        return false;
    }
    for f in 0..g.m() {
        if !bridges_without_edge(g, f).is_empty() {
            return false;
        }
    }
    true
}

/// Graph minus its root edge, for splicing during recomposition.
fn strip_root(net: &Network) -> (usize, Vec<(usize, usize)>, (usize, usize)) {
    let edges = net
        .graph
        .edges()
        .iter()
        .enumerate()
        .filter(|&(e, _)| e != net.root_edge)
        .map(|(_, &p)| p)
        .collect();
    (net.graph.n(), edges, net.poles)
}

/// Loop network minus its loop pole: the pole vertex and its loop and exit
/// edge are removed; returns the relabeled edges and the attachment vertex.
fn strip_loop_pole(net: &Network) -> Result<(usize, Vec<(usize, usize)>, usize)> {
    let (p, q) = net.poles;
    if p != q {
        return Err(CpgError::InvalidGraph(
            "isthmus child must be a loop network".into(),
        ));
    }
    let g = &net.graph;
    let attach = g.incidence()[p]
        .iter()
        .find(|&&(e, _)| e != net.root_edge)
        .map(|&(_, w)| w)
        .ok_or_else(|| CpgError::InvalidGraph("loop pole has no exit edge".into()))?;
    let relabel = |v: usize| if v > p { v - 1 } else { v };
    let edges = g
        .edges()
        .iter()
        .filter(|&&(u, v)| u != p && v != p)
        .map(|&(u, v)| (relabel(u), relabel(v)))
        .collect();
    Ok((g.n() - 1, edges, relabel(attach)))
}

/// Rebuilds the network described by a derivation tree.
pub fn recompose(tree: &DecompositionTree) -> Result<Network> {
    match tree {
        DecompositionTree::AtomEdge => Err(CpgError::InvalidGraph(
            "an atom edge is not a standalone network".into(),
        )),
        DecompositionTree::Loop { child } => {
            let c = recompose(child)?;
            let (n, mut edges, (a, b)) = strip_root(&c);
            let s = n;
            let s_prime = n + 1;
            edges.push((s_prime, a));
            edges.push((s_prime, b));
            edges.push((s, s_prime));
            edges.push((s, s));
            let root = edges.len() - 1;
            Network::new(CubicGraph::new(n + 2, edges)?, root, (s, s))
        }
        DecompositionTree::Isthmus { south, north } => {
            let cs = recompose(south)?;
            let cn = recompose(north)?;
            let (n1, e1, a1) = strip_loop_pole(&cs)?;
            let (n2, e2, a2) = strip_loop_pole(&cn)?;
            let mut edges = e1;
            edges.extend(e2.into_iter().map(|(u, v)| (u + n1, v + n1)));
            edges.push((a1, a2 + n1));
            let root = edges.len() - 1;
            Network::new(CubicGraph::new(n1 + n2, edges)?, root, (a1, a2 + n1))
        }
        DecompositionTree::Series { first, second } => {
            let c1 = recompose(first)?;
            let c2 = recompose(second)?;
            let (n1, e1, (s, u)) = strip_root(&c1);
            let (n2, e2, (v, t)) = strip_root(&c2);
            let mut edges = e1;
            edges.extend(e2.into_iter().map(|(x, y)| (x + n1, y + n1)));
            edges.push((u, v + n1));
            edges.push((s, t + n1));
            let root = edges.len() - 1;
            Network::new(CubicGraph::new(n1 + n2, edges)?, root, (s, t + n1))
        }
        DecompositionTree::ParallelDouble { child } => {
            let c = recompose(child)?;
            let (n, mut edges, (a, b)) = strip_root(&c);
            let s = n;
            let t = n + 1;
            edges.push((s, a));
            edges.push((t, b));
            edges.push((s, t));
            edges.push((s, t));
            let root = edges.len() - 1;
            Network::new(CubicGraph::new(n + 2, edges)?, root, (s, t))
        }
        DecompositionTree::ParallelPair { first, second } => {
            let c1 = recompose(first)?;
            let c2 = recompose(second)?;
            let (n1, e1, (a1, b1)) = strip_root(&c1);
            let (n2, e2, (a2, b2)) = strip_root(&c2);
            let s = n1 + n2;
            let t = n1 + n2 + 1;
            let mut edges = e1;
            edges.extend(e2.into_iter().map(|(x, y)| (x + n1, y + n1)));
            edges.push((s, a1));
            edges.push((t, b1));
            edges.push((s, a2 + n1));
            edges.push((t, b2 + n1));
            edges.push((s, t));
            let root = edges.len() - 1;
            Network::new(CubicGraph::new(n1 + n2 + 2, edges)?, root, (s, t))
        }
        DecompositionTree::Polyhedral {
            core,
            root_edge,
            poles,
            children,
            ..
        } => {
            if children.len() != core.m() {
                return Err(CpgError::InvalidGraph(
                    "polyhedral node needs one child slot per core edge".into(),
                ));
            }
            if children[*root_edge] != DecompositionTree::AtomEdge {
                return Err(CpgError::InvalidGraph(
                    "the core root edge cannot carry an insertion".into(),
                ));
            }
            let mut assignments = Vec::with_capacity(children.len());
            for c in children {
                match c {
                    DecompositionTree::AtomEdge => assignments.push(None),
                    _ => assignments.push(Some(recompose(c)?)),
                }
            }
            let (graph, edge_map) = insert_networks(core, &assignments)?;
            let root = edge_map[*root_edge]
                .ok_or_else(|| CpgError::InvalidGraph("core root edge was replaced".into()))?;
            Network::new(graph, root, *poles)
        }
    }
}

/// Blows up the edges of a core graph: for each assigned edge uv, the edge
/// and the component's root edge are deleted, u is joined to the south pole
/// and v to the north pole. Returns the new graph and, per core edge, the
/// new id of the edge when it was kept as an atom.
pub fn insert_networks(
    core: &CubicGraph,
    assignments: &[Option<Network>],
) -> Result<(CubicGraph, Vec<Option<usize>>)> {
    if assignments.len() != core.m() {
        return Err(CpgError::InvalidGraph(
            "need one assignment slot per core edge".into(),
        ));
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut edge_map = vec![None; core.m()];
    let mut n = core.n();
    for (e, assignment) in assignments.iter().enumerate() {
        let (u, v) = core.edge(e);
        match assignment {
            None => {
                edge_map[e] = Some(edges.len());
                edges.push((u, v));
            }
            Some(net) => {
                if net.classify() == NetworkClass::Isthmus {
                    return Err(CpgError::InvalidGraph(
                        "isthmus networks cannot be inserted into an edge".into(),
                    ));
                }
                let (cn, ce, (south, north)) = strip_root(net);
                edges.push((u, south + n));
                edges.push((v, north + n));
                edges.extend(ce.into_iter().map(|(x, y)| (x + n, y + n)));
                n += cn;
            }
        }
    }
    Ok((CubicGraph::new(n, edges)?, edge_map))
}

/// Deterministic root choice for extracting the 3-connected components of a
/// simple connected cubic planar graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootRule {
    /// Root at the lexicographically smallest oriented edge.
    LexSmallest,
    /// Root at the lexicographically largest oriented edge (reversed).
    LexLargest,
}

/// The 3-connected components of a simple connected cubic planar graph,
/// with the original vertex labels of each core. The result does not
/// depend on the root rule.
pub fn three_connected_components(
    c: &CubicGraph,
    rule: RootRule,
) -> Result<Vec<(CubicGraph, Vec<usize>)>> {
    if !c.is_simple() || !c.is_connected() || !c.is_cubic() || c.n() < 4 {
        return Err(CpgError::InvalidGraph(
            "3-connected components need a simple connected cubic graph".into(),
        ));
    }
    let mut keyed: Vec<(usize, usize, usize)> = c
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| (u.min(v), u.max(v), e))
        .collect();
    keyed.sort_unstable();
    let (root, poles) = match rule {
        RootRule::LexSmallest => {
            let &(u, v, e) = keyed.first().expect("graph has edges");
            (e, (u, v))
        }
        RootRule::LexLargest => {
            let &(u, v, e) = keyed.last().expect("graph has edges");
            (e, (v, u))
        }
    };
    let net = Network::new(c.clone(), root, poles)?;
    let tree = decompose(&net)?;
    Ok(tree.cores())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::iso::{isomorphic_graphs, isomorphic_networks};

    fn round_trip(net: &Network) {
        let tree = decompose(net).unwrap();
        assert_eq!(tree.size(), net.n());
        let back = recompose(&tree).unwrap();
        assert!(
            isomorphic_networks(net, &back),
            "round trip changed the network"
        );
    }

    #[test]
    fn k4_single_polyhedral_node() {
        let net = Network::new(CubicGraph::k4(), 0, (0, 1)).unwrap();
        let tree = decompose(&net).unwrap();
        match &tree {
            DecompositionTree::Polyhedral { core, children, .. } => {
                assert_eq!(core.n(), 4);
                assert!(children.iter().all(|c| *c == DecompositionTree::AtomEdge));
            }
            other => panic!("expected a polyhedral node, got {other:?}"),
        }
        round_trip(&net);
    }

    #[test]
    fn loop_network_round_trip() {
        let g = CubicGraph::new(
            6,
            vec![
                (0, 0),
                (0, 1),
                (1, 2),
                (1, 3),
                (2, 4),
                (2, 5),
                (3, 4),
                (3, 5),
                (4, 5),
            ],
        )
        .unwrap();
        let net = Network::new(g, 0, (0, 0)).unwrap();
        let tree = decompose(&net).unwrap();
        assert!(matches!(tree, DecompositionTree::Loop { .. }));
        round_trip(&net);
    }

    #[test]
    fn isthmus_round_trip() {
        let g = CubicGraph::new(
            10,
            vec![
                (0, 1),
                (0, 2),
                (1, 3),
                (1, 4),
                (2, 3),
                (2, 4),
                (3, 4),
                (0, 5),
                (5, 6),
                (5, 7),
                (6, 8),
                (6, 9),
                (7, 8),
                (7, 9),
                (8, 9),
            ],
        )
        .unwrap();
        let net = Network::new(g, 7, (0, 5)).unwrap();
        let tree = decompose(&net).unwrap();
        assert!(matches!(tree, DecompositionTree::Isthmus { .. }));
        round_trip(&net);
    }

    #[test]
    fn series_with_pole_loop_round_trip() {
        let g = CubicGraph::new(
            10,
            vec![
                (0, 1),
                (0, 2),
                (1, 3),
                (1, 4),
                (2, 3),
                (2, 4),
                (3, 4),
                (0, 6),
                (6, 5),
                (6, 7),
                (5, 8),
                (5, 9),
                (7, 8),
                (7, 9),
                (8, 9),
            ],
        )
        .unwrap();
        let net = Network::new(g, 0, (0, 1)).unwrap();
        let tree = decompose(&net).unwrap();
        match &tree {
            DecompositionTree::Series { first, .. } => {
                assert!(matches!(**first, DecompositionTree::Loop { .. }));
            }
            other => panic!("expected a series node, got {other:?}"),
        }
        round_trip(&net);
    }

    #[test]
    fn parallel_double_round_trip() {
        let g = CubicGraph::new(
            6,
            vec![
                (0, 1),
                (0, 1),
                (0, 2),
                (1, 3),
                (2, 4),
                (2, 5),
                (3, 4),
                (3, 5),
                (4, 5),
            ],
        )
        .unwrap();
        let net = Network::new(g, 0, (0, 1)).unwrap();
        let tree = decompose(&net).unwrap();
        assert!(matches!(tree, DecompositionTree::ParallelDouble { .. }));
        round_trip(&net);
    }

    #[test]
    fn insertion_into_k4_and_core_recovery() {
        // Insert the K4 network into one edge of K4: an 8-vertex simple
        // connected cubic planar graph with two tetrahedral components.
        let host = CubicGraph::k4();
        let child = Network::new(CubicGraph::k4(), 0, (0, 1)).unwrap();
        let mut assignments: Vec<Option<Network>> = vec![None; host.m()];
        assignments[3] = Some(child);
        let (g, edge_map) = insert_networks(&host, &assignments).unwrap();
        assert_eq!(g.n(), 8);
        assert!(g.is_cubic());
        let report = g.validate();
        assert!(report.is_valid(), "{:?}", report.violations);
        assert!(edge_map[3].is_none());
        let comps = three_connected_components(&g, RootRule::LexSmallest).unwrap();
        assert_eq!(comps.len(), 2);
        for (core, labels) in &comps {
            assert!(isomorphic_graphs(core, &CubicGraph::k4()));
            assert_eq!(labels.len(), 4);
        }
        // Disjoint original vertex sets covering all 8 vertices.
        let mut all: Vec<usize> = comps.iter().flat_map(|(_, l)| l.clone()).collect();
        all.sort_unstable();
        assert_eq!(all, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn parallel_insertion_keeps_single_core() {
        // Build the 6-vertex parallel-double network and insert it into an
        // edge of K4; only the host K4 and the inner K4 cores remain, and
        // the parallel structure itself contributes no core.
        let g = CubicGraph::new(
            6,
            vec![
                (0, 1),
                (0, 1),
                (0, 2),
                (1, 3),
                (2, 4),
                (2, 5),
                (3, 4),
                (3, 5),
                (4, 5),
            ],
        )
        .unwrap();
        let par = Network::new(g, 0, (0, 1)).unwrap();
        let mut assignments: Vec<Option<Network>> = vec![None; 6];
        assignments[2] = Some(par);
        let (blown, _) = insert_networks(&CubicGraph::k4(), &assignments).unwrap();
        assert_eq!(blown.n(), 10);
        assert!(blown.validate().is_valid());
        let comps = three_connected_components(&blown, RootRule::LexSmallest).unwrap();
        assert_eq!(comps.len(), 2);
        assert!(comps
            .iter()
            .all(|(c, _)| isomorphic_graphs(c, &CubicGraph::k4())));
    }

    #[test]
    fn root_rule_independence() {
        let host = CubicGraph::prism();
        let child = Network::new(CubicGraph::k4(), 3, (1, 2)).unwrap();
        let mut assignments: Vec<Option<Network>> = vec![None; host.m()];
        assignments[4] = Some(child);
        let (g, _) = insert_networks(&host, &assignments).unwrap();
        let a = three_connected_components(&g, RootRule::LexSmallest).unwrap();
        let b = three_connected_components(&g, RootRule::LexLargest).unwrap();
        assert_eq!(a.len(), b.len());
        let mut la: Vec<Vec<usize>> = a.iter().map(|(_, l)| {
            let mut l = l.clone();
            l.sort_unstable();
            l
        }).collect();
        let mut lb: Vec<Vec<usize>> = b.iter().map(|(_, l)| {
            let mut l = l.clone();
            l.sort_unstable();
            l
        }).collect();
        la.sort();
        lb.sort();
        assert_eq!(la, lb);
    }

    #[test]
    fn isthmus_insertion_rejected() {
        let g = CubicGraph::new(
            10,
            vec![
                (0, 1),
                (0, 2),
                (1, 3),
                (1, 4),
                (2, 3),
                (2, 4),
                (3, 4),
                (0, 5),
                (5, 6),
                (5, 7),
                (6, 8),
                (6, 9),
                (7, 8),
                (7, 9),
                (8, 9),
            ],
        )
        .unwrap();
        let isthmus = Network::new(g, 7, (0, 5)).unwrap();
        let mut assignments: Vec<Option<Network>> = vec![None; 6];
        assignments[1] = Some(isthmus);
        assert!(insert_networks(&CubicGraph::k4(), &assignments).is_err());
    }

    #[test]
    fn prism_is_three_connected_k4_chain_is_not() {
        assert!(is_three_connected(&CubicGraph::prism()));
        assert!(is_three_connected(&CubicGraph::k4()));
        let child = Network::new(CubicGraph::k4(), 0, (0, 1)).unwrap();
        let mut assignments: Vec<Option<Network>> = vec![None; 6];
        assignments[0] = Some(child);
        let (g, _) = insert_networks(&CubicGraph::k4(), &assignments).unwrap();
        assert!(!is_three_connected(&g));
    }
}

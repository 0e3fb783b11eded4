//! Canonical keys for rooted bounded-radius neighborhoods.
//!
//! The k-neighborhood of a vertex is the induced subgraph on all vertices
//! within BFS distance k, rooted at the center. Keys are canonical byte
//! strings: two neighborhoods get equal keys exactly when a root-preserving
//! isomorphism exists. Canonicalization runs color refinement seeded by the
//! root, then individualizes vertices of the first ambiguous color class,
//! taking the lexicographically smallest adjacency code over all branches;
//! automorphisms discovered along the way prune symmetric branches, which
//! keeps tree-like balls (the worst case for refinement) fast.

use crate::error::{CpgError, Result};
use crate::graph::multigraph::CubicGraph;
use std::collections::{BTreeMap, VecDeque};

/// Canonical byte string of a rooted graph of radius ≤ k.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NeighborhoodKey(pub Vec<u8>);

/// Extracts the induced ball of radius k around v and returns its key.
pub fn neighborhood_key(g: &CubicGraph, v: usize, k: usize) -> Result<NeighborhoodKey> {
    if k > 6 {
        return Err(CpgError::Unsupported(format!(
            "neighborhood radius {k} exceeds the guard of 6"
        )));
    }
    if v >= g.n() {
        return Err(CpgError::InvalidGraph("center vertex out of range".into()));
    }
    let (ball, root) = induced_ball(g, v, k);
    Ok(NeighborhoodKey(canonical_rooted_code(&ball, root)))
}

/// Induced subgraph on the distance-≤k ball, with the new root index.
pub fn induced_ball(g: &CubicGraph, v: usize, k: usize) -> (CubicGraph, usize) {
    let inc = g.incidence();
    let mut dist = vec![usize::MAX; g.n()];
    dist[v] = 0;
    let mut order = vec![v];
    let mut q = VecDeque::from([v]);
    while let Some(x) = q.pop_front() {
        if dist[x] == k {
            continue;
        }
        for &(_, y) in &inc[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                order.push(y);
                q.push_back(y);
            }
        }
    }
    let mut new_id = vec![usize::MAX; g.n()];
    for (i, &x) in order.iter().enumerate() {
        new_id[x] = i;
    }
    let mut edges = Vec::new();
    for &(a, b) in g.edges() {
        if new_id[a] != usize::MAX && new_id[b] != usize::MAX {
            edges.push((new_id[a], new_id[b]));
        }
    }
    (
        CubicGraph::new(order.len(), edges).expect("relabeled in range"),
        0,
    )
}

/// Canonical code of a connected rooted multigraph, exact at small sizes.
pub fn canonical_rooted_code(g: &CubicGraph, root: usize) -> Vec<u8> {
    let n = g.n();
    let mut adj = vec![vec![0u8; n]; n];
    let mut loops = vec![0u8; n];
    for &(a, b) in g.edges() {
        if a == b {
            loops[a] += 1;
        } else {
            adj[a][b] += 1;
            adj[b][a] += 1;
        }
    }
    let mut init = vec![0usize; n];
    init[root] = 1;
    let mut search = CanonSearch {
        n,
        adj,
        loops,
        best: None,
        best_perm: None,
        best_fixed: Vec::new(),
        generators: Vec::new(),
    };
    let colors = search.refine(init);
    search.descend(colors, Vec::new());
    search.best.expect("search visits at least one leaf")
}

struct CanonSearch {
    n: usize,
    adj: Vec<Vec<u8>>,
    loops: Vec<u8>,
    best: Option<Vec<u8>>,
    best_perm: Option<Vec<usize>>,
    best_fixed: Vec<usize>,
    generators: Vec<Vec<usize>>,
}

impl CanonSearch {
    /// Stable color refinement; colors are canonical ordinals, so equal
    /// colorings arise on isomorphic graphs regardless of labels.
    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        loop {
            let mut sigs: Vec<(usize, u8, Vec<(usize, u8)>)> = Vec::with_capacity(self.n);
            for v in 0..self.n {
                let mut nb: Vec<(usize, u8)> = (0..self.n)
                    .filter(|&w| self.adj[v][w] > 0)
                    .map(|w| (colors[w], self.adj[v][w]))
                    .collect();
                nb.sort_unstable();
                sigs.push((colors[v], self.loops[v], nb));
            }
            let mut sorted: Vec<&(usize, u8, Vec<(usize, u8)>)> = sigs.iter().collect();
            sorted.sort_unstable();
            sorted.dedup();
            let ranks: BTreeMap<&(usize, u8, Vec<(usize, u8)>), usize> =
                sorted.into_iter().zip(0..).collect();
            let new: Vec<usize> = sigs.iter().map(|s| ranks[s]).collect();
            if new == colors {
                return colors;
            }
            colors = new;
        }
    }

    /// First smallest color class with more than one member.
    fn target_cell(&self, colors: &[usize]) -> Option<Vec<usize>> {
        let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.n {
            cells.entry(colors[v]).or_default().push(v);
        }
        cells
            .into_values()
            .filter(|c| c.len() > 1)
            .min_by_key(|c| c.len())
    }

    /// Returns Some(depth) when the caller chain should unwind to that
    /// depth: the current branch was shown automorphic to an already
    /// explored one, so its remaining leaves cannot improve the minimum.
    fn descend(&mut self, colors: Vec<usize>, fixed: Vec<usize>) -> Option<usize> {
        match self.target_cell(&colors) {
            None => {
                // Discrete coloring: the permutation is determined.
                let mut perm = vec![usize::MAX; self.n];
                for v in 0..self.n {
                    perm[colors[v]] = v;
                }
                let code = self.code_of(&perm);
                match &self.best {
                    Some(b) if *b < code => None,
                    Some(b) if *b == code => {
                        self.record_automorphism(&perm);
                        // The fixed sequences of the two equal leaves agree
                        // up to some depth; the subtree past that depth is
                        // automorphic to one explored earlier.
                        let p = fixed
                            .iter()
                            .zip(&self.best_fixed)
                            .take_while(|(a, b)| a == b)
                            .count();
                        Some(p)
                    }
                    _ => {
                        self.best = Some(code);
                        self.best_perm = Some(perm);
                        self.best_fixed = fixed;
                        None
                    }
                }
            }
            Some(cell) => {
                let depth = fixed.len();
                let mut tried: Vec<usize> = Vec::new();
                for &v in &cell {
                    if self.pruned_by_automorphism(v, &tried, &fixed) {
                        continue;
                    }
                    tried.push(v);
                    let mut c = colors.clone();
                    // Individualize v below every other color.
                    for x in c.iter_mut() {
                        *x = *x * 2 + 1;
                    }
                    c[v] -= 1;
                    let refined = self.refine(c);
                    let mut f = fixed.clone();
                    f.push(v);
                    if let Some(p) = self.descend(refined, f) {
                        if p < depth {
                            return Some(p);
                        }
                    }
                }
                None
            }
        }
    }

    /// Candidate v is redundant when a known automorphism fixing all
    /// previously individualized vertices maps an already-tried candidate
    /// onto v.
    fn pruned_by_automorphism(&self, v: usize, tried: &[usize], fixed: &[usize]) -> bool {
        self.generators.iter().any(|gamma| {
            fixed.iter().all(|&x| gamma[x] == x)
                && tried.iter().any(|&u| gamma[u] == v || gamma[v] == u)
        })
    }

    fn record_automorphism(&mut self, perm: &[usize]) {
        if let Some(base) = &self.best_perm {
            // gamma maps base ordering onto perm ordering.
            let mut gamma = vec![usize::MAX; self.n];
            for i in 0..self.n {
                gamma[base[i]] = perm[i];
            }
            if gamma.iter().enumerate().any(|(i, &x)| x != i) {
                self.generators.push(gamma);
            }
        }
    }

    fn code_of(&self, perm: &[usize]) -> Vec<u8> {
        let mut code = Vec::with_capacity(2 + self.n + self.n * (self.n - 1) / 2);
        code.push((self.n >> 8) as u8);
        code.push((self.n & 0xff) as u8);
        for i in 0..self.n {
            code.push(self.loops[perm[i]]);
        }
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                code.push(self.adj[perm[i]][perm[j]]);
            }
        }
        code
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_zero_is_one_key() {
        let g = CubicGraph::prism();
        let keys: Vec<_> = (0..6).map(|v| neighborhood_key(&g, v, 0).unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn prism_is_vertex_transitive_at_all_radii() {
        let g = CubicGraph::prism();
        for k in 1..=3 {
            let keys: Vec<_> = (0..6)
                .map(|v| neighborhood_key(&g, v, k).unwrap())
                .collect();
            assert!(keys.windows(2).all(|w| w[0] == w[1]), "radius {k}");
        }
    }

    #[test]
    fn k4_and_prism_one_balls_differ() {
        let a = neighborhood_key(&CubicGraph::k4(), 0, 1).unwrap();
        let b = neighborhood_key(&CubicGraph::prism(), 0, 1).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn keys_invariant_under_relabeling() {
        let g = CubicGraph::prism();
        let perm = vec![4, 2, 0, 5, 1, 3];
        let h = g.relabeled(&perm);
        for v in 0..6 {
            for k in 0..=3 {
                let a = neighborhood_key(&g, v, k).unwrap();
                let b = neighborhood_key(&h, perm[v], k).unwrap();
                assert_eq!(a, b, "v={v} k={k}");
            }
        }
    }

    #[test]
    fn tree_like_ball_canonicalizes_quickly() {
        // Depth-4 cubic tree: root with 3 children, inner vertices with 2,
        // leaves padded pairwise to keep the graph valid (not cubic, which
        // is fine for the canonizer). The automorphism group is large, so
        // this exercises the pruning.
        let mut edges = Vec::new();
        let mut next = 1usize;
        let mut frontier = vec![0usize];
        for depth in 0..4 {
            let mut nf = Vec::new();
            for &v in &frontier {
                let kids = if depth == 0 { 3 } else { 2 };
                for _ in 0..kids {
                    edges.push((v, next));
                    nf.push(next);
                    next += 1;
                }
            }
            frontier = nf;
        }
        let g = CubicGraph::new(next, edges).unwrap();
        let code_a = canonical_rooted_code(&g, 0);
        // Relabel by reversing the non-root vertices.
        let perm: Vec<usize> = std::iter::once(0)
            .chain((1..next).rev())
            .collect();
        let h = g.relabeled(&perm);
        let code_b = canonical_rooted_code(&h, 0);
        assert_eq!(code_a, code_b);
    }

    #[test]
    fn radius_guard() {
        assert!(neighborhood_key(&CubicGraph::k4(), 0, 7).is_err());
    }
}

//! Cubic multigraphs with edge identity.
//!
//! Edges are stored as an indexed list of unordered endpoint pairs, so
//! parallel edges and loops are distinguishable objects; a loop contributes
//! two half-edges (hence degree 2) at its vertex. This is required at the
//! root of networks, where a double edge or loop is legal even though the
//! graph minus the root edge must be simple.

use crate::error::{CpgError, Result};
use std::collections::VecDeque;

/// A multigraph, cubic in all validated uses.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CubicGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

/// Properties checked by [`CubicGraph::validate`].
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub cubic: bool,
    pub simple: bool,
    pub connected: bool,
    pub planar: bool,
    /// Rotation system witnessing planarity, per vertex a cyclic list of
    /// (edge id, other endpoint) pairs; loops appear twice.
    pub embedding: Option<Vec<Vec<(usize, usize)>>>,
    pub violations: Vec<String>,
}

impl ValidationReport {
    /// True when the graph is a simple connected cubic planar graph.
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl CubicGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(CpgError::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
        }
        Ok(CubicGraph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.edges[e].0 == self.edges[e].1
    }

    /// Per-vertex incidence lists of (edge id, other endpoint); loops
    /// appear twice at their vertex.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut inc = vec![Vec::new(); self.n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            inc[u].push((e, v));
            inc[v].push((e, u));
        }
        inc
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn is_cubic(&self) -> bool {
        let mut deg = vec![0usize; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg.iter().all(|&d| d == 3)
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &self.edges {
            if u == v {
                return false;
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return false;
            }
        }
        true
    }

    /// Connected components as vertex sets.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let inc = self.incidence();
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &(_, w) in &inc[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.components().len() == 1
    }

    /// Connectivity of the graph with one edge removed.
    pub fn is_connected_without_edge(&self, skip: usize) -> bool {
        if self.n == 0 {
            return true;
        }
        let inc = self.incidence();
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &(e, w) in &inc[v] {
                if e != skip && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    /// Connectivity of the graph with a vertex pair removed.
    pub fn is_connected_without_vertices(&self, a: usize, b: usize) -> bool {
        let alive: Vec<usize> = (0..self.n).filter(|&v| v != a && v != b).collect();
        if alive.is_empty() {
            return true;
        }
        let inc = self.incidence();
        let mut seen = vec![false; self.n];
        seen[a] = true;
        seen[b] = true;
        let start = alive[0];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &(_, w) in &inc[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == alive.len()
    }

    /// All bridges (cut edges), by a DFS lowpoint computation that respects
    /// edge identity (a parallel edge is never a bridge).
    pub fn bridges(&self) -> Vec<usize> {
        let inc = self.incidence();
        let mut disc = vec![usize::MAX; self.n];
        let mut low = vec![0usize; self.n];
        let mut bridges = Vec::new();
        let mut timer = 0usize;
        // Iterative DFS: stack of (vertex, incidence index, entry edge).
        for root in 0..self.n {
            if disc[root] != usize::MAX {
                continue;
            }
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, 0, usize::MAX)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(&mut (v, ref mut idx, entry)) = stack.last_mut() {
                if *idx < inc[v].len() {
                    let (e, w) = inc[v][*idx];
                    *idx += 1;
                    if e == entry || e == usize::MAX {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, 0, e));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&mut (parent, _, _)) = stack.last_mut() {
                        low[parent] = low[parent].min(low[v]);
                        if low[v] > disc[parent] {
                            bridges.push(entry);
                        }
                    }
                }
            }
        }
        bridges
    }

    /// Full validation: cubic, simple, connected, planar (with witness).
    pub fn validate(&self) -> ValidationReport {
        let cubic = self.is_cubic();
        let simple = self.is_simple();
        let connected = self.is_connected();
        let (planar, embedding) = crate::graph::planarity::embed(self);
        let mut violations = Vec::new();
        if !cubic {
            violations.push("not 3-regular".to_string());
        }
        if !simple {
            violations.push("not simple (loop or parallel edge)".to_string());
        }
        if !connected {
            violations.push("not connected".to_string());
        }
        if !planar {
            violations.push("not planar".to_string());
        }
        ValidationReport {
            cubic,
            simple,
            connected,
            planar,
            embedding,
            violations,
        }
    }

    /// Applies a vertex relabeling; `perm[v]` is the new label of v.
    pub fn relabeled(&self, perm: &[usize]) -> CubicGraph {
        CubicGraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|&(u, v)| (perm[u], perm[v]))
                .collect(),
        }
    }

    /// Text form: `n m [root]` header then one `u v` line per edge.
    pub fn to_text(&self, root: Option<(usize, usize)>) -> String {
        let mut s = match root {
            Some((u, v)) => format!("{} {} {} {}\n", self.n, self.m(), u, v),
            None => format!("{} {}\n", self.n, self.m()),
        };
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    /// Parses the text form; returns the graph and the optional root pair.
    pub fn from_text(text: &str) -> Result<(CubicGraph, Option<(usize, usize)>)> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| CpgError::Parse("empty graph text".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| CpgError::Parse(format!("bad header token {t}"))))
            .collect::<Result<_>>()?;
        let (n, m, root) = match nums.as_slice() {
            [n, m] => (*n, *m, None),
            [n, m, ru, rv] => (*n, *m, Some((*ru, *rv))),
            _ => return Err(CpgError::Parse("header must be `n m [root_u root_v]`".into())),
        };
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| CpgError::Parse("missing edge line".into()))?;
            let pair: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| CpgError::Parse(format!("bad edge token {t}"))))
                .collect::<Result<_>>()?;
            match pair.as_slice() {
                [u, v] => edges.push((*u, *v)),
                _ => return Err(CpgError::Parse(format!("bad edge line `{line}`"))),
            }
        }
        Ok((CubicGraph::new(n, edges)?, root))
    }

    /// K4, the smallest connected simple cubic planar graph.
    pub fn k4() -> CubicGraph {
        CubicGraph {
            n: 4,
            edges: vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        }
    }

    /// The 3-prism (triangular prism), the unique 6-vertex instance.
    pub fn prism() -> CubicGraph {
        CubicGraph {
            n: 6,
            edges: vec![
                (0, 1),
                (1, 2),
                (2, 0),
                (3, 4),
                (4, 5),
                (5, 3),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
        }
    }

    /// K33, the bipartite Kuratowski graph (cubic, non-planar).
    pub fn k33() -> CubicGraph {
        CubicGraph {
            n: 6,
            edges: vec![
                (0, 3),
                (0, 4),
                (0, 5),
                (1, 3),
                (1, 4),
                (1, 5),
                (2, 3),
                (2, 4),
                (2, 5),
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_is_valid() {
        let r = CubicGraph::k4().validate();
        assert!(r.is_valid(), "{:?}", r.violations);
        assert!(r.embedding.is_some());
    }

    #[test]
    fn k33_fails_planarity_only() {
        let r = CubicGraph::k33().validate();
        assert!(r.cubic && r.simple && r.connected);
        assert!(!r.planar);
        assert!(!r.is_valid());
    }

    #[test]
    fn doubled_prism_edge_fails_simplicity() {
        let mut edges = CubicGraph::prism().edges().to_vec();
        edges.push((0, 1));
        // Degree is now wrong too; drop two other edges to restore degrees.
        edges.retain(|&e| e != (2, 0) && e != (2, 5));
        edges.push((2, 2));
        let g = CubicGraph::new(6, edges).unwrap();
        let r = g.validate();
        assert!(!r.simple);
    }

    #[test]
    fn bridges_found() {
        // Two triangles joined by a bridge: vertices 0-2 and 3-5.
        let g = CubicGraph::new(
            6,
            vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)],
        )
        .unwrap();
        let b = g.bridges();
        assert_eq!(b, vec![6]);
        assert!(!g.is_connected_without_edge(6));
        assert!(g.is_connected_without_edge(0));
    }

    #[test]
    fn parallel_edges_are_not_bridges() {
        let g = CubicGraph::new(2, vec![(0, 1), (0, 1), (0, 1)]).unwrap();
        assert!(g.bridges().is_empty());
        assert!(g.is_cubic());
        assert!(!g.is_simple());
    }

    #[test]
    fn text_round_trip() {
        let g = CubicGraph::prism();
        let text = g.to_text(Some((0, 1)));
        let (back, root) = CubicGraph::from_text(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(root, Some((0, 1)));
    }
}

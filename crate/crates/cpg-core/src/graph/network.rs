//! Rooted cubic networks and their five-way classification.
//!
//! A network is a connected cubic planar multigraph with an oriented root
//! edge whose removal leaves a simple graph. The classes, decided in this
//! fixed order, are: loop (root is a loop), isthmus (root is a bridge),
//! series (the rootless graph has a bridge separating the poles), parallel
//! (root in a double edge, or deleting both poles disconnects the graph),
//! and polyhedral (everything else).

use crate::error::{CpgError, Result};
use crate::graph::multigraph::CubicGraph;
use crate::graph::planarity;
use std::collections::VecDeque;

/// The five network classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NetworkClass {
    Loop,
    Isthmus,
    Series,
    Parallel,
    Polyhedral,
}

/// A cubic network: a multigraph with an oriented root edge.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Network {
    pub graph: CubicGraph,
    pub root_edge: usize,
    /// (south, north); both entries coincide when the root is a loop.
    pub poles: (usize, usize),
}

impl Network {
    pub fn new(graph: CubicGraph, root_edge: usize, poles: (usize, usize)) -> Result<Self> {
        let net = Network {
            graph,
            root_edge,
            poles,
        };
        net.validate()?;
        Ok(net)
    }

    /// Builds without validation; used internally where validity is
    /// established by construction.
    pub fn new_unchecked(graph: CubicGraph, root_edge: usize, poles: (usize, usize)) -> Self {
        Network {
            graph,
            root_edge,
            poles,
        }
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Checks every defining property of a network.
    pub fn validate(&self) -> Result<()> {
        let g = &self.graph;
        if self.root_edge >= g.m() {
            return Err(CpgError::InvalidGraph("root edge id out of range".into()));
        }
        let (u, v) = g.edge(self.root_edge);
        let ok_poles = (self.poles == (u, v)) || (self.poles == (v, u));
        if !ok_poles {
            return Err(CpgError::InvalidGraph(
                "poles must be the endpoints of the root edge".into(),
            ));
        }
        if g.n() < 4 || g.n() % 2 != 0 {
            return Err(CpgError::InvalidGraph(format!(
                "network vertex count must be even and at least 4, got {}",
                g.n()
            )));
        }
        if !g.is_cubic() {
            return Err(CpgError::InvalidGraph("network must be cubic".into()));
        }
        if !g.is_connected() {
            return Err(CpgError::InvalidGraph("network must be connected".into()));
        }
        if !rootless_is_simple(g, self.root_edge) {
            return Err(CpgError::InvalidGraph(
                "graph minus the root edge must be simple".into(),
            ));
        }
        if !planarity::is_planar(g) {
            return Err(CpgError::InvalidGraph("network must be planar".into()));
        }
        Ok(())
    }

    /// True when the whole graph (root edge included) is simple; such
    /// networks are exactly connected cubic planar graphs with an oriented
    /// root edge.
    pub fn is_simple_network(&self) -> bool {
        self.graph.is_simple()
    }

    /// Classifies the network, trying the five classes in the fixed order.
    pub fn classify(&self) -> NetworkClass {
        let g = &self.graph;
        let (s, t) = self.poles;
        if s == t {
            return NetworkClass::Loop;
        }
        if !g.is_connected_without_edge(self.root_edge) {
            return NetworkClass::Isthmus;
        }
        if self.separating_bridge_nearest_south().is_some() {
            return NetworkClass::Series;
        }
        let doubled = g
            .edges()
            .iter()
            .enumerate()
            .any(|(e, &(a, b))| e != self.root_edge && (a, b) == (s, t) || e != self.root_edge && (a, b) == (t, s));
        if doubled || !g.is_connected_without_vertices(s, t) {
            return NetworkClass::Parallel;
        }
        NetworkClass::Polyhedral
    }

    /// Among the bridges of the rootless graph that separate the poles,
    /// returns the one closest to the south pole as (edge id, u, v) with u
    /// on the south side; `None` when no such bridge exists.
    pub fn separating_bridge_nearest_south(&self) -> Option<(usize, usize, usize)> {
        let g = &self.graph;
        let (s, t) = self.poles;
        let dist = bfs_distances(g, s, self.root_edge);
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for e in bridges_without_edge(g, self.root_edge) {
            let (a, b) = g.edge(e);
            // Which endpoint stays on the south side once the bridge goes?
            let side = component_without(g, &[self.root_edge, e], s);
            if side[t] {
                continue;
            }
            let (u, v) = if side[a] { (a, b) } else { (b, a) };
            debug_assert!(side[u] && !side[v]);
            let d = dist[u];
            match best {
                Some((bd, _, _, be)) if (bd, be) <= (d, e) => {}
                _ => best = Some((d, u, v, e)),
            }
        }
        best.map(|(_, u, v, e)| (e, u, v))
    }
}

/// True when the graph minus the given edge is simple.
pub fn rootless_is_simple(g: &CubicGraph, skip: usize) -> bool {
    let mut seen = std::collections::HashSet::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if e == skip {
            continue;
        }
        if u == v || !seen.insert((u.min(v), u.max(v))) {
            return false;
        }
    }
    true
}

/// BFS distances in the graph minus one edge; unreachable = usize::MAX.
fn bfs_distances(g: &CubicGraph, start: usize, skip: usize) -> Vec<usize> {
    let inc = g.incidence();
    let mut dist = vec![usize::MAX; g.n()];
    dist[start] = 0;
    let mut q = VecDeque::from([start]);
    while let Some(x) = q.pop_front() {
        for &(e, y) in &inc[x] {
            if e != skip && dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                q.push_back(y);
            }
        }
    }
    dist
}

/// Membership mask of the component containing `start` after removing the
/// listed edges.
pub fn component_without(g: &CubicGraph, skip: &[usize], start: usize) -> Vec<bool> {
    let inc = g.incidence();
    let mut seen = vec![false; g.n()];
    seen[start] = true;
    let mut q = VecDeque::from([start]);
    while let Some(x) = q.pop_front() {
        for &(e, y) in &inc[x] {
            if !skip.contains(&e) && !seen[y] {
                seen[y] = true;
                q.push_back(y);
            }
        }
    }
    seen
}

/// Bridges of the graph with one edge removed.
pub fn bridges_without_edge(g: &CubicGraph, skip: usize) -> Vec<usize> {
    // Rebuild a graph without the edge, keeping ids aligned via a map.
    let mut edges = Vec::with_capacity(g.m().saturating_sub(1));
    let mut ids = Vec::with_capacity(g.m().saturating_sub(1));
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if e != skip {
            edges.push((u, v));
            ids.push(e);
        }
    }
    let h = CubicGraph::new(g.n(), edges).expect("labels unchanged");
    h.bridges().into_iter().map(|e| ids[e]).collect()
}

//! Left-right planarity test with embedding extraction.
//!
//! Implements the left-right criterion over a DFS orientation: constraints
//! between return edges are kept as a stack of conflict pairs, and the graph
//! is planar exactly when the constraints stay satisfiable. On success a
//! combinatorial embedding (rotation system) is produced by replaying the
//! DFS with the nesting order signed by the resolved edge sides.
//!
//! The test runs on the simplified graph; loops and parallel edges never
//! affect planarity, and they are re-inserted into the rotation system
//! afterwards (parallel darts consecutively, loop darts adjacent).

use crate::graph::multigraph::CubicGraph;
use std::collections::HashMap;

type E = (usize, usize);

#[derive(Clone, Default, PartialEq)]
struct Interval {
    low: Option<E>,
    high: Option<E>,
}

impl Interval {
    fn empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Clone, Default)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct Lr {
    adj: Vec<Vec<usize>>,
    height: Vec<Option<usize>>,
    parent_edge: Vec<Option<E>>,
    roots: Vec<usize>,
    lowpt: HashMap<E, usize>,
    lowpt2: HashMap<E, usize>,
    nesting_depth: HashMap<E, i64>,
    out: Vec<Vec<usize>>,
    ordered: Vec<Vec<usize>>,
    ref_: HashMap<E, Option<E>>,
    side: HashMap<E, i8>,
    stack: Vec<ConflictPair>,
    stack_bottom: HashMap<E, usize>,
    lowpt_edge: HashMap<E, E>,
}

impl Lr {
    fn new(adj: Vec<Vec<usize>>) -> Self {
        let n = adj.len();
        Lr {
            adj,
            height: vec![None; n],
            parent_edge: vec![None; n],
            roots: Vec::new(),
            lowpt: HashMap::new(),
            lowpt2: HashMap::new(),
            nesting_depth: HashMap::new(),
            out: vec![Vec::new(); n],
            ordered: vec![Vec::new(); n],
            ref_: HashMap::new(),
            side: HashMap::new(),
            stack: Vec::new(),
            stack_bottom: HashMap::new(),
            lowpt_edge: HashMap::new(),
        }
    }

    fn side_of(&self, e: E) -> i8 {
        *self.side.get(&e).unwrap_or(&1)
    }

    fn dfs_orientation(&mut self, start: usize) {
        let n = self.adj.len();
        let mut ind = vec![0usize; n];
        let mut skip_init: HashMap<E, bool> = HashMap::new();
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let e = self.parent_edge[v];
            let mut advanced_to_child = false;
            while ind[v] < self.adj[v].len() {
                let w = self.adj[v][ind[v]];
                let vw = (v, w);
                if !skip_init.get(&vw).copied().unwrap_or(false) {
                    if self.lowpt.contains_key(&vw) || self.lowpt.contains_key(&(w, v)) {
                        ind[v] += 1;
                        continue;
                    }
                    self.out[v].push(w);
                    self.lowpt.insert(vw, self.height[v].unwrap());
                    self.lowpt2.insert(vw, self.height[v].unwrap());
                    if self.height[w].is_none() {
                        self.parent_edge[w] = Some(vw);
                        self.height[w] = Some(self.height[v].unwrap() + 1);
                        stack.push(v);
                        stack.push(w);
                        skip_init.insert(vw, true);
                        advanced_to_child = true;
                        break;
                    } else {
                        self.lowpt.insert(vw, self.height[w].unwrap());
                    }
                }
                let mut nd = 2 * self.lowpt[&vw] as i64;
                if self.lowpt2[&vw] < self.height[v].unwrap() {
                    nd += 1;
                }
                self.nesting_depth.insert(vw, nd);
                if let Some(pe) = e {
                    if self.lowpt[&vw] < self.lowpt[&pe] {
                        let new2 = self.lowpt[&pe].min(self.lowpt2[&vw]);
                        self.lowpt2.insert(pe, new2);
                        self.lowpt.insert(pe, self.lowpt[&vw]);
                    } else if self.lowpt[&vw] > self.lowpt[&pe] {
                        let new2 = self.lowpt2[&pe].min(self.lowpt[&vw]);
                        self.lowpt2.insert(pe, new2);
                    } else {
                        let new2 = self.lowpt2[&pe].min(self.lowpt2[&vw]);
                        self.lowpt2.insert(pe, new2);
                    }
                }
                ind[v] += 1;
            }
            let _ = advanced_to_child;
        }
    }

    fn conflicting(&self, i: &Interval, b: E) -> bool {
        match i.high {
            Some(h) => !i.empty() && self.lowpt[&h] > self.lowpt[&b],
            None => false,
        }
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        if p.left.empty() {
            return self.lowpt[&p.right.low.unwrap()];
        }
        if p.right.empty() {
            return self.lowpt[&p.left.low.unwrap()];
        }
        self.lowpt[&p.left.low.unwrap()].min(self.lowpt[&p.right.low.unwrap()])
    }

    fn add_constraints(&mut self, ei: E, e: E) -> bool {
        let mut p = ConflictPair::default();
        loop {
            let mut q = match self.stack.pop() {
                Some(q) => q,
                None => return false,
            };
            if !q.left.empty() {
                q.swap();
            }
            if !q.left.empty() {
                return false;
            }
            if self.lowpt[&q.right.low.unwrap()] > self.lowpt[&e] {
                if p.right.empty() {
                    p.right.high = q.right.high;
                } else {
                    self.ref_.insert(p.right.low.unwrap(), q.right.high);
                }
                p.right.low = q.right.low;
            } else {
                self.ref_.insert(q.right.low.unwrap(), Some(self.lowpt_edge[&e]));
            }
            if self.stack.len() == self.stack_bottom[&ei] {
                break;
            }
        }
        loop {
            let top_conflicts = match self.stack.last() {
                Some(t) => self.conflicting(&t.left, ei) || self.conflicting(&t.right, ei),
                None => false,
            };
            if !top_conflicts {
                break;
            }
            let mut q = self.stack.pop().unwrap();
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if let Some(prl) = p.right.low {
                self.ref_.insert(prl, q.right.high);
            }
            if q.right.low.is_some() {
                p.right.low = q.right.low;
            }
            if p.left.empty() {
                p.left.high = q.left.high;
            } else {
                self.ref_.insert(p.left.low.unwrap(), q.left.high);
            }
            p.left.low = q.left.low;
        }
        if !(p.left.empty() && p.right.empty()) {
            self.stack.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: E) {
        let u = e.0;
        let hu = self.height[u].unwrap();
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != hu {
                break;
            }
            let p = self.stack.pop().unwrap();
            if let Some(l) = p.left.low {
                self.side.insert(l, -1);
            }
        }
        if let Some(mut p) = self.stack.pop() {
            while let Some(h) = p.left.high {
                if h.1 != u {
                    break;
                }
                p.left.high = self.ref_.get(&h).copied().flatten();
            }
            if p.left.high.is_none() {
                if let Some(l) = p.left.low {
                    self.ref_.insert(l, p.right.low);
                    self.side.insert(l, -1);
                    p.left.low = None;
                }
            }
            while let Some(h) = p.right.high {
                if h.1 != u {
                    break;
                }
                p.right.high = self.ref_.get(&h).copied().flatten();
            }
            if p.right.high.is_none() {
                if let Some(l) = p.right.low {
                    self.ref_.insert(l, p.left.low);
                    self.side.insert(l, -1);
                    p.right.low = None;
                }
            }
            self.stack.push(p);
        }
        if self.lowpt[&e] < hu {
            if let Some(top) = self.stack.last() {
                let hl = top.left.high;
                let hr = top.right.high;
                let pick = match (hl, hr) {
                    (Some(l), Some(r)) => {
                        if self.lowpt[&l] > self.lowpt[&r] {
                            Some(l)
                        } else {
                            Some(r)
                        }
                    }
                    (Some(l), None) => Some(l),
                    (None, r) => r,
                };
                self.ref_.insert(e, pick);
            }
        }
    }

    fn dfs_testing(&mut self, start: usize) -> bool {
        let n = self.adj.len();
        let mut ind = vec![0usize; n];
        let mut skip_init: HashMap<E, bool> = HashMap::new();
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let e = self.parent_edge[v];
            let mut skip_final = false;
            while ind[v] < self.ordered[v].len() {
                let w = self.ordered[v][ind[v]];
                let ei = (v, w);
                if !skip_init.get(&ei).copied().unwrap_or(false) {
                    self.stack_bottom.insert(ei, self.stack.len());
                    if Some(ei) == self.parent_edge[w] {
                        stack.push(v);
                        stack.push(w);
                        skip_init.insert(ei, true);
                        skip_final = true;
                        break;
                    } else {
                        self.lowpt_edge.insert(ei, ei);
                        let mut pair = ConflictPair::default();
                        pair.right = Interval {
                            low: Some(ei),
                            high: Some(ei),
                        };
                        self.stack.push(pair);
                    }
                }
                if self.lowpt[&ei] < self.height[v].unwrap() {
                    if w == self.ordered[v][0] {
                        let le = self.lowpt_edge[&ei];
                        self.lowpt_edge.insert(e.unwrap(), le);
                    } else if !self.add_constraints(ei, e.unwrap()) {
                        return false;
                    }
                }
                ind[v] += 1;
            }
            if !skip_final {
                if let Some(pe) = e {
                    self.remove_back_edges(pe);
                }
            }
        }
        true
    }

    fn resolve_sign(&mut self, e: E) -> i8 {
        let mut chain = Vec::new();
        let mut cur = e;
        while let Some(r) = self.ref_.get(&cur).copied().flatten() {
            chain.push(cur);
            cur = r;
        }
        let mut s = self.side_of(cur);
        while let Some(x) = chain.pop() {
            let sx = self.side_of(x) * s;
            self.side.insert(x, sx);
            self.ref_.insert(x, None);
            s = sx;
        }
        s
    }

    fn dfs_embedding(&mut self, start: usize, emb: &mut RotationBuilder) {
        let n = self.adj.len();
        let mut ind = vec![0usize; n];
        let mut left_ref: Vec<Option<usize>> = vec![None; n];
        let mut right_ref: Vec<Option<usize>> = vec![None; n];
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            while ind[v] < self.ordered[v].len() {
                let w = self.ordered[v][ind[v]];
                ind[v] += 1;
                let ei = (v, w);
                if Some(ei) == self.parent_edge[w] {
                    emb.add_half_edge_first(w, v);
                    left_ref[v] = Some(w);
                    right_ref[v] = Some(w);
                    stack.push(v);
                    stack.push(w);
                    break;
                } else if self.side_of(ei) == 1 {
                    emb.add_half_edge_cw(w, v, right_ref[w]);
                } else {
                    emb.add_half_edge_ccw(w, v, left_ref[w]);
                    left_ref[w] = Some(v);
                }
            }
        }
    }

    /// Runs the full test; `Some(rotations)` on planar input.
    fn run(&mut self) -> Option<Vec<Vec<usize>>> {
        let n = self.adj.len();
        let m: usize = self.adj.iter().map(|a| a.len()).sum::<usize>() / 2;
        if n > 4 && m > 3 * n - 6 {
            return None;
        }
        for v in 0..n {
            if self.height[v].is_none() {
                self.height[v] = Some(0);
                self.roots.push(v);
                self.dfs_orientation(v);
            }
        }
        for v in 0..n {
            let mut o = self.out[v].clone();
            o.sort_by_key(|w| self.nesting_depth[&(v, *w)]);
            self.ordered[v] = o;
        }
        for &r in &self.roots.clone() {
            if !self.dfs_testing(r) {
                return None;
            }
        }
        let oriented: Vec<E> = (0..n)
            .flat_map(|v| self.out[v].iter().map(move |&w| (v, w)))
            .collect();
        for e in oriented {
            let s = self.resolve_sign(e) as i64;
            let nd = self.nesting_depth[&e] * s;
            self.nesting_depth.insert(e, nd);
        }
        let mut emb = RotationBuilder::new(n);
        for v in 0..n {
            let mut o = self.out[v].clone();
            o.sort_by_key(|w| self.nesting_depth[&(v, *w)]);
            self.ordered[v] = o;
            let mut prev = None;
            for &w in &self.ordered[v].clone() {
                emb.add_half_edge_cw(v, w, prev);
                prev = Some(w);
            }
        }
        for &r in &self.roots.clone() {
            self.dfs_embedding(r, &mut emb);
        }
        Some(emb.rotations())
    }
}

/// Per-vertex circular neighbor lists under cw/ccw insertion.
struct RotationBuilder {
    first: Vec<Option<usize>>,
    cw: HashMap<(usize, usize), usize>,
    ccw: HashMap<(usize, usize), usize>,
}

impl RotationBuilder {
    fn new(n: usize) -> Self {
        RotationBuilder {
            first: vec![None; n],
            cw: HashMap::new(),
            ccw: HashMap::new(),
        }
    }

    fn add_half_edge_cw(&mut self, v: usize, w: usize, reference: Option<usize>) {
        match reference {
            None => {
                self.cw.insert((v, w), w);
                self.ccw.insert((v, w), w);
                self.first[v] = Some(w);
            }
            Some(r) => {
                let succ = self.cw[&(v, r)];
                self.cw.insert((v, r), w);
                self.cw.insert((v, w), succ);
                self.ccw.insert((v, succ), w);
                self.ccw.insert((v, w), r);
            }
        }
    }

    fn add_half_edge_ccw(&mut self, v: usize, w: usize, reference: Option<usize>) {
        match reference {
            None => self.add_half_edge_cw(v, w, None),
            Some(r) => {
                let pred = self.ccw[&(v, r)];
                self.add_half_edge_cw(v, w, Some(pred));
                if self.first[v] == Some(r) {
                    self.first[v] = Some(w);
                }
            }
        }
    }

    fn add_half_edge_first(&mut self, v: usize, w: usize) {
        let r = self.first[v];
        self.add_half_edge_ccw(v, w, r);
    }

    fn rotations(&self) -> Vec<Vec<usize>> {
        (0..self.first.len())
            .map(|v| {
                let mut out = Vec::new();
                if let Some(start) = self.first[v] {
                    let mut cur = start;
                    loop {
                        out.push(cur);
                        cur = self.cw[&(v, cur)];
                        if cur == start {
                            break;
                        }
                    }
                }
                out
            })
            .collect()
    }
}

/// Tests planarity of a multigraph and, on success, returns a rotation
/// system: per vertex the clockwise cyclic list of (edge id, other end)
/// pairs, with loop edges contributing two adjacent entries.
pub fn embed(g: &CubicGraph) -> (bool, Option<Vec<Vec<(usize, usize)>>>) {
    let n = g.n();
    // Simplify: one representative edge id per unordered non-loop pair.
    let mut rep: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    let mut loops: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if u == v {
            loops[u].push(e);
        } else {
            rep.entry((u.min(v), u.max(v))).or_default().push(e);
        }
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in rep.keys() {
        adj[u].push(v);
        adj[v].push(u);
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    let simple_rot = match Lr::new(adj).run() {
        Some(r) => r,
        None => return (false, None),
    };
    let mut full: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for v in 0..n {
        for &w in &simple_rot[v] {
            let ids = &rep[&(v.min(w), v.max(w))];
            // Parallel darts nest like arcs: the clockwise order at one
            // endpoint is the reverse of the order at the other.
            if v < w {
                for &e in ids {
                    full[v].push((e, w));
                }
            } else {
                for &e in ids.iter().rev() {
                    full[v].push((e, w));
                }
            }
        }
        for &e in &loops[v] {
            full[v].push((e, v));
            full[v].push((e, v));
        }
    }
    (true, Some(full))
}

/// Convenience wrapper returning only the planarity verdict.
pub fn is_planar(g: &CubicGraph) -> bool {
    embed(g).0
}

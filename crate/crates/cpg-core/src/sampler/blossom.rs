//! Uniform random simple triangulations via blossoming trees.
//!
//! A blossoming tree is a plane tree in which every node carries exactly
//! two single-edge stems (buds) besides its tree edges. The closure walks
//! the contour and repeatedly turns a stem followed by two boundary edges
//! into a chord, enclosing a triangle; the reduced boundary always consists
//! of two alternating stem/edge arcs, which are attached to two new outer
//! vertices joined by the root edge. Trees are drawn uniformly by sampling
//! node degrees from the critical offspring law (negative binomial with
//! three successes at parameter 1/4) conditioned to form a tree, applying
//! the cycle lemma, and placing the two buds uniformly among each node's
//! slots. A fair coin decides which reduced arc receives the root tail.

use crate::error::{CpgError, Result};
use crate::graph::map::PlanarMap;
use rand::Rng;

/// Draws a uniform rooted simple triangulation with `n + 2` vertices and
/// `2n` triangular faces.
pub fn sample_triangulation<R: Rng>(n: usize, rng: &mut R) -> Result<PlanarMap> {
    if n < 1 {
        return Err(CpgError::Unsupported(
            "triangulations need at least one inner node".into(),
        ));
    }
    let offspring = conditioned_offspring(n, rng);
    let slots = bud_slots(&offspring, rng);
    close_tree(&slots, rng.gen::<bool>())
}

/// Geometric number of failures before a success at probability 3/4.
fn geometric_quarter<R: Rng>(rng: &mut R) -> usize {
    let mut c = 0;
    while rng.gen::<f64>() < 0.25 {
        c += 1;
    }
    c
}

/// Offspring counts of a uniform plane tree with n nodes under the
/// negative-binomial weight C(c+2, 2) / 4^c: i.i.d. draws conditioned on
/// total n - 1, then rotated to the unique tree-forming conjugate.
fn conditioned_offspring<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut xi = vec![0usize; n];
    loop {
        let mut total = 0usize;
        for x in xi.iter_mut() {
            *x = geometric_quarter(rng) + geometric_quarter(rng) + geometric_quarter(rng);
            total += *x;
        }
        if total == n - 1 {
            break;
        }
    }
    // Cycle lemma: rotate to start right after the strict minimum of the
    // partial sums of (xi - 1).
    let mut sum = 0i64;
    let mut min = i64::MAX;
    let mut cut = 0usize;
    for (i, &x) in xi.iter().enumerate() {
        sum += x as i64 - 1;
        if sum < min {
            min = sum;
            cut = i + 1;
        }
    }
    xi.rotate_left(cut % n);
    xi
}

/// One slot in a node's left-to-right child list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Child,
    Bud,
}

/// Expands preorder offspring counts into per-node slot lists with the two
/// buds placed uniformly among the c + 2 positions.
fn bud_slots<R: Rng>(offspring: &[usize], rng: &mut R) -> Vec<Vec<Slot>> {
    offspring
        .iter()
        .map(|&c| {
            let len = c + 2;
            let first = rng.gen_range(0..len);
            let mut second = rng.gen_range(0..len - 1);
            if second >= first {
                second += 1;
            }
            let mut slots = vec![Slot::Child; len];
            slots[first] = Slot::Bud;
            slots[second] = Slot::Bud;
            slots
        })
        .collect()
}

/// Boundary item: a dart leaving its vertex along an existing edge, or a
/// stem dart whose twin is still unattached.
#[derive(Clone, Copy)]
enum Item {
    Edge(usize),
    Stem(usize),
}

/// Builds the map closure of the blossoming tree described by preorder slot
/// lists. `arc_flip` selects which reduced arc is attached to the tail of
/// the root edge. Exposed so exhaustive generators can drive the closure
/// deterministically.
pub fn close_tree(slots: &[Vec<Slot>], arc_flip: bool) -> Result<PlanarMap> {
    let n = slots.len();
    let n_darts = 6 * n;
    // Darts come in twin pairs (2e, 2e+1); alpha is xor with 1.
    let mut sigma = vec![usize::MAX; n_darts];
    let mut next_dart = 0usize;
    let mut alloc = || {
        let d = next_dart;
        next_dart += 2;
        d
    };

    // Build the planted tree: rotation at a node is [parent, slots...] in
    // counterclockwise order.
    struct Frame {
        node: usize,
        slot: usize,
        rotation: Vec<usize>,
    }
    let mut next_node = 1usize;
    let mut stack = vec![Frame {
        node: 0,
        slot: 0,
        rotation: Vec::new(),
    }];
    let mut stem_dart = vec![false; n_darts];
    while let Some(frame) = stack.last_mut() {
        let node = frame.node;
        if frame.slot == slots[node].len() {
            let rot = std::mem::take(&mut frame.rotation);
            for i in 0..rot.len() {
                sigma[rot[i]] = rot[(i + 1) % rot.len()];
            }
            stack.pop();
            continue;
        }
        let slot = slots[node][frame.slot];
        frame.slot += 1;
        let d = alloc();
        stack.last_mut().unwrap().rotation.push(d);
        match slot {
            Slot::Bud => stem_dart[d] = true,
            Slot::Child => {
                let child = next_node;
                next_node += 1;
                stack.push(Frame {
                    node: child,
                    slot: 0,
                    rotation: vec![d ^ 1],
                });
            }
        }
    }

    // Trace the contour: the single boundary orbit of the tree. After a
    // stem the walk continues with the next rotation item at the same
    // vertex; after an edge dart it follows the face permutation.
    let mut contour: Vec<Item> = Vec::with_capacity(6 * n - 2);
    let mut d = 0usize;
    loop {
        if stem_dart[d] {
            contour.push(Item::Stem(d));
            d = sigma[d];
        } else {
            contour.push(Item::Edge(d));
            d = sigma[d ^ 1];
        }
        if d == 0 {
            break;
        }
    }

    // Partial closure over the cyclic boundary list.
    let len = contour.len();
    let mut next = vec![0usize; len];
    let mut prev = vec![0usize; len];
    for i in 0..len {
        next[i] = (i + 1) % len;
        prev[i] = (i + len - 1) % len;
    }
    let mut items = contour;
    let mut alive = len;
    let mut dead = vec![false; len];
    let mut work: Vec<usize> = (0..len)
        .filter(|&i| matches!(items[i], Item::Stem(_)))
        .collect();
    while let Some(i) = work.pop() {
        let Item::Stem(s) = items[i] else { continue };
        if alive < 3 {
            break;
        }
        let j = next[i];
        let k = next[j];
        let (Item::Edge(_), Item::Edge(d2)) = (items[j], items[k]) else {
            continue;
        };
        // Chord from the stem to the far end of d2: attach the stem's twin
        // right after alpha(d2) in that vertex's rotation.
        let t = s ^ 1;
        sigma[t] = sigma[d2 ^ 1];
        sigma[d2 ^ 1] = t;
        items[i] = Item::Edge(s);
        // Unlink j and k.
        dead[j] = true;
        dead[k] = true;
        next[i] = next[k];
        prev[next[k]] = i;
        alive -= 2;
        // The new edge may complete a pattern for a stem up to two items
        // back.
        let p1 = prev[i];
        if matches!(items[p1], Item::Stem(_)) {
            work.push(p1);
        } else {
            let p2 = prev[p1];
            if matches!(items[p2], Item::Stem(_)) {
                work.push(p2);
            }
        }
    }

    // Collect the reduced boundary in order.
    let start = (0..len)
        .find(|&i| !dead[i])
        .ok_or_else(|| CpgError::InvalidGraph("empty reduced boundary".into()))?;
    let mut reduced = Vec::with_capacity(alive);
    let mut i = start;
    loop {
        reduced.push(items[i]);
        i = next[i];
        if i == start {
            break;
        }
    }

    // Locate the two stem-stem adjacencies and split into two arcs.
    let m = reduced.len();
    let mut breaks = Vec::new();
    for idx in 0..m {
        let a = reduced[idx];
        let b = reduced[(idx + 1) % m];
        if matches!(a, Item::Stem(_)) && matches!(b, Item::Stem(_)) {
            breaks.push(idx);
        }
    }
    if breaks.len() != 2 {
        return Err(CpgError::InvalidGraph(format!(
            "reduced boundary has {} stem-stem gaps, expected 2",
            breaks.len()
        )));
    }
    let arc = |from: usize, to: usize| -> Vec<usize> {
        // Stems strictly after position `from`, up to and including `to`.
        let mut out = Vec::new();
        let mut idx = (from + 1) % m;
        loop {
            if let Item::Stem(s) = reduced[idx] {
                out.push(s);
            }
            if idx == to {
                break;
            }
            idx = (idx + 1) % m;
        }
        out
    };
    let mut arc_x = arc(breaks[0], breaks[1]);
    let mut arc_y = arc(breaks[1], breaks[0]);
    if arc_flip {
        std::mem::swap(&mut arc_x, &mut arc_y);
    }

    // Completion: outer vertex x takes the twins of arc_x in reverse
    // contour order, then the root tail; y symmetrically takes arc_y.
    let r_x = alloc();
    let r_y = r_x ^ 1;
    debug_assert_eq!(next_dart, n_darts);
    let mut attach = |arc_stems: &[usize], root_dart: usize| {
        let twins: Vec<usize> = arc_stems.iter().rev().map(|&s| s ^ 1).collect();
        let mut cycle = twins;
        cycle.push(root_dart);
        for i in 0..cycle.len() {
            sigma[cycle[i]] = cycle[(i + 1) % cycle.len()];
        }
    };
    attach(&arc_x, r_x);
    attach(&arc_y, r_y);

    let alpha: Vec<usize> = (0..n_darts).map(|d| d ^ 1).collect();
    PlanarMap::new(alpha, sigma, r_x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    fn validate_triangulation(map: &PlanarMap, n: usize) {
        assert_eq!(map.n_vertices(), n + 2);
        assert_eq!(map.n_edges(), 3 * n);
        assert_eq!(map.euler_characteristic(), 2);
        let faces = map.faces();
        assert_eq!(faces.len(), 2 * n);
        assert!(faces.iter().all(|f| f.len() == 3), "non-triangular face");
        let g = map.to_graph();
        assert!(g.is_simple(), "closure produced a multi-edge");
    }

    #[test]
    fn smallest_triangulation_is_the_tetrahedron() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let map = sample_triangulation(2, &mut rng).unwrap();
            validate_triangulation(&map, 2);
            let g = map.to_graph();
            assert_eq!(g.n(), 4);
            assert!(g.edges().len() == 6);
        }
    }

    #[test]
    fn medium_samples_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &n in &[3usize, 5, 10, 50, 100] {
            let map = sample_triangulation(n, &mut rng).unwrap();
            validate_triangulation(&map, n);
        }
    }

    fn code_frequencies(n: usize, draws: usize, seed: u64) -> HashMap<Vec<usize>, usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for _ in 0..draws {
            let map = sample_triangulation(n, &mut rng).unwrap();
            validate_triangulation(&map, n);
            *counts.entry(map.canonical_code()).or_default() += 1;
        }
        counts
    }

    #[test]
    fn three_node_triangulations_are_uniform() {
        let draws = 30_000;
        let counts = code_frequencies(3, draws, 23);
        assert_eq!(counts.len(), 3, "expected q_3 = 3 rooted maps");
        let expected = draws as f64 / 3.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // chi-square with 2 dof, far tail at 20.
        assert!(chi2 < 20.0, "chi2 = {chi2}, counts = {counts:?}");
    }

    #[test]
    fn four_and_five_node_triangulations_are_uniform() {
        for (n, classes, seed) in [(4usize, 13usize, 31u64), (5, 68, 37)] {
            let draws = 40_000;
            let counts = code_frequencies(n, draws, seed);
            assert_eq!(counts.len(), classes, "expected q_{n} = {classes}");
            let expected = draws as f64 / classes as f64;
            let chi2: f64 = counts
                .values()
                .map(|&c| (c as f64 - expected).powi(2) / expected)
                .sum();
            let dof = (classes - 1) as f64;
            // Loose 5-sigma style band for a chi-square statistic.
            assert!(
                chi2 < dof + 5.0 * (2.0 * dof).sqrt(),
                "n={n}: chi2 = {chi2}, dof = {dof}"
            );
        }
    }

    #[test]
    fn duals_are_cubic_three_connected() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for &n in &[2usize, 3, 8, 30] {
            let map = sample_triangulation(n, &mut rng).unwrap();
            let dual = map.dual();
            assert_eq!(dual.n_vertices(), 2 * n);
            let g = dual.to_graph();
            assert!(g.is_cubic());
            assert!(g.is_simple());
            assert!(crate::graph::decompose::is_three_connected(&g));
        }
    }
}

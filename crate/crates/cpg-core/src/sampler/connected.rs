//! Exact and windowed samplers for connected cubic planar graphs.
//!
//! A connected graph with an oriented root edge decomposes into one of four
//! shapes: polyhedral, a parallel pair across the root, an isthmus pair of
//! loop halves, or a series chain that is not a chain of two loops. Every
//! graph on n vertices has exactly 3n such rootings, so a Boltzmann draw
//! from the four-way mixture, conditioned on its size and stripped of the
//! root, is uniform among labelled connected cubic planar graphs of that
//! size. The expected-degree model replaces all insertions on the largest
//! 3-connected core of one such draw by fresh independent ones.

use crate::error::{CpgError, Result};
use crate::graph::decompose::{decompose, insert_networks, recompose, DecompositionTree};
use crate::graph::multigraph::CubicGraph;
use crate::graph::network::{Network, NetworkClass};
use crate::sampler::boltzmann::{relabel_network, sample_class_tree, sample_d_tree};
use crate::sampler::context::{pick_weighted, SamplerContext};
use rand::seq::SliceRandom;
use rand::Rng;

/// A conditioned draw together with its rejection cost.
#[derive(Debug, Clone)]
pub struct ConnectedSample {
    pub graph: CubicGraph,
    /// Number of Boltzmann trials consumed, counting aborted ones.
    pub trials: u64,
}

/// Draws one rooted derivation from the connected-graph mixture.
pub fn sample_rooted_tree<R: Rng>(
    ctx: &SamplerContext,
    rng: &mut R,
    budget: &mut usize,
) -> Result<DecompositionTree> {
    let c = &ctx.classes;
    let r2 = ctx.constants.rho * ctx.constants.rho;
    let w_pair = r2 * c.d * c.d / 2.0;
    let w_series = c.l * (c.d - c.l) + (c.p + c.h) * c.d;
    match pick_weighted(rng, &[c.h, w_pair, c.i, w_series]) {
        0 => sample_class_tree(ctx, rng, NetworkClass::Polyhedral, budget),
        1 => {
            charge_pair(budget)?;
            let first = sample_d_tree(ctx, rng, budget)?;
            let second = sample_d_tree(ctx, rng, budget)?;
            Ok(DecompositionTree::ParallelPair {
                first: Box::new(first),
                second: Box::new(second),
            })
        }
        2 => sample_class_tree(ctx, rng, NetworkClass::Isthmus, budget),
        _ => {
            let w_loop_head = c.l * (c.d - c.l);
            let w_other_head = (c.p + c.h) * c.d;
            let (first, second) = if pick_weighted(rng, &[w_loop_head, w_other_head]) == 0 {
                let first = sample_class_tree(ctx, rng, NetworkClass::Loop, budget)?;
                let second = match pick_weighted(rng, &[c.s, c.p, c.h]) {
                    0 => sample_class_tree(ctx, rng, NetworkClass::Series, budget)?,
                    1 => sample_class_tree(ctx, rng, NetworkClass::Parallel, budget)?,
                    _ => sample_class_tree(ctx, rng, NetworkClass::Polyhedral, budget)?,
                };
                (first, second)
            } else {
                let first = match pick_weighted(rng, &[c.p, c.h]) {
                    0 => sample_class_tree(ctx, rng, NetworkClass::Parallel, budget)?,
                    _ => sample_class_tree(ctx, rng, NetworkClass::Polyhedral, budget)?,
                };
                let second = sample_d_tree(ctx, rng, budget)?;
                (first, second)
            };
            Ok(DecompositionTree::Series {
                first: Box::new(first),
                second: Box::new(second),
            })
        }
    }
}

/// Draws a uniform labelled connected cubic planar graph whose size lies in
/// `[n - window, n + window]` (exact size for `window == 0`), by rejection
/// on the rooted mixture.
pub fn sample_connected_cubic<R: Rng>(
    ctx: &SamplerContext,
    n: usize,
    window: usize,
    rng: &mut R,
    max_trials: u64,
) -> Result<ConnectedSample> {
    if n < 4 || n % 2 != 0 {
        return Err(CpgError::Unsupported(
            "size must be an even integer of at least 4".into(),
        ));
    }
    let lo = n.saturating_sub(window).max(4);
    let hi = n + window;
    let mut trials = 0u64;
    while trials < max_trials {
        trials += 1;
        let mut budget = hi + 4;
        let Ok(tree) = sample_rooted_tree(ctx, rng, &mut budget) else {
            continue;
        };
        let size = tree.size();
        if size < lo || size > hi {
            continue;
        }
        let net = relabel_network(recompose(&tree)?, rng);
        return Ok(ConnectedSample {
            graph: net.graph,
            trials,
        });
    }
    Err(CpgError::RejectionBudget(format!(
        "no graph in [{lo}, {hi}] within {max_trials} trials"
    )))
}

/// Draws from the expected-degree variant: takes the largest 3-connected
/// core of one conditioned draw and replaces the content of every core edge
/// by an independent Boltzmann insertion.
pub fn sample_o_model<R: Rng>(
    ctx: &SamplerContext,
    n: usize,
    window: usize,
    rng: &mut R,
    max_trials: u64,
) -> Result<ConnectedSample> {
    let base = sample_connected_cubic(ctx, n, window, rng, max_trials)?;
    let core = largest_core(&base.graph)?;
    let mut assignments: Vec<Option<Network>> = Vec::with_capacity(core.m());
    for _ in 0..core.m() {
        if rng.gen::<f64>() < ctx.p_empty {
            assignments.push(None);
        } else {
            let mut budget = super::boltzmann::DEFAULT_BUDGET;
            let tree = sample_d_tree(ctx, rng, &mut budget)?;
            let net = recompose(&tree)?;
            assignments.push(Some(net));
        }
    }
    let (graph, _) = insert_networks(&core, &assignments)?;
    let mut perm: Vec<usize> = (0..graph.n()).collect();
    perm.shuffle(rng);
    Ok(ConnectedSample {
        graph: graph.relabeled(&perm),
        trials: base.trials,
    })
}

/// Largest 3-connected core of a connected cubic graph, found by rooting
/// the graph at its first edge and decomposing.
pub fn largest_core(graph: &CubicGraph) -> Result<CubicGraph> {
    let root = 0;
    let (u, v) = graph.edge(root);
    let net = Network::new(graph.clone(), root, (u, v))?;
    let tree = decompose(&net)?;
    let cores = tree.cores();
    cores
        .into_iter()
        .map(|(core, _)| core)
        .max_by_key(|core| core.n())
        .ok_or_else(|| CpgError::InvalidGraph("graph has no 3-connected core".into()))
}

/// Charges the two pole vertices of the top-level parallel pair.
fn charge_pair(budget: &mut usize) -> Result<()> {
    if *budget < 2 {
        return Err(CpgError::RejectionBudget("vertex budget exhausted".into()));
    }
    *budget -= 2;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn size_four_draws_are_k4() {
        let ctx = SamplerContext::with_order(256).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let s = sample_connected_cubic(&ctx, 4, 0, &mut rng, 1 << 20).unwrap();
            assert_eq!(s.graph.n(), 4);
            assert!(s.graph.is_simple());
            assert!(s.graph.is_cubic());
            for u in 0..4 {
                for v in (u + 1)..4 {
                    assert!(s
                        .graph
                        .edges()
                        .iter()
                        .any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u)));
                }
            }
        }
    }

    #[test]
    fn size_six_draws_are_simple_cubic_planar() {
        let ctx = SamplerContext::with_order(256).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let s = sample_connected_cubic(&ctx, 6, 0, &mut rng, 1 << 20).unwrap();
            assert_eq!(s.graph.n(), 6);
            assert!(s.graph.is_simple());
            assert!(s.graph.is_cubic());
            assert!(crate::graph::planarity::is_planar(&s.graph));
        }
    }

    #[test]
    fn windowed_draws_stay_inside_the_window() {
        let ctx = SamplerContext::with_order(256).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let s = sample_connected_cubic(&ctx, 40, 8, &mut rng, 1 << 22).unwrap();
            assert!(s.graph.n() >= 32 && s.graph.n() <= 48, "n = {}", s.graph.n());
            assert!(s.graph.is_simple());
        }
    }

    #[test]
    fn o_model_draws_are_simple_cubic() {
        let ctx = SamplerContext::with_order(256).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..10 {
            let s = sample_o_model(&ctx, 30, 6, &mut rng, 1 << 22).unwrap();
            assert!(s.graph.is_cubic());
            assert!(s.graph.is_simple());
            assert!(crate::graph::planarity::is_planar(&s.graph));
        }
    }
}

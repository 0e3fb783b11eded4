//! Large-scale sampling experiments with serializable reports.
//!
//! Each experiment draws graphs in parallel with one private RNG stream per
//! sample index, so a (seed, sample count) pair reproduces bit-for-bit
//! regardless of thread count, and reduces the draws to summary statistics
//! plus the raw tables needed to recompute them.

use crate::airy::AiryEval;
use crate::error::{CpgError, Result};
use crate::graph::decompose::decompose;
use crate::graph::multigraph::CubicGraph;
use crate::graph::neighborhood::neighborhood_key;
use crate::graph::network::Network;
use crate::harness::stats::{ks_test, median, regression_slope, total_variation};
use crate::sampler::boltzmann::{relabel_network, sample_d_tree};
use crate::sampler::connected::{sample_connected_cubic, sample_o_model};
use crate::sampler::context::SamplerContext;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Default trial cap per conditioned draw.
const MAX_TRIALS: u64 = 1 << 34;

/// Deterministic per-sample RNG stream.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Sizes of all 3-connected cores of a connected cubic graph.
pub fn core_sizes(graph: &CubicGraph) -> Result<Vec<usize>> {
    let (u, v) = graph.edge(0);
    let net = Network::new(graph.clone(), 0, (u, v))?;
    let tree = decompose(&net)?;
    Ok(tree.cores().into_iter().map(|(c, _)| c.n()).collect())
}

/// Largest-core statistics of the conditioned model at one size.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoreReport {
    pub n: usize,
    pub window: usize,
    pub samples: usize,
    pub seed: u64,
    /// (graph size, largest core size, largest core unique) per sample.
    pub raw: Vec<(usize, usize, bool)>,
    pub median_ratio: f64,
    pub ks_stat: f64,
    pub ks_p: f64,
    pub uniqueness: f64,
}

/// Runs the largest-core experiment: draws windowed graphs of size about
/// `n`, extracts the largest 3-connected core, and compares the rescaled
/// fluctuation against the map-Airy law.
pub fn run_core_experiment(
    ctx: &SamplerContext,
    n: usize,
    window: usize,
    samples: usize,
    seed: u64,
) -> Result<CoreReport> {
    let raw: Vec<(usize, usize, bool)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let s = sample_connected_cubic(ctx, n, window, &mut rng, MAX_TRIALS)?;
            let sizes = core_sizes(&s.graph)?;
            let v = sizes.iter().copied().max().unwrap_or(0);
            let unique = sizes.iter().filter(|&&x| x == v).count() == 1;
            Ok((s.graph.n(), v, unique))
        })
        .collect::<Result<Vec<_>>>()?;
    let kappa = ctx.constants.kappa;
    let c_v = ctx.constants.c_v;
    let mut ratios: Vec<f64> = raw.iter().map(|&(m, v, _)| v as f64 / m as f64).collect();
    let mut rescaled: Vec<f64> = raw
        .iter()
        .map(|&(m, v, _)| (v as f64 - kappa * m as f64) / (m as f64).powf(2.0 / 3.0))
        .collect();
    let airy = AiryEval::default();
    let (ks_stat, ks_p) = ks_test(&mut rescaled, |t| {
        airy.scaled_cdf(c_v, t).unwrap_or(f64::NAN)
    });
    let uniqueness =
        raw.iter().filter(|&&(_, _, u)| u).count() as f64 / raw.len().max(1) as f64;
    Ok(CoreReport {
        n,
        window,
        samples,
        seed,
        median_ratio: median(&mut ratios),
        ks_stat,
        ks_p,
        uniqueness,
        raw,
    })
}

/// Second-largest-core scaling across a size grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SecondLargestReport {
    pub grid: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    /// Median second-largest core size per grid point.
    pub medians: Vec<f64>,
    /// Log-log regression slope of the medians against n.
    pub slope: f64,
}

/// Runs the second-largest-core experiment over a grid of sizes.
pub fn run_second_largest(
    ctx: &SamplerContext,
    grid: &[usize],
    samples: usize,
    seed: u64,
) -> Result<SecondLargestReport> {
    let mut medians = Vec::with_capacity(grid.len());
    for (gi, &n) in grid.iter().enumerate() {
        let window = (n * 3 / 20).max(1);
        let mut seconds: Vec<f64> = (0..samples as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream_rng(seed.wrapping_add(gi as u64), i);
                let s = sample_connected_cubic(ctx, n, window, &mut rng, MAX_TRIALS)?;
                let mut sizes = core_sizes(&s.graph)?;
                sizes.sort_unstable_by(|a, b| b.cmp(a));
                Ok(sizes.get(1).copied().unwrap_or(0) as f64)
            })
            .collect::<Result<Vec<_>>>()?;
        medians.push(median(&mut seconds));
    }
    let xs: Vec<f64> = grid.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = medians.iter().map(|&m| m.max(1.0).ln()).collect();
    let slope = regression_slope(&xs, &ys);
    Ok(SecondLargestReport {
        grid: grid.to_vec(),
        samples,
        seed,
        medians,
        slope,
    })
}

/// Empirical k-ball census of one graph: key frequencies over all vertices.
pub fn census_of(graph: &CubicGraph, k: usize) -> Result<HashMap<Vec<u8>, f64>> {
    let mut table = HashMap::new();
    for v in 0..graph.n() {
        let key = neighborhood_key(graph, v, k)?;
        *table.entry(key.0).or_insert(0.0) += 1.0;
    }
    let z = graph.n() as f64;
    for w in table.values_mut() {
        *w /= z;
    }
    Ok(table)
}

/// Census stability report: per-size mean censuses for both models and the
/// derived total-variation distances.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusReport {
    pub grid: Vec<usize>,
    pub k: usize,
    pub samples: usize,
    pub seed: u64,
    /// TV between the mean census at grid[i] and grid[i+1] (conditioned model).
    pub cross_n_tv: Vec<f64>,
    /// TV between the conditioned and expected-degree models at the largest n.
    pub c_vs_o_tv: f64,
}

/// Mean k-ball census of `samples` draws of one model.
fn mean_census<F>(samples: usize, seed: u64, k: usize, draw: F) -> Result<HashMap<Vec<u8>, f64>>
where
    F: Fn(&mut ChaCha8Rng) -> Result<CubicGraph> + Sync,
{
    let tables: Vec<HashMap<Vec<u8>, f64>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            census_of(&draw(&mut rng)?, k)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut mean = HashMap::new();
    for t in &tables {
        for (key, w) in t {
            *mean.entry(key.clone()).or_insert(0.0) += w / samples as f64;
        }
    }
    Ok(mean)
}

/// Runs the census-stability experiment for radius `k` over a size grid.
pub fn run_census(
    ctx: &SamplerContext,
    grid: &[usize],
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<CensusReport> {
    if k > 4 {
        return Err(CpgError::Unsupported("census radius capped at 4".into()));
    }
    let mut means = Vec::with_capacity(grid.len());
    for (gi, &n) in grid.iter().enumerate() {
        let window = (n * 3 / 20).max(1);
        means.push(mean_census(samples, seed.wrapping_add(gi as u64), k, |rng| {
            Ok(sample_connected_cubic(ctx, n, window, rng, MAX_TRIALS)?.graph)
        })?);
    }
    let cross_n_tv: Vec<f64> = means
        .windows(2)
        .map(|w| total_variation(&w[0], &w[1]))
        .collect();
    let n_top = *grid.last().unwrap();
    let o_mean = mean_census(samples, seed.wrapping_add(1000), k, |rng| {
        Ok(sample_o_model(ctx, n_top, (n_top / 100).max(1), rng, MAX_TRIALS)?.graph)
    })?;
    let c_vs_o_tv = total_variation(means.last().unwrap(), &o_mean);
    Ok(CensusReport {
        grid: grid.to_vec(),
        k,
        samples,
        seed,
        cross_n_tv,
        c_vs_o_tv,
    })
}

/// Fragment statistics of the possibly-disconnected model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FragmentReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub empty_fraction: f64,
    /// Histogram of total fragment sizes (vertices outside the largest
    /// component).
    pub size_histogram: HashMap<usize, usize>,
    /// The Poisson rate used: the value of the connected-graph series at
    /// its singularity.
    pub c_rho: f64,
}

/// Value of the connected-graph generating function at its singularity,
/// summed from the vertex-rooted table (coefficient of x^n divided by n).
pub fn connected_series_value(ctx: &SamplerContext) -> f64 {
    let cdot = &ctx.grammar.cdot;
    let mut total = 0.0;
    for n in (4..cdot.coeffs().len()).step_by(2) {
        total += cdot.coeff(n) / n as f64;
    }
    total
}

/// Draws the fragment of the disconnected model: a Poisson number of
/// independent connected components conditioned to fit beside a giant
/// component of at least 4 vertices.
pub fn sample_fragment_sizes<R: Rng>(
    ctx: &SamplerContext,
    n: usize,
    c_rho: f64,
    rng: &mut R,
) -> Result<Vec<usize>> {
    loop {
        let count = poisson(c_rho, rng);
        let mut sizes = Vec::with_capacity(count);
        let mut total = 0usize;
        for _ in 0..count {
            let size = sample_connected_size(ctx, rng);
            total += size;
            sizes.push(size);
        }
        if total + 4 <= n {
            return Ok(sizes);
        }
    }
}

/// Draws the size of one Boltzmann-distributed connected graph from the
/// vertex-rooted table (size-n mass proportional to cdot_n / n).
fn sample_connected_size<R: Rng>(ctx: &SamplerContext, rng: &mut R) -> usize {
    let cdot = &ctx.grammar.cdot;
    let z: f64 = (4..cdot.coeffs().len())
        .step_by(2)
        .map(|m| cdot.coeff(m) / m as f64)
        .sum();
    let mut u = rng.gen::<f64>() * z;
    for m in (4..cdot.coeffs().len()).step_by(2) {
        u -= cdot.coeff(m) / m as f64;
        if u <= 0.0 {
            return m;
        }
    }
    cdot.coeffs().len() - 1
}

/// Standard inversion sampler for a Poisson variate with small rate.
fn poisson<R: Rng>(rate: f64, rng: &mut R) -> usize {
    let l = (-rate).exp();
    let mut k = 0usize;
    let mut p = rng.gen::<f64>();
    while p > l {
        p *= rng.gen::<f64>();
        k += 1;
    }
    k
}

/// Runs the fragment experiment: frequency of an empty fragment and the
/// fragment size histogram at total size `n`.
pub fn run_fragments(
    ctx: &SamplerContext,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<FragmentReport> {
    let c_rho = connected_series_value(ctx);
    let draws: Vec<usize> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            Ok(sample_fragment_sizes(ctx, n, c_rho, &mut rng)?
                .iter()
                .sum())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut size_histogram = HashMap::new();
    for &s in &draws {
        *size_histogram.entry(s).or_insert(0usize) += 1;
    }
    let empty_fraction =
        draws.iter().filter(|&&s| s == 0).count() as f64 / samples.max(1) as f64;
    Ok(FragmentReport {
        n,
        samples,
        seed,
        empty_fraction,
        size_histogram,
        c_rho,
    })
}

/// Draws one network of the unconditioned Boltzmann model, for consumers
/// that need raw network material (kept here for experiment plumbing).
pub fn draw_network<R: Rng>(ctx: &SamplerContext, rng: &mut R) -> Result<Option<Network>> {
    if rng.gen::<f64>() < ctx.p_empty {
        return Ok(None);
    }
    let mut budget = crate::sampler::boltzmann::DEFAULT_BUDGET;
    let tree = sample_d_tree(ctx, rng, &mut budget)?;
    let net = crate::graph::decompose::recompose(&tree)?;
    Ok(Some(relabel_network(net, rng)))
}

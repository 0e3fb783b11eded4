//! Shared immutable state for the Boltzmann samplers at the singular point.

use crate::error::{CpgError, Result};
use crate::numeric::{class_values, singular_constants, ClassValues, SingularConstants};
use crate::series::{evaluate_y_law, solve_grammar_newton, GrammarTable, YLaw};
use rand::Rng;

/// Default truncation order of the float grammar table.
pub const DEFAULT_ORDER: usize = 1024;

/// Default truncation of the polyhedral core-size table.
pub const DEFAULT_CORE_TABLE: usize = 1 << 15;

/// Immutable context shared by all samplers; build once, share across
/// worker threads.
#[derive(Debug, Clone)]
pub struct SamplerContext {
    pub constants: SingularConstants,
    pub classes: ClassValues,
    pub grammar: GrammarTable<f64>,
    pub y_law: YLaw,
    /// P(empty) = 1 / (1 + D(rho)) for a (1 + D)-slot.
    pub p_empty: f64,
    /// Cumulative distribution of Y over the table, tail mass implicit.
    y_cdf: Vec<f64>,
    /// Cumulative core-size law P(k) = q_k tau^k / (Q(tau) - tau), k >= 2.
    core_cdf: Vec<f64>,
}

impl SamplerContext {
    pub fn new() -> Result<Self> {
        Self::with_order(DEFAULT_ORDER)
    }

    pub fn with_order(order: usize) -> Result<Self> {
        let constants = singular_constants()?;
        let classes = class_values(&constants);
        let rho = constants.rho;
        let grammar = solve_grammar_newton::<f64>(order, rho * rho)?;
        let y_law = evaluate_y_law(&grammar, constants.d0, constants.mean_y, order)?;
        let mut y_cdf = Vec::with_capacity(y_law.probs.len());
        let mut acc = 0.0;
        for &p in &y_law.probs {
            acc += p;
            y_cdf.push(acc);
        }
        let core_cdf = core_size_cdf(DEFAULT_CORE_TABLE);
        let p_empty = 1.0 / (1.0 + constants.d0);
        Ok(SamplerContext {
            constants,
            classes,
            grammar,
            y_law,
            p_empty,
            y_cdf,
            core_cdf,
        })
    }

    /// Draws Y: the size of the component carried by one (1 + D)-slot.
    pub fn sample_y<R: Rng>(&self, rng: &mut R) -> usize {
        let u = rng.gen::<f64>();
        match self
            .y_cdf
            .binary_search_by(|c| c.partial_cmp(&u).unwrap())
        {
            Ok(i) | Err(i) if i < self.y_cdf.len() => i,
            _ => {
                // Analytic n^(-5/2) tail beyond the table: inverse CDF of
                // the continuous envelope, restarted at the table edge.
                let k0 = (self.y_cdf.len() - 1) as f64 / 2.0;
                let v = rng.gen::<f64>().max(f64::MIN_POSITIVE);
                let k = (k0 * v.powf(-2.0 / 3.0)).ceil() as usize;
                2 * k
            }
        }
    }

    /// Draws the polyhedral core parameter k >= 2 (core has 2k vertices).
    pub fn sample_core_size<R: Rng>(&self, rng: &mut R) -> usize {
        let u = rng.gen::<f64>();
        match self
            .core_cdf
            .binary_search_by(|c| c.partial_cmp(&u).unwrap())
        {
            Ok(i) | Err(i) if i < self.core_cdf.len() => i + 2,
            _ => {
                let k0 = (self.core_cdf.len() + 1) as f64;
                let v = rng.gen::<f64>().max(f64::MIN_POSITIVE);
                (k0 * v.powf(-2.0 / 3.0)).ceil() as usize
            }
        }
    }

    /// Branch weights of the D alternative, in the order (L, S, P, H).
    pub fn d_weights(&self) -> [f64; 4] {
        [self.classes.l, self.classes.s, self.classes.p, self.classes.h]
    }

    /// Validates the internal consistency bounds of the tables.
    pub fn check(&self) -> Result<()> {
        let c = &self.classes;
        let sum = c.l + c.s + c.p + c.h;
        if ((sum - c.d) / c.d).abs() > 1e-12 {
            return Err(CpgError::Series(
                "class values do not sum to D at the singular point".into(),
            ));
        }
        let table_mass: f64 = self.y_law.probs.iter().sum();
        if (table_mass + self.y_law.tail_mass - 1.0).abs() > 1e-12 {
            return Err(CpgError::Series("Y-law masses do not sum to 1".into()));
        }
        Ok(())
    }
}

/// Cumulative table of the core-size law: q_k tau^k normalized by
/// Q(tau) - tau = 5/256, starting at k = 2. Uses the closed-form ratio
/// q_{k+1}/q_k of the triangulation counts.
fn core_size_cdf(table_len: usize) -> Vec<f64> {
    let tau = 27.0 / 256.0;
    let norm = 5.0 / 256.0;
    let mut cdf = Vec::with_capacity(table_len);
    // q_2 = 1.
    let mut weight = tau * tau;
    let mut acc = 0.0;
    for k in 2..2 + table_len {
        acc += weight / norm;
        cdf.push(acc);
        let kf = k as f64;
        let ratio = (4.0 * kf + 1.0) * (4.0 * kf) * (4.0 * kf - 1.0) * (4.0 * kf - 2.0)
            / ((kf + 1.0) * (3.0 * kf + 2.0) * (3.0 * kf + 1.0) * (3.0 * kf));
        weight *= tau * ratio;
    }
    cdf
}

/// Picks an index with probability proportional to the given weights.
pub fn pick_weighted<R: Rng>(rng: &mut R, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        u -= w;
        if u <= 0.0 {
            return i;
        }
    }
    weights.len() - 1
}

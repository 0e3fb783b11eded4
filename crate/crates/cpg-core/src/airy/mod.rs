//! The density of the 3/2-stable law that governs core-size fluctuations.
//!
//! The density is the convergent series
//!
//!   h(t) = (1/pi) sum_{n>=1} (-1)^(n+1) 3^(2n/3) Gamma(2n/3 + 1)
//!          sin(2 n pi / 3) / n! * t^(n-1),
//!
//! written here with the 1/t prefactor of the classical form already
//! absorbed by reindexing, so t = 0 is an ordinary point. Terms with
//! n = 0 mod 3 vanish; the other two residue chains step n -> n + 3 with
//! the exact rational ratio
//!
//!   term(n+3)/term(n) = -t^3 (2n+3)(2n+6) / ((n+1)(n+2)(n+3)).
//!
//! The series cancels catastrophically (terms peak near e^(4|t|^3/3) while
//! the sum is O(1)), so evaluation runs in arbitrary-precision arithmetic
//! with the working precision chosen from t. The equivalent characteristic
//! function is phi(u) = exp(-(sqrt2/6) |u|^(3/2) (1 - i sign u)), which the
//! tests invert numerically as an independent oracle.
//!
//! The left tail is heavy, h(-y) ~ y^(-5/2) / (4 sqrt pi); the mass below
//! the evaluation window is supplied by the asymptotic expansion
//!
//!   h(-y) = (1/pi) sum_{k odd} sigma_k 3^(-k) Gamma(3k/2 + 1) / k!
//!           * y^(-3k/2 - 1),    sigma_k = +1 if k = 1 mod 4 else -1,
//!
//! integrated term by term. The right tail decays like exp(-4 t^3 / 3) and
//! is negligible beyond the window.

use crate::error::{CpgError, Result};
use crate::numeric::bigfloat::BigFloat;
use crate::numeric::gamma::gamma_rational;
use std::sync::OnceLock;

/// Evaluator for the fluctuation density, its CDF, and tail masses.
#[derive(Debug)]
pub struct AiryEval {
    /// Cap on series terms; evaluation needs about 4|t|^3 terms before the
    /// series starts converging, plus a comparable margin.
    pub terms: usize,
    /// Evaluation window half-width; |t| beyond this is refused.
    pub t_switch: f64,
    /// Grid step of the CDF quadrature.
    pub quadrature_step: f64,
    table: OnceLock<std::result::Result<CdfTable, String>>,
}

#[derive(Debug)]
struct CdfTable {
    t0: f64,
    step: f64,
    /// cdf[i] at t0 + i * step, including the analytic left-tail mass.
    cdf: Vec<f64>,
}

impl Default for AiryEval {
    fn default() -> Self {
        AiryEval::new(2048, 6.0, 1.0 / 64.0)
    }
}

impl AiryEval {
    pub fn new(terms: usize, t_switch: f64, quadrature_step: f64) -> Self {
        AiryEval {
            terms,
            t_switch,
            quadrature_step,
            table: OnceLock::new(),
        }
    }

    /// Working precision in bits for the series at t: the largest term has
    /// about 4|t|^3/3 nats, and on the right the result itself is another
    /// exp(-4t^3/3) below O(1).
    fn precision_for(t: f64) -> u64 {
        let nats = 4.0 * t.abs().powi(3) / 3.0 + if t > 0.0 { 4.0 * t.powi(3) / 3.0 } else { 0.0 };
        (nats * std::f64::consts::LOG2_E) as u64 + 224
    }

    /// The density h(t).
    pub fn density(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t.abs() > self.t_switch {
            return Err(CpgError::Unsupported(format!(
                "density argument {t} outside evaluation window {}",
                self.t_switch
            )));
        }
        self.density_with(t, Self::precision_for(t), self.terms)
    }

    /// Series evaluation at explicit precision and term budget; exposed to
    /// the stability tests.
    pub fn density_with(&self, t: f64, prec: u64, terms: usize) -> Result<f64> {
        // Seed constants are cached once at a precision covering the whole
        // evaluation window (plus the doubled precision of the stability
        // tests); arithmetic below truncates to the per-call precision.
        const SEED_PREC: u64 = 2560;
        static SEEDS: OnceLock<(BigFloat, BigFloat, BigFloat)> = OnceLock::new();
        let (seed1, seed2, pi) = SEEDS.get_or_init(|| {
            let sqrt3_half = BigFloat::from_i64(3, SEED_PREC).sqrt().mul_ratio(1, 2);
            // 3^(2/3) = exp((2/3) ln 3)
            let p3 = BigFloat::from_i64(3, SEED_PREC).ln().mul_ratio(2, 3).exp();
            // Chain seeds: n = 1 contributes 3^(2/3) Gamma(5/3) (sqrt3/2),
            // n = 2 contributes 3^(4/3) Gamma(7/3) (sqrt3/2) / 2 * t.
            let s1 = p3.mul(&gamma_rational(5, 3, SEED_PREC)).mul(&sqrt3_half);
            let s2 = p3
                .mul(&p3)
                .mul(&gamma_rational(7, 3, SEED_PREC))
                .mul(&sqrt3_half)
                .mul_ratio(1, 2);
            (s1, s2, BigFloat::pi(SEED_PREC))
        });
        if prec > SEED_PREC {
            return Err(CpgError::Unsupported(format!(
                "requested precision {prec} exceeds the cached seed precision"
            )));
        }
        let tf = BigFloat::from_f64(t, prec);
        let t3 = tf.mul(&tf).mul(&tf);
        let mut term1 = seed1.mul(&BigFloat::from_i64(1, prec));
        let mut term2 = seed2.mul(&tf);
        let mut sum = term1.add(&term2);
        let cutoff = BigFloat::from_bigint(num_bigint::BigInt::from(1), -150, prec);
        let mut n1 = 1i64;
        let mut n2 = 2i64;
        let mut used = 2usize;
        while cutoff.abs_lt(&term1) || cutoff.abs_lt(&term2) {
            if used >= terms {
                return Err(CpgError::NoConvergence(format!(
                    "density series at t={t} not converged within {terms} terms"
                )));
            }
            term1 = term1
                .mul(&t3)
                .mul_ratio(-(2 * n1 + 3) * (2 * n1 + 6), (n1 + 1) * (n1 + 2) * (n1 + 3));
            term2 = term2
                .mul(&t3)
                .mul_ratio(-(2 * n2 + 3) * (2 * n2 + 6), (n2 + 1) * (n2 + 2) * (n2 + 3));
            sum = sum.add(&term1).add(&term2);
            n1 += 3;
            n2 += 3;
            used += 2;
        }
        Ok(sum.div(pi).to_f64())
    }

    /// The asymptotic left-tail density h(-y) for y at or beyond the window
    /// edge, summed to its smallest term.
    pub fn tail_density(y: f64) -> f64 {
        assert!(y > 1.0);
        let mut total = 0.0;
        let mut last = f64::INFINITY;
        let mut k = 1u64;
        loop {
            let ln_mag = -(k as f64) * 3f64.ln() + statrs::function::gamma::ln_gamma(1.5 * k as f64 + 1.0)
                - statrs::function::gamma::ln_gamma(k as f64 + 1.0)
                - (1.5 * k as f64 + 1.0) * y.ln();
            let mag = ln_mag.exp();
            if mag >= last || mag < 1e-18 {
                break;
            }
            let sigma = if k % 4 == 1 { 1.0 } else { -1.0 };
            total += sigma * mag;
            last = mag;
            k += 2;
        }
        total / std::f64::consts::PI
    }

    /// Mass of the left tail below -y, from the term-by-term integral of
    /// the asymptotic expansion.
    pub fn left_tail_mass(y: f64) -> f64 {
        assert!(y > 1.0);
        let mut total = 0.0;
        let mut last = f64::INFINITY;
        let mut k = 1u64;
        loop {
            let ln_mag = -(k as f64) * 3f64.ln() + statrs::function::gamma::ln_gamma(1.5 * k as f64 + 1.0)
                - statrs::function::gamma::ln_gamma(k as f64 + 1.0)
                - 1.5 * k as f64 * y.ln()
                + (2.0 / (3.0 * k as f64)).ln();
            let mag = ln_mag.exp();
            if mag >= last || mag < 1e-18 {
                break;
            }
            let sigma = if k % 4 == 1 { 1.0 } else { -1.0 };
            total += sigma * mag;
            last = mag;
            k += 2;
        }
        total / std::f64::consts::PI
    }

    fn table(&self) -> Result<&CdfTable> {
        let built = self.table.get_or_init(|| self.build_table().map_err(|e| e.to_string()));
        built
            .as_ref()
            .map_err(|e| CpgError::NoConvergence(e.clone()))
    }

    fn build_table(&self) -> Result<CdfTable> {
        let t0 = -self.t_switch;
        let step = self.quadrature_step;
        let n = (2.0 * self.t_switch / step).round() as usize;
        let mut density = Vec::with_capacity(n + 1);
        for i in 0..=n {
            density.push(self.density(t0 + i as f64 * step)?);
        }
        let mut cdf = Vec::with_capacity(n + 1);
        let mut acc = Self::left_tail_mass(self.t_switch);
        cdf.push(acc);
        for i in 1..=n {
            acc += 0.5 * (density[i - 1] + density[i]) * step;
            cdf.push(acc);
        }
        Ok(CdfTable { t0, step, cdf })
    }

    /// The distribution function, including the analytic left-tail mass;
    /// clamped to [0, 1] and saturating outside the window.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        if t <= -self.t_switch {
            return Ok(Self::left_tail_mass(-t.max(-1e6)));
        }
        let table = self.table()?;
        if t >= self.t_switch {
            return Ok(1f64.min(*table.cdf.last().unwrap()));
        }
        let pos = (t - table.t0) / table.step;
        let i = (pos.floor() as usize).min(table.cdf.len() - 2);
        let frac = pos - i as f64;
        Ok((table.cdf[i] * (1.0 - frac) + table.cdf[i + 1] * frac).clamp(0.0, 1.0))
    }

    /// Total mass: quadrature over the window plus the analytic left tail.
    /// The defect against 1 measures the joint quadrature and tail error.
    pub fn total_mass(&self) -> Result<f64> {
        Ok(*self.table()?.cdf.last().unwrap())
    }

    /// CDF of the rescaled law with density c h(c t).
    pub fn scaled_cdf(&self, c: f64, t: f64) -> Result<f64> {
        self.cdf(c * t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Numeric inversion of the characteristic function
    /// phi(u) = exp(-(sqrt2/6) u^(3/2) (1 - i)) for u > 0:
    /// h(t) = (1/pi) int_0^inf exp(-a u^(3/2)) cos(t u - a u^(3/2)) du.
    fn cf_oracle(t: f64) -> f64 {
        let a = 2f64.sqrt() / 6.0;
        let upper = 60.0;
        let n = 1 << 16;
        let h = upper / n as f64;
        let f = |u: f64| (-a * u.powf(1.5)).exp() * (t * u - a * u.powf(1.5)).cos();
        let mut simpson = f(0.0) + f(upper);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            simpson += w * f(i as f64 * h);
        }
        simpson * h / 3.0 / std::f64::consts::PI
    }

    #[test]
    fn matches_characteristic_function_oracle() {
        let eval = AiryEval::default();
        let mut x = -3.0;
        while x <= 3.0 {
            let series = eval.density(x).unwrap();
            let oracle = cf_oracle(x);
            assert!(
                (series - oracle).abs() < 1e-8,
                "t={x}: {series} vs {oracle}"
            );
            x += 0.25;
        }
    }

    #[test]
    fn nonnegative_on_dense_grid() {
        let eval = AiryEval::default();
        for i in 0..=10_000 {
            let t = -3.0 + 6.0 * i as f64 / 10_000.0;
            let h = eval.density(t).unwrap();
            assert!(h >= 0.0, "h({t}) = {h}");
        }
    }

    #[test]
    fn total_mass_is_one() {
        let eval = AiryEval::default();
        let mass = eval.total_mass().unwrap();
        assert!((mass - 1.0).abs() < 1e-6, "mass {mass}");
    }

    #[test]
    fn cdf_monotone_with_small_tails() {
        let eval = AiryEval::default();
        let mut prev = -1.0;
        let mut t = -6.0;
        while t <= 6.0 {
            let c = eval.cdf(t).unwrap();
            assert!(c >= prev - 1e-12, "cdf dips at {t}");
            prev = c;
            t += 0.05;
        }
        assert!(eval.cdf(-6.0).unwrap() < 0.01);
        assert!(eval.cdf(6.0).unwrap() >= 0.99);
    }

    #[test]
    fn stability_under_precision_and_term_doubling() {
        let eval = AiryEval::default();
        for t in [-5.9, -3.0, 0.0, 1.5, 3.0, 5.9] {
            let prec = AiryEval::precision_for(t);
            let base = eval.density_with(t, prec, 4096).unwrap();
            let hardened = eval.density_with(t, 2 * prec, 8192).unwrap();
            assert!(
                (base - hardened).abs() < 1e-12,
                "t={t}: {base} vs {hardened}"
            );
        }
    }

    #[test]
    fn asymptotic_tail_matches_series_at_window_edge() {
        let eval = AiryEval::default();
        let series = eval.density(-6.0).unwrap();
        let tail = AiryEval::tail_density(6.0);
        assert!(
            (series - tail).abs() < 1e-10,
            "series {series} vs tail {tail}"
        );
    }

    #[test]
    fn removable_singularity_at_zero() {
        let eval = AiryEval::default();
        let at_zero = eval.density(0.0).unwrap();
        let left = eval.density(-1e-6).unwrap();
        let right = eval.density(1e-6).unwrap();
        assert!((left - at_zero).abs() < 1e-6);
        assert!((right - at_zero).abs() < 1e-6);
        assert!(at_zero > 0.1);
    }

    #[test]
    fn window_violation_is_an_error() {
        let eval = AiryEval::default();
        assert!(eval.density(6.5).is_err());
        assert!(eval.density(f64::NAN).is_err());
    }
}

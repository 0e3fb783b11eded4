//! Chi-square, Kolmogorov-Smirnov, and total-variation test helpers.

use crate::error::{CpgError, Result};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::collections::HashMap;
use std::hash::Hash;

/// Pearson chi-square statistic and p-value for observed counts against
/// expected counts; degrees of freedom = number of cells - 1.
pub fn chi_square_p(observed: &[f64], expected: &[f64]) -> Result<(f64, f64)> {
    if observed.len() != expected.len() || observed.len() < 2 {
        return Err(CpgError::Unsupported(
            "chi-square needs two equally long count vectors".into(),
        ));
    }
    let mut stat = 0.0;
    for (&o, &e) in observed.iter().zip(expected) {
        if e <= 0.0 {
            return Err(CpgError::Unsupported(
                "chi-square expected counts must be positive".into(),
            ));
        }
        stat += (o - e) * (o - e) / e;
    }
    let df = (observed.len() - 1) as f64;
    let dist = ChiSquared::new(df)
        .map_err(|e| CpgError::Unsupported(format!("chi-square setup: {e}")))?;
    Ok((stat, 1.0 - dist.cdf(stat)))
}

/// One-sample Kolmogorov-Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    d
}

/// Asymptotic p-value of the KS statistic `d` at sample size `n`
/// (Kolmogorov distribution with the standard small-sample correction).
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    if lambda < 1e-8 {
        return 1.0;
    }
    let mut p = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64) * (k as f64) * lambda * lambda).exp();
        p += if k % 2 == 1 { 2.0 * term } else { -2.0 * term };
    }
    p.clamp(0.0, 1.0)
}

/// One-sample KS test: returns (statistic, asymptotic p-value).
pub fn ks_test<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> (f64, f64) {
    let d = ks_statistic(samples, cdf);
    let p = ks_p_value(d, samples.len());
    (d, p)
}

/// Total-variation distance between two discrete distributions given as
/// (not necessarily normalized) weight maps.
pub fn total_variation<K: Eq + Hash + Clone>(
    a: &HashMap<K, f64>,
    b: &HashMap<K, f64>,
) -> f64 {
    let za: f64 = a.values().sum();
    let zb: f64 = b.values().sum();
    if za <= 0.0 || zb <= 0.0 {
        return 1.0;
    }
    let mut keys: Vec<&K> = a.keys().collect();
    for k in b.keys() {
        if !a.contains_key(k) {
            keys.push(k);
        }
    }
    0.5 * keys
        .into_iter()
        .map(|k| {
            let pa = a.get(k).copied().unwrap_or(0.0) / za;
            let pb = b.get(k).copied().unwrap_or(0.0) / zb;
            (pa - pb).abs()
        })
        .sum::<f64>()
}

/// Least-squares slope of y against x.
pub fn regression_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Median of a sample (averages the middle pair for even lengths).
pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_square_on_exact_counts_gives_p_one() {
        let (stat, p) = chi_square_p(&[50.0, 50.0], &[50.0, 50.0]).unwrap();
        assert!(stat.abs() < 1e-12);
        assert!(p > 0.999);
    }

    #[test]
    fn ks_p_value_is_calibrated_on_uniform_samples() {
        let n = 1000;
        let mut samples: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let (d, p) = ks_test(&mut samples, |x| x.clamp(0.0, 1.0));
        assert!(d < 0.01);
        assert!(p > 0.9);
    }

    #[test]
    fn total_variation_of_disjoint_supports_is_one() {
        let mut a = HashMap::new();
        a.insert(1u32, 2.0);
        let mut b = HashMap::new();
        b.insert(2u32, 7.0);
        assert!((total_variation(&a, &b) - 1.0).abs() < 1e-12);
        assert!(total_variation(&a, &a) < 1e-12);
    }

    #[test]
    fn regression_recovers_a_linear_slope() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [2.0, 4.0, 6.0, 8.0];
        assert!((regression_slope(&x, &y) - 2.0).abs() < 1e-12);
    }
}

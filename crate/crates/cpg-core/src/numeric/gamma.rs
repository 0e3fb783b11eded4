//! Gamma function at rational arguments in arbitrary precision.
//!
//! The fluctuation-density series needs Gamma(5/3) and Gamma(7/3) to the
//! full working precision: they multiply series chains that grow to e^36
//! before cancelling, so double-precision seeds would poison the sum.
//! Evaluation shifts the argument up to z = arg + N and applies the
//! Stirling series with exact Bernoulli numbers,
//!
//!   ln Gamma(z) = (z - 1/2) ln z - z + ln(2 pi)/2
//!                 + sum_k B_{2k} / (2k (2k-1) z^{2k-1}),
//!
//! whose smallest term is ~ e^(-2 pi z), far below the target precision for
//! the shifts used here.

use crate::numeric::bigfloat::BigFloat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// The Bernoulli numbers B_0..B_max as exact rationals, by the defining
/// recurrence sum_{j<=m} C(m+1, j) B_j = 0.
fn bernoulli(max: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(max + 1);
    b.push(BigRational::one());
    for m in 1..=max {
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            // binom = C(m+1, j)
            acc += BigRational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

fn from_rational(r: &BigRational, prec: u64) -> BigFloat {
    let num = BigFloat::from_bigint(r.numer().clone(), 0, prec);
    let den = BigFloat::from_bigint(r.denom().clone(), 0, prec);
    num.div(&den)
}

/// Gamma(p/q) for a positive rational argument.
pub fn gamma_rational(p: i64, q: i64, prec: u64) -> BigFloat {
    assert!(p > 0 && q > 0, "gamma argument must be positive");
    // A fixed number of Stirling terms keeps the exact Bernoulli table
    // small; the argument shift is chosen so the first omitted term,
    // about ((2K)/(2 pi e z))^(2K), is below the precision target.
    const K: usize = 128;
    let shift = ((2.0 * K as f64) / (2.0 * std::f64::consts::PI * std::f64::consts::E)
        * (std::f64::consts::LN_2 * (prec + 64) as f64 / (2.0 * K as f64)).exp())
    .ceil() as i64
        + 2;
    let z = BigFloat::from_i64(p, prec)
        .div(&BigFloat::from_i64(q, prec))
        .add(&BigFloat::from_i64(shift, prec));

    let ln_z = z.ln();
    let half = BigFloat::from_ratio(1, 2, prec);
    let two_pi = BigFloat::pi(prec).mul_ratio(2, 1);
    let mut ln_gamma = z
        .sub(&half)
        .mul(&ln_z)
        .sub(&z)
        .add(&two_pi.ln().mul(&half));

    static BERN: std::sync::OnceLock<Vec<BigRational>> = std::sync::OnceLock::new();
    let k_max = K;
    let b = BERN.get_or_init(|| bernoulli(2 * k_max));
    let z2 = z.mul(&z);
    // inv_pow = z^-(2k-1)
    let mut inv_pow = BigFloat::from_i64(1, prec).div(&z);
    let inv_z2 = BigFloat::from_i64(1, prec).div(&z2);
    for k in 1..=k_max {
        let coeff = &b[2 * k]
            / BigRational::from_integer(BigInt::from(2 * k * (2 * k - 1)));
        let term = from_rational(&coeff, prec).mul(&inv_pow);
        ln_gamma = ln_gamma.add(&term);
        inv_pow = inv_pow.mul(&inv_z2);
    }

    // Gamma(p/q) = Gamma(z) / prod_{j=0}^{shift-1} (p/q + j).
    let mut gamma = ln_gamma.exp();
    for j in 0..shift {
        // p/q + j = (p + j q) / q
        gamma = gamma.mul_ratio(q, p + j * q);
    }
    gamma
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &BigFloat, b: &BigFloat, rel: f64) -> bool {
        let diff = a.sub(b).to_f64().abs();
        diff <= rel * b.to_f64().abs()
    }

    #[test]
    fn integer_and_half_integer_values() {
        let prec = 256;
        let g5 = gamma_rational(5, 1, prec);
        assert!((g5.to_f64() - 24.0).abs() < 1e-13 * 24.0);
        let g_half = gamma_rational(1, 2, prec);
        let sqrt_pi = BigFloat::pi(prec).sqrt();
        assert!(close(&g_half, &sqrt_pi, 1e-60));
    }

    #[test]
    fn reflection_identities_far_past_f64() {
        let prec = 320;
        let pi = BigFloat::pi(prec);
        // Gamma(1/3) Gamma(2/3) = 2 pi / sqrt 3
        let lhs = gamma_rational(1, 3, prec).mul(&gamma_rational(2, 3, prec));
        let rhs = pi.mul_ratio(2, 1).div(&BigFloat::from_i64(3, prec).sqrt());
        assert!(close(&lhs, &rhs, 1e-75));
        // Gamma(1/4) Gamma(3/4) = pi sqrt 2
        let lhs = gamma_rational(1, 4, prec).mul(&gamma_rational(3, 4, prec));
        let rhs = pi.mul(&BigFloat::from_i64(2, prec).sqrt());
        assert!(close(&lhs, &rhs, 1e-75));
    }

    #[test]
    fn matches_f64_gamma() {
        for (p, q) in [(1, 3), (5, 3), (7, 3), (2, 3), (1, 6)] {
            let hp = gamma_rational(p, q, 192).to_f64();
            let lp = statrs::function::gamma::gamma(p as f64 / q as f64);
            assert!((hp - lp).abs() < 1e-12 * lp, "Gamma({p}/{q}): {hp} vs {lp}");
        }
    }

    #[test]
    fn recurrence_shift() {
        // Gamma(7/3) = (4/3)(1/3) Gamma(1/3)
        let prec = 256;
        let lhs = gamma_rational(7, 3, prec);
        let rhs = gamma_rational(1, 3, prec).mul_ratio(4, 9);
        assert!(close(&lhs, &rhs, 1e-60));
    }
}

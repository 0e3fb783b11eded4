//! Counting series for rooted simple triangulations.
//!
//! `u_series` solves U(z)(1-U(z))^3 = z, the generating function of a family
//! of trees underlying simple triangulations; the counting series follows by
//! the substitution Q(z) = U(z)(1 - 2U(z)). Its coefficient q_n counts
//! rooted simple triangulations with n+2 vertices (equivalently, rooted
//! 3-connected cubic planar maps with 2n vertices), with the degenerate
//! n = 1 term counting the two-faced triangle map.

use crate::error::{CpgError, Result};
use crate::series::coeff::Coeff;
use crate::series::power_series::PowerSeries;

/// Solves U(1-U)^3 = scale * z by fixed-point iteration U <- scale*z/(1-U)^3.
///
/// The scale rescales the size variable: the stored coefficient of z^n is
/// scale^n times the unscaled one. Float tables pass the singular point
/// 27/256 so coefficients stay bounded; exact oracles pass 1.
///
/// Each sweep fixes at least one further coefficient, so `order + 1` sweeps
/// determine the series exactly up to the truncation order.
pub fn u_series_fixed_point<C: Coeff>(order: usize, scale: &C) -> Result<PowerSeries<C>> {
    let z = PowerSeries::monomial(scale.clone(), 1, order);
    let one = PowerSeries::constant(C::one(), order);
    let mut u = PowerSeries::zeros(order);
    for _ in 0..=order {
        u = z.div(&one.sub(&u).pow(3))?;
    }
    Ok(u)
}

/// Solves U(1-U)^3 = z by series Newton iteration (order-doubling).
///
/// Used for large truncation orders where the sweep count of the fixed-point
/// form dominates. Produces the same coefficients.
pub fn u_series_newton<C: Coeff>(order: usize, scale: &C) -> Result<PowerSeries<C>> {
    let z = PowerSeries::monomial(scale.clone(), 1, order);
    let one = PowerSeries::constant(C::one(), order);
    let four = PowerSeries::constant(C::from_ratio(4, 1), order);
    let mut u = PowerSeries::zeros(order);
    // The correction valuation doubles per step; a few extra steps guard the
    // early non-asymptotic regime.
    let steps = usize::BITS - order.max(1).leading_zeros() + 2;
    for _ in 0..steps {
        let one_minus = one.sub(&u);
        let residual = u.mul(&one_minus.pow(3)).sub(&z);
        let derivative = one_minus.pow(2).mul(&one.sub(&four.mul(&u)));
        u = u.sub(&residual.div(&derivative)?);
    }
    let residual = u.mul(&one.sub(&u).pow(3)).sub(&z);
    if residual.valuation().is_some() {
        let worst = (0..=order)
            .map(|n| residual.coeff(n).to_f64().abs() / u.coeff(n).to_f64().abs().max(1.0))
            .fold(0.0, f64::max);
        if worst > 1e-9 {
            return Err(CpgError::NoConvergence(
                "tree equation Newton iteration left a residual".into(),
            ));
        }
    }
    Ok(u)
}

/// The triangulation counting series Q(z) = U(1-2U) up to `order`.
///
/// Uses the fixed-point solver below order 128 (the form prescribed for the
/// exact mode) and Newton above it.
pub fn triangulation_series<C: Coeff>(order: usize, scale: &C) -> Result<PowerSeries<C>> {
    let u = if order < 128 {
        u_series_fixed_point(order, scale)?
    } else {
        u_series_newton(order, scale)?
    };
    let one = PowerSeries::constant(C::one(), order);
    let two = PowerSeries::constant(C::from_ratio(2, 1), order);
    Ok(u.mul(&one.sub(&two.mul(&u))))
}

/// ln q_k from the closed form q_k = 2 (4k-3)! / (k! (3k-1)!).
///
/// The samplers need q_k tau^k for k far beyond any feasible truncation
/// order; tests cross-check this form against the series coefficients.
pub fn ln_triangulation_count(k: u64) -> f64 {
    assert!(k >= 1);
    let lg = statrs::function::gamma::ln_gamma;
    std::f64::consts::LN_2 + lg(4.0 * k as f64 - 2.0) - lg(k as f64 + 1.0) - lg(3.0 * k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn one_rat() -> BigRational {
        <BigRational as Coeff>::one()
    }

    #[test]
    fn first_coefficients() {
        let q: PowerSeries<BigRational> = triangulation_series(8, &one_rat()).unwrap();
        let expect = [0i64, 1, 1, 3, 13, 68, 399, 2530, 16965];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(q.coeff(n), BigRational::from_ratio(*e, 1), "q_{n}");
        }
    }

    #[test]
    fn newton_matches_fixed_point() {
        let a: PowerSeries<BigRational> = u_series_fixed_point(40, &one_rat()).unwrap();
        let b: PowerSeries<BigRational> = u_series_newton(40, &one_rat()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn closed_form_matches_series() {
        let q: PowerSeries<BigRational> = triangulation_series(60, &one_rat()).unwrap();
        for k in 1..=60u64 {
            let ln_series = Coeff::to_f64(&q.coeff(k as usize)).ln();
            let ln_formula = ln_triangulation_count(k);
            assert!(
                (ln_series - ln_formula).abs() < 1e-10,
                "k={k}: {ln_series} vs {ln_formula}"
            );
        }
    }
}

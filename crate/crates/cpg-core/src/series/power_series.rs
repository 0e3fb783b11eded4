//! Dense truncated power series.
//!
//! A series stores coefficients of x^0..x^order. Arithmetic between series of
//! different truncation orders truncates the result to the smaller order, so
//! every coefficient of a result is exact for the ring in use. Parity
//! metadata tracks series known to be supported on even powers, which is an
//! invariant of every class in the network grammar.

use crate::error::{CpgError, Result};
use crate::series::coeff::Coeff;

/// Parity support metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// All odd-index coefficients are zero.
    Even,
    /// No parity constraint is tracked.
    Unknown,
}

impl Parity {
    fn combine(self, other: Parity) -> Parity {
        if self == Parity::Even && other == Parity::Even {
            Parity::Even
        } else {
            Parity::Unknown
        }
    }
}

/// A truncated power series with coefficients in `C`.
#[derive(Debug, Clone)]
pub struct PowerSeries<C: Coeff> {
    coeffs: Vec<C>,
    parity: Parity,
}

impl<C: Coeff> PartialEq for PowerSeries<C> {
    /// Equality of coefficients; parity metadata is advisory and ignored.
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<C: Coeff> PowerSeries<C> {
    /// The zero series truncated at `order`.
    pub fn zeros(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![C::zero(); order + 1],
            parity: Parity::Even,
        }
    }

    /// The constant series `c` truncated at `order`.
    pub fn constant(c: C, order: usize) -> Self {
        let mut s = Self::zeros(order);
        s.coeffs[0] = c;
        s
    }

    /// The monomial `c * x^k` truncated at `order`.
    pub fn monomial(c: C, k: usize, order: usize) -> Self {
        let mut s = Self::zeros(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s.parity = if k % 2 == 0 {
            Parity::Even
        } else {
            Parity::Unknown
        };
        s
    }

    /// Builds a series from raw coefficients.
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        let parity = if coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero()) {
            Parity::Even
        } else {
            Parity::Unknown
        };
        PowerSeries { coeffs, parity }
    }

    /// Truncation order (largest stored exponent).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of x^n; zero beyond the truncation order.
    pub fn coeff(&self, n: usize) -> C {
        self.coeffs.get(n).cloned().unwrap_or_else(C::zero)
    }

    /// All stored coefficients.
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Re-derives parity metadata from the stored coefficients.
    pub fn with_checked_parity(mut self) -> Self {
        self.parity = if self.coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero()) {
            Parity::Even
        } else {
            Parity::Unknown
        };
        self
    }

    /// Smallest exponent with a nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Truncates (or zero-extends) to `order`.
    pub fn truncated(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, C::zero());
        PowerSeries {
            coeffs,
            parity: self.parity,
        }
    }

    fn common_order(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.common_order(other);
        let coeffs = (0..=order)
            .map(|n| self.coeffs[n].add(&other.coeffs[n]))
            .collect();
        PowerSeries {
            coeffs,
            parity: self.parity.combine(other.parity),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.common_order(other);
        let coeffs = (0..=order)
            .map(|n| self.coeffs[n].sub(&other.coeffs[n]))
            .collect();
        PowerSeries {
            coeffs,
            parity: self.parity.combine(other.parity),
        }
    }

    pub fn neg(&self) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            parity: self.parity,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
            parity: self.parity,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.common_order(other);
        let mut coeffs = vec![C::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        PowerSeries {
            coeffs,
            parity: self.parity.combine(other.parity),
        }
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut exp: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(C::one(), self.order());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Long division; `other` must have a nonzero constant term.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.coeffs[0].is_zero() {
            return Err(CpgError::Series(
                "division by a series with zero constant term".into(),
            ));
        }
        let order = self.common_order(other);
        let mut coeffs = vec![C::zero(); order + 1];
        for n in 0..=order {
            let mut acc = self.coeff(n);
            for k in 0..n {
                if coeffs[k].is_zero() || other.coeffs[n - k].is_zero() {
                    continue;
                }
                acc = acc.sub(&coeffs[k].mul(&other.coeffs[n - k]));
            }
            coeffs[n] = acc.div(&other.coeffs[0]);
        }
        Ok(PowerSeries {
            coeffs,
            parity: self.parity.combine(other.parity),
        })
    }

    /// Series square root by direct recurrence.
    ///
    /// Requires a constant term that is strictly positive and has a square
    /// root in the coefficient ring (grammar usage always has constant term
    /// one). The branch with positive constant term is returned.
    pub fn sqrt(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(CpgError::Series(
                "sqrt of a series with zero constant term".into(),
            ));
        }
        let t0 = Coeff::sqrt(c0).ok_or_else(|| {
            CpgError::Series("constant term has no square root in the coefficient ring".into())
        })?;
        let order = self.order();
        let mut coeffs = vec![C::zero(); order + 1];
        let two_t0 = t0.add(&t0);
        coeffs[0] = t0;
        for n in 1..=order {
            let mut acc = self.coeff(n);
            for k in 1..n {
                acc = acc.sub(&coeffs[k].mul(&coeffs[n - k]));
            }
            coeffs[n] = acc.div(&two_t0);
        }
        Ok(PowerSeries {
            coeffs,
            parity: self.parity,
        })
    }

    /// Divides by x^k; the first k coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return Err(CpgError::Series(format!(
                "shift_down({k}) applied to a series with valuation below {k}"
            )));
        }
        let coeffs: Vec<C> = self.coeffs[k..].to_vec();
        Ok(PowerSeries::from_coeffs(coeffs))
    }

    /// Multiplies by x^k, dropping coefficients beyond the truncation order.
    pub fn shift_up(&self, k: usize) -> Self {
        let order = self.order();
        let mut coeffs = vec![C::zero(); order + 1];
        for n in 0..=order.saturating_sub(k) {
            coeffs[n + k] = self.coeffs[n].clone();
        }
        let parity = if k % 2 == 0 {
            self.parity
        } else {
            Parity::Unknown
        };
        PowerSeries { coeffs, parity }
    }

    /// Largest absolute difference against `other` after f64 conversion.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let order = self.common_order(other);
        (0..=order)
            .map(|n| (self.coeffs[n].to_f64() - other.coeffs[n].to_f64()).abs())
            .fold(0.0, f64::max)
    }
}

impl PowerSeries<f64> {
    /// Horner evaluation at a point.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// Sum of coefficients (evaluation at 1; used for rescaled tables).
    pub fn sum(&self) -> f64 {
        self.coeffs.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn geom(order: usize) -> PowerSeries<BigRational> {
        // 1/(1-x)
        PowerSeries::from_coeffs(vec![BigRational::from_ratio(1, 1); order + 1])
    }

    #[test]
    fn mul_and_div_invert() {
        let g = geom(12);
        let one = PowerSeries::constant(BigRational::from_ratio(1, 1), 12);
        let inv = one.div(&g).unwrap();
        // 1/(1/(1-x)) = 1 - x
        assert_eq!(inv.coeff(0), BigRational::from_ratio(1, 1));
        assert_eq!(inv.coeff(1), BigRational::from_ratio(-1, 1));
        for n in 2..=12 {
            assert!(inv.coeff(n).is_zero());
        }
        assert_eq!(g.mul(&inv), one);
    }

    #[test]
    fn sqrt_squares_back() {
        // (1 + x)^2 = 1 + 2x + x^2
        let mut s = PowerSeries::zeros(10);
        s.coeffs[0] = BigRational::from_ratio(1, 1);
        s.coeffs[1] = BigRational::from_ratio(2, 1);
        s.coeffs[2] = BigRational::from_ratio(1, 1);
        let r = s.sqrt().unwrap();
        assert_eq!(r.mul(&r), s);
        assert_eq!(r.coeff(1), BigRational::from_ratio(1, 1));
    }

    #[test]
    fn sqrt_of_general_even_series() {
        // sqrt(1 - x^2) * sqrt(1 - x^2) = 1 - x^2, parity preserved
        let mut s: PowerSeries<f64> = PowerSeries::zeros(20);
        s.coeffs[0] = 1.0;
        s.coeffs[2] = -1.0;
        let s = s.with_checked_parity();
        let r = s.sqrt().unwrap();
        assert_eq!(r.parity(), Parity::Even);
        assert!(r.mul(&r).max_abs_diff(&s) < 1e-15);
    }

    #[test]
    fn truncation_to_smaller_order() {
        let a = geom(5);
        let b = geom(9);
        assert_eq!(a.mul(&b).order(), 5);
        assert_eq!(a.add(&b).order(), 5);
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let g = geom(8);
        assert_eq!(g.pow(3), g.mul(&g).mul(&g));
    }

    #[test]
    fn shift_round_trip() {
        let g = geom(6);
        let up = g.shift_up(2);
        assert_eq!(up.coeff(0), BigRational::from_ratio(0, 1));
        let down = up.shift_down(2).unwrap();
        for n in 0..=4 {
            assert_eq!(down.coeff(n), g.coeff(n));
        }
        assert!(g.shift_down(1).is_err());
    }
}

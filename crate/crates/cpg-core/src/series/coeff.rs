//! Coefficient rings for truncated power series.
//!
//! The grammar solver runs in two modes: exact (arbitrary-precision
//! rationals, used up to moderate truncation orders and as the oracle for the
//! float mode) and float (`f64`, used for the large coefficient tables that
//! back the samplers). Both are instances of [`Coeff`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Field operations needed by the series engine.
///
/// Implementors are commutative fields (up to rounding); `sqrt` is partial
/// because rationals only have square roots of perfect squares.
pub trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Division; caller guarantees `other` is nonzero.
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Square root, if one exists in the ring.
    fn sqrt(&self) -> Option<Self>;
    /// Lossy conversion for reporting and cross-mode comparisons.
    fn to_f64(&self) -> f64;
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sqrt(&self) -> Option<Self> {
        if *self >= 0.0 {
            Some(f64::sqrt(*self))
        } else {
            None
        }
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Coeff for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let num = self.numer().sqrt();
        let den = self.denom().sqrt();
        if &(&num * &num) == self.numer() && &(&den * &den) == self.denom() {
            Some(BigRational::new(num, den))
        } else {
            None
        }
    }
    fn to_f64(&self) -> f64 {
        // Direct BigInt -> f64 conversion overflows for large truncation
        // orders; go through a bit-length reduction instead.
        let num = self.numer();
        let den = self.denom();
        let shift = (num.bits() as i64 - den.bits() as i64).max(0);
        let scaled_den: BigInt = den << shift;
        let ratio = ToPrimitive::to_f64(&BigRational::new(num.clone(), scaled_den))
            .unwrap_or(f64::NAN);
        ratio * 2f64.powi(shift as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_sqrt_of_perfect_square() {
        let x = BigRational::from_ratio(9, 16);
        assert_eq!(Coeff::sqrt(&x), Some(BigRational::from_ratio(3, 4)));
        assert_eq!(Coeff::sqrt(&BigRational::from_ratio(2, 1)), None);
        assert_eq!(Coeff::sqrt(&BigRational::from_ratio(-1, 1)), None);
    }

    #[test]
    fn rational_to_f64_handles_large_values() {
        let big = BigRational::from_ratio(10, 3).pow(400);
        let approx = Coeff::to_f64(&big);
        let expected = 400.0 * (10f64 / 3.0).ln();
        assert!((approx.ln() - expected).abs() < 1e-9);
    }
}

//! A minimal arbitrary-precision binary float.
//!
//! The alternating series for the core-fluctuation density cancels
//! catastrophically: at the edge of the evaluation window the terms peak
//! near e^36 while the sum is of order one, so f64 loses every digit.
//! Values here are mantissa * 2^exp with a BigInt mantissa rounded to a
//! per-value precision in bits. Only the operations that series needs are
//! provided: field arithmetic, square root, comparisons, and pi.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// An arbitrary-precision binary floating-point number.
#[derive(Debug, Clone)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u64,
}

impl BigFloat {
    /// Zero at the given precision.
    pub fn zero(prec: u64) -> Self {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    /// mant * 2^exp, rounded to the precision.
    pub fn from_bigint(mant: BigInt, exp: i64, prec: u64) -> Self {
        BigFloat { mant, exp, prec }.normalized()
    }

    pub fn from_i64(v: i64, prec: u64) -> Self {
        BigFloat {
            mant: BigInt::from(v),
            exp: 0,
            prec,
        }
        .normalized()
    }

    /// Exact conversion from f64 (every finite f64 is dyadic).
    pub fn from_f64(v: f64, prec: u64) -> Self {
        assert!(v.is_finite());
        if v == 0.0 {
            return Self::zero(prec);
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        BigFloat {
            mant: BigInt::from(sign) * BigInt::from(mant),
            exp,
            prec,
        }
        .normalized()
    }

    /// Exact ratio n/d rounded to the precision.
    pub fn from_ratio(n: i64, d: i64, prec: u64) -> Self {
        Self::from_i64(n, prec).div(&Self::from_i64(d, prec))
    }

    pub fn precision(&self) -> u64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    fn normalized(mut self) -> Self {
        let bits = self.mant.bits();
        let keep = self.prec + 32;
        if bits > keep {
            let drop = (bits - keep) as i64;
            // Round to nearest by adding half the dropped ulp.
            let half = BigInt::from(1) << (drop - 1).max(0);
            let adj = if self.mant.is_negative() { -half } else { half };
            self.mant = (self.mant + adj) >> drop;
            self.exp += drop;
        }
        self
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mant: -&self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        if self.is_zero() {
            let mut r = other.clone();
            r.prec = prec;
            return r.normalized();
        }
        if other.is_zero() {
            let mut r = self.clone();
            r.prec = prec;
            return r.normalized();
        }
        // If the magnitudes are wildly different the smaller operand is
        // below one ulp of the result; skip the huge shift.
        let hi_self = self.exp + self.mant.bits() as i64;
        let hi_other = other.exp + other.mant.bits() as i64;
        let window = (prec + 64) as i64;
        if hi_self - hi_other > window {
            let mut r = self.clone();
            r.prec = prec;
            return r.normalized();
        }
        if hi_other - hi_self > window {
            let mut r = other.clone();
            r.prec = prec;
            return r.normalized();
        }
        let exp = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - exp) as u64;
        let b = &other.mant << (other.exp - exp) as u64;
        BigFloat {
            mant: a + b,
            exp,
            prec,
        }
        .normalized()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        BigFloat {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
            prec: self.prec.min(other.prec),
        }
        .normalized()
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "BigFloat division by zero");
        let prec = self.prec.min(other.prec);
        if self.is_zero() {
            return Self::zero(prec);
        }
        // Scale the numerator so the quotient keeps prec + 32 bits.
        let shift = (prec + 64 + other.mant.bits()).saturating_sub(self.mant.bits());
        let num = &self.mant << shift;
        BigFloat {
            mant: num / &other.mant,
            exp: self.exp - other.exp - shift as i64,
            prec,
        }
        .normalized()
    }

    /// Multiplies by the exact rational n/d.
    pub fn mul_ratio(&self, n: i64, d: i64) -> Self {
        let scaled = BigFloat {
            mant: &self.mant * BigInt::from(n),
            exp: self.exp,
            prec: self.prec,
        };
        scaled.div(&Self::from_i64(d, self.prec))
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::from_i64(1, self.prec);
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

    /// Square root; the value must be nonnegative.
    pub fn sqrt(&self) -> Self {
        assert!(!self.mant.is_negative(), "BigFloat sqrt of negative value");
        if self.is_zero() {
            return self.clone();
        }
        let target = 2 * (self.prec + 32);
        let bits = self.mant.bits();
        let mut shift = target.saturating_sub(bits);
        if (self.exp - shift as i64) % 2 != 0 {
            shift += 1;
        }
        let scaled = &self.mant << shift;
        BigFloat {
            mant: scaled.sqrt(),
            exp: (self.exp - shift as i64) / 2,
            prec: self.prec,
        }
        .normalized()
    }

    /// Compares magnitudes: |self| < |other|.
    pub fn abs_lt(&self, other: &Self) -> bool {
        self.abs().sub(&other.abs()).mant.is_negative()
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let drop = (bits - 64).max(0);
        let top = (&self.mant >> drop).to_f64().unwrap();
        let e = self.exp + drop;
        top * 2f64.powi(e.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }

    /// ln 2 = 2 atanh(1/3), summed in fixed point.
    pub fn ln2(prec: u64) -> Self {
        let scale_bits = prec + 64;
        let scale = BigInt::from(1) << scale_bits;
        let nine = BigInt::from(9);
        let mut power = scale / BigInt::from(3);
        let mut total = power.clone();
        let mut k = 1i64;
        while !power.is_zero() {
            power = power / &nine;
            total += &power / BigInt::from(2 * k + 1);
            k += 1;
        }
        BigFloat {
            mant: total << 1,
            exp: -(scale_bits as i64),
            prec,
        }
        .normalized()
    }

    /// Natural logarithm; the value must be positive.
    pub fn ln(&self) -> Self {
        assert!(self.mant.is_positive(), "BigFloat ln of non-positive value");
        let prec = self.prec;
        // Write self = m * 2^e with m in [1, 2).
        let bits = self.mant.bits() as i64;
        let e = self.exp + bits - 1;
        let m = BigFloat {
            mant: self.mant.clone(),
            exp: -(bits - 1),
            prec,
        };
        // ln m = 2 atanh((m-1)/(m+1)), with the argument in [0, 1/3).
        let one = Self::from_i64(1, prec);
        let y = m.sub(&one).div(&m.add(&one));
        let y2 = y.mul(&y);
        let mut term = y.clone();
        let mut total = y;
        let mut k = 1i64;
        let cutoff = BigFloat {
            mant: BigInt::from(1),
            exp: -((prec + 32) as i64),
            prec,
        };
        while !term.is_zero() && cutoff.abs_lt(&term) {
            term = term.mul(&y2);
            total = total.add(&term.mul_ratio(1, 2 * k + 1));
            k += 1;
        }
        total = total.mul_ratio(2, 1);
        total.add(&Self::ln2(prec).mul(&Self::from_i64(e, prec)))
    }

    /// Exponential, by halving-based range reduction and Taylor series.
    pub fn exp(&self) -> Self {
        let prec = self.prec;
        let ln2 = Self::ln2(prec);
        // self = k ln2 + r with |r| <= ln2 / 2.
        let k = (self.to_f64() / std::f64::consts::LN_2).round();
        assert!(k.abs() < 4e9, "BigFloat exp argument out of range");
        let k = k as i64;
        let r = self.sub(&ln2.mul(&Self::from_i64(k, prec)));
        let one = Self::from_i64(1, prec);
        let mut term = one.clone();
        let mut total = one;
        let mut n = 1i64;
        let cutoff = BigFloat {
            mant: BigInt::from(1),
            exp: -((prec + 32) as i64),
            prec,
        };
        while !term.is_zero() && cutoff.abs_lt(&term) {
            term = term.mul(&r).mul_ratio(1, n);
            total = total.add(&term);
            n += 1;
        }
        total.exp += k;
        total
    }

    /// pi by the Machin formula, pi = 16 atan(1/5) - 4 atan(1/239).
    pub fn pi(prec: u64) -> Self {
        fn atan_inv(q: i64, prec: u64) -> BigFloat {
            // atan(1/q) = sum (-1)^k / ((2k+1) q^(2k+1)) in fixed point.
            let scale_bits = prec + 64;
            let scale = BigInt::from(1) << scale_bits;
            let q: BigInt = BigInt::from(q);
            let q2 = &q * &q;
            let mut term = scale / &q;
            let mut total = term.clone();
            let mut k = 1i64;
            while !term.is_zero() {
                term = term / &q2;
                let contrib = &term / BigInt::from(2 * k + 1);
                if k % 2 == 1 {
                    total -= contrib;
                } else {
                    total += contrib;
                }
                k += 1;
            }
            BigFloat {
                mant: total,
                exp: -(scale_bits as i64),
                prec,
            }
            .normalized()
        }
        atan_inv(5, prec)
            .mul_ratio(16, 1)
            .sub(&atan_inv(239, prec).mul_ratio(4, 1))
    }
}

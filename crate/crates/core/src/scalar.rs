//! Scalar abstraction for the distribution kernels.
//!
//! Everything in [`crate::distribution`] is written against this trait so
//! that one set of formulas serves both floating point evaluation and the
//! exact rational oracle used to cross-check it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};
use std::fmt::Debug;

/// A field-like scalar: ring operations, division, sign, total order on the
/// values that actually arise (probabilities and urn weights).
pub trait Scalar: Num + Signed + PartialOrd + Clone + Debug {
    /// Exact embedding of a small nonnegative integer.
    fn from_usize(n: usize) -> Self;

    /// How far below zero an admissibility inequality may dip before it is
    /// treated as violated. Zero for exact types, a small cushion for
    /// floating point where a + (n-1)c is itself a rounded quantity.
    fn admissibility_slack() -> Self;

    /// Lossy view of the value, used only to pick pivot indices and for
    /// messages, never inside the arithmetic itself.
    fn approx_f64(&self) -> f64;

    /// Whether long products should be accumulated as a sum of logarithms.
    /// True for floating types, whose exponent range a product of thousands
    /// of lopsided factors overflows; false for exact types, where direct
    /// multiplication is lossless and the log would not be.
    fn prefers_log_products() -> bool {
        false
    }

    /// Closest representable value to `v`. Only called on types where
    /// [`Scalar::prefers_log_products`] is true.
    fn from_f64_approx(v: f64) -> Self;
}

impl Scalar for f64 {
    fn from_usize(n: usize) -> Self {
        n as f64
    }

    fn admissibility_slack() -> Self {
        1e-12
    }

    fn approx_f64(&self) -> f64 {
        *self
    }

    fn prefers_log_products() -> bool {
        true
    }

    fn from_f64_approx(v: f64) -> Self {
        v
    }
}

impl Scalar for f32 {
    fn from_usize(n: usize) -> Self {
        n as f32
    }

    fn admissibility_slack() -> Self {
        1e-5
    }

    fn approx_f64(&self) -> f64 {
        f64::from(*self)
    }

    fn prefers_log_products() -> bool {
        true
    }

    fn from_f64_approx(v: f64) -> Self {
        v as f32
    }
}

impl Scalar for BigRational {
    fn from_usize(n: usize) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn admissibility_slack() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }

    fn approx_f64(&self) -> f64 {
        // Naive numer/denom conversion turns into finite/inf = 0 once either
        // side outgrows the f64 range. Shift both down to 64 bits and carry
        // the exponent separately; the scaling by a power of two is exact.
        let nb = self.numer().bits();
        let db = self.denom().bits();
        if nb == 0 {
            return 0.0;
        }
        let ns = nb.saturating_sub(64) as usize;
        let ds = db.saturating_sub(64) as usize;
        let n = (self.numer() >> ns).to_f64().unwrap_or(f64::NAN);
        let d = (self.denom() >> ds).to_f64().unwrap_or(f64::NAN);
        let exp = (ns as i64 - ds as i64).clamp(-2000, 2000) as i32;
        (n / d) * 2f64.powi(exp)
    }

    fn from_f64_approx(v: f64) -> Self {
        BigRational::from_float(v).expect("finite float")
    }
}

/// Rising factorial with increment: x (x+h) (x+2h) ... (x+(k-1)h).
/// The empty product (k = 0) is one.
pub fn rising_factorial<T: Scalar>(x: &T, h: &T, k: usize) -> T {
    let mut acc = T::one();
    let mut term = x.clone();
    for _ in 0..k {
        acc = acc * term.clone();
        term = term + h.clone();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rising_factorial_matches_hand_values() {
        assert_eq!(rising_factorial(&2.0_f64, &1.0, 3), 24.0); // 2*3*4
        assert_eq!(rising_factorial(&1.0_f64, &0.0, 5), 1.0);
        assert_eq!(rising_factorial(&3.0_f64, &-1.0, 3), 6.0); // 3*2*1
        assert_eq!(rising_factorial(&0.5_f64, &0.5, 2), 0.5);
    }

    #[test]
    fn rising_factorial_empty_product_is_one() {
        assert_eq!(rising_factorial(&7.0_f64, &2.0, 0), 1.0);
        assert_eq!(rising_factorial(&rat(7, 1), &rat(2, 1), 0), rat(1, 1));
    }

    #[test]
    fn rising_factorial_exact_rational() {
        // (1/3)(1/3 - 1/9)(1/3 - 2/9) = (1/3)(2/9)(1/9)
        let got = rising_factorial(&rat(1, 3), &rat(-1, 9), 3);
        assert_eq!(got, rat(2, 243));
    }

    #[test]
    fn zero_factor_kills_the_product() {
        assert_eq!(rising_factorial(&0.5_f64, &-0.5, 3), 0.0);
        assert_eq!(rising_factorial(&rat(1, 2), &rat(-1, 2), 2), rat(0, 1));
    }
}

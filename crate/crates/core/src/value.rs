//! Function values and checked arithmetic over them.
//!
//! The default backend is `i128` with overflow-checked operations; an
//! arbitrary-precision backend (`num_bigint::BigInt`) is available behind the
//! same trait for workloads whose values exceed 128 bits. Overflow is always
//! a reported error, never a silent wraparound.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

/// Arithmetic exceeded the capacity of the value backend.
///
/// Callers that hit this with the `i128` backend can retry with the
/// arbitrary-precision backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("value arithmetic overflow (value backend capacity exceeded)")]
pub struct Overflow;

/// A totally ordered integer value type with overflow-checked arithmetic.
pub trait Value: Clone + Ord + Eq + Debug + Display + Send + Sync + 'static {
    fn from_u64(x: u64) -> Self;

    fn checked_add(&self, rhs: &Self) -> Option<Self>;
    fn checked_sub(&self, rhs: &Self) -> Option<Self>;
    fn checked_mul(&self, rhs: &Self) -> Option<Self>;

    /// Quotient and remainder by a small positive divisor.
    /// Callers only use this for non-negative `self`.
    fn div_rem_u64(&self, d: u64) -> (Self, u64);

    /// Parse a plain decimal literal (optional leading `-`).
    fn parse_decimal(s: &str) -> Option<Self>;

    /// `self + 1`, the next representable level.
    fn succ(&self) -> Result<Self, Overflow> {
        self.checked_add(&Self::from_u64(1)).ok_or(Overflow)
    }
}

impl Value for i128 {
    fn from_u64(x: u64) -> Self {
        x as i128
    }

    fn checked_add(&self, rhs: &Self) -> Option<Self> {
        i128::checked_add(*self, *rhs)
    }

    fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        i128::checked_sub(*self, *rhs)
    }

    fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        i128::checked_mul(*self, *rhs)
    }

    fn div_rem_u64(&self, d: u64) -> (Self, u64) {
        let d = d as i128;
        (self / d, (self % d) as u64)
    }

    fn parse_decimal(s: &str) -> Option<Self> {
        s.parse().ok()
    }
}

impl Value for BigInt {
    fn from_u64(x: u64) -> Self {
        BigInt::from(x)
    }

    fn checked_add(&self, rhs: &Self) -> Option<Self> {
        Some(self + rhs)
    }

    fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        Some(self - rhs)
    }

    fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        Some(self * rhs)
    }

    fn div_rem_u64(&self, d: u64) -> (Self, u64) {
        let d = BigInt::from(d);
        let q = self / &d;
        let r = self - &q * &d;
        debug_assert!(!r.is_negative());
        (q, r.to_u64().expect("remainder below a u64 divisor"))
    }

    fn parse_decimal(s: &str) -> Option<Self> {
        if s.is_empty() || s == "-" {
            return None;
        }
        // BigInt::parse accepts `+` and underscores; keep the grammar plain.
        let digits = s.strip_prefix('-').unwrap_or(s);
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        s.parse().ok()
    }
}

/// Checked `base^exp` built from repeated multiplication.
pub fn checked_pow<V: Value>(base: &V, exp: u32) -> Result<V, Overflow> {
    let mut acc = V::from_u64(1);
    for _ in 0..exp {
        acc = acc.checked_mul(base).ok_or(Overflow)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i128_overflow_is_reported() {
        let big = i128::MAX;
        assert_eq!(Value::checked_add(&big, &1), None);
        assert_eq!(Value::checked_mul(&big, &2), None);
        assert!(big.succ().is_err());
    }

    #[test]
    fn bigint_never_overflows() {
        let big = BigInt::from(i128::MAX);
        let sq = Value::checked_mul(&big, &big).unwrap();
        assert!(sq > big);
    }

    #[test]
    fn div_rem_splits_evenly() {
        let (q, r) = 10i128.div_rem_u64(3);
        assert_eq!((q, r), (3, 1));
        let (q, r) = BigInt::from(100u32).div_rem_u64(4);
        assert_eq!((q, r), (BigInt::from(25u32), 0));
    }

    #[test]
    fn parse_decimal_rejects_garbage() {
        assert_eq!(<i128 as Value>::parse_decimal("1729"), Some(1729));
        assert_eq!(<i128 as Value>::parse_decimal("-3"), Some(-3));
        assert_eq!(<i128 as Value>::parse_decimal("12x"), None);
        assert_eq!(
            <BigInt as Value>::parse_decimal("24153319581254312065344")
                .unwrap()
                .to_string(),
            "24153319581254312065344"
        );
        assert_eq!(<BigInt as Value>::parse_decimal("1_2"), None);
        assert_eq!(<BigInt as Value>::parse_decimal("+12"), None);
    }

    #[test]
    fn pow_checks_overflow() {
        assert_eq!(checked_pow(&2i128, 10).unwrap(), 1024);
        assert!(checked_pow(&10i128, 40).is_err());
        assert!(checked_pow(&BigInt::from(10u32), 40).is_ok());
    }
}

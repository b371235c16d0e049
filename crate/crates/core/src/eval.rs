//! Evaluator contracts.
//!
//! An evaluator computes `f(a, b)` exactly in some [`Value`] backend.
//! Bimonotonicity (non-decreasing in each argument) and properness (every
//! sublevel set finite) are caller contracts: neither is decidable from a
//! black box, so streams accept an optional hard value ceiling as a safety
//! net and the enumeration layer detects violations lazily.

use crate::axis::Param;
use crate::value::{Overflow, Value};

/// Computes `f(a, b)` exactly, reporting overflow instead of wrapping.
///
/// Evaluators must be pure: the same description may be instantiated once
/// per worker thread and must agree everywhere.
pub trait Evaluator<V: Value>: Send + Sync {
    fn eval_checked(&self, a: Param, b: Param) -> Result<V, Overflow>;
}

impl<V, F> Evaluator<V> for F
where
    V: Value,
    F: Fn(Param, Param) -> Result<V, Overflow> + Send + Sync,
{
    fn eval_checked(&self, a: Param, b: Param) -> Result<V, Overflow> {
        self(a, b)
    }
}

/// Wrap an infallible closure over raw coordinates as an evaluator.
pub fn from_fn<V, F>(f: F) -> impl Evaluator<V> + Clone
where
    V: Value,
    F: Fn(u64, u64) -> V + Send + Sync + Clone,
{
    FnEval(f, std::marker::PhantomData)
}

#[derive(Clone)]
struct FnEval<V, F>(F, std::marker::PhantomData<fn() -> V>);

impl<V, F> Evaluator<V> for FnEval<V, F>
where
    V: Value,
    F: Fn(u64, u64) -> V + Send + Sync,
{
    fn eval_checked(&self, a: Param, b: Param) -> Result<V, Overflow> {
        Ok((self.0)(a.0, b.0))
    }
}

/// `a^3 + b^3`, the workhorse of multiple-representation searches.
#[derive(Debug, Clone, Copy, Default)]
pub struct SumOfCubes;

impl<V: Value> Evaluator<V> for SumOfCubes {
    fn eval_checked(&self, a: Param, b: Param) -> Result<V, Overflow> {
        let a = V::from_u64(a.0);
        let b = V::from_u64(b.0);
        let a3 = a
            .checked_mul(&a)
            .and_then(|s| s.checked_mul(&a))
            .ok_or(Overflow)?;
        let b3 = b
            .checked_mul(&b)
            .and_then(|s| s.checked_mul(&b))
            .ok_or(Overflow)?;
        a3.checked_add(&b3).ok_or(Overflow)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn sum_of_cubes_small() {
        let v: i128 = SumOfCubes.eval_checked(Param(9), Param(10)).unwrap();
        assert_eq!(v, 1729);
        let v: i128 = SumOfCubes.eval_checked(Param(1), Param(12)).unwrap();
        assert_eq!(v, 1729);
    }

    #[test]
    fn sum_of_cubes_needs_more_than_64_bits() {
        let v: i128 = SumOfCubes
            .eval_checked(Param(28906206), Param(582162))
            .unwrap();
        assert_eq!(v, 24_153_319_581_254_312_065_344);
        let v: BigInt = SumOfCubes
            .eval_checked(Param(28906206), Param(582162))
            .unwrap();
        assert_eq!(v.to_string(), "24153319581254312065344");
    }

    #[test]
    fn plain_sum() {
        let f = from_fn(|a, b| (a + b) as i128);
        assert_eq!(f.eval_checked(Param(1), Param(1)).unwrap(), 2);
    }

    #[test]
    fn overflow_is_an_error_not_a_wrap() {
        let huge = Param(u64::MAX);
        let r: Result<i128, _> = SumOfCubes.eval_checked(huge, huge);
        assert!(r.is_err());
        let r: Result<BigInt, _> = SumOfCubes.eval_checked(huge, huge);
        assert!(r.is_ok());
    }
}

#![allow(dead_code)] // shared across test targets; not all use every oracle

//! Shared generators and brute-force oracles for the property tests.
//!
//! Everything here is deliberately independent of the stream machinery it
//! checks: sorting uses the generic baseline, minima come from pairwise
//! domination scans, and the reference contour walker advances one step at
//! a time with no galloping.

use bimono_core::axis::{Axis, ExtParam, Param};
use bimono_core::domain::{BimonotoneDomain, GeqTriangle, LeqTriangle, Rect};
use bimono_core::eval::Evaluator;
use bimono_core::value::Overflow;
use rand::rngs::StdRng;
use rand::Rng;

/// A two-variable polynomial with non-negative coefficients, kept as plain
/// terms so the oracle side shares no code with the library evaluators.
#[derive(Debug, Clone)]
pub struct TestPoly {
    pub terms: Vec<(u64, u32, u32)>,
}

impl TestPoly {
    pub fn eval(&self, a: u64, b: u64) -> i128 {
        self.terms
            .iter()
            .map(|&(c, i, j)| c as i128 * (a as i128).pow(i) * (b as i128).pow(j))
            .sum()
    }
}

impl Evaluator<i128> for TestPoly {
    fn eval_checked(&self, a: Param, b: Param) -> Result<i128, Overflow> {
        Ok(self.eval(a.0, b.0))
    }
}

/// Random polynomial with up to four mixed terms. With `proper`, a pure
/// `a` power and a pure `b` power are always present, which keeps every
/// sublevel set finite on unbounded axes.
pub fn random_poly(rng: &mut StdRng, proper: bool) -> TestPoly {
    let mut terms: Vec<(u64, u32, u32)> = Vec::new();
    if proper {
        terms.push((rng.gen_range(1..=3), rng.gen_range(1..=3), 0));
        terms.push((rng.gen_range(1..=3), 0, rng.gen_range(1..=3)));
    }
    for _ in 0..rng.gen_range(1..=3) {
        terms.push((
            rng.gen_range(0..=4),
            rng.gen_range(0..=3),
            rng.gen_range(0..=3),
        ));
    }
    terms.retain(|t| t.0 > 0);
    if terms.is_empty() {
        terms.push((1, 1, 1));
    }
    TestPoly { terms }
}

/// A random bounded domain shape over `1..=a_max` and `1..=b_max`.
#[derive(Debug, Clone, Copy)]
pub enum AnyDomain {
    Rect(Rect),
    Leq(LeqTriangle),
    Geq(GeqTriangle),
}

impl AnyDomain {
    pub fn random(rng: &mut StdRng, max_side: u64) -> Self {
        let a_max = rng.gen_range(1..=max_side);
        let b_max = rng.gen_range(1..=max_side);
        match rng.gen_range(0..3) {
            0 => AnyDomain::Rect(Rect::new(
                Axis::bounded(1, a_max).unwrap(),
                Axis::bounded(1, b_max).unwrap(),
            )),
            1 => {
                let side = Axis::bounded(1, a_max.max(b_max)).unwrap();
                AnyDomain::Leq(LeqTriangle::new(side, side).unwrap())
            }
            _ => {
                let side = Axis::bounded(1, a_max.max(b_max)).unwrap();
                AnyDomain::Geq(GeqTriangle::new(side, side).unwrap())
            }
        }
    }
}

impl BimonotoneDomain for AnyDomain {
    fn axis_a(&self) -> Axis {
        match self {
            AnyDomain::Rect(d) => d.axis_a(),
            AnyDomain::Leq(d) => d.axis_a(),
            AnyDomain::Geq(d) => d.axis_a(),
        }
    }

    fn axis_b(&self) -> Axis {
        match self {
            AnyDomain::Rect(d) => d.axis_b(),
            AnyDomain::Leq(d) => d.axis_b(),
            AnyDomain::Geq(d) => d.axis_b(),
        }
    }

    fn alpha(&self, a: Param) -> Param {
        match self {
            AnyDomain::Rect(d) => d.alpha(a),
            AnyDomain::Leq(d) => d.alpha(a),
            AnyDomain::Geq(d) => d.alpha(a),
        }
    }

    fn beta(&self, b: Param) -> Param {
        match self {
            AnyDomain::Rect(d) => d.beta(b),
            AnyDomain::Leq(d) => d.beta(b),
            AnyDomain::Geq(d) => d.beta(b),
        }
    }

    fn alpha_prefix_sum(&self, lo: Param, hi: Param) -> Option<u128> {
        match self {
            AnyDomain::Rect(d) => d.alpha_prefix_sum(lo, hi),
            AnyDomain::Leq(d) => d.alpha_prefix_sum(lo, hi),
            AnyDomain::Geq(d) => d.alpha_prefix_sum(lo, hi),
        }
    }
}

/// Every point of a bounded domain, axis order.
pub fn domain_points<D: BimonotoneDomain>(domain: &D) -> Vec<(Param, Param)> {
    let a_axis = domain.axis_a();
    let b_axis = domain.axis_b();
    let (a_max, b_max) = (
        a_axis.max().expect("bounded domain").0,
        b_axis.max().expect("bounded domain").0,
    );
    let mut out = Vec::new();
    for a in a_axis.min().0..=a_max {
        for b in b_axis.min().0..=b_max {
            if domain.contains(Param(a), Param(b)) {
                out.push((Param(a), Param(b)));
            }
        }
    }
    out
}

/// Minimal elements of `{x in domain : f(x) >= z}` by per-column scan,
/// for bounded domains.
pub fn brute_minima<D: BimonotoneDomain>(
    poly: &TestPoly,
    domain: &D,
    z: i128,
) -> Vec<(Param, Param)> {
    let mut column_minima: Vec<(Param, Param)> = Vec::new();
    for (a, b) in domain_points(domain) {
        if poly.eval(a.0, b.0) >= z {
            match column_minima.last_mut() {
                Some((la, lb)) if *la == a => {
                    if b < *lb {
                        *lb = b;
                    }
                }
                _ => column_minima.push((a, b)),
            }
        }
    }
    // Column minima are already b-minimal per column; drop the dominated
    // ones (a grows along the list, so domination is a b comparison).
    let mut out: Vec<(Param, Param)> = Vec::new();
    for (a, b) in column_minima {
        if out.last().is_none_or(|&(_, lb)| b < lb) {
            out.push((a, b));
        }
    }
    out
}

/// The reference contour walker: the linear-search version of minima
/// construction, one successor or predecessor step at a time.
pub fn linear_minima<D: BimonotoneDomain>(
    poly: &TestPoly,
    domain: &D,
    z: i128,
) -> Vec<(Param, Param)> {
    let a_axis = domain.axis_a();
    let b_axis = domain.axis_b();
    let mut minima = Vec::new();
    let mut a = a_axis.min();
    let mut b = b_axis.min();
    if !domain.contains(a, b) {
        return minima;
    }
    // Find the first column reaching the level.
    while domain.contains(a, b) && poly.eval(a.0, b.0) < z {
        while poly.eval(a.0, b.0) < z && domain.contains_ext(ExtParam::Finite(a), b_axis.succ(b)) {
            b = b_axis.succ(b).finite().unwrap();
        }
        if poly.eval(a.0, b.0) < z {
            match a_axis.succ(a) {
                ExtParam::Finite(next) => a = next,
                _ => return minima,
            }
            if !domain.contains(a, b) {
                return minima;
            }
        }
    }
    // Walk the contour.
    while domain.contains(a, b) && poly.eval(a.0, b.0) >= z {
        loop {
            match b_axis.pred(b) {
                ExtParam::Finite(down)
                    if domain.contains(a, down) && poly.eval(a.0, down.0) >= z =>
                {
                    b = down;
                }
                _ => break,
            }
        }
        minima.push((a, b));
        let (na, nb) = match (a_axis.succ(a), b_axis.pred(b)) {
            (ExtParam::Finite(na), ExtParam::Finite(nb)) => (na, nb),
            _ => break,
        };
        a = na;
        b = nb;
        while domain.contains(a, b) && poly.eval(a.0, b.0) < z {
            match a_axis.succ(a) {
                ExtParam::Finite(next) => a = next,
                _ => break,
            }
        }
    }
    minima
}

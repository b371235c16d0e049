//! Bimonotone parameter domains.
//!
//! A domain is a region of `A x B` bounded from below by two non-decreasing
//! functions `alpha: A -> B` and `beta: B -> A`; a pair belongs to the domain
//! exactly when `a >= beta(b)` and `b >= alpha(a)`. Rectangles and the two
//! triangles used for symmetric searches are provided, plus a closure-backed
//! domain for arbitrary bounding functions.

use crate::axis::{Axis, ExtParam, Param};

/// A region bounded below by non-decreasing `alpha` and `beta`.
///
/// Implementations must uphold, for every axis point:
/// `alpha` and `beta` non-decreasing, `beta(alpha(a)) <= a` with equality
/// only at the axis minimum, and symmetrically for `alpha(beta(b))`.
/// [`validate_window`] spot-checks these axioms on a finite window.
pub trait BimonotoneDomain: Send + Sync {
    fn axis_a(&self) -> Axis;
    fn axis_b(&self) -> Axis;

    /// Least admissible `b` in column `a`.
    fn alpha(&self, a: Param) -> Param;

    /// Least admissible `a` in row `b`.
    fn beta(&self, b: Param) -> Param;

    fn contains(&self, a: Param, b: Param) -> bool {
        self.axis_a().contains(a)
            && self.axis_b().contains(b)
            && a >= self.beta(b)
            && b >= self.alpha(a)
    }

    /// Membership for extended points; infinities are never members.
    fn contains_ext(&self, a: ExtParam, b: ExtParam) -> bool {
        match (a, b) {
            (ExtParam::Finite(a), ExtParam::Finite(b)) => self.contains(a, b),
            _ => false,
        }
    }

    /// Sum of `alpha(a)` over `a` in the half-open range `[lo, hi)`,
    /// when a closed form is available. Used to turn per-column counting
    /// into constant work per contour segment.
    fn alpha_prefix_sum(&self, lo: Param, hi: Param) -> Option<u128> {
        let _ = (lo, hi);
        None
    }
}

impl<D: BimonotoneDomain + ?Sized> BimonotoneDomain for &D {
    fn axis_a(&self) -> Axis {
        (**self).axis_a()
    }
    fn axis_b(&self) -> Axis {
        (**self).axis_b()
    }
    fn alpha(&self, a: Param) -> Param {
        (**self).alpha(a)
    }
    fn beta(&self, b: Param) -> Param {
        (**self).beta(b)
    }
    fn contains(&self, a: Param, b: Param) -> bool {
        (**self).contains(a, b)
    }
    fn alpha_prefix_sum(&self, lo: Param, hi: Param) -> Option<u128> {
        (**self).alpha_prefix_sum(lo, hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum InvalidDomain {
    #[error("axes must share their minimum for this domain shape")]
    MisalignedMinima,
    #[error("axis bounds leave a column or row of the domain empty")]
    EmptyColumnOrRow,
}

/// Sum of the arithmetic progression `lo + (lo+1) + ... + (hi-1)`.
fn range_sum(lo: u64, hi: u64) -> u128 {
    if hi <= lo {
        return 0;
    }
    let n = (hi - lo) as u128;
    let first = lo as u128;
    let last = (hi - 1) as u128;
    n * (first + last) / 2
}

/// The full rectangle of two axes.
#[derive(Debug, Clone, Copy)]
pub struct Rect {
    axis_a: Axis,
    axis_b: Axis,
}

impl Rect {
    pub fn new(axis_a: Axis, axis_b: Axis) -> Self {
        Rect { axis_a, axis_b }
    }
}

impl BimonotoneDomain for Rect {
    fn axis_a(&self) -> Axis {
        self.axis_a
    }
    fn axis_b(&self) -> Axis {
        self.axis_b
    }
    fn alpha(&self, _a: Param) -> Param {
        self.axis_b.min()
    }
    fn beta(&self, _b: Param) -> Param {
        self.axis_a.min()
    }
    fn alpha_prefix_sum(&self, lo: Param, hi: Param) -> Option<u128> {
        let cols = hi.0.saturating_sub(lo.0) as u128;
        Some(cols * self.axis_b.min().0 as u128)
    }
}

/// The triangle `a <= b`, the usual domain for symmetric functions
/// enumerated up to order of arguments.
#[derive(Debug, Clone, Copy)]
pub struct LeqTriangle {
    axis_a: Axis,
    axis_b: Axis,
}

impl LeqTriangle {
    /// Triangle over matching axes; `axis_a` may stop earlier than `axis_b`.
    pub fn new(axis_a: Axis, axis_b: Axis) -> Result<Self, InvalidDomain> {
        if axis_a.min() != axis_b.min() {
            return Err(InvalidDomain::MisalignedMinima);
        }
        // Column a needs b = a available, so A cannot outrun B.
        match (axis_a.max(), axis_b.max()) {
            (None, Some(_)) => return Err(InvalidDomain::EmptyColumnOrRow),
            (Some(am), Some(bm)) if am > bm => return Err(InvalidDomain::EmptyColumnOrRow),
            _ => {}
        }
        Ok(LeqTriangle { axis_a, axis_b })
    }

    /// The unbounded triangle `min <= a <= b`.
    pub fn from_min(min: u64) -> Self {
        LeqTriangle {
            axis_a: Axis::from_min(min),
            axis_b: Axis::from_min(min),
        }
    }
}

impl BimonotoneDomain for LeqTriangle {
    fn axis_a(&self) -> Axis {
        self.axis_a
    }
    fn axis_b(&self) -> Axis {
        self.axis_b
    }
    fn alpha(&self, a: Param) -> Param {
        a
    }
    fn beta(&self, _b: Param) -> Param {
        self.axis_a.min()
    }
    fn alpha_prefix_sum(&self, lo: Param, hi: Param) -> Option<u128> {
        Some(range_sum(lo.0, hi.0))
    }
}

/// The triangle `a >= b`.
#[derive(Debug, Clone, Copy)]
pub struct GeqTriangle {
    axis_a: Axis,
    axis_b: Axis,
}

impl GeqTriangle {
    pub fn new(axis_a: Axis, axis_b: Axis) -> Result<Self, InvalidDomain> {
        if axis_a.min() != axis_b.min() {
            return Err(InvalidDomain::MisalignedMinima);
        }
        match (axis_a.max(), axis_b.max()) {
            (Some(_), None) => return Err(InvalidDomain::EmptyColumnOrRow),
            (Some(am), Some(bm)) if bm > am => return Err(InvalidDomain::EmptyColumnOrRow),
            _ => {}
        }
        Ok(GeqTriangle { axis_a, axis_b })
    }

    pub fn from_min(min: u64) -> Self {
        GeqTriangle {
            axis_a: Axis::from_min(min),
            axis_b: Axis::from_min(min),
        }
    }
}

impl BimonotoneDomain for GeqTriangle {
    fn axis_a(&self) -> Axis {
        self.axis_a
    }
    fn axis_b(&self) -> Axis {
        self.axis_b
    }
    fn alpha(&self, _a: Param) -> Param {
        self.axis_b.min()
    }
    fn beta(&self, b: Param) -> Param {
        b
    }
    fn alpha_prefix_sum(&self, lo: Param, hi: Param) -> Option<u128> {
        let cols = hi.0.saturating_sub(lo.0) as u128;
        Some(cols * self.axis_b.min().0 as u128)
    }
}

/// A domain with caller-supplied bounding functions.
#[derive(Clone)]
pub struct FnDomain<FA, FB> {
    axis_a: Axis,
    axis_b: Axis,
    alpha: FA,
    beta: FB,
}

impl<FA, FB> FnDomain<FA, FB>
where
    FA: Fn(Param) -> Param + Send + Sync,
    FB: Fn(Param) -> Param + Send + Sync,
{
    pub fn new(axis_a: Axis, axis_b: Axis, alpha: FA, beta: FB) -> Self {
        FnDomain {
            axis_a,
            axis_b,
            alpha,
            beta,
        }
    }
}

impl<FA, FB> BimonotoneDomain for FnDomain<FA, FB>
where
    FA: Fn(Param) -> Param + Send + Sync,
    FB: Fn(Param) -> Param + Send + Sync,
{
    fn axis_a(&self) -> Axis {
        self.axis_a
    }
    fn axis_b(&self) -> Axis {
        self.axis_b
    }
    fn alpha(&self, a: Param) -> Param {
        (self.alpha)(a)
    }
    fn beta(&self, b: Param) -> Param {
        (self.beta)(b)
    }
}

/// One violated domain axiom, with the witness that broke it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainViolation {
    /// `alpha(a) > alpha(a')` for `a < a'`.
    AlphaDecreases { a: Param, a_next: Param },
    /// `beta(b) > beta(b')` for `b < b'`.
    BetaDecreases { b: Param, b_next: Param },
    /// `beta(alpha(a)) > a`, or equality away from the axis minimum.
    BetaAlphaBound { a: Param, round_trip: Param },
    /// `alpha(beta(b)) > b`, or equality away from the axis minimum.
    AlphaBetaBound { b: Param, round_trip: Param },
}

/// Outcome of spot-checking the domain axioms on a finite window.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DomainReport {
    pub violations: Vec<DomainViolation>,
}

impl DomainReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustively check the bounding-function axioms on
/// `[axis_a.min, a_hi] x [axis_b.min, b_hi]`.
///
/// Violations are report content, not errors; an empty report means the
/// window passed.
pub fn validate_window<D: BimonotoneDomain>(domain: &D, a_hi: Param, b_hi: Param) -> DomainReport {
    let mut report = DomainReport::default();
    let a_min = domain.axis_a().min();
    let b_min = domain.axis_b().min();

    let mut a = a_min;
    while domain.axis_a().contains(a) && a <= a_hi {
        let cur = domain.alpha(a);
        if let ExtParam::Finite(next) = domain.axis_a().succ(a) {
            if next <= a_hi && domain.alpha(next) < cur {
                report
                    .violations
                    .push(DomainViolation::AlphaDecreases { a, a_next: next });
            }
        }
        let round_trip = domain.beta(cur);
        if round_trip > a || (round_trip == a && a != a_min) {
            report
                .violations
                .push(DomainViolation::BetaAlphaBound { a, round_trip });
        }
        match domain.axis_a().succ(a) {
            ExtParam::Finite(next) => a = next,
            _ => break,
        }
    }

    let mut b = b_min;
    while domain.axis_b().contains(b) && b <= b_hi {
        let cur = domain.beta(b);
        if let ExtParam::Finite(next) = domain.axis_b().succ(b) {
            if next <= b_hi && domain.beta(next) < cur {
                report
                    .violations
                    .push(DomainViolation::BetaDecreases { b, b_next: next });
            }
        }
        let round_trip = domain.alpha(cur);
        if round_trip > b || (round_trip == b && b != b_min) {
            report
                .violations
                .push(DomainViolation::AlphaBetaBound { b, round_trip });
        }
        match domain.axis_b().succ(b) {
            ExtParam::Finite(next) => b = next,
            _ => break,
        }
    }

    report
}

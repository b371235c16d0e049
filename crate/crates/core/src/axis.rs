//! Integer parameter axes with explicit infinity sentinels.
//!
//! An axis is a contiguous integer interval `min..=max`, or `min..` when it
//! has no upper bound. Successor and predecessor step off the ends into the
//! tagged sentinels `+inf` / `-inf` rather than magic numbers, which removes
//! edge-case branches at list ends.

use std::fmt;

/// A parameter position on an axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Param(pub u64);

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for Param {
    fn from(v: u64) -> Self {
        Param(v)
    }
}

/// A parameter extended with the two infinity sentinels.
///
/// Variant order gives the intended total order: `-inf < finite < +inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtParam {
    NegInf,
    Finite(Param),
    PosInf,
}

impl ExtParam {
    pub fn finite(self) -> Option<Param> {
        match self {
            ExtParam::Finite(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtParam::Finite(_))
    }
}

impl fmt::Display for ExtParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtParam::NegInf => write!(f, "-inf"),
            ExtParam::Finite(p) => p.fmt(f),
            ExtParam::PosInf => write!(f, "+inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("axis bounds are inverted (max below min)")]
pub struct InvalidAxis;

/// A contiguous integer interval, optionally unbounded above.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Axis {
    min: Param,
    max: Option<Param>,
}

impl Axis {
    /// The unbounded axis `min, min+1, ...`.
    pub fn from_min(min: u64) -> Self {
        Axis {
            min: Param(min),
            max: None,
        }
    }

    /// The finite axis `min..=max`.
    pub fn bounded(min: u64, max: u64) -> Result<Self, InvalidAxis> {
        if max < min {
            return Err(InvalidAxis);
        }
        Ok(Axis {
            min: Param(min),
            max: Some(Param(max)),
        })
    }

    pub fn new(min: u64, max: Option<u64>) -> Result<Self, InvalidAxis> {
        match max {
            Some(m) => Self::bounded(min, m),
            None => Ok(Self::from_min(min)),
        }
    }

    pub fn min(&self) -> Param {
        self.min
    }

    pub fn max(&self) -> Option<Param> {
        self.max
    }

    pub fn is_finite(&self) -> bool {
        self.max.is_some()
    }

    /// Number of positions, when finite. Axes are never empty.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> Option<u64> {
        self.max.map(|m| m.0 - self.min.0 + 1)
    }

    pub fn contains(&self, p: Param) -> bool {
        p >= self.min && self.max.is_none_or(|m| p <= m)
    }

    pub fn contains_ext(&self, p: ExtParam) -> bool {
        p.finite().is_some_and(|p| self.contains(p))
    }

    /// Successor of `p` on this axis; `+inf` past the end.
    pub fn succ(&self, p: Param) -> ExtParam {
        debug_assert!(self.contains(p));
        if self.max == Some(p) {
            return ExtParam::PosInf;
        }
        match p.0.checked_add(1) {
            Some(n) => ExtParam::Finite(Param(n)),
            None => ExtParam::PosInf,
        }
    }

    /// Predecessor of `p` on this axis; `-inf` before the start.
    pub fn pred(&self, p: Param) -> ExtParam {
        debug_assert!(self.contains(p));
        if p == self.min {
            ExtParam::NegInf
        } else {
            ExtParam::Finite(Param(p.0 - 1))
        }
    }
}

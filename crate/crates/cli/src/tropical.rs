//! The tropical exponent of a polynomial's sublevel growth.
//!
//! For `f = sum c_ij a^i b^j` with positive coefficients on support `K`,
//! the area of `{f <= z}` grows like `z^delta * log(z)^d`, where `delta`
//! is the maximum of `u + v` over the polygon
//! `D = { (u, v) : i*u + j*v <= 1 for all (i, j) in K }` and `d` is the
//! dimension of the face where that maximum is attained (a vertex or a
//! segment). Everything here is exact rational arithmetic: candidates are
//! the pairwise intersections of the constraint lines, filtered for
//! feasibility.

use num_rational::Ratio;

use crate::poly::Polynomial;

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalResult {
    pub delta: Rational,
    /// 0 when the maximum sits in a single vertex, 1 when on a segment.
    pub dimension: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum TropicalError {
    #[error("polynomial has no terms")]
    EmptySupport,
    #[error("delta is unbounded: the polynomial lacks a pure positive-degree a or b term")]
    Improper,
}

pub fn tropical_delta(poly: &Polynomial) -> Result<TropicalResult, TropicalError> {
    let support = poly.support();
    if support.is_empty() {
        return Err(TropicalError::EmptySupport);
    }
    if !poly.is_proper() {
        return Err(TropicalError::Improper);
    }
    let constraints: Vec<(i64, i64)> = support
        .iter()
        .map(|&(i, j)| (i as i64, j as i64))
        .filter(|&(i, j)| (i, j) != (0, 0))
        .collect();

    let feasible = |u: Rational, v: Rational| {
        constraints.iter().all(|&(i, j)| {
            u * Rational::from_integer(i) + v * Rational::from_integer(j)
                <= Rational::from_integer(1)
        })
    };

    // Properness bounds u by the pure a line and v by the pure b line, so
    // the maximum of u + v is attained and lies on feasible intersections
    // of two constraint lines.
    let mut candidates: Vec<(Rational, Rational)> = Vec::new();
    for (idx, &(i1, j1)) in constraints.iter().enumerate() {
        for &(i2, j2) in &constraints[idx + 1..] {
            let det = i1 * j2 - i2 * j1;
            if det == 0 {
                continue;
            }
            let u = Ratio::new(j2 - j1, det);
            let v = Ratio::new(i1 - i2, det);
            if feasible(u, v) && !candidates.contains(&(u, v)) {
                candidates.push((u, v));
            }
        }
    }
    let delta = candidates
        .iter()
        .map(|&(u, v)| u + v)
        .max()
        .expect("a proper support always yields a feasible vertex");
    let optimal = candidates.iter().filter(|&&(u, v)| u + v == delta).count();
    Ok(TropicalResult {
        delta,
        dimension: u8::from(optimal > 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta_of(text: &str) -> TropicalResult {
        tropical_delta(&Polynomial::parse(text).unwrap()).unwrap()
    }

    #[test]
    fn pure_powers_meet_in_one_vertex() {
        let r = delta_of("a^4+b^5");
        assert_eq!(r.delta, Ratio::new(9, 20));
        assert_eq!(r.dimension, 0);
    }

    #[test]
    fn balanced_mixed_term_flattens_a_segment() {
        let r = delta_of("a^4+a^3*b^3+b^5");
        assert_eq!(r.delta, Ratio::new(1, 3));
        assert_eq!(r.dimension, 1);
    }

    #[test]
    fn heavier_mixed_term_cuts_the_corner() {
        let r = delta_of("a^4+a^3*b^4+b^5");
        assert_eq!(r.delta, Ratio::new(5, 16));
        assert_eq!(r.dimension, 0);
    }

    #[test]
    fn plain_sum_gives_two() {
        let r = delta_of("a+b");
        assert_eq!(r.delta, Ratio::new(2, 1));
        assert_eq!(r.dimension, 0);
    }

    #[test]
    fn diagonal_constraint_dominating_gives_a_segment() {
        let r = delta_of("a+b+a*b");
        assert_eq!(r.delta, Ratio::new(1, 1));
        assert_eq!(r.dimension, 1);
    }

    #[test]
    fn improper_supports_are_rejected() {
        assert_eq!(
            tropical_delta(&Polynomial::parse("a*b").unwrap()),
            Err(TropicalError::Improper)
        );
        assert_eq!(
            tropical_delta(&Polynomial::parse("a^2+a*b").unwrap()),
            Err(TropicalError::Improper)
        );
    }

    // Grid oracle: maximize u + v over rational grid points of D. Every
    // optimum lies in (-1, 1]^2 because u >= delta - 1/beta > -1, and
    // stepping down-left from a feasible point stays feasible, so the grid
    // point just below an optimum is feasible and within 2/N of delta.
    #[test]
    fn random_supports_agree_with_a_grid_search() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0x7a0b);
        const N: i64 = 128;
        for _ in 0..20 {
            let mut text = format!("a^{}+b^{}", rng.gen_range(1..=6), rng.gen_range(1..=6));
            for _ in 0..rng.gen_range(0..3) {
                text.push_str(&format!(
                    "+a^{}*b^{}",
                    rng.gen_range(1..=6),
                    rng.gen_range(1..=6)
                ));
            }
            let poly = Polynomial::parse(&text).unwrap();
            let exact = tropical_delta(&poly).unwrap().delta;

            let constraints: Vec<(i64, i64)> = poly
                .support()
                .iter()
                .map(|&(i, j)| (i as i64, j as i64))
                .collect();
            let mut best = Ratio::new(-4, 1);
            for pu in -N..=N {
                for pv in -N..=N {
                    let (u, v) = (Ratio::new(pu, N), Ratio::new(pv, N));
                    let ok = constraints.iter().all(|&(i, j)| {
                        u * Ratio::from_integer(i) + v * Ratio::from_integer(j)
                            <= Ratio::from_integer(1)
                    });
                    if ok && u + v > best {
                        best = u + v;
                    }
                }
            }
            let gap = exact - best;
            assert!(gap >= Ratio::new(0, 1), "{text}: grid beat the LP");
            assert!(gap <= Ratio::new(2, N), "{text}: gap {gap} too wide");
        }
    }
}

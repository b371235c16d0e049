//! Frontier-growth measurement.
//!
//! Runs an enumeration to a fixed number of outputs, sampling the live and
//! peak queue lengths, and fits the growth exponent as the least-squares
//! slope of `log m_max` against `log n` over the last half of the samples;
//! the first half is discarded as startup transient since the growth
//! claims are asymptotic.

use bimono_core::axis::Param;
use bimono_core::domain::BimonotoneDomain;
use bimono_core::enumerate::{enumerate_bimonotone, enumerate_semimonotone_adaptive, EnumError};
use bimono_core::eval::Evaluator;
use bimono_core::value::{Overflow, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchAlgo {
    Bimonotone,
    /// The adaptive one-sided algorithm over the full product of the
    /// domain's axes; bounding functions are not supported here.
    SemimonotoneAdaptive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchSample<V> {
    pub n: u64,
    pub m: usize,
    pub m_max: usize,
    pub value: V,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport<V> {
    pub samples: Vec<BenchSample<V>>,
    /// Fitted exponent of `m_max` as a power of `n`.
    pub slope: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("need n_max >= 10 * sample_every")]
    BadSampling,
    #[error(transparent)]
    Overflow(#[from] Overflow),
    #[error(transparent)]
    Stream(#[from] EnumError),
    #[error("enumeration ended after {0} outputs, before n_max")]
    Exhausted(u64),
}

pub fn bench_frontier<V, E, D>(
    eval: E,
    domain: D,
    algo: BenchAlgo,
    n_max: u64,
    sample_every: u64,
) -> Result<BenchReport<V>, BenchError>
where
    V: Value,
    E: Evaluator<V>,
    D: BimonotoneDomain,
{
    if sample_every == 0 || n_max < 10 * sample_every {
        return Err(BenchError::BadSampling);
    }
    let mut samples: Vec<BenchSample<V>> = Vec::with_capacity((n_max / sample_every) as usize);
    match algo {
        BenchAlgo::Bimonotone => {
            let mut stream = enumerate_bimonotone(eval, domain)?;
            for n in 1..=n_max {
                let Some(item) = stream.next() else {
                    return Err(BenchError::Exhausted(n - 1));
                };
                let item = item?;
                if n % sample_every == 0 {
                    samples.push(BenchSample {
                        n,
                        m: stream.frontier_len(),
                        m_max: stream.peak_frontier(),
                        value: item.value,
                    });
                }
            }
        }
        BenchAlgo::SemimonotoneAdaptive => {
            let mut stream =
                enumerate_semimonotone_adaptive(eval, domain.axis_a(), domain.axis_b())?;
            for n in 1..=n_max {
                let Some(item) = stream.next() else {
                    return Err(BenchError::Exhausted(n - 1));
                };
                let item = item?;
                if n % sample_every == 0 {
                    samples.push(BenchSample {
                        n,
                        m: stream.queue_len(),
                        m_max: stream.peak_queue(),
                        value: item.value,
                    });
                }
            }
        }
    }
    let slope = fit_slope(&samples, n_max);
    Ok(BenchReport { samples, slope })
}

/// Least-squares slope of `ln m_max` over `ln n`, last half of the run.
fn fit_slope<V>(samples: &[BenchSample<V>], n_max: u64) -> f64 {
    let half: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| 2 * s.n >= n_max)
        .map(|s| ((s.n as f64).ln(), (s.m_max as f64).ln()))
        .collect();
    if half.len() < 2 {
        return f64::NAN;
    }
    let count = half.len() as f64;
    let mean_x = half.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = half.iter().map(|p| p.1).sum::<f64>() / count;
    let sxy: f64 = half.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = half.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    sxy / sxx
}

/// `max(a, b)`: the built-in non-polynomial test function whose frontier
/// never grows past a handful of entries.
#[derive(Debug, Clone, Copy, Default)]
pub struct MaxOfParams;

impl<V: Value> Evaluator<V> for MaxOfParams {
    fn eval_checked(&self, a: Param, b: Param) -> Result<V, Overflow> {
        Ok(V::from_u64(a.0.max(b.0)))
    }
}

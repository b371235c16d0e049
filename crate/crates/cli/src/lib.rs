//! Command-line companion to `bimono-core`: a polynomial parser whose
//! non-negative coefficients guarantee bimonotonicity, the exact tropical
//! growth exponent, a frontier-growth benchmark, and the `bimono` binary
//! wiring them to the enumeration and search streams.

pub mod bench;
pub mod cli;
pub mod poly;
pub mod tropical;

pub use bench::{bench_frontier, BenchAlgo, BenchReport, BenchSample, MaxOfParams};
pub use poly::{PolyError, Polynomial};
pub use tropical::{tropical_delta, TropicalError, TropicalResult};

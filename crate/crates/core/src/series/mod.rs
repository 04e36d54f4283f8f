//! Truncated graded series: arithmetic, log/exp, binomial factorization,
//! slab normalization and the search for a positive grading.

mod formal;
mod logexp;
mod space;
mod trunc;
mod weights;

pub use formal::FormalLog;
pub use logexp::{
    exp_series, factorize_binomials, log_series, normalize_slab, split_unit, zero_exponent_part,
    BinomialFactor, Factorization, LogSeries,
};
pub use space::SeriesSpace;
pub use trunc::{SeriesTermJson, TruncatedSeries};
pub use weights::{find_weights, rationalize, WeightChoice, WeightProblem};

//! The singular series: arc sums `A_N(q)`, the truncated series, local
//! densities `χ_N(p)` in two independent forms, and the Euler product.

mod density;
mod engine;
mod series;

pub(crate) use series::below_threshold as series_threshold;

pub use density::{EulerProduct, LocalDensity, DUAL_TOL, MAX_PRIME_POWER};
pub use engine::{ArcSum, SingularEngine, TruncatedSeries};
pub use series::{
    arc_sum, euler_product, local_density, multiplicativity_check, random_coprime_pairs, truncated_series,
    MultiplicativityCheck, MultiplicativityReport, SingularSeriesResult, MULTIPLICATIVITY_TOL, SINGULAR_CSV_HEADER,
};

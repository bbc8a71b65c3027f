//! Weyl sums, complete Gauss sums, the oscillatory integral `v`, Hua
//! moments, and empirical bound measurements.

mod bounds;
mod gauss;
mod hua;
mod vint;
mod weyl;

pub use bounds::{
    measure_bound, minor_arc_samples, sigma, BoundCheckReport, BoundGrid, BoundName, GridPoint, BOUND_CSV_HEADER,
};
pub use gauss::{gauss_all_direct, gauss_sum, gauss_sum_direct, gauss_table, ResidueHistogram};
pub use hua::{hua_moment, hua_threshold, HuaMoment};
pub use vint::{v_integral, VFunction, VIntegral, V_PANEL_BUDGET};
pub use weyl::weyl_sum;

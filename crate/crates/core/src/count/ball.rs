use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use super::ladder::{run_ladder, LadderConfig, SparseKernel};
use crate::arith::floor_root;
use crate::error::{Result, WaringError};
use crate::gamma::ln_gamma;
use crate::instance::validate_power;
use crate::report::{big_ln, ser_big};

/// Integer points of the `k`-ball `Σ|x_j|^k <= N` in `Z^d` against its volume.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BallCount {
    pub k: u32,
    pub d: u32,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(serialize_with = "ser_big")]
    pub lattice_count: BigUint,
    pub volume: f64,
    pub ratio: f64,
}

pub fn ball_count(k: u32, d: u32, n: u64) -> Result<BallCount> {
    ball_count_with(k, d, n, &LadderConfig::default())
}

pub fn ball_count_with(k: u32, d: u32, n: u64, cfg: &LadderConfig) -> Result<BallCount> {
    validate_power(k)?;
    if d < 1 {
        return Err(WaringError::invalid("d", "dimension must be at least 1"));
    }
    if n < 1 {
        return Err(WaringError::invalid("N", "radius parameter must be at least 1"));
    }
    let len = n as usize + 1;
    // signed coordinate: weight 1 at 0, weight 2 at each |x|^k <= N
    let mut entries = vec![(0usize, 1u64)];
    for m in 1..=floor_root(n, k) {
        entries.push((m.pow(k) as usize, 2));
    }
    let kernel = SparseKernel { entries };
    let kernels = vec![kernel; d as usize];
    let row = run_ladder(&kernels, len, false, cfg, "ball_count")?
        .pop()
        .expect("one row");
    let lattice_count = row.iter().fold(BigUint::zero(), |acc, x| acc + x);

    let kf = k as f64;
    let df = d as f64;
    let ln_volume =
        df * (2.0f64.ln() + ln_gamma(1.0 + 1.0 / kf)) - ln_gamma(1.0 + df / kf) + df / kf * (n as f64).ln();
    let ratio = (big_ln(&lattice_count) - ln_volume).exp();
    Ok(BallCount {
        k,
        d,
        n,
        lattice_count,
        volume: ln_volume.exp(),
        ratio,
    })
}

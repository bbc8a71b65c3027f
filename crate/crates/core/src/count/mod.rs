//! Exact representation counts `r_k(N)`, a brute-force oracle, and lattice
//! point counts in `k`-balls.

mod ball;
mod ladder;
mod ntt;

pub use ball::{ball_count, ball_count_with, BallCount};
pub use ladder::{run_ladder, ConvolutionStrategy, LadderConfig, SparseKernel};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::floor_root;
use crate::error::{Result, WaringError};
use crate::instance::WaringInstance;
use crate::report::big_to_string;

/// Default limit on tuples visited by [`count_bruteforce`].
pub const BRUTEFORCE_GUARD: u128 = 100_000_000;

/// `counts(j, n)` for `1 <= j <= d`, `0 <= n <= N`: the number of
/// `(n_1..n_j)` in positive integers with `Σ c_i n_i^k = n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepCountTable {
    instance: WaringInstance,
    rows: Vec<Vec<BigUint>>,
}

impl RepCountTable {
    pub fn instance(&self) -> &WaringInstance {
        &self.instance
    }

    /// Row `j` (1-based), indexed by `n`.
    pub fn row(&self, j: u32) -> &[BigUint] {
        &self.rows[j as usize - 1]
    }

    pub fn count(&self, j: u32, n: u64) -> &BigUint {
        &self.rows[j as usize - 1][n as usize]
    }

    /// `r_k(N)` for the full instance.
    pub fn target(&self) -> &BigUint {
        self.count(self.instance.d(), self.instance.n())
    }

    /// JSON form with big integers as decimal strings. Only row `d` is
    /// emitted unless `full_ladder` is set.
    pub fn to_json(&self, full_ladder: bool) -> serde_json::Value {
        #[derive(Serialize)]
        struct View<'a> {
            k: u32,
            d: u32,
            #[serde(rename = "N")]
            n: u64,
            #[serde(skip_serializing_if = "Option::is_none")]
            coeffs: Option<&'a [u64]>,
            counts: Vec<Vec<String>>,
        }
        let rows: &[Vec<BigUint>] = if full_ladder {
            &self.rows
        } else {
            std::slice::from_ref(self.rows.last().expect("at least one row"))
        };
        let view = View {
            k: self.instance.k(),
            d: self.instance.d(),
            n: self.instance.n(),
            coeffs: self.instance.coeffs(),
            counts: rows
                .iter()
                .map(|r| r.iter().map(big_to_string).collect())
                .collect(),
        };
        serde_json::to_value(view).expect("plain data serializes")
    }
}

pub fn count_exact(instance: &WaringInstance) -> Result<RepCountTable> {
    count_exact_with(instance, &LadderConfig::default())
}

/// Dynamic-programming count of every row of the ladder.
pub fn count_exact_with(instance: &WaringInstance, cfg: &LadderConfig) -> Result<RepCountTable> {
    let len = usize::try_from(instance.n())
        .ok()
        .and_then(|n| n.checked_add(1))
        .ok_or(WaringError::Capacity {
            what: "count_exact",
            required: instance.n() as u128 + 1,
            budget: cfg.max_cells,
        })?;
    let kernels: Vec<SparseKernel> = (0..instance.d() as usize)
        .map(|i| SparseKernel::powers(instance.k(), instance.coeff(i), len))
        .collect();
    let rows = run_ladder(&kernels, len, true, cfg, "count_exact")?;
    Ok(RepCountTable {
        instance: instance.clone(),
        rows,
    })
}

/// Exhaustive enumeration over all tuples with `c_i n_i^k <= N`.
pub fn count_bruteforce(instance: &WaringInstance) -> Result<BigUint> {
    count_bruteforce_with(instance, BRUTEFORCE_GUARD)
}

pub fn count_bruteforce_with(instance: &WaringInstance, guard: u128) -> Result<BigUint> {
    let k = instance.k();
    let n = instance.n();
    let coeffs = instance.coeff_vec();
    let bounds: Vec<u64> = coeffs.iter().map(|&c| floor_root(n / c, k)).collect();
    let total = bounds
        .iter()
        .try_fold(1u128, |acc, &b| acc.checked_mul(b as u128))
        .unwrap_or(u128::MAX);
    if total > guard {
        return Err(WaringError::EnumerationGuard {
            required: total,
            guard,
        });
    }
    if bounds.contains(&0) {
        return Ok(BigUint::zero());
    }
    let terms: Vec<Vec<u64>> = bounds
        .iter()
        .zip(&coeffs)
        .map(|(&b, &c)| (1..=b).map(|m| c * m.pow(k)).collect())
        .collect();
    let d = terms.len();
    let mut idx = vec![0usize; d];
    let mut hits: u64 = 0;
    loop {
        let s: u64 = idx.iter().zip(&terms).map(|(&i, t)| t[i]).sum();
        if s == n {
            hits += 1;
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == d {
                return Ok(BigUint::from(hits));
            }
            idx[pos] += 1;
            if idx[pos] < terms[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::density::{EulerProduct, LocalDensity};
use super::engine::SingularEngine;
use crate::arith::gcd;
use crate::error::{Result, WaringError};
use crate::report::{csv_line, fmt_f64};

/// Tolerance of [`SingularEngine::multiplicativity_check`].
pub const MULTIPLICATIVITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SingularSeriesResult {
    pub k: u32,
    pub d: u32,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<u64>>,
    pub truncated_sum: f64,
    #[serde(rename = "Q")]
    pub q_max: u64,
    pub euler_product: f64,
    #[serde(rename = "P")]
    pub p_max: u64,
    pub tail_estimate: f64,
    pub decay_constant: f64,
    pub per_prime: Vec<LocalDensity>,
    /// Set when `d < 2^k + 1`, where positivity is not guaranteed.
    pub below_positivity_threshold: bool,
}

pub const SINGULAR_CSV_HEADER: &str = "N,d,k,Q,P,truncatedSum,eulerProduct,tailEstimate,perPrime";

impl SingularSeriesResult {
    pub fn csv_row(&self) -> String {
        let per_prime = self
            .per_prime
            .iter()
            .map(|f| format!("{}:{}", f.p, fmt_f64(f.value)))
            .collect::<Vec<_>>()
            .join(";");
        csv_line([
            self.n.to_string(),
            self.d.to_string(),
            self.k.to_string(),
            self.q_max.to_string(),
            self.p_max.to_string(),
            fmt_f64(self.truncated_sum),
            fmt_f64(self.euler_product),
            fmt_f64(self.tail_estimate),
            per_prime,
        ])
    }

    pub fn converged(&self) -> bool {
        self.per_prime.iter().all(|f| f.stabilized)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MultiplicativityCheck {
    pub q1: u64,
    pub q2: u64,
    /// `A_N(q1 q2)`.
    pub product_modulus: f64,
    /// `A_N(q1) A_N(q2)`.
    pub product_of_sums: f64,
    pub abs_diff: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MultiplicativityReport {
    pub k: u32,
    pub d: u32,
    #[serde(rename = "N")]
    pub n: u64,
    pub tol: f64,
    pub checks: Vec<MultiplicativityCheck>,
    pub max_abs_diff: f64,
    pub all_pass: bool,
}

/// `count` coprime pairs with entries in `2..=max`, drawn from a seeded
/// ChaCha stream.
pub fn random_coprime_pairs(count: usize, max: u64, seed: u64) -> Result<Vec<(u64, u64)>> {
    if max < 3 {
        return Err(WaringError::invalid("max", "need at least 3 to find coprime pairs"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = rng.gen_range(2..=max);
        let b = rng.gen_range(2..=max);
        if gcd(a, b) == 1 {
            out.push((a, b));
        }
    }
    Ok(out)
}

impl SingularEngine {
    /// Truncated series and Euler product side by side.
    pub fn singular_series(&self, n: u64, big_q: u64, big_p: u64, tol: f64) -> Result<SingularSeriesResult> {
        let trunc = self.truncated_series(n, big_q)?;
        let EulerProduct { value, factors, .. } = self.euler_product(n, big_p, tol)?;
        Ok(SingularSeriesResult {
            k: self.k,
            d: self.d,
            n,
            coeffs: self.coeffs.clone(),
            truncated_sum: trunc.value,
            q_max: big_q,
            euler_product: value,
            p_max: big_p,
            tail_estimate: trunc.tail_estimate,
            decay_constant: trunc.decay_constant,
            per_prime: factors,
            below_positivity_threshold: below_threshold(self.k, self.d),
        })
    }

    pub fn multiplicativity_check(&self, n: u64, pairs: &[(u64, u64)]) -> Result<MultiplicativityReport> {
        let mut checks = Vec::with_capacity(pairs.len());
        for &(q1, q2) in pairs {
            if q1 < 1 || q2 < 1 || gcd(q1, q2) != 1 {
                return Err(WaringError::invalid("pairs", format!("({q1}, {q2}) is not a coprime pair")));
            }
            let q = q1
                .checked_mul(q2)
                .ok_or_else(|| WaringError::invalid("pairs", "q1 q2 overflows"))?;
            let lhs = self.arc_sum_real(n, q);
            let rhs = self.arc_sum_real(n, q1) * self.arc_sum_real(n, q2);
            let abs_diff = (lhs - rhs).abs();
            checks.push(MultiplicativityCheck {
                q1,
                q2,
                product_modulus: lhs,
                product_of_sums: rhs,
                abs_diff,
                pass: abs_diff <= MULTIPLICATIVITY_TOL,
            });
        }
        let max_abs_diff = checks.iter().map(|c| c.abs_diff).fold(0.0, f64::max);
        Ok(MultiplicativityReport {
            k: self.k,
            d: self.d,
            n,
            tol: MULTIPLICATIVITY_TOL,
            all_pass: checks.iter().all(|c| c.pass),
            checks,
            max_abs_diff,
        })
    }
}

pub(crate) fn below_threshold(k: u32, d: u32) -> bool {
    (d as u64) < (1u64 << k.min(63)) + 1
}

fn engine(k: u32, d: u32, coeffs: Option<&[u64]>) -> Result<SingularEngine> {
    match coeffs {
        Some(c) => {
            if c.len() as u32 != d {
                return Err(WaringError::invalid("coeffs", format!("expected {d} coefficients, got {}", c.len())));
            }
            SingularEngine::with_coeffs(k, c)
        }
        None => SingularEngine::new(k, d),
    }
}

pub fn arc_sum(k: u32, d: u32, n: u64, q: u64, coeffs: Option<&[u64]>) -> Result<super::ArcSum> {
    engine(k, d, coeffs)?.arc_sum(n, q)
}

pub fn truncated_series(k: u32, d: u32, n: u64, big_q: u64, coeffs: Option<&[u64]>) -> Result<super::TruncatedSeries> {
    engine(k, d, coeffs)?.truncated_series(n, big_q)
}

pub fn local_density(k: u32, d: u32, n: u64, p: u64, tol: f64, coeffs: Option<&[u64]>) -> Result<LocalDensity> {
    engine(k, d, coeffs)?.local_density(n, p, tol)
}

pub fn euler_product(
    k: u32,
    d: u32,
    n: u64,
    big_q: u64,
    big_p: u64,
    tol: f64,
    coeffs: Option<&[u64]>,
) -> Result<SingularSeriesResult> {
    engine(k, d, coeffs)?.singular_series(n, big_q, big_p, tol)
}

pub fn multiplicativity_check(k: u32, d: u32, n: u64, pairs: &[(u64, u64)]) -> Result<MultiplicativityReport> {
    SingularEngine::new(k, d)?.multiplicativity_check(n, pairs)
}

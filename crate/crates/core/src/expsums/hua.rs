use serde::Serialize;

use crate::arith::pow_mod;
use crate::error::{Result, WaringError};
use crate::phase::RootTable;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HuaMoment {
    pub k: u32,
    #[serde(rename = "X")]
    pub x: u64,
    /// The moment order `k(k+1)`.
    pub order: u32,
    pub samples: u64,
    pub value: f64,
}

/// Smallest sample count for which equispaced averaging is exact:
/// `m X^k + 1` with `m = k(k+1)/2`.
pub fn hua_threshold(k: u32, x: u64) -> Result<u64> {
    let m = (k as u64) * (k as u64 + 1) / 2;
    (x as u128)
        .checked_pow(k)
        .and_then(|xk| xk.checked_mul(m as u128))
        .and_then(|v| u64::try_from(v + 1).ok())
        .ok_or_else(|| WaringError::invalid("X", "m X^k does not fit in 64 bits"))
}

/// `∫_0^1 |f_X(ξ)|^{k(k+1)} dξ` as the mean of `|f_X(j/M)|^{k(k+1)}` over
/// `j = 0..M`. `|f_X|^{k(k+1)}` is a trigonometric polynomial whose
/// frequencies are below `m X^k` in absolute value, so any `M > m X^k`
/// gives the integral exactly up to roundoff.
pub fn hua_moment(k: u32, x: u64, samples: Option<u64>) -> Result<HuaMoment> {
    if k < 1 {
        return Err(WaringError::invalid("k", "must be at least 1"));
    }
    if x < 1 {
        return Err(WaringError::invalid("X", "must be at least 1"));
    }
    let threshold = hua_threshold(k, x)?;
    let m = samples.unwrap_or(threshold);
    if m < threshold {
        return Err(WaringError::invalid(
            "M",
            format!("sampling size {m} is below the exactness threshold {threshold}"),
        ));
    }
    let order = k * (k + 1);
    let roots = RootTable::new(m);
    let steps: Vec<usize> = (1..=x).map(|n| pow_mod(n, k as u64, m) as usize).collect();
    let mut idx = vec![0usize; steps.len()];
    let ms = m as usize;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for _ in 0..m {
        let mut f = num_complex::Complex64::new(0.0, 0.0);
        for (slot, &s) in idx.iter_mut().zip(&steps) {
            f += roots.get_reduced(*slot);
            let next = *slot + s;
            *slot = if next >= ms { next - ms } else { next };
        }
        let term = f.norm_sqr().powi((order / 2) as i32);
        let t = sum + term;
        comp += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
        sum = t;
    }
    Ok(HuaMoment {
        k,
        x,
        order,
        samples: m,
        value: (sum + comp) / m as f64,
    })
}

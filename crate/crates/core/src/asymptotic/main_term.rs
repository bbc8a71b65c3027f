use serde::Serialize;

use crate::error::{Result, WaringError};
use crate::gamma::ln_gamma;
use crate::instance::{validate_coeffs, validate_power};

/// `Γ(1+1/k)^d / Γ(d/k) · N^{d/k-1} / (c_1⋯c_d)^{1/k}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MainTerm {
    pub k: u32,
    pub d: u32,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<u64>>,
    pub log_value: f64,
    /// `exp(logValue)`; infinite when out of `f64` range.
    pub value: f64,
}

/// `ln(Γ(1+1/k)^d / Γ(d/k))`, the `N`-free part of the main term.
pub fn log_gamma_ratio(k: u32, d: u32) -> f64 {
    let kf = k as f64;
    d as f64 * ln_gamma(1.0 + 1.0 / kf) - ln_gamma(d as f64 / kf)
}

pub fn main_term(k: u32, d: u32, n: u64, coeffs: Option<&[u64]>) -> Result<MainTerm> {
    validate_power(k)?;
    if let Some(c) = coeffs {
        validate_coeffs(c)?;
        if c.len() as u32 != d {
            return Err(WaringError::invalid("coeffs", format!("expected {d} coefficients, got {}", c.len())));
        }
    }
    if d < 1 {
        return Err(WaringError::invalid("d", "must be at least 1"));
    }
    if n < 1 {
        return Err(WaringError::invalid("N", "must be at least 1"));
    }
    let kf = k as f64;
    let log_c: f64 = coeffs.map_or(0.0, |c| c.iter().map(|&ci| (ci as f64).ln()).sum());
    let log_value = log_gamma_ratio(k, d) + (d as f64 / kf - 1.0) * (n as f64).ln() - log_c / kf;
    Ok(MainTerm {
        k,
        d,
        n,
        coeffs: coeffs.map(<[u64]>::to_vec),
        log_value,
        value: log_value.exp(),
    })
}

impl MainTerm {
    /// The value, or an overflow error carrying the logarithm.
    pub fn finite_value(&self) -> Result<f64> {
        if self.value.is_finite() {
            Ok(self.value)
        } else {
            Err(WaringError::Overflow {
                log_value: self.log_value,
            })
        }
    }
}

use crate::arith::{floor_root, gcd};
use crate::error::{Result, WaringError};
use serde::{Deserialize, Serialize};

/// A Waring problem `c_1 n_1^k + ... + c_d n_d^k = N` in positive integers.
///
/// With `coeffs` absent every `c_i` is 1, which is the classical problem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaringInstance {
    k: u32,
    d: u32,
    #[serde(rename = "N")]
    n: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    coeffs: Option<Vec<u64>>,
}

impl WaringInstance {
    pub fn new(k: u32, d: u32, n: u64) -> Result<Self> {
        validate_power(k)?;
        if d < 1 {
            return Err(WaringError::invalid("d", "dimension must be at least 1"));
        }
        if n < 1 {
            return Err(WaringError::invalid("N", "target must be at least 1"));
        }
        Ok(WaringInstance {
            k,
            d,
            n,
            coeffs: None,
        })
    }

    /// Generalised instance; `d` is the number of coefficients.
    pub fn with_coeffs(k: u32, n: u64, coeffs: Vec<u64>) -> Result<Self> {
        validate_coeffs(&coeffs)?;
        let mut inst = WaringInstance::new(k, coeffs.len() as u32, n)?;
        inst.coeffs = Some(coeffs);
        Ok(inst)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> Option<&[u64]> {
        self.coeffs.as_deref()
    }

    /// Coefficient of coordinate `i` (0-based); 1 for the plain problem.
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.as_ref().map_or(1, |c| c[i])
    }

    /// Every coefficient, expanded to length `d`.
    pub fn coeff_vec(&self) -> Vec<u64> {
        (0..self.d as usize).map(|i| self.coeff(i)).collect()
    }

    /// `X = ⌊N^{1/k}⌋`.
    pub fn x(&self) -> u64 {
        floor_root(self.n, self.k)
    }

    /// Same problem with a different target.
    pub fn with_target(&self, n: u64) -> Result<Self> {
        if n < 1 {
            return Err(WaringError::invalid("N", "target must be at least 1"));
        }
        let mut out = self.clone();
        out.n = n;
        Ok(out)
    }
}

pub(crate) fn validate_power(k: u32) -> Result<()> {
    if k < 2 {
        return Err(WaringError::invalid("k", format!("power must be >= 2, got {k}")));
    }
    Ok(())
}

pub(crate) fn validate_coeffs(coeffs: &[u64]) -> Result<()> {
    if coeffs.is_empty() {
        return Err(WaringError::invalid("coeffs", "need at least one coefficient"));
    }
    if coeffs.contains(&0) {
        return Err(WaringError::invalid("coeffs", "coefficients must be positive"));
    }
    let g = coeffs.iter().fold(0, |g, &c| gcd(g, c));
    if g != 1 {
        return Err(WaringError::invalid(
            "coeffs",
            format!("coefficients share the common factor {g}"),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(WaringInstance::new(1, 2, 5).is_err());
        assert!(WaringInstance::new(2, 0, 5).is_err());
        assert!(WaringInstance::new(2, 2, 0).is_err());
        assert!(WaringInstance::with_coeffs(2, 10, vec![2, 4]).is_err());
        assert!(WaringInstance::with_coeffs(2, 10, vec![0, 1]).is_err());
        let e = WaringInstance::with_coeffs(2, 10, vec![2, 4, 6]).unwrap_err();
        assert!(e.to_string().contains("common factor 2"));
    }

    #[test]
    fn derived_radius() {
        let inst = WaringInstance::new(3, 4, 1000).unwrap();
        assert_eq!(inst.x(), 10);
        let g = WaringInstance::with_coeffs(2, 50, vec![1, 2, 3]).unwrap();
        assert_eq!(g.d(), 3);
        assert_eq!(g.coeff_vec(), vec![1, 2, 3]);
    }

    #[test]
    fn json_uses_capital_n() {
        let inst = WaringInstance::new(2, 4, 30).unwrap();
        let s = serde_json::to_string(&inst).unwrap();
        assert_eq!(s, r#"{"k":2,"d":4,"N":30}"#);
    }
}

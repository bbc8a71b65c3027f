use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::TAU;

use crate::arith::pow_mod;
use crate::count::{run_ladder, LadderConfig, SparseKernel};
use crate::error::{Result, WaringError};
use crate::phase::{e_mul, CompensatedSum, RootTable};
use crate::report::{big_to_f64, ser_big};

/// Exact expansion `Π_i f_X(c_i ξ) = Σ_m r(m) e(mξ)`, where `r(m)` counts
/// `(n_1..n_d) ∈ {1..X}^d` with `Σ c_i n_i^k = m`.
#[derive(Debug, Clone, Serialize)]
pub struct FourierLadder {
    k: u32,
    #[serde(rename = "X")]
    x: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    coeffs_c: Option<Vec<u64>>,
    d: u32,
    #[serde(serialize_with = "ser_big_vec")]
    coeffs: Vec<BigUint>,
    #[serde(skip)]
    approx: Vec<f64>,
}

fn ser_big_vec<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        #[derive(Serialize)]
        struct W<'a>(#[serde(serialize_with = "ser_big")] &'a BigUint);
        seq.serialize_element(&W(x))?;
    }
    seq.end()
}

pub fn fourier_ladder(k: u32, d: u32, x: u64) -> Result<FourierLadder> {
    if d < 1 {
        return Err(WaringError::invalid("d", "must be at least 1"));
    }
    build(k, x, vec![1; d as usize], None, &LadderConfig::default())
}

/// Ladder for `Σ c_i n_i^k` (gcd of the `c_i` must be 1).
pub fn fourier_ladder_with_coeffs(k: u32, x: u64, coeffs: &[u64]) -> Result<FourierLadder> {
    crate::instance::validate_coeffs(coeffs)?;
    build(k, x, coeffs.to_vec(), Some(coeffs.to_vec()), &LadderConfig::default())
}

pub fn fourier_ladder_with(k: u32, x: u64, coeffs: Option<&[u64]>, d: u32, cfg: &LadderConfig) -> Result<FourierLadder> {
    match coeffs {
        Some(c) => {
            crate::instance::validate_coeffs(c)?;
            build(k, x, c.to_vec(), Some(c.to_vec()), cfg)
        }
        None => {
            if d < 1 {
                return Err(WaringError::invalid("d", "must be at least 1"));
            }
            build(k, x, vec![1; d as usize], None, cfg)
        }
    }
}

fn build(k: u32, x: u64, c: Vec<u64>, coeffs_c: Option<Vec<u64>>, cfg: &LadderConfig) -> Result<FourierLadder> {
    crate::instance::validate_power(k)?;
    if x < 1 {
        return Err(WaringError::invalid("X", "must be at least 1"));
    }
    let xk = (x as u128)
        .checked_pow(k)
        .ok_or_else(|| WaringError::invalid("X", "X^k does not fit in 128 bits"))?;
    let degree = c.iter().try_fold(0u128, |acc, &ci| acc.checked_add(xk.checked_mul(ci as u128)?));
    let len = degree
        .and_then(|v| v.checked_add(1))
        .filter(|&v| v <= cfg.max_cells)
        .ok_or(WaringError::Capacity {
            what: "fourier_ladder",
            required: degree.map_or(u128::MAX, |v| v.saturating_add(1)),
            budget: cfg.max_cells,
        })? as usize;
    let kernels: Vec<SparseKernel> = c
        .iter()
        .map(|&ci| SparseKernel::powers_up_to(k, ci, x, len))
        .collect();
    let coeffs = run_ladder(&kernels, len, false, cfg, "fourier_ladder")?
        .pop()
        .expect("one row");
    let approx = coeffs.iter().map(big_to_f64).collect();
    Ok(FourierLadder {
        k,
        x,
        d: c.len() as u32,
        coeffs_c,
        coeffs,
        approx,
    })
}

impl FourierLadder {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    /// Highest frequency `Σ c_i X^k`.
    pub fn degree(&self) -> u64 {
        (self.coeffs.len() - 1) as u64
    }

    pub fn coeff(&self, m: u64) -> BigUint {
        self.coeffs.get(m as usize).cloned().unwrap_or_else(BigUint::zero)
    }

    fn multipliers(&self) -> BTreeMap<u64, u32> {
        let mut groups = BTreeMap::new();
        match &self.coeffs_c {
            Some(c) => c.iter().for_each(|&ci| *groups.entry(ci).or_insert(0) += 1),
            None => {
                groups.insert(1, self.d);
            }
        }
        groups
    }

    /// `∫_0^1 Π f_X(c_i ξ) e(-Nξ) dξ = r(N)`, read off exactly.
    pub fn circle_integral(&self, n: u64) -> BigUint {
        self.coeff(n)
    }

    /// Mean of `Π f_X(c_i j/M) e(-Nj/M)` over `j = 0..M`. The default
    /// `M = max(degree, N) + 1` makes the mean equal `r(N)` up to roundoff.
    pub fn dft_mean(&self, n: u64, samples: Option<u64>) -> Result<Complex64> {
        let m = samples.unwrap_or(self.degree().max(n) + 1);
        if m < 1 {
            return Err(WaringError::invalid("M", "must be at least 1"));
        }
        let ms = m as usize;
        let roots = RootTable::new(m);
        let groups: Vec<(Vec<usize>, Vec<usize>, i32)> = self
            .multipliers()
            .into_iter()
            .map(|(c, mult)| {
                let steps: Vec<usize> = (1..=self.x)
                    .map(|r| (pow_mod(r, self.k as u64, m) as u128 * c as u128 % m as u128) as usize)
                    .collect();
                (vec![0usize; steps.len()], steps, mult as i32)
            })
            .collect();
        let mut groups = groups;
        let back = ((m - n % m) % m) as usize;
        let mut back_idx = 0usize;
        let mut acc = CompensatedSum::new();
        for _ in 0..m {
            let mut prod = Complex64::new(1.0, 0.0);
            for (idx, steps, mult) in groups.iter_mut() {
                let mut f = Complex64::new(0.0, 0.0);
                for (slot, &s) in idx.iter_mut().zip(steps.iter()) {
                    f += roots.get_reduced(*slot);
                    let next = *slot + s;
                    *slot = if next >= ms { next - ms } else { next };
                }
                prod *= f.powi(*mult);
            }
            acc.add(prod * roots.get_reduced(back_idx));
            let next = back_idx + back;
            back_idx = if next >= ms { next - ms } else { next };
        }
        Ok(acc.value() / m as f64)
    }

    /// `∫_lo^hi Π f_X(c_i ξ) e(-Nξ) dξ` mode by mode:
    /// `Σ_m r(m) (e((m-N)hi) - e((m-N)lo)) / (2πi(m-N))`, plus
    /// `r(N)(hi - lo)`. Modes are added in increasing `|m - N|`.
    pub fn arc_integral(&self, n: u64, lo: f64, hi: f64) -> Result<Complex64> {
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
            return Err(WaringError::invalid("interval", format!("need 0 <= lo <= hi <= 1, got [{lo}, {hi}]")));
        }
        let mut acc = CompensatedSum::new();
        let deg = self.degree() as i128;
        let n = n as i128;
        let reach = n.max(deg - n);
        if n <= deg {
            acc.add(Complex64::new(self.approx[n as usize] * (hi - lo), 0.0));
        }
        for delta in 1..=reach {
            for m in [n - delta, n + delta] {
                if m < 0 || m > deg {
                    continue;
                }
                let c = self.approx[m as usize];
                if c == 0.0 {
                    continue;
                }
                let off = m - n;
                let diff = e_mul(hi, off) - e_mul(lo, off);
                acc.add(diff * Complex64::new(0.0, -c / (TAU * off as f64)));
            }
        }
        Ok(acc.value())
    }

    /// Sum of [`FourierLadder::arc_integral`] over disjoint intervals.
    pub fn union_integral(&self, n: u64, intervals: &[(f64, f64)]) -> Result<Complex64> {
        let mut acc = CompensatedSum::new();
        for &(lo, hi) in intervals {
            acc.add(self.arc_integral(n, lo, hi)?);
        }
        Ok(acc.value())
    }
}

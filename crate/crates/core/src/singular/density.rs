use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

use super::engine::SingularEngine;
use crate::arith::{is_prime, pow_mod, primes_up_to, valuation};
use crate::error::{Result, WaringError};
use crate::phase::CompensatedSum;

/// Largest modulus `p^h` used by the congruence count.
pub const MAX_PRIME_POWER: u64 = 10_000_000;

/// Largest modulus `p^h` at which the congruence count is cross-checked.
/// The dense convolution costs about `d p^{2h}`.
pub const CONGRUENCE_CAP: u64 = 10_000;

/// Agreement required between the two forms of `χ_N(p)`.
pub const DUAL_TOL: f64 = 1e-9;

/// `χ_N(p) = Σ_{h >= 0} A_N(p^h)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LocalDensity {
    pub p: u64,
    pub h_used: u32,
    /// The character-sum value `S_h = Σ_{j <= h} A_N(p^j)`.
    pub value: f64,
    pub stabilized: bool,
    /// `p^{h(1-d)} #{x mod p^h : Σ c_i x_i^k ≡ N}` at `h = congruenceDepth`.
    pub congruence_value: f64,
    /// Deepest `h` with `p^h <= CONGRUENCE_CAP`, capped at `hUsed`.
    pub congruence_depth: u32,
    /// `|S_h - congruenceValue|` at `h = congruenceDepth`.
    pub dual_gap: f64,
    /// `|S_h - S_{h-1}|`.
    pub last_step: f64,
}

impl SingularEngine {
    /// Smallest `h` at which the stopping test is allowed to fire.
    ///
    /// Past `v_p(N) + γ_p + max v_p(c_i)`, with `γ_p` the Hensel lifting
    /// depth (1 if `p ∤ k`, `θ + 1` for odd `p` with `p^θ || k`, `θ + 2` for
    /// `p = 2 | k`), every further `A_N(p^h)` vanishes.
    pub fn min_depth(&self, n: u64, p: u64) -> u32 {
        let theta = valuation(self.k as u64, p);
        let gamma = if theta == 0 {
            1
        } else if p == 2 {
            theta + 2
        } else {
            theta + 1
        };
        let vn = if n == 0 { 0 } else { valuation(n, p) };
        let vc = self
            .groups
            .iter()
            .map(|&(c, _)| valuation(c, p))
            .max()
            .unwrap_or(0);
        (vn + gamma + vc).max(2)
    }

    /// Depth budget `2k + ⌈log_p N⌉ + 4`, never below [`Self::min_depth`].
    pub fn depth_budget(&self, n: u64, p: u64) -> u32 {
        let mut log = 0u32;
        let mut pw = 1u128;
        while pw < n as u128 {
            pw *= p as u128;
            log += 1;
        }
        (2 * self.k + log + 4).max(self.min_depth(n, p))
    }

    /// Probability distribution of `Σ c_i x_i^k mod m` for uniform `x_i`.
    fn residue_distribution(&self, m: u64) -> Arc<Vec<f64>> {
        if let Some(t) = self.density.lock().expect("cache lock").get(&m) {
            return Arc::clone(t);
        }
        let ms = m as usize;
        let weight = 1.0 / m as f64;
        let mut dist = vec![0.0f64; ms];
        dist[0] = 1.0;
        for &(c, mult) in &self.groups {
            let mut counts = vec![0u32; ms];
            for x in 0..m {
                let r = (pow_mod(x, self.k as u64, m) as u128 * c as u128 % m as u128) as usize;
                counts[r] += 1;
            }
            let kernel: Vec<(usize, f64)> = counts
                .iter()
                .enumerate()
                .filter(|(_, &n)| n > 0)
                .map(|(r, &n)| (r, n as f64 * weight))
                .collect();
            for _ in 0..mult {
                let mut next = vec![0.0f64; ms];
                for (s, &ps) in dist.iter().enumerate() {
                    if ps == 0.0 {
                        continue;
                    }
                    for &(r, pr) in &kernel {
                        let t = s + r;
                        next[if t >= ms { t - ms } else { t }] += ps * pr;
                    }
                }
                dist = next;
            }
        }
        let dist = Arc::new(dist);
        self.density
            .lock()
            .expect("cache lock")
            .insert(m, Arc::clone(&dist));
        dist
    }

    /// `p^{h(1-d)} #{x mod p^h : Σ c_i x_i^k ≡ N (mod p^h)}`.
    pub fn congruence_density(&self, n: u64, p: u64, h: u32) -> Result<f64> {
        let m = (p as u128)
            .checked_pow(h)
            .filter(|&m| m <= MAX_PRIME_POWER as u128)
            .ok_or_else(|| WaringError::invalid("h", format!("{p}^{h} exceeds {MAX_PRIME_POWER}")))? as u64;
        let dist = self.residue_distribution(m);
        Ok(m as f64 * dist[(n % m) as usize])
    }

    /// `χ_N(p)`, accumulated until `h >= min_depth` and the last step is
    /// below `tol`. The character-sum and congruence forms must agree at
    /// every depth up to [`CONGRUENCE_CAP`].
    pub fn local_density(&self, n: u64, p: u64, tol: f64) -> Result<LocalDensity> {
        if !is_prime(p) {
            return Err(WaringError::invalid("p", format!("{p} is not prime")));
        }
        if self.d < 2 {
            return Err(WaringError::invalid("d", "local densities need d >= 2"));
        }
        if tol.is_nan() || tol <= 0.0 {
            return Err(WaringError::invalid("tol", "must be positive"));
        }
        let h_min = self.min_depth(n, p);
        let budget = self.depth_budget(n, p);
        let mut acc = CompensatedSum::new();
        acc.add(Complex64::new(1.0, 0.0));
        let mut pw = 1u64;
        let mut last_step = f64::INFINITY;
        let mut dual_gap = f64::NAN;
        let mut cong = f64::NAN;
        let mut cong_depth = 0;
        let mut dual_ok = true;
        for h in 1..=budget {
            pw = match pw.checked_mul(p).filter(|&v| v <= MAX_PRIME_POWER) {
                Some(v) => v,
                None => {
                    return Err(WaringError::Stabilization {
                        p,
                        h,
                        last_step,
                        dual_gap,
                    })
                }
            };
            let term = self.arc_sum_real(n, pw);
            acc.add(Complex64::new(term, 0.0));
            let s = acc.value().re;
            last_step = term.abs();
            if pw <= CONGRUENCE_CAP {
                cong = self.congruence_density(n, p, h)?;
                cong_depth = h;
                dual_gap = (s - cong).abs();
                dual_ok = dual_gap <= DUAL_TOL.max(tol) * s.abs().max(1.0);
            }
            if h >= h_min && last_step < tol && dual_ok {
                return Ok(LocalDensity {
                    p,
                    h_used: h,
                    value: s,
                    stabilized: true,
                    congruence_value: cong,
                    congruence_depth: cong_depth,
                    dual_gap,
                    last_step,
                });
            }
        }
        Err(WaringError::Stabilization {
            p,
            h: budget,
            last_step,
            dual_gap,
        })
    }

    /// `Π_{p <= P} χ_N(p)` with every factor reported.
    pub fn euler_product(&self, n: u64, big_p: u64, tol: f64) -> Result<EulerProduct> {
        if big_p < 2 {
            return Err(WaringError::invalid("P", "must be at least 2"));
        }
        let factors: Vec<LocalDensity> = primes_up_to(big_p)
            .into_par_iter()
            .map(|p| self.local_density(n, p, tol))
            .collect::<Result<_>>()?;
        let value = factors.iter().map(|f| f.value).product();
        Ok(EulerProduct {
            p_max: big_p,
            value,
            factors,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EulerProduct {
    #[serde(rename = "P")]
    pub p_max: u64,
    pub value: f64,
    pub factors: Vec<LocalDensity>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_forms_agree() {
        let eng = SingularEngine::new(2, 5).unwrap();
        let ld = eng.local_density(1, 3, 1e-9).unwrap();
        assert!(ld.stabilized);
        assert!(ld.dual_gap < 1e-9);
        assert!(ld.value > 0.0);
    }

    #[test]
    fn congruence_count_by_enumeration() {
        // k = 2, d = 3, modulus 9: count solutions directly
        let eng = SingularEngine::new(2, 3).unwrap();
        for n in 0..9u64 {
            let mut hits = 0u64;
            for x in 0..9u64 {
                for y in 0..9u64 {
                    for z in 0..9u64 {
                        if (x * x + y * y + z * z) % 9 == n {
                            hits += 1;
                        }
                    }
                }
            }
            let want = hits as f64 / 81.0;
            assert!((eng.congruence_density(n, 3, 2).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn terms_vanish_beyond_min_depth() {
        for (k, d) in [(2u32, 5u32), (2, 4), (3, 9), (4, 17), (2, 7)] {
            let eng = SingularEngine::new(k, d).unwrap();
            for p in [2u64, 3, 5, 7] {
                for n in [1u64, 2, 8, 16, 48, 81, 162, 243, 256, 500, 625] {
                    let h = eng.min_depth(n, p);
                    for extra in 1..=3 {
                        let q = p.pow(h + extra);
                        if q > 5_000 {
                            continue;
                        }
                        let a = eng.arc_sum(n, q).unwrap().value.re;
                        assert!(a.abs() < 1e-10, "k={k} d={d} p={p} N={n} h={}: {a}", h + extra);
                    }
                }
            }
        }
    }

    #[test]
    fn large_prime_power_past_the_congruence_cap() {
        // 47^2 | N forces depth 3, beyond the cross-check cap
        let eng = SingularEngine::new(2, 9).unwrap();
        let ld = eng.local_density(2 * 47 * 47, 47, 1e-12).unwrap();
        assert!(ld.h_used >= 3);
        assert_eq!(ld.congruence_depth, 2);
        assert!(ld.dual_gap < 1e-12);
        let direct = eng.arc_sum(2 * 47 * 47, 47u64.pow(3)).unwrap().value.re;
        assert!(direct.abs() < 1e-12);
    }

    #[test]
    fn odd_valuation_needs_depth() {
        // N = 3^4 with k = 2, d = 5: A(3) = 0 but the product is not done
        let eng = SingularEngine::new(2, 5).unwrap();
        let ld = eng.local_density(81, 3, 1e-9).unwrap();
        assert!(ld.h_used >= 6);
        let cong = eng.congruence_density(81, 3, 8).unwrap();
        assert!((ld.value - cong).abs() < 1e-9);
    }

    #[test]
    fn rejects_composite_and_small_d() {
        let eng = SingularEngine::new(2, 5).unwrap();
        assert!(eng.local_density(1, 4, 1e-9).unwrap_err().is_validation());
        let eng = SingularEngine::new(2, 1).unwrap();
        assert!(eng.local_density(1, 3, 1e-9).unwrap_err().is_validation());
    }

    #[test]
    fn positive_for_many_variables() {
        let eng = SingularEngine::new(2, 5).unwrap();
        for n in 1..60 {
            let ep = eng.euler_product(n, 30, 1e-10).unwrap();
            assert!(ep.value > 0.0, "N = {n}");
            assert!(ep.factors.iter().all(|f| f.value > 0.0));
        }
    }
}

//! Complete exponential sums `G(a/q) = (1/q) Σ_{r=1}^q e(a r^k / q)`.

use num_complex::Complex64;

use crate::arith::{gcd, pow_mod};
use crate::error::{Result, WaringError};
use std::collections::HashMap;

use crate::phase::{root_of_unity, CompensatedSum, RootTable};

/// Histogram `ρ(s) = #{1 <= r <= q : r^k ≡ s (mod q)}`, zero entries dropped.
#[derive(Debug, Clone)]
pub struct ResidueHistogram {
    q: u64,
    entries: Vec<(u64, u64)>,
}

impl ResidueHistogram {
    pub fn new(k: u32, q: u64) -> Self {
        let mut counts = vec![0u64; q as usize];
        for r in 1..=q {
            counts[pow_mod(r, k as u64, q) as usize] += 1;
        }
        let entries = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(s, &c)| (s as u64, c))
            .collect();
        ResidueHistogram { q, entries }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.entries
    }

    /// `G(b/q)` for any integer `b` (not necessarily coprime to `q`).
    pub fn gauss(&self, b: u64) -> Complex64 {
        let q = self.q;
        let b = b % q;
        let mut acc = CompensatedSum::new();
        for &(s, c) in &self.entries {
            let j = (b as u128 * s as u128 % q as u128) as i128;
            acc.add(root_of_unity(j, q) * c as f64);
        }
        acc.value() / q as f64
    }

    /// `G(b/q)` for every `b = 0..q`, reusing one root table and stepping
    /// the phase indices incrementally.
    pub fn gauss_all(&self, roots: &RootTable) -> Vec<Complex64> {
        let q = self.q as usize;
        debug_assert_eq!(roots.modulus(), self.q);
        let mut idx: Vec<usize> = vec![0; self.entries.len()];
        let steps: Vec<usize> = self.entries.iter().map(|&(s, _)| s as usize).collect();
        let weights: Vec<f64> = self.entries.iter().map(|&(_, c)| c as f64).collect();
        let inv_q = 1.0 / q as f64;
        let mut out = Vec::with_capacity(q);
        for _ in 0..q {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..idx.len() {
                acc += roots.get_reduced(idx[i]) * weights[i];
                let next = idx[i] + steps[i];
                idx[i] = if next >= q { next - q } else { next };
            }
            out.push(acc * inv_q);
        }
        out
    }
}

fn validate(a: u64, q: u64) -> Result<()> {
    if q < 1 {
        return Err(WaringError::invalid("q", "modulus must be at least 1"));
    }
    if a < 1 || a > q {
        return Err(WaringError::invalid("a", format!("need 1 <= a <= q, got a = {a}, q = {q}")));
    }
    if gcd(a, q) != 1 {
        return Err(WaringError::invalid("a", format!("gcd({a}, {q}) != 1")));
    }
    Ok(())
}

/// `G(a/q)` through the residue histogram, with every phase reduced mod `q`
/// in integers before conversion to floating point.
pub fn gauss_sum(k: u32, a: u64, q: u64) -> Result<Complex64> {
    validate(a, q)?;
    if q == 1 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(ResidueHistogram::new(k, q).gauss(a))
}

/// `G(a/q)` summed term by term over `r = 1..q`.
pub fn gauss_sum_direct(k: u32, a: u64, q: u64) -> Result<Complex64> {
    validate(a, q)?;
    let mut acc = CompensatedSum::new();
    for r in 1..=q {
        let s = pow_mod(r, k as u64, q);
        acc.add(root_of_unity((a as u128 * s as u128 % q as u128) as i128, q));
    }
    Ok(acc.value() / q as f64)
}

/// Direct sums for every `a = 0..q` at once (`r^k mod q` computed once).
pub fn gauss_all_direct(k: u32, q: u64, roots: &RootTable) -> Vec<Complex64> {
    let qs = q as usize;
    let powers: Vec<usize> = (1..=q).map(|r| pow_mod(r, k as u64, q) as usize).collect();
    let mut idx = vec![0usize; qs];
    let inv_q = 1.0 / q as f64;
    let mut out = Vec::with_capacity(qs);
    for _ in 0..qs {
        let mut acc = Complex64::new(0.0, 0.0);
        for (slot, &s) in idx.iter_mut().zip(&powers) {
            acc += roots.get_reduced(*slot);
            let next = *slot + s;
            *slot = if next >= qs { next - qs } else { next };
        }
        out.push(acc * inv_q);
    }
    out
}

/// `G(b/q)` for every `b = 0..q`.
///
/// For a unit `b`, `G(b/q)` only depends on the coset of `b` modulo `k`-th
/// powers of units, so one histogram sum per coset suffices. A non-unit `b`
/// with `g = gcd(b, q)` reduces to `G((b/g)/(q/g))`.
pub fn gauss_table(k: u32, q: u64) -> Vec<Complex64> {
    let mut memo = HashMap::new();
    fill_table(k, q, &mut memo);
    memo.remove(&q).expect("table filled")
}

fn fill_table(k: u32, q: u64, memo: &mut HashMap<u64, Vec<Complex64>>) {
    if memo.contains_key(&q) {
        return;
    }
    let qs = q as usize;
    let one = Complex64::new(1.0, 0.0);
    let mut table = vec![one; qs];
    if q > 1 {
        let hist = ResidueHistogram::new(k, q);
        let is_unit: Vec<bool> = (0..q).map(|b| gcd(b, q) == 1).collect();
        let mut is_power = vec![false; qs];
        for u in 1..q {
            if is_unit[u as usize] {
                is_power[pow_mod(u, k as u64, q) as usize] = true;
            }
        }
        let powers: Vec<u64> = (1..q).filter(|&h| is_power[h as usize]).collect();
        let mut done = vec![false; qs];
        done[0] = true;
        for b in 1..q {
            let bi = b as usize;
            if done[bi] {
                continue;
            }
            if is_unit[bi] {
                let g = hist.gauss(b);
                for &h in &powers {
                    let idx = (b as u128 * h as u128 % q as u128) as usize;
                    table[idx] = g;
                    done[idx] = true;
                }
            } else {
                let g = gcd(b, q);
                fill_table(k, q / g, memo);
                table[bi] = memo[&(q / g)][(b / g) as usize];
                done[bi] = true;
            }
        }
    }
    memo.insert(q, table);
}

//! Exact big-integer convolution through number-theoretic transforms over
//! several 31-bit primes, recombined with Garner's algorithm.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use std::sync::OnceLock;

use crate::arith::{factorize, is_prime, pow_mod};

/// Largest transform size supported by the prime family `c * 2^20 + 1`.
pub(crate) const MAX_LEN: usize = 1 << 20;

#[derive(Debug, Clone, Copy)]
struct NttPrime {
    p: u64,
    g: u64,
}

fn prime_family() -> &'static [NttPrime] {
    static PRIMES: OnceLock<Vec<NttPrime>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        (1024u64..2048)
            .rev()
            .map(|c| (c << 20) + 1)
            .filter(|&p| is_prime(p))
            .map(|p| NttPrime {
                p,
                g: primitive_root(p),
            })
            .collect()
    })
}

fn primitive_root(p: u64) -> u64 {
    let factors = factorize(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&(f, _)| pow_mod(g, (p - 1) / f, p) != 1))
        .expect("prime has a primitive root")
}

fn transform(a: &mut [u64], invert: bool, prime: NttPrime) {
    let n = a.len();
    let p = prime.p;
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j ^= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(prime.g, (p - 1) / len as u64, p);
        if invert {
            w = pow_mod(w, p - 2, p);
        }
        let half = len / 2;
        let mut powers = Vec::with_capacity(half);
        let mut cur = 1u64;
        for _ in 0..half {
            powers.push(cur);
            cur = cur * w % p;
        }
        for start in (0..n).step_by(len) {
            for i in 0..half {
                let u = a[start + i];
                let v = a[start + i + half] * powers[i] % p;
                a[start + i] = if u + v >= p { u + v - p } else { u + v };
                a[start + i + half] = if u >= v { u - v } else { u + p - v };
            }
        }
        len <<= 1;
    }
    if invert {
        let inv_n = pow_mod(n as u64, p - 2, p);
        for x in a.iter_mut() {
            *x = *x * inv_n % p;
        }
    }
}

fn residue(x: &BigUint, p: u64) -> u64 {
    if let Some(v) = x.to_u64() {
        return v % p;
    }
    x.to_u32_digits()
        .iter()
        .rev()
        .fold(0u64, |acc, &d| ((acc << 32) | d as u64) % p)
}

/// `(cur * kernel)` truncated to `len` entries. `kernel` holds
/// `(position, weight)` pairs. Returns `None` when the transform would be
/// longer than [`MAX_LEN`] or the prime family is too small for the bound.
pub(crate) fn convolve(cur: &[BigUint], kernel: &[(usize, u64)], len: usize) -> Option<Vec<BigUint>> {
    let size = (cur.len() + len).next_power_of_two();
    if size > MAX_LEN {
        return None;
    }
    let max_bits = cur.iter().map(|x| x.bits()).max().unwrap_or(0);
    let weight_sum: u128 = kernel
        .iter()
        .filter(|(p, _)| *p < len)
        .map(|(_, w)| *w as u128)
        .sum();
    let bound_bits = max_bits + 128 - weight_sum.leading_zeros() as u64 + 1;
    let needed = (bound_bits as usize).div_ceil(30);
    let family = prime_family();
    if needed > family.len() {
        return None;
    }
    let primes = &family[..needed];

    let images: Vec<Vec<u64>> = primes
        .iter()
        .map(|&prime| {
            let mut a = vec![0u64; size];
            for (slot, x) in a.iter_mut().zip(cur) {
                *slot = residue(x, prime.p);
            }
            let mut b = vec![0u64; size];
            for &(pos, w) in kernel {
                if pos < len {
                    b[pos] = (b[pos] + w) % prime.p;
                }
            }
            transform(&mut a, false, prime);
            transform(&mut b, false, prime);
            for (x, y) in a.iter_mut().zip(&b) {
                *x = *x * y % prime.p;
            }
            transform(&mut a, true, prime);
            a.truncate(len);
            a
        })
        .collect();

    // Garner: inverses of prefix products
    let r = primes.len();
    let mut inv = vec![vec![0u64; r]; r];
    for i in 0..r {
        for j in 0..i {
            inv[j][i] = pow_mod(primes[j].p % primes[i].p, primes[i].p - 2, primes[i].p);
        }
    }
    let out = (0..len)
        .map(|t| {
            let mut digits = vec![0u64; r];
            for i in 0..r {
                let pi = primes[i].p;
                let mut x = images[i][t];
                for j in 0..i {
                    x = (x + pi - digits[j] % pi) % pi * inv[j][i] % pi;
                }
                digits[i] = x;
            }
            let mut acc = BigUint::zero();
            for i in (0..r).rev() {
                acc = acc * primes[i].p + digits[i];
            }
            acc
        })
        .collect();
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_has_enough_primes() {
        let fam = prime_family();
        assert!(fam.len() >= 20, "only {} primes", fam.len());
        for pr in fam {
            assert_eq!((pr.p - 1) % (1 << 20), 0);
            assert_eq!(pow_mod(pr.g, (pr.p - 1) / 2, pr.p), pr.p - 1);
        }
    }

    #[test]
    fn matches_schoolbook_on_wide_values() {
        let cur: Vec<BigUint> = (0..50u64)
            .map(|i| BigUint::from(3u32).pow(40 + i as u32) + i)
            .collect();
        let kernel = vec![(0usize, 1u64), (3, 2), (7, 5), (60, 1)];
        let len = 64;
        let got = convolve(&cur, &kernel, len).unwrap();
        for t in 0..len {
            let mut want = BigUint::zero();
            for &(p, w) in &kernel {
                if p <= t && t - p < cur.len() {
                    want += &cur[t - p] * w;
                }
            }
            assert_eq!(got[t], want, "t = {t}");
        }
    }
}

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use std::fmt;

use crate::arith::gcd;
use crate::error::{Result, WaringError};

/// A reduced fraction `a/q` with `1 <= a <= q`; `1/1` stands for the
/// residue class of `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fraction {
    pub a: u64,
    pub q: u64,
}

impl Fraction {
    pub fn new(a: u64, q: u64) -> Result<Self> {
        if q < 1 || a < 1 || a > q {
            return Err(WaringError::invalid("fraction", format!("need 1 <= a <= q, got {a}/{q}")));
        }
        if gcd(a, q) != 1 {
            return Err(WaringError::invalid("fraction", format!("{a}/{q} is not reduced")));
        }
        Ok(Fraction { a, q })
    }

    /// Reduces `h/k` (any `0 <= h <= k`) to the canonical representative.
    pub(crate) fn canonical(h: u64, k: u64) -> Self {
        if h == 0 || h == k {
            return Fraction { a: 1, q: 1 };
        }
        let g = gcd(h, k);
        Fraction { a: h / g, q: k / g }
    }

    pub fn value(&self) -> f64 {
        self.a as f64 / self.q as f64
    }

    /// Distance from `xi` to `a/q` on the circle `ℝ/ℤ`.
    pub fn circle_distance(&self, xi: f64) -> f64 {
        let r = xi - self.value();
        (r - r.round()).abs()
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.q)
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirichletApprox {
    pub fraction: Fraction,
    pub distance: f64,
    /// False only when the inequality could not be confirmed exactly.
    pub certified: bool,
}

/// Exact binary value of a finite, nonnegative `x` as `num / 2^shift`.
fn dyadic(x: f64) -> (BigUint, u32) {
    if x == 0.0 {
        return (BigUint::zero(), 0);
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let (mant, e) = if exp == 0 {
        (bits & ((1 << 52) - 1), -1074)
    } else {
        ((bits & ((1 << 52) - 1)) | (1 << 52), exp - 1075)
    };
    if e >= 0 {
        (BigUint::from(mant) << e as u32, 0)
    } else {
        (BigUint::from(mant), (-e) as u32)
    }
}

/// Continued-fraction convergents `h/k` of `num/den` with `k <= limit`, in
/// increasing order of `k`.
pub(crate) fn convergents(xi: f64, limit: u64) -> Vec<(u64, u64)> {
    let (mut num, shift) = dyadic(xi);
    let mut den = BigUint::from(1u32) << shift;
    let (mut h0, mut h1) = (0u128, 1u128);
    let (mut k0, mut k1) = (1u128, 0u128);
    let mut out = Vec::new();
    while !den.is_zero() {
        let a = &num / &den;
        let rem = &num % &den;
        let a: u128 = match u128::try_from(&a) {
            Ok(v) => v,
            Err(_) => break,
        };
        let (h2, k2) = match (
            a.checked_mul(h1).and_then(|v| v.checked_add(h0)),
            a.checked_mul(k1).and_then(|v| v.checked_add(k0)),
        ) {
            (Some(h), Some(k)) => (h, k),
            _ => break,
        };
        if k2 > limit as u128 {
            break;
        }
        out.push((h2 as u64, k2 as u64));
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        num = den;
        den = rem;
    }
    out
}

/// Exact test of `|xi - h/k| <= 1/(k Q)` on the circle.
fn within(xi: f64, h: u64, k: u64, big_q: u64) -> bool {
    let (num, shift) = dyadic(xi);
    let den = BigInt::from(1) << shift;
    let num = BigInt::from(num);
    // |num k - h den| * Q <= den, with the q = 1 case measured on the circle
    let mut diff = (&num * BigInt::from(k) - BigInt::from(h) * &den).abs();
    if k == 1 {
        let other = (&num - &den).abs();
        let zero = num.abs();
        diff = diff.min(other).min(zero);
    }
    diff * BigInt::from(big_q) <= den
}

/// Smallest `q <= Q` with some `a` such that `|ξ - a/q| <= 1/(qQ)`.
///
/// Candidates are the continued-fraction convergents of the exact binary
/// value of `ξ`; the inequality is checked in exact integer arithmetic.
pub fn dirichlet_approx(xi: f64, big_q: u64) -> Result<DirichletApprox> {
    if big_q < 1 {
        return Err(WaringError::invalid("Q", "must be at least 1"));
    }
    if !(0.0..=1.0).contains(&xi) {
        return Err(WaringError::invalid("xi", format!("must lie in [0, 1], got {xi}")));
    }
    let cands = convergents(xi, big_q);
    for &(h, k) in &cands {
        if within(xi, h, k, big_q) {
            let fraction = Fraction::canonical(h, k);
            return Ok(DirichletApprox {
                fraction,
                distance: fraction.circle_distance(xi),
                certified: true,
            });
        }
    }
    let (h, k) = cands.last().copied().unwrap_or((0, 1));
    let fraction = Fraction::canonical(h, k);
    Ok(DirichletApprox {
        fraction,
        distance: fraction.circle_distance(xi),
        certified: false,
    })
}

//! Phases `e(t) = exp(2πit)` with careful argument reduction, and
//! compensated complex summation.

use num_complex::Complex64;
use std::f64::consts::TAU;

/// `e(t) = exp(2πit)`.
pub fn e(t: f64) -> Complex64 {
    let r = t - t.round();
    let (s, c) = (TAU * r).sin_cos();
    Complex64::new(c, s)
}

/// `e(j/q)` with the rational phase reduced in integers first.
pub fn root_of_unity(j: i128, q: u64) -> Complex64 {
    let q = q as i128;
    let mut r = j.rem_euclid(q);
    if 2 * r > q {
        r -= q;
    }
    let (s, c) = (TAU * (r as f64 / q as f64)).sin_cos();
    Complex64::new(c, s)
}

/// Table of `e(j/q)` for `j = 0..q`.
#[derive(Debug, Clone)]
pub struct RootTable {
    q: u64,
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(q: u64) -> Self {
        let roots = (0..q).map(|j| root_of_unity(j as i128, q)).collect();
        RootTable { q, roots }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn get(&self, j: u64) -> Complex64 {
        self.roots[(j % self.q) as usize]
    }

    #[inline]
    pub fn get_reduced(&self, j: usize) -> Complex64 {
        self.roots[j]
    }
}

/// Fractional part of `x * m` for an integer `m`, accurate to a few ulps of
/// 1 regardless of the size of `m`.
///
/// `m` is split into 40-bit chunks, each product is formed exactly as a sum
/// of two doubles (fma), and only fractional parts are accumulated.
pub fn frac_mul(x: f64, m: u128) -> f64 {
    let mut acc = 0.0;
    let mut rest = m;
    let mut scale = x;
    while rest != 0 {
        let chunk = (rest & ((1u128 << 40) - 1)) as f64;
        let p = scale * chunk;
        let err = scale.mul_add(chunk, -p);
        acc += frac(p) + frac(err);
        acc = frac(acc);
        rest >>= 40;
        scale *= (1u64 << 40) as f64;
    }
    acc
}

/// `e(x * m)` computed through [`frac_mul`].
pub fn e_mul(x: f64, m: i128) -> Complex64 {
    let f = frac_mul(x, m.unsigned_abs());
    if m < 0 {
        e(-f)
    } else {
        e(f)
    }
}

#[inline]
fn frac(v: f64) -> f64 {
    v - v.floor()
}

/// Neumaier-compensated sum of complex values.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: Complex64) {
        self.sum.re = neumaier(self.sum.re, v.re, &mut self.comp.re);
        self.sum.im = neumaier(self.sum.im, v.im, &mut self.comp.im);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

#[inline]
fn neumaier(sum: f64, v: f64, comp: &mut f64) -> f64 {
    let t = sum + v;
    if sum.abs() >= v.abs() {
        *comp += (sum - t) + v;
    } else {
        *comp += (v - t) + sum;
    }
    t
}

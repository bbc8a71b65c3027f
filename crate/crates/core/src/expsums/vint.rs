//! The oscillatory integral `v(θ) = ∫_0^X e(θ z^k) dz`.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

use crate::error::{Result, WaringError};
use crate::gamma::gamma;
use crate::phase::{e, frac_mul};
use crate::quad::{adaptive, gk15, GaussLegendre};
use crate::report::ser_complex;

/// Maximum number of half-period panels [`v_integral`] will lay out.
pub const V_PANEL_BUDGET: usize = 4_000_000;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct VIntegral {
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    /// Summed absolute error estimate.
    pub error: f64,
    pub panels: usize,
}

/// `v(θ)` by adaptive quadrature in `u = z^k`, one panel per half period of
/// `e(θu)`. The first panel is integrated in `z`, which removes the
/// `u^{1/k-1}` endpoint singularity. `tol` is an absolute error target.
pub fn v_integral(k: u32, x: u64, theta: f64, tol: f64) -> Result<VIntegral> {
    if k < 1 {
        return Err(WaringError::invalid("k", "must be at least 1"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(WaringError::invalid("tol", "must be positive"));
    }
    if !theta.is_finite() {
        return Err(WaringError::invalid("theta", "must be finite"));
    }
    let upper = x as f64;
    if theta == 0.0 || x == 0 {
        return Ok(VIntegral {
            value: Complex64::new(upper, 0.0),
            error: 0.0,
            panels: 1,
        });
    }
    if theta < 0.0 {
        let r = v_integral(k, x, -theta, tol)?;
        return Ok(VIntegral {
            value: r.value.conj(),
            ..r
        });
    }
    let kf = k as f64;
    let big_u = upper.powi(k as i32);
    let half = 0.5 / theta;
    let panels_f = (big_u / half).ceil();
    if panels_f > V_PANEL_BUDGET as f64 {
        return Err(WaringError::NonConvergence {
            what: format!("v_integral: {panels_f:.0} panels exceed budget {V_PANEL_BUDGET}"),
            estimate: f64::INFINITY,
            tol,
        });
    }
    let panels = panels_f.max(1.0) as usize;
    let panel_tol = tol / panels as f64;
    let fail = |err: f64| WaringError::NonConvergence {
        what: "v_integral".to_string(),
        estimate: err,
        tol,
    };

    let integrate = |f: &dyn Fn(f64) -> Complex64, a: f64, b: f64| -> Result<(Complex64, f64)> {
        let (v, err) = gk15(&f, a, b);
        if err <= panel_tol {
            return Ok((v, err));
        }
        adaptive(&f, a, b, panel_tol, 200)
            .map(|q| (q.value, q.error))
            .map_err(|q| fail(q.error))
    };

    // first panel in z
    let z1 = if panels == 1 { upper } else { half.powf(1.0 / kf) };
    let (mut value, mut error) = integrate(&|z: f64| e(theta * z.powi(k as i32)), 0.0, z1)?;

    let exponent = 1.0 / kf - 1.0;
    for j in 1..panels {
        let start = j as f64 * half;
        let len = (big_u - start).min(half);
        if len <= 0.0 {
            break;
        }
        // e(θu) = e(j/2) e(θ(u - start)) = ±e(θs)
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let f = |s: f64| e(theta * s) * ((start + s).powf(exponent) * sign / kf);
        let (v, err) = integrate(&f, 0.0, len)?;
        value += v;
        error += err;
    }
    if error > tol {
        return Err(fail(error));
    }
    Ok(VIntegral {
        value,
        error,
        panels,
    })
}

/// Fast evaluator of `v(θ) = ∫_0^Y e(θ z^k) dz` for a fixed upper limit
/// `Y = U^{1/k}`.
///
/// With `t = θU`, `v(θ) = Y w(t)` where `w(t) = ∫_0^1 e(t y^k) dy`. For
/// `t > 1` the contour is rotated onto `y^k = 1 + is/t`, giving
///
/// `w(t) = e^{iπ/2k} Γ(1+1/k) (2πt)^{-1/k} - e(t) (i/(kt)) J(t)`,
/// `J(t) = ∫_0^∞ (1 + is/t)^{1/k-1} e^{-2πs} ds`,
///
/// where `J` is integrated numerically for moderate `t` and expanded
/// asymptotically for large `t`.
#[derive(Debug, Clone)]
pub struct VFunction {
    k: u32,
    upper: f64,
    upper_pow: u128,
    beta: f64,
    lead: Complex64,
    small: GaussLegendre,
    tail: GaussLegendre,
}

const SERIES_FROM: f64 = 25.0;
const TAIL_END: f64 = 8.0;
const TAIL_PANELS: usize = 16;

impl VFunction {
    /// Upper limit `X`, so `U = X^k`.
    pub fn new(k: u32, x: u64) -> Result<Self> {
        let u = (x as u128)
            .checked_pow(k)
            .ok_or_else(|| WaringError::invalid("X", "X^k does not fit in 128 bits"))?;
        Self::build(k, u, x as f64)
    }

    /// Upper limit `U^{1/k}` for an integer `U` (used with `U = N`).
    pub fn with_upper_power(k: u32, u: u64) -> Result<Self> {
        Self::build(k, u as u128, (u as f64).powf(1.0 / k as f64))
    }

    fn build(k: u32, upper_pow: u128, upper: f64) -> Result<Self> {
        if k < 1 {
            return Err(WaringError::invalid("k", "must be at least 1"));
        }
        let kf = k as f64;
        let lead = Complex64::from_polar(gamma(1.0 + 1.0 / kf) * TAU.powf(-1.0 / kf), PI / (2.0 * kf));
        Ok(VFunction {
            k,
            upper,
            upper_pow,
            beta: 1.0 / kf - 1.0,
            lead,
            small: GaussLegendre::new(40),
            tail: GaussLegendre::new(16),
        })
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn upper_pow(&self) -> u128 {
        self.upper_pow
    }

    /// `v(θ)`.
    pub fn eval(&self, theta: f64) -> Complex64 {
        if theta < 0.0 {
            return self.eval(-theta).conj();
        }
        let t = theta * self.upper_pow as f64;
        let phase = e(frac_mul(theta, self.upper_pow));
        self.upper * self.normalized_with_phase(t, phase)
    }

    /// `w(t) = v(t/U)/Y`.
    pub fn normalized(&self, t: f64) -> Complex64 {
        if t < 0.0 {
            return self.normalized(-t).conj();
        }
        self.normalized_with_phase(t, e(t))
    }

    fn normalized_with_phase(&self, t: f64, phase: Complex64) -> Complex64 {
        if t == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        let k = self.k as i32;
        if t <= 1.0 {
            let f = |y: f64| e(t * y.powi(k));
            return self.small.integrate(&f, 0.0, 1.0);
        }
        let kf = self.k as f64;
        let first = self.lead * t.powf(-1.0 / kf);
        let second = phase * Complex64::new(0.0, 1.0 / (kf * t)) * self.tail_integral(t);
        first - second
    }

    fn tail_integral(&self, t: f64) -> Complex64 {
        let beta = self.beta;
        if t >= SERIES_FROM {
            // Σ β(β-1)...(β-n+1) (i/(2πt))^n / (2π)
            let step = Complex64::new(0.0, 1.0 / (TAU * t));
            let mut term = Complex64::new(1.0 / TAU, 0.0);
            let mut sum = term;
            for n in 0..80 {
                term = term * step * (beta - n as f64);
                sum += term;
                if term.norm() < 1e-18 * sum.norm() {
                    break;
                }
            }
            return sum;
        }
        let f = |s: f64| Complex64::new(1.0, s / t).powf(beta) * (-TAU * s).exp();
        self.tail.integrate_composite(&f, 0.0, TAIL_END, TAIL_PANELS)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Midpoint rule with `n` panels.
    fn riemann(k: u32, x: f64, theta: f64, n: usize) -> Complex64 {
        let h = x / n as f64;
        (0..n)
            .map(|i| e(theta * ((i as f64 + 0.5) * h).powi(k as i32)))
            .sum::<Complex64>()
            * h
    }

    #[test]
    fn zero_frequency() {
        assert_eq!(v_integral(2, 10, 0.0, 1e-10).unwrap().value, Complex64::new(10.0, 0.0));
        let vf = VFunction::new(2, 10).unwrap();
        assert_eq!(vf.eval(0.0), Complex64::new(10.0, 0.0));
    }

    #[test]
    fn riemann_oracle() {
        let cases = [(2u32, 1u64, 1.0), (3, 2, 0.05), (2, 3, 0.7), (4, 2, 0.3)];
        for &(k, x, theta) in &cases {
            let want = riemann(k, x as f64, theta, 1_000_000);
            let got = v_integral(k, x, theta, 1e-11).unwrap().value;
            assert!((got - want).norm() < 1e-8, "k={k} X={x} θ={theta}: {got} vs {want}");
            let fast = VFunction::new(k, x).unwrap().eval(theta);
            assert!((fast - want).norm() < 1e-8, "fast k={k} X={x} θ={theta}: {fast} vs {want}");
        }
    }

    #[test]
    fn routes_agree_across_regimes() {
        for k in 2..=5u32 {
            let x = 12u64;
            let vf = VFunction::new(k, x).unwrap();
            let u = (x as f64).powi(k as i32);
            for &t in &[0.3, 0.99, 1.01, 3.0, 10.0, 24.9, 25.1, 80.0, 700.0, 5000.0] {
                let theta = t / u;
                let slow = v_integral(k, x, theta, 1e-12).unwrap().value;
                let fast = vf.eval(theta);
                assert!(
                    (slow - fast).norm() < 1e-10 * x as f64,
                    "k={k} t={t}: {slow} vs {fast}"
                );
            }
        }
    }

    #[test]
    fn conjugate_symmetry_and_bound() {
        let vf = VFunction::new(3, 9).unwrap();
        for &theta in &[1e-4, 3e-3, 0.02, 0.4, 7.5] {
            let p = v_integral(3, 9, theta, 1e-10).unwrap().value;
            let m = v_integral(3, 9, -theta, 1e-10).unwrap().value;
            assert!((p - m.conj()).norm() < 1e-12);
            assert!(p.norm() <= 9.0 + 1e-12);
            assert!((vf.eval(-theta) - vf.eval(theta).conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn panel_budget_is_enforced() {
        let r = v_integral(3, 1000, 10.0, 1e-8);
        assert!(matches!(r, Err(WaringError::NonConvergence { .. })));
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(v_integral(2, 3, 0.1, 0.0).unwrap_err().is_validation());
    }
}

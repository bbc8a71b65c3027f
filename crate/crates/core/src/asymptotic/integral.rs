use num_complex::Complex64;
use serde::Serialize;

use super::main_term::log_gamma_ratio;
use crate::error::{Result, WaringError};
use crate::expsums::VFunction;
use crate::phase::e;
use crate::quad::adaptive;
use crate::report::ser_complex;

/// Largest window (in units of `t = Nθ`) tried by the singular-integral
/// check.
pub const MAX_WINDOW: f64 = 16384.0;
const START_WINDOW: f64 = 16.0;
const PANEL_INTERVALS: usize = 400;

/// `Π_i v(c_i θ)` for a shared upper limit.
pub(crate) struct Integrand {
    v: VFunction,
    groups: Vec<(u64, u32)>,
}

impl Integrand {
    pub(crate) fn new(v: VFunction, coeffs: Option<&[u64]>, d: u32) -> Self {
        let mut groups: Vec<(u64, u32)> = Vec::new();
        match coeffs {
            Some(c) => {
                for &ci in c {
                    match groups.iter_mut().find(|(g, _)| *g == ci) {
                        Some(entry) => entry.1 += 1,
                        None => groups.push((ci, 1)),
                    }
                }
            }
            None => groups.push((1, d)),
        }
        Integrand { v, groups }
    }

    pub(crate) fn product(&self, theta: f64) -> Complex64 {
        self.groups
            .iter()
            .map(|&(c, m)| self.v.eval(c as f64 * theta).powi(m as i32))
            .product()
    }

    /// `∫_0^b P(θ) e(-Nθ) dθ` by adaptive GK15, with the range cut into
    /// pieces of `step` in θ.
    fn half_line(&self, n: u64, a: f64, b: f64, step: f64, tol: f64, what: &str) -> Result<(Complex64, f64)> {
        let f = |theta: f64| self.product(theta) * e(-(n as f64) * theta);
        let pieces = ((b - a) / step).ceil().max(1.0) as usize;
        let h = (b - a) / pieces as f64;
        let mut total = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        for i in 0..pieces {
            let lo = a + i as f64 * h;
            let hi = if i + 1 == pieces { b } else { lo + h };
            let q = adaptive(&f, lo, hi, tol / pieces as f64, PANEL_INTERVALS).map_err(|q| WaringError::NonConvergence {
                what: what.to_string(),
                estimate: q.error,
                tol,
            })?;
            total += q.value;
            err += q.error;
        }
        Ok((total, err))
    }

    /// `∫_{-w}^{w} P(θ) e(-Nθ) dθ = 2 Re ∫_0^w`, using `P(-θ) = conj P(θ)`.
    pub(crate) fn symmetric(&self, n: u64, w: f64, step: f64, tol: f64, what: &str) -> Result<f64> {
        let (half, _) = self.half_line(n, 0.0, w, step, tol / 2.0, what)?;
        Ok(2.0 * half.re)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SingularIntegralCheck {
    pub k: u32,
    pub d: u32,
    #[serde(rename = "N")]
    pub n: u64,
    /// `∫_{|θ| <= Ξ} v(θ)^d e(-θN) dθ` with `v` integrated up to `N^{1/k}`.
    #[serde(serialize_with = "ser_complex")]
    pub integral: Complex64,
    pub main_term: f64,
    pub relative_deviation: f64,
    /// Window half-width `Ξ`.
    pub window: f64,
    /// Relative change from the last window doubling.
    pub last_increment: f64,
    /// `2 (NΞ)^{1-d/k} / (d/k - 1)` relative to the main term: the tail
    /// shape from `|v(θ)| <= N^{1/k} (1 + N|θ|)^{-1/k}` with constant 1.
    pub tail_shape_bound: f64,
}

/// Integrates `v(θ)^d e(-θN)` over a growing window and compares with
/// `Γ(1+1/k)^d/Γ(d/k) N^{d/k-1}`.
///
/// The upper limit of `v` is the real number `N^{1/k}`; with that choice the
/// identity is exact. The window doubles from `16/N` until one doubling
/// changes the value by less than `tol/10` of the main term.
pub fn singular_integral_check(k: u32, d: u32, n: u64, tol: f64) -> Result<SingularIntegralCheck> {
    crate::instance::validate_power(k)?;
    if d < k + 1 {
        return Err(WaringError::invalid("d", format!("need d >= k + 1 = {}", k + 1)));
    }
    if n < 1 {
        return Err(WaringError::invalid("N", "must be at least 1"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(WaringError::invalid("tol", "must be positive"));
    }
    let v = VFunction::with_upper_power(k, n)?;
    let integrand = Integrand::new(v, None, d);
    let nf = n as f64;
    let kf = k as f64;
    let main = (log_gamma_ratio(k, d) + (d as f64 / kf - 1.0) * nf.ln()).exp();
    let step = 1.0 / nf;
    let quad_tol = 1e-3 * tol * main;
    let what = "singular integral";

    let mut window = START_WINDOW;
    let (mut total, _) = integrand.half_line(n, 0.0, window / nf, step, quad_tol, what)?;
    loop {
        let next = 2.0 * window;
        let (piece, _) = integrand.half_line(n, window / nf, next / nf, step, quad_tol, what)?;
        total += piece;
        window = next;
        let increment = 2.0 * piece.re.abs() / main;
        if increment < tol / 10.0 || window >= MAX_WINDOW {
            let integral = Complex64::new(2.0 * total.re, 0.0);
            let exponent = d as f64 / kf;
            return Ok(SingularIntegralCheck {
                k,
                d,
                n,
                integral,
                main_term: main,
                relative_deviation: (integral.re - main).abs() / main,
                window: window / nf,
                last_increment: increment,
                tail_shape_bound: 2.0 * window.powf(1.0 - exponent) / (exponent - 1.0) / log_gamma_ratio(k, d).exp(),
            });
        }
    }
}

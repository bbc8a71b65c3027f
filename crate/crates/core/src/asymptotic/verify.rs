use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use super::integral::Integrand;
use super::main_term::{main_term, MainTerm};
use crate::arcs::{build_arcs, fourier_ladder_with, ArcDecomposition};
use crate::arith::median;
use crate::count::{count_exact, LadderConfig};
use crate::error::{Result, WaringError};
use crate::expsums::VFunction;
use crate::instance::WaringInstance;
use crate::report::{big_to_f64, csv_line, fmt_f64, ser_big};
use crate::singular::SingularEngine;
use crate::singular::series_threshold as below_positivity_threshold;

/// Relative tolerance of the exact arc split `Mk + mk = r_k(N)`.
pub const SPLIT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub alpha: f64,
    /// Truncation point of the reported truncated series.
    pub series_q: u64,
    /// Largest prime in the Euler product.
    pub euler_p: u64,
    /// Stabilization tolerance for local densities.
    pub tol: f64,
    /// Quadrature tolerance for `A1`, relative to the main term.
    pub quad_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            alpha: 0.25,
            series_q: 1000,
            euler_p: 50,
            tol: 1e-9,
            quad_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationRecord {
    pub instance: WaringInstance,
    pub alpha: f64,
    #[serde(rename = "X")]
    pub x: u64,
    /// `⌊X^α⌋`, the largest major-arc denominator.
    pub q_major: u64,
    #[serde(serialize_with = "ser_big")]
    pub exact_count: BigUint,
    pub main_term: f64,
    /// Euler product over `p <= P`.
    pub singular_series: f64,
    /// Truncated series over `q <= series_q`.
    pub truncated_series: f64,
    pub series_tail_estimate: f64,
    #[serde(rename = "Mk")]
    pub big_mk: f64,
    #[serde(rename = "mk")]
    pub small_mk: f64,
    /// `exactCount - Mk`, the other route to `mk`.
    pub mk_complement: f64,
    #[serde(rename = "A1")]
    pub a1: f64,
    #[serde(rename = "A2")]
    pub a2: f64,
    #[serde(rename = "A3")]
    pub a3: f64,
    pub ratio: f64,
    /// `|Mk - A1|`, `|A1 - A2|`, `|A2 - A3|`, each divided by the main term.
    pub cascade_deltas: [f64; 3],
    pub flags: Vec<String>,
}

pub const VERIFY_CSV_HEADER: &str =
    "k,d,N,alpha,exactCount,mainTerm,singularSeries,Mk,mk,A1,A2,A3,ratio,delta1,delta2,delta3,flags";

impl VerificationRecord {
    pub fn csv_row(&self) -> String {
        csv_line([
            self.instance.k().to_string(),
            self.instance.d().to_string(),
            self.instance.n().to_string(),
            fmt_f64(self.alpha),
            self.exact_count.to_str_radix(10),
            fmt_f64(self.main_term),
            fmt_f64(self.singular_series),
            fmt_f64(self.big_mk),
            fmt_f64(self.small_mk),
            fmt_f64(self.a1),
            fmt_f64(self.a2),
            fmt_f64(self.a3),
            fmt_f64(self.ratio),
            fmt_f64(self.cascade_deltas[0]),
            fmt_f64(self.cascade_deltas[1]),
            fmt_f64(self.cascade_deltas[2]),
            self.flags.join(";"),
        ])
    }
}

/// Position of `(N, d)` relative to `N = d^3` and `N = d^d`.
pub fn regime_label(d: u32, n: u64) -> &'static str {
    let nf = (n as f64).ln();
    let df = (d as f64).ln();
    if nf < 3.0 * df {
        "N<d^3"
    } else if nf < d as f64 * df {
        "d^3<=N<d^d"
    } else {
        "N>=d^d"
    }
}

fn x_of(inst: &WaringInstance, alpha: f64) -> Result<(u64, ArcDecomposition)> {
    let x = inst.x();
    let arcs = build_arcs(inst.k(), x, alpha)?;
    Ok((x, arcs))
}

/// `∫_{|θ| <= w} Π v(c_i θ) e(-θN) dθ` with `v` integrated up to `X`.
fn major_arc_integral(inst: &WaringInstance, arcs: &ArcDecomposition, main: f64, quad_tol: f64) -> Result<f64> {
    let v = VFunction::new(inst.k(), arcs.x)?;
    let integrand = Integrand::new(v, inst.coeffs(), inst.d());
    let xk = (arcs.x as f64).powi(inst.k() as i32);
    integrand.symmetric(inst.n(), arcs.half_width, 1.0 / xk, quad_tol * main, "A1 arc integral")
}

/// Runs the whole cascade for one instance.
pub fn verify(inst: &WaringInstance, cfg: &VerifyConfig) -> Result<VerificationRecord> {
    let engine = SingularEngine::for_instance(inst)?;
    verify_with(inst, cfg, &engine)
}

pub(crate) fn verify_with(inst: &WaringInstance, cfg: &VerifyConfig, engine: &SingularEngine) -> Result<VerificationRecord> {
    let (k, d, n) = (inst.k(), inst.d(), inst.n());
    let (x, arcs) = x_of(inst, cfg.alpha)?;
    let exact = count_exact(inst)?.target().clone();
    let exact_f = big_to_f64(&exact);

    let ladder = fourier_ladder_with(k, x, inst.coeffs(), d, &LadderConfig::default())?;
    let big_mk = ladder.union_integral(n, &arcs.major_intervals())?.re;
    let small_mk = ladder.union_integral(n, &arcs.minor_intervals())?.re;
    let mk_complement = exact_f - big_mk;

    let main: MainTerm = main_term(k, d, n, inst.coeffs())?;
    let main_v = main.finite_value()?;
    let series_major = engine.truncated_series(n, arcs.q_max)?.value;
    let series_full = engine.truncated_series(n, cfg.series_q)?;
    let euler = engine.euler_product(n, cfg.euler_p, cfg.tol)?.value;

    let a1 = series_major * major_arc_integral(inst, &arcs, main_v, cfg.quad_tol)?;
    let a2 = series_major * main_v;
    let a3 = euler * main_v;

    let mut flags = vec![regime_label(d, n).to_string()];
    if below_positivity_threshold(k, d) {
        flags.push("d<2^k+1".to_string());
    }
    let scale = exact_f.max(1.0);
    if (big_mk + small_mk - exact_f).abs() > SPLIT_TOL * scale {
        flags.push("split-mismatch".to_string());
    }
    if (small_mk - mk_complement).abs() > SPLIT_TOL * scale {
        flags.push("mk-route-mismatch".to_string());
    }
    if (series_full.value - euler).abs() > series_full.tail_estimate {
        flags.push("series-product-gap".to_string());
    }

    Ok(VerificationRecord {
        instance: inst.clone(),
        alpha: cfg.alpha,
        x,
        q_major: arcs.q_max,
        exact_count: exact,
        main_term: main_v,
        singular_series: euler,
        truncated_series: series_full.value,
        series_tail_estimate: series_full.tail_estimate,
        big_mk,
        small_mk,
        mk_complement,
        a1,
        a2,
        a3,
        ratio: exact_f / (euler * main_v),
        cascade_deltas: [
            (big_mk - a1).abs() / main_v,
            (a1 - a2).abs() / main_v,
            (a2 - a3).abs() / main_v,
        ],
        flags,
    })
}

/// `A1 = Σ_{q <= X^α} A_N(q) ∫_{|θ| <= w} v(θ)^d e(-θN) dθ`: every major arc
/// carries the same integral once shifted to its center.
pub fn approx_a1(k: u32, d: u32, n: u64, alpha: f64, tol: f64) -> Result<f64> {
    let inst = WaringInstance::new(k, d, n)?;
    let (_, arcs) = x_of(&inst, alpha)?;
    let main = main_term(k, d, n, None)?.finite_value()?;
    let series = SingularEngine::new(k, d)?.truncated_series(n, arcs.q_max)?.value;
    Ok(series * major_arc_integral(&inst, &arcs, main, tol)?)
}

/// `A2 = Σ_{q <= X^α} A_N(q) · main term`.
pub fn approx_a2(k: u32, d: u32, n: u64, alpha: f64) -> Result<f64> {
    let inst = WaringInstance::new(k, d, n)?;
    let (_, arcs) = x_of(&inst, alpha)?;
    let main = main_term(k, d, n, None)?.finite_value()?;
    Ok(SingularEngine::new(k, d)?.truncated_series(n, arcs.q_max)?.value * main)
}

/// `A3 = Π_{p <= P} χ_N(p) · main term`.
pub fn approx_a3(k: u32, d: u32, n: u64, big_p: u64, tol: f64) -> Result<f64> {
    let main = main_term(k, d, n, None)?.finite_value()?;
    Ok(SingularEngine::new(k, d)?.euler_product(n, big_p, tol)?.value * main)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanFailure {
    #[serde(rename = "N")]
    pub n: u64,
    pub error: String,
}

/// Medians over the lower and upper halves of the grid (the middle point of
/// an odd grid belongs to neither).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HalfMedians {
    pub lower: f64,
    pub upper: f64,
}

impl HalfMedians {
    pub fn decreasing(&self) -> bool {
        self.upper <= self.lower
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanSummary {
    pub ratio_deviation: HalfMedians,
    pub delta1: HalfMedians,
    pub delta2: HalfMedians,
    pub delta3: HalfMedians,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanReport {
    pub records: Vec<VerificationRecord>,
    pub failures: Vec<ScanFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<ScanSummary>,
}

impl ScanReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(VERIFY_CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&r.csv_row());
            out.push('\n');
        }
        out
    }
}

fn half_medians(values: &[f64]) -> Option<HalfMedians> {
    let half = values.len() / 2;
    if half == 0 {
        return None;
    }
    Some(HalfMedians {
        lower: median(&values[..half])?,
        upper: median(&values[values.len() - half..])?,
    })
}

/// One record per grid point. Failing points are collected, not fatal.
pub fn scan(template: &WaringInstance, grid: &[u64], cfg: &VerifyConfig) -> Result<ScanReport> {
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(WaringError::invalid("grid", "must be strictly ascending"));
    }
    let engine = SingularEngine::for_instance(template)?;
    let results: Vec<(u64, Result<VerificationRecord>)> = grid
        .par_iter()
        .map(|&n| (n, template.with_target(n).and_then(|inst| verify_with(&inst, cfg, &engine))))
        .collect();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (n, r) in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) => failures.push(ScanFailure { n, error: e.to_string() }),
        }
    }
    let column = |f: &dyn Fn(&VerificationRecord) -> f64| records.iter().map(f).collect::<Vec<f64>>();
    let summary = (|| {
        Some(ScanSummary {
            ratio_deviation: half_medians(&column(&|r| (r.ratio - 1.0).abs()))?,
            delta1: half_medians(&column(&|r| r.cascade_deltas[0]))?,
            delta2: half_medians(&column(&|r| r.cascade_deltas[1]))?,
            delta3: half_medians(&column(&|r| r.cascade_deltas[2]))?,
        })
    })();
    Ok(ScanReport {
        records,
        failures,
        summary,
    })
}

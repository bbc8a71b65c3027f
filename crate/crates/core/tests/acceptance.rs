//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status
//! when any criterion fails.

use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use waring_core::arcs::{build_arcs, fourier_ladder};
use waring_core::arith::{fit_slope, floor_root, gcd, median};
use waring_core::asymptotic::{main_term, scan, singular_integral_check, VerificationRecord, VerifyConfig};
use waring_core::count::{ball_count, count_bruteforce, count_exact};
use waring_core::expsums::{gauss_all_direct, hua_moment, hua_threshold, ResidueHistogram};
use waring_core::phase::RootTable;
use waring_core::report::big_to_f64;
use waring_core::singular::{random_coprime_pairs, SingularEngine, MULTIPLICATIVITY_TOL};
use waring_core::WaringInstance;

const SEED: u64 = 20240601;

const C1_GUARD: u64 = 1_000_000;
const C1_BUDGET_SECS: f64 = 60.0;
const C2_DFT_TOL: f64 = 0.5;
const C2_BUDGET_SECS: f64 = 120.0;
const C3_REL_TOL: f64 = 1e-8;
const C4_TOL: f64 = 1e-12;
/// Measured worst gap on the grid: 6.0e-7 (d = 9, N = 1). Pinned about a
/// factor of 8 above it.
const C5_TOL: f64 = 5e-6;
const C6_TOL: f64 = MULTIPLICATIVITY_TOL;
const C8_REL_TOL: f64 = 1e-3;
const C9_SLOPE_MAX: f64 = 4.3;
const C9_M_TOL: f64 = 1e-9;
const C10_BAND: (f64, f64) = (0.8, 1.2);
const C10_BUDGET_SECS: f64 = 600.0;
/// Per-k bands for the lattice/volume ratio over d = 1..=10 and
/// N in {4, 8, 16, 32} d^k. Measured: k = 2 in [0.8839, 1.2500], k = 3 in
/// [0.9375, 1.2500]; pinned with a margin of about 0.04.
const C12_BANDS: [(u32, f64, f64); 2] = [(2, 0.84, 1.29), (3, 0.90, 1.29)];
const C13_TOL: f64 = 1e-12;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn c1() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut skipped = 0;
    for k in 2..=4u32 {
        for d in 1..=5u32 {
            for n in 1..=200u64 {
                let x = floor_root(n, k);
                if x.checked_pow(d).is_none_or(|v| v > C1_GUARD) {
                    skipped += 1;
                    continue;
                }
                let inst = WaringInstance::new(k, d, n).unwrap();
                let dp = count_exact(&inst).unwrap().target().clone();
                let brute = count_bruteforce(&inst).unwrap();
                if dp != brute {
                    return Outcome::new(false, format!("k={k} d={d} N={n}: ladder {dp} vs enumeration {brute}"));
                }
                checked += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        secs < C1_BUDGET_SECS,
        format!("{checked} instances equal, {skipped} over the guard, {secs:.1} s"),
    )
}

fn c2() -> Outcome {
    let start = Instant::now();
    // M = dX^k + 1 as stated, and the library default max(dX^k, N) + 1
    let mut worst_literal: f64 = 0.0;
    let mut worst_default: f64 = 0.0;
    let mut aliased = 0;
    let mut first_aliased = None;
    let mut checked = 0;
    for k in 2..=3u32 {
        for d in 1..=6u32 {
            // one ladder per X, reused for every N with the same X
            let mut n = 1u64;
            while n <= 300 {
                let x = floor_root(n, k);
                let ladder = fourier_ladder(k, d, x).unwrap();
                let n_end = ((x + 1).pow(k) - 1).min(300);
                let m_literal = d as u64 * x.pow(k) + 1;
                for target in n..=n_end {
                    let exact = count_exact(&WaringInstance::new(k, d, target).unwrap()).unwrap().target().clone();
                    if ladder.circle_integral(target) != exact {
                        return Outcome::new(false, format!("coefficient mismatch at k={k} d={d} N={target}"));
                    }
                    let exact = big_to_f64(&exact);
                    let err = |z: num_complex::Complex64| (z.re - exact).abs().max(z.im.abs());
                    let lit = err(ladder.dft_mean(target, Some(m_literal)).unwrap());
                    if lit > C2_DFT_TOL {
                        aliased += 1;
                        first_aliased.get_or_insert((k, d, target));
                    }
                    worst_literal = worst_literal.max(lit);
                    worst_default = worst_default.max(err(ladder.dft_mean(target, None).unwrap()));
                    checked += 1;
                }
                n = n_end + 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let mut detail = format!(
        "{checked} instances, coefficients exact, worst DFT error at M=dX^k+1 {worst_literal:.3e}, \
         at M=max(dX^k,N)+1 {worst_default:.3e}, {secs:.1} s"
    );
    if let Some((k, d, n)) = first_aliased {
        detail.push_str(&format!("; {aliased} aliased (N > dX^k), first k={k} d={d} N={n}"));
    }
    Outcome::new(
        worst_literal <= C2_DFT_TOL && worst_default <= C2_DFT_TOL && secs < C2_BUDGET_SECS,
        detail,
    )
}

fn c3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    let mut worst_cross: f64 = 0.0;
    for _ in 0..50 {
        let k = rng.gen_range(2..=3u32);
        let d = rng.gen_range(2..=8u32);
        let n = rng.gen_range(if k == 2 { 50..=3000u64 } else { 50..=20000 });
        let inst = WaringInstance::new(k, d, n).unwrap();
        let exact = big_to_f64(count_exact(&inst).unwrap().target());
        let x = inst.x();
        let arcs = build_arcs(k, x, 0.25).unwrap();
        let ladder = fourier_ladder(k, d, x).unwrap();
        let major = ladder.union_integral(n, &arcs.major_intervals()).unwrap().re;
        let minor = ladder.union_integral(n, &arcs.minor_intervals()).unwrap().re;
        let scale = exact.max(1.0);
        worst = worst.max((major + minor - exact).abs() / scale);
        worst_cross = worst_cross.max((minor - (exact - major)).abs() / scale);
    }
    Outcome::new(
        worst <= C3_REL_TOL && worst_cross <= C3_REL_TOL,
        format!("50 instances, worst relative split error {worst:.3e}, minor-arc routes agree to {worst_cross:.3e}"),
    )
}

fn c4() -> Outcome {
    let mut worst_gap: f64 = 0.0;
    let mut worst_abs: f64 = 0.0;
    let mut count = 0u64;
    for k in 2..=5u32 {
        if ResidueHistogram::new(k, 1).gauss(1) != num_complex::Complex64::new(1.0, 0.0) {
            return Outcome::new(false, format!("G(1/1) != 1 for k={k}"));
        }
        for q in 1..=2000u64 {
            let roots = RootTable::new(q);
            let fast = ResidueHistogram::new(k, q).gauss_all(&roots);
            let direct = gauss_all_direct(k, q, &roots);
            for a in 1..=q {
                if gcd(a, q) != 1 {
                    continue;
                }
                let i = (a % q) as usize;
                worst_gap = worst_gap.max((fast[i] - direct[i]).norm());
                worst_abs = worst_abs.max(fast[i].norm());
                count += 1;
            }
        }
    }
    Outcome::new(
        worst_gap <= C4_TOL && worst_abs <= 1.0 + C4_TOL,
        format!("{count} sums, worst gap {worst_gap:.3e}, max |G| {worst_abs:.15}"),
    )
}

fn c5() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut witness = (0, 0);
    let mut max_tail: f64 = 0.0;
    for d in [9u32, 16] {
        let engine = SingularEngine::new(2, d).unwrap();
        for n in 1..=100u64 {
            let r = engine.singular_series(n, 1000, 50, 1e-12).unwrap();
            let gap = (r.truncated_sum - r.euler_product).abs();
            max_tail = max_tail.max(r.tail_estimate);
            if gap > worst {
                worst = gap;
                witness = (d, n);
            }
        }
    }
    Outcome::new(
        worst <= C5_TOL,
        format!(
            "worst |sum - product| {worst:.3e} at d={} N={}, pinned tol {C5_TOL:.0e}, largest tail estimate {max_tail:.3e}",
            witness.0, witness.1
        ),
    )
}

fn c6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let mut worst: f64 = 0.0;
    let mut cases = Vec::new();
    for i in 0..4 {
        let k = if i < 2 { 2 } else { 3 };
        let d = rng.gen_range((1u32 << k) + 1..=(1u32 << k) + 4);
        let n = rng.gen_range(1..=1000u64);
        let pairs = random_coprime_pairs(100, 100, SEED + i).unwrap();
        let r = SingularEngine::new(k, d).unwrap().multiplicativity_check(n, &pairs).unwrap();
        worst = worst.max(r.max_abs_diff);
        cases.push(format!("({k},{d},{n})"));
    }
    Outcome::new(
        worst <= C6_TOL,
        format!("100 pairs each for {}, worst gap {worst:.3e}", cases.join(" ")),
    )
}

fn c7() -> Outcome {
    let mut inf = f64::INFINITY;
    let mut sup: f64 = 0.0;
    let mut bad = Vec::new();
    let mut count = 0;
    for (k, d) in [(2u32, 5u32), (2, 6), (2, 8), (2, 9), (3, 9), (3, 10)] {
        let engine = SingularEngine::new(k, d).unwrap();
        for n in 1..=500u64 {
            let s = engine.euler_product(n, 50, 1e-12).unwrap().value;
            if s.is_nan() || s <= 0.0 {
                bad.push(format!("k={k} d={d} N={n}: {s}"));
            }
            inf = inf.min(s);
            sup = sup.max(s);
            count += 1;
        }
    }
    Outcome::new(
        bad.is_empty() && sup.is_finite(),
        if bad.is_empty() {
            format!("{count} values, min {inf:.6}, sup {sup:.6}")
        } else {
            format!("nonpositive: {}", bad.join("; "))
        },
    )
}

fn c8() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in [4u32, 6, 8] {
        for n in [25u64, 100, 400] {
            let r = singular_integral_check(2, d, n, 1e-4).unwrap();
            worst = worst.max(r.relative_deviation);
        }
    }
    Outcome::new(worst <= C8_REL_TOL, format!("worst relative deviation {worst:.3e}"))
}

fn c9() -> Outcome {
    let k = 2;
    let mut ln_n = Vec::new();
    let mut ln_x = Vec::new();
    let mut ln_m = Vec::new();
    let mut worst_m: f64 = 0.0;
    let mut values = Vec::new();
    for x in [16u64, 32, 64, 128] {
        let h = hua_moment(k, x, None).unwrap();
        let m0 = hua_threshold(k, x).unwrap();
        for extra in [1u64, 17, m0] {
            let alt = hua_moment(k, x, Some(m0 + extra)).unwrap();
            worst_m = worst_m.max((alt.value - h.value).abs() / h.value);
        }
        ln_n.push(((x as f64).powi(k as i32)).ln());
        ln_x.push((x as f64).ln());
        ln_m.push(h.value.ln());
        values.push(format!("{:.0}", h.value));
    }
    let slope = fit_slope(&ln_n, &ln_m).unwrap();
    // against ln X as well, the stricter reading
    let slope_x = fit_slope(&ln_x, &ln_m).unwrap();
    Outcome::new(
        slope.max(slope_x) <= C9_SLOPE_MAX && worst_m <= C9_M_TOL,
        format!(
            "moments {}, slope vs ln N = {slope:.4}, vs ln X = {slope_x:.4}, worst M-dependence {worst_m:.3e}",
            values.join(" ")
        ),
    )
}

fn halves(values: &[f64]) -> (f64, f64) {
    let h = values.len() / 2;
    (median(&values[..h]).unwrap(), median(&values[values.len() - h..]).unwrap())
}

fn trend_grid() -> Vec<u64> {
    (1..=10).map(|i| 500 * i).collect()
}

fn scan_records(d: u32) -> Vec<VerificationRecord> {
    let template = WaringInstance::new(2, d, 1).unwrap();
    let r = scan(&template, &trend_grid(), &VerifyConfig::default()).unwrap();
    assert!(r.failures.is_empty(), "scan failures: {:?}", r.failures);
    r.records
}

fn c10(records: &[(u32, Vec<VerificationRecord>)], secs: f64) -> Outcome {
    let mut pass = secs < C10_BUDGET_SECS;
    let mut parts = Vec::new();
    for (d, recs) in records {
        let ratios: Vec<f64> = recs.iter().map(|r| r.ratio).collect();
        let in_band = ratios.iter().all(|&r| r >= C10_BAND.0 && r <= C10_BAND.1);
        let dev: Vec<f64> = ratios.iter().map(|r| (r - 1.0).abs()).collect();
        let (lo, hi) = halves(&dev);
        pass &= in_band && hi <= lo;
        let lo_r = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi_r = ratios.iter().copied().fold(0.0, f64::max);
        parts.push(format!(
            "d={d}: ratios in [{lo_r:.3}, {hi_r:.3}] (band {}), median |ratio-1| {lo:.3} -> {hi:.3}",
            if in_band { "ok" } else { "violated" }
        ));
    }
    parts.push(format!("{secs:.1} s"));
    Outcome::new(pass, parts.join("; "))
}

fn c11(records: &[(u32, Vec<VerificationRecord>)]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (d, recs) in records {
        for i in 0..3 {
            let col: Vec<f64> = recs.iter().map(|r| r.cascade_deltas[i]).collect();
            let (lo, hi) = halves(&col);
            pass &= hi <= lo;
            parts.push(format!("d={d} delta{}: {lo:.3e} -> {hi:.3e}", i + 1));
        }
    }
    Outcome::new(pass, parts.join("; "))
}

fn c12() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, lo_band, hi_band) in C12_BANDS {
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for d in 1..=10u32 {
            let base = 4 * (d as u64).pow(k);
            for mult in [1u64, 2, 4, 8] {
                let b = ball_count(k, d, base * mult).unwrap();
                lo = lo.min(b.ratio);
                hi = hi.max(b.ratio);
            }
        }
        pass &= lo >= lo_band && hi <= hi_band;
        parts.push(format!(
            "k={k}: measured [{lo:.4}, {hi:.4}] width {:.4}, pinned [{lo_band}, {hi_band}]",
            hi - lo
        ));
    }
    Outcome::new(pass, parts.join("; "))
}

fn c13() -> Outcome {
    let mut worst: f64 = 0.0;
    for (k, d) in [(2u32, 5u32), (3, 9), (2, 9)] {
        let ones = vec![1u64; d as usize];
        let plain_engine = SingularEngine::new(k, d).unwrap();
        let gen_engine = SingularEngine::with_coeffs(k, &ones).unwrap();
        for n in [10u64, 57, 200] {
            let plain = count_exact(&WaringInstance::new(k, d, n).unwrap()).unwrap().target().clone();
            let gen = count_exact(&WaringInstance::with_coeffs(k, n, ones.clone()).unwrap())
                .unwrap()
                .target()
                .clone();
            if plain != gen {
                return Outcome::new(false, format!("r^c != r at k={k} d={d} N={n}"));
            }
            let s1 = plain_engine.singular_series(n, 200, 30, 1e-12).unwrap();
            let s2 = gen_engine.singular_series(n, 200, 30, 1e-12).unwrap();
            worst = worst.max((s1.truncated_sum - s2.truncated_sum).abs());
            worst = worst.max((s1.euler_product - s2.euler_product).abs());
            let m1 = main_term(k, d, n, None).unwrap().value;
            let m2 = main_term(k, d, n, Some(&ones)).unwrap().value;
            worst = worst.max((m1 - m2).abs() / m1);
        }
    }
    let mut weighted = 0;
    for k in [2u32, 3] {
        for len in 2..=4usize {
            let coeffs: Vec<u64> = (1..=len as u64).collect();
            for n in 1..=150u64 {
                let inst = WaringInstance::with_coeffs(k, n, coeffs.clone()).unwrap();
                let dp: BigUint = count_exact(&inst).unwrap().target().clone();
                if dp != count_bruteforce(&inst).unwrap() {
                    return Outcome::new(false, format!("weighted mismatch k={k} c={coeffs:?} N={n}"));
                }
                weighted += 1;
            }
        }
    }
    Outcome::new(
        worst <= C13_TOL,
        format!("unit coefficients agree to {worst:.3e}; {weighted} weighted counts match enumeration"),
    )
}

/// `ACCEPTANCE_ONLY=5,7` restricts the run to the listed criteria.
fn selected() -> Option<Vec<u32>> {
    let raw = std::env::var("ACCEPTANCE_ONLY").ok()?;
    Some(raw.split(',').filter_map(|s| s.trim().parse().ok()).collect())
}

fn main() {
    let only = selected();
    let wanted = |id: u32| only.as_ref().is_none_or(|v| v.contains(&id));
    let mut failures = 0;
    let mut report = |id: u32, name: &str, run: &dyn Fn() -> Outcome| {
        if !wanted(id) {
            return;
        }
        let start = Instant::now();
        let o = run();
        println!(
            "criterion {id:>2} {}  {name}: {} [{:.1} s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if !o.pass {
            failures += 1;
        }
    };
    report(1, "count oracle", &c1);
    report(2, "circle identity", &c2);
    report(3, "arc split", &c3);
    report(4, "Gauss sums", &c4);
    report(5, "series vs product", &c5);
    report(6, "multiplicativity", &c6);
    report(7, "positivity", &c7);
    report(8, "singular integral", &c8);
    report(9, "Hua moment", &c9);
    if wanted(10) || wanted(11) {
        let start = Instant::now();
        let records: Vec<(u32, Vec<VerificationRecord>)> = [8u32, 16].iter().map(|&d| (d, scan_records(d))).collect();
        let secs = start.elapsed().as_secs_f64();
        report(10, "asymptotic trend", &|| c10(&records, secs));
        report(11, "cascade decay", &|| c11(&records));
    }
    report(12, "ball sandwich", &c12);
    report(13, "generalized problem", &c13);
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}

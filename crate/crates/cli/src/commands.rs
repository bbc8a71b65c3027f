use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use waring_core::arcs::{build_arcs, dirichlet_approx, fourier_ladder_with};
use waring_core::asymptotic::{
    approx_a1, approx_a2, approx_a3, main_term, scan, singular_integral_check, verify, VerifyConfig,
    VERIFY_CSV_HEADER,
};
use waring_core::count::{ball_count, count_bruteforce, count_exact, LadderConfig};
use waring_core::expsums::{
    gauss_sum, gauss_sum_direct, hua_moment, measure_bound, v_integral, weyl_sum, BoundGrid, BoundName,
    BOUND_CSV_HEADER,
};
use waring_core::report::{big_to_string, csv_line, fmt_f64};
use waring_core::singular::{random_coprime_pairs, SingularEngine, SINGULAR_CSV_HEADER};
use waring_core::{ComplexValue, WaringError, WaringInstance};

use crate::args::*;
use crate::output::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] WaringError),
    #[error("invalid --{flag}: {reason}")]
    Usage { flag: &'static str, reason: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("every grid point failed")]
    EmptyScan,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => 1,
            CliError::Core(
                WaringError::InvalidInput { .. } | WaringError::Capacity { .. } | WaringError::EnumerationGuard { .. },
            ) => 1,
            _ => 2,
        }
    }
}

type Out = Result<Report, CliError>;

fn usage(flag: &'static str, reason: impl Into<String>) -> CliError {
    CliError::Usage {
        flag,
        reason: reason.into(),
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable report")
}

fn complex(z: ComplexValue) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn check_power(k: u32) -> Result<(), CliError> {
    if k < 2 {
        return Err(usage("k", format!("power must be >= 2, got {k}")));
    }
    Ok(())
}

fn instance(a: &InstanceArgs) -> Result<WaringInstance, CliError> {
    instance_from(a.k, a.d, a.n, a.coeffs.as_deref())
}

fn instance_from(k: u32, d: Option<u32>, n: u64, coeffs: Option<&[u64]>) -> Result<WaringInstance, CliError> {
    match (coeffs, d) {
        (Some(c), Some(d)) if c.len() as u32 != d => Err(usage(
            "coeffs",
            format!("{} coefficients given but -d is {d}", c.len()),
        )),
        (Some(c), _) => Ok(WaringInstance::with_coeffs(k, n, c.to_vec())?),
        (None, Some(d)) => Ok(WaringInstance::new(k, d, n)?),
        (None, None) => Err(usage("d", "give -d or --coeffs")),
    }
}

pub fn run(cli: &Cli) -> Out {
    match &cli.command {
        Command::Count(a) => count(a),
        Command::Ball(a) => {
            let b = ball_count(a.power.k, a.d, a.n)?;
            Ok(Report::new(to_json(&b)))
        }
        Command::Weyl(a) => {
            check_power(a.power.k)?;
            let s = weyl_sum(a.power.k, a.x, a.xi);
            Ok(Report::new(json!({
                "k": a.power.k, "X": a.x, "xi": a.xi, "value": complex(s), "abs": s.norm(),
            })))
        }
        Command::Gauss(a) => {
            check_power(a.power.k)?;
            let g = gauss_sum(a.power.k, a.a, a.q)?;
            let mut doc = json!({"k": a.power.k, "a": a.a, "q": a.q, "value": complex(g), "abs": g.norm()});
            if a.direct {
                doc["direct"] = complex(gauss_sum_direct(a.power.k, a.a, a.q)?);
            }
            Ok(Report::new(doc))
        }
        Command::Vint(a) => {
            let v = v_integral(a.power.k, a.x, a.theta, a.tol)?;
            let mut doc = to_json(&v);
            doc["k"] = json!(a.power.k);
            doc["X"] = json!(a.x);
            doc["theta"] = json!(a.theta);
            Ok(Report::new(doc))
        }
        Command::Hua(a) => Ok(Report::new(to_json(&hua_moment(a.power.k, a.x, a.samples)?))),
        Command::Bounds(a) => bounds(a),
        Command::Arcs(a) => arcs(a),
        Command::Circle(a) => circle(a),
        Command::Singular(a) => singular(a, cli.seed),
        Command::Mainterm(a) => {
            let inst = instance(&a.inst)?;
            let m = main_term(inst.k(), inst.d(), inst.n(), inst.coeffs())?;
            let mut doc = to_json(&m);
            if a.integral {
                if inst.coeffs().is_some() {
                    return Err(usage("integral", "only available without --coeffs"));
                }
                doc["singularIntegral"] = to_json(&singular_integral_check(inst.k(), inst.d(), inst.n(), a.tol)?);
            }
            Ok(Report::new(doc))
        }
        Command::Cascade(a) => {
            let (k, d, n) = (a.power.k, a.d, a.n);
            let main = main_term(k, d, n, None)?.finite_value()?;
            let a1 = approx_a1(k, d, n, a.alpha, a.tol)?;
            let a2 = approx_a2(k, d, n, a.alpha)?;
            let a3 = approx_a3(k, d, n, a.p, a.tol)?;
            Ok(Report::new(json!({
                "k": k, "d": d, "N": n, "alpha": a.alpha, "P": a.p,
                "mainTerm": main, "A1": a1, "A2": a2, "A3": a3,
            })))
        }
        Command::Verify(a) => {
            let inst = instance(&a.inst)?;
            let r = verify(&inst, &verify_config(a.alpha, &a.series))?;
            Ok(Report::new(to_json(&r)).with_table(VERIFY_CSV_HEADER, vec![r.csv_row()]))
        }
        Command::Scan(a) => scan_cmd(a),
    }
}

fn verify_config(alpha: f64, s: &SeriesArgs) -> VerifyConfig {
    VerifyConfig {
        alpha,
        series_q: s.q,
        euler_p: s.p,
        tol: s.tol,
        ..VerifyConfig::default()
    }
}

fn count(a: &CountArgs) -> Out {
    let inst = instance(&a.inst)?;
    let table = count_exact(&inst)?;
    let mut doc = table.to_json(a.full_ladder);
    let target = big_to_string(table.target());
    if a.brute {
        let brute = count_bruteforce(&inst)?;
        doc["bruteforce"] = json!(big_to_string(&brute));
        doc["agree"] = json!(&brute == table.target());
    }
    let report = Report::new(doc);
    Ok(if a.brute || a.full_ladder { report } else { report.with_pretty(target) })
}

fn bounds(a: &BoundsArgs) -> Out {
    let name: BoundName = a.bound.parse()?;
    let k = a.power.k;
    let grid = match name {
        BoundName::WeylMinor => BoundGrid::WeylMinor {
            k,
            x: a.x,
            alpha: a.alpha,
            samples: a.samples,
        },
        BoundName::GaussDecay => BoundGrid::GaussDecay {
            k,
            q_max: a.q_max,
            epsilon: a.epsilon,
        },
        BoundName::HuaMoment => BoundGrid::HuaMoment { k, xs: a.xs.clone() },
        BoundName::VDecay => {
            let xk = (a.x as f64).powi(k as i32);
            let thetas = a
                .thetas
                .clone()
                .unwrap_or_else(|| (-1..=3).map(|j| 10f64.powi(j) / xk).collect());
            BoundGrid::VDecay { k, x: a.x, thetas }
        }
    };
    let r = measure_bound(&grid)?;
    Ok(Report::new(to_json(&r)).with_table(BOUND_CSV_HEADER, vec![r.csv_row()]))
}

fn arcs(a: &ArcsArgs) -> Out {
    let dec = build_arcs(a.power.k, a.x, a.alpha)?;
    let mut doc = to_json(&dec);
    if let Some(xi) = a.xi {
        if !(0.0..=1.0).contains(&xi) {
            return Err(usage("xi", "must lie in [0, 1]"));
        }
        doc["point"] = json!({
            "xi": xi,
            "majorArc": dec.classify(xi).map(|f| f.to_string()),
            "dirichlet": to_json(&dirichlet_approx(xi, dec.q_max.max(1))?),
        });
    }
    let rows = dec
        .arcs
        .iter()
        .map(|i| csv_line([i.center.to_string(), fmt_f64(i.lo), fmt_f64(i.hi)]))
        .collect();
    Ok(Report::new(doc).with_table("center,lo,hi", rows))
}

fn circle(a: &CircleArgs) -> Out {
    let inst = instance(&a.inst)?;
    let x = a.x.unwrap_or_else(|| inst.x());
    let ladder = fourier_ladder_with(inst.k(), x, inst.coeffs(), inst.d(), &LadderConfig::default())?;
    let n = inst.n();
    let mut doc = json!({
        "k": inst.k(), "d": inst.d(), "N": n, "X": x,
        "circleIntegral": big_to_string(&ladder.circle_integral(n)),
        "dftMean": complex(ladder.dft_mean(n, a.samples)?),
    });
    if let Some(c) = inst.coeffs() {
        doc["coeffs"] = json!(c);
    }
    if let (Some(lo), Some(hi)) = (a.lo, a.hi) {
        doc["arc"] = json!({"lo": lo, "hi": hi, "integral": complex(ladder.arc_integral(n, lo, hi)?)});
    }
    Ok(Report::new(doc))
}

fn singular(a: &SingularArgs, seed: u64) -> Out {
    let inst = instance(&a.inst)?;
    let engine = SingularEngine::for_instance(&inst)?;
    if let Some(count) = a.pairs {
        let pairs = random_coprime_pairs(count, a.pair_max, seed)?;
        let r = engine.multiplicativity_check(inst.n(), &pairs)?;
        let rows = r
            .checks
            .iter()
            .map(|c| {
                csv_line([
                    c.q1.to_string(),
                    c.q2.to_string(),
                    fmt_f64(c.product_modulus),
                    fmt_f64(c.product_of_sums),
                    fmt_f64(c.abs_diff),
                    c.pass.to_string(),
                ])
            })
            .collect();
        return Ok(Report::new(to_json(&r)).with_table("q1,q2,productModulus,productOfSums,absDiff,pass", rows));
    }
    let s = &a.series;
    let r = engine.singular_series(inst.n(), s.q, s.p, s.tol)?;
    Ok(Report::new(to_json(&r)).with_table(SINGULAR_CSV_HEADER, vec![r.csv_row()]))
}

fn scan_cmd(a: &ScanArgs) -> Out {
    if a.step == 0 {
        return Err(usage("step", "must be positive"));
    }
    if a.n_from == 0 {
        return Err(usage("N-from", "must be at least 1"));
    }
    if a.n_to < a.n_from {
        return Err(usage("N-to", "must not be below --N-from"));
    }
    let grid: Vec<u64> = (a.n_from..=a.n_to).step_by(a.step as usize).collect();
    let template = instance_from(a.k, a.d, a.n_from, a.coeffs.as_deref())?;
    let r = scan(&template, &grid, &verify_config(a.alpha, &a.series))?;
    for f in &r.failures {
        eprintln!("warning: N = {}: {}", f.n, f.error);
    }
    if r.records.is_empty() && !grid.is_empty() {
        return Err(CliError::EmptyScan);
    }
    let rows = r.records.iter().map(|x| x.csv_row()).collect();
    Ok(Report::new(to_json(&r)).with_table(VERIFY_CSV_HEADER, rows))
}

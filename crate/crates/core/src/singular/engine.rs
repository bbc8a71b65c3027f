use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::arith::gcd;
use crate::error::{Result, WaringError};
use crate::expsums::gauss_table;
use crate::instance::{validate_coeffs, validate_power, WaringInstance};
use crate::phase::{root_of_unity, CompensatedSum};
use crate::report::ser_complex;

/// Gauss tables up to this modulus are kept between calls.
const CACHE_LIMIT: u64 = 1 << 16;

/// `A_N(q) = Σ_{(a,q)=1} Π_i G(c_i a/q) e(-Na/q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcSum {
    pub q: u64,
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TruncatedSeries {
    #[serde(rename = "Q")]
    pub q_max: u64,
    pub value: f64,
    /// `A_N(q)` for `q = 1..=Q`.
    pub terms: Vec<f64>,
    /// `Σ_{q' <= q} A_N(q')` for `q = 1..=Q`.
    pub partial_sums: Vec<f64>,
    /// `max_{2 <= q <= Q} |A_N(q)| q^{11/10}`.
    pub decay_constant: f64,
    /// `10 c Q^{-1/10}`: the tail `Σ_{q > Q} c q^{-11/10}` bounded by an
    /// integral, with `c` the measured decay constant.
    pub tail_estimate: f64,
}

/// Arithmetic side of the problem for fixed `k` and coefficients: arc sums,
/// truncated series and local densities, with Gauss tables and congruence
/// distributions cached across targets `N`.
#[derive(Debug)]
pub struct SingularEngine {
    pub(crate) k: u32,
    pub(crate) d: u32,
    pub(crate) coeffs: Option<Vec<u64>>,
    /// Distinct coefficients with multiplicities.
    pub(crate) groups: Vec<(u64, u32)>,
    gauss: Mutex<HashMap<u64, Arc<Vec<Complex64>>>>,
    pub(crate) density: Mutex<HashMap<u64, Arc<Vec<f64>>>>,
}

impl SingularEngine {
    pub fn new(k: u32, d: u32) -> Result<Self> {
        validate_power(k)?;
        if d < 1 {
            return Err(WaringError::invalid("d", "must be at least 1"));
        }
        Ok(Self::build(k, d, None, vec![(1, d)]))
    }

    pub fn with_coeffs(k: u32, coeffs: &[u64]) -> Result<Self> {
        validate_power(k)?;
        validate_coeffs(coeffs)?;
        let mut groups = BTreeMap::new();
        for &c in coeffs {
            *groups.entry(c).or_insert(0u32) += 1;
        }
        Ok(Self::build(
            k,
            coeffs.len() as u32,
            Some(coeffs.to_vec()),
            groups.into_iter().collect(),
        ))
    }

    pub fn for_instance(inst: &WaringInstance) -> Result<Self> {
        match inst.coeffs() {
            Some(c) => Self::with_coeffs(inst.k(), c),
            None => Self::new(inst.k(), inst.d()),
        }
    }

    fn build(k: u32, d: u32, coeffs: Option<Vec<u64>>, groups: Vec<(u64, u32)>) -> Self {
        SingularEngine {
            k,
            d,
            coeffs,
            groups,
            gauss: Mutex::new(HashMap::new()),
            density: Mutex::new(HashMap::new()),
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn coeffs(&self) -> Option<&[u64]> {
        self.coeffs.as_deref()
    }

    /// `G(b/q)` for every residue `b`.
    fn gauss_table(&self, q: u64) -> Arc<Vec<Complex64>> {
        if let Some(t) = self.gauss.lock().expect("cache lock").get(&q) {
            return Arc::clone(t);
        }
        let table = Arc::new(gauss_table(self.k, q));
        if q <= CACHE_LIMIT {
            self.gauss
                .lock()
                .expect("cache lock")
                .insert(q, Arc::clone(&table));
        }
        table
    }

    fn product(&self, table: &[Complex64], a: u64, q: u64) -> Complex64 {
        self.groups
            .iter()
            .map(|&(c, m)| table[(c as u128 * a as u128 % q as u128) as usize].powi(m as i32))
            .product()
    }

    fn phase(n: u64, a: u64, q: u64) -> Complex64 {
        let back = (q - n % q) % q;
        root_of_unity((back as u128 * a as u128 % q as u128) as i128, q)
    }

    /// `A_N(q)`, with the conjugate terms `a` and `q - a` combined so the
    /// result is real by construction.
    pub fn arc_sum(&self, n: u64, q: u64) -> Result<ArcSum> {
        if q < 1 {
            return Err(WaringError::invalid("q", "must be at least 1"));
        }
        Ok(ArcSum {
            q,
            value: Complex64::new(self.arc_sum_real(n, q), 0.0),
        })
    }

    pub(crate) fn arc_sum_real(&self, n: u64, q: u64) -> f64 {
        if q == 1 {
            return 1.0;
        }
        let table = self.gauss_table(q);
        let mut acc = CompensatedSum::new();
        for a in 1..=q / 2 {
            if gcd(a, q) != 1 {
                continue;
            }
            let term = self.product(&table, a, q) * Self::phase(n, a, q);
            let weight = if 2 * a == q { 1.0 } else { 2.0 };
            acc.add(Complex64::new(weight * term.re, 0.0));
        }
        acc.value().re
    }

    /// `A_N(q)` summed over every reduced residue without pairing.
    pub fn arc_sum_unpaired(&self, n: u64, q: u64) -> Result<Complex64> {
        if q < 1 {
            return Err(WaringError::invalid("q", "must be at least 1"));
        }
        let table = self.gauss_table(q);
        let mut acc = CompensatedSum::new();
        for a in 1..=q {
            if gcd(a, q) == 1 {
                acc.add(self.product(&table, a % q, q) * Self::phase(n, a, q));
            }
        }
        Ok(acc.value())
    }

    /// `Σ_{q <= Q} A_N(q)` with partial sums and the measured tail shape.
    pub fn truncated_series(&self, n: u64, big_q: u64) -> Result<TruncatedSeries> {
        if big_q < 1 {
            return Err(WaringError::invalid("Q", "must be at least 1"));
        }
        let terms: Vec<f64> = (1..=big_q)
            .into_par_iter()
            .map(|q| self.arc_sum_real(n, q))
            .collect();
        let mut partial_sums = Vec::with_capacity(terms.len());
        let mut acc = CompensatedSum::new();
        for &t in &terms {
            acc.add(Complex64::new(t, 0.0));
            partial_sums.push(acc.value().re);
        }
        let decay_constant = terms
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, t)| t.abs() * ((i + 1) as f64).powf(1.1))
            .fold(0.0, f64::max);
        Ok(TruncatedSeries {
            q_max: big_q,
            value: *partial_sums.last().expect("Q >= 1"),
            terms,
            partial_sums,
            decay_constant,
            tail_estimate: 10.0 * decay_constant * (big_q as f64).powf(-0.1),
        })
    }
}

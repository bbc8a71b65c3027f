use serde::Serialize;

use super::fraction::{convergents, Fraction};
use crate::arith::{floor_real_pow, gcd};
use crate::error::{Result, WaringError};

/// One connected piece of a major arc. The arc around `1/1` contributes two
/// pieces, `[0, w]` and `[1 - w, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcInterval {
    pub center: Fraction,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ArcDecomposition {
    pub k: u32,
    #[serde(rename = "X")]
    pub x: u64,
    pub alpha: f64,
    /// `⌊X^α⌋`.
    pub q_max: u64,
    /// `X^{-k+α}`.
    pub half_width: f64,
    /// Sorted by `lo`.
    pub arcs: Vec<ArcInterval>,
    pub total_major_measure: f64,
}

pub fn build_arcs(k: u32, x: u64, alpha: f64) -> Result<ArcDecomposition> {
    if k < 1 {
        return Err(WaringError::invalid("k", "must be at least 1"));
    }
    if x < 2 {
        return Err(WaringError::invalid("X", "must be at least 2"));
    }
    if !(alpha > 0.0 && alpha < 1.0 / 3.0) {
        return Err(WaringError::invalid("alpha", format!("must lie in (0, 1/3), got {alpha}")));
    }
    let q_max = floor_real_pow(x, alpha);
    let w = ((alpha - k as f64) * (x as f64).ln()).exp();
    let mut arcs = Vec::new();
    let one = Fraction { a: 1, q: 1 };
    arcs.push(ArcInterval {
        center: one,
        lo: 0.0,
        hi: w.min(1.0),
    });
    for q in 2..=q_max {
        for a in 1..q {
            if gcd(a, q) != 1 {
                continue;
            }
            let c = a as f64 / q as f64;
            arcs.push(ArcInterval {
                center: Fraction { a, q },
                lo: (c - w).max(0.0),
                hi: (c + w).min(1.0),
            });
        }
    }
    arcs.push(ArcInterval {
        center: one,
        lo: (1.0 - w).max(0.0),
        hi: 1.0,
    });
    arcs.sort_by(|l, r| l.lo.total_cmp(&r.lo).then(l.hi.total_cmp(&r.hi)));
    for pair in arcs.windows(2) {
        if pair[1].lo < pair[0].hi {
            return Err(WaringError::ArcOverlap {
                first: pair[0].center.to_string(),
                second: pair[1].center.to_string(),
            });
        }
    }
    let total_major_measure = arcs.iter().map(|a| a.hi - a.lo).sum();
    Ok(ArcDecomposition {
        k,
        x,
        alpha,
        q_max,
        half_width: w,
        arcs,
        total_major_measure,
    })
}

impl ArcDecomposition {
    pub fn major_intervals(&self) -> Vec<(f64, f64)> {
        self.arcs.iter().map(|a| (a.lo, a.hi)).collect()
    }

    /// Complement of the major arcs in `[0, 1]`.
    pub fn minor_intervals(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for a in &self.arcs {
            if a.lo > cursor {
                out.push((cursor, a.lo));
            }
            cursor = a.hi.max(cursor);
        }
        if cursor < 1.0 {
            out.push((cursor, 1.0));
        }
        out
    }

    /// Center of the major arc containing `ξ` (taken mod 1), or `None` on
    /// the minor arcs.
    ///
    /// When `2 w Q^2 < 1` any qualifying `a/q` is a continued-fraction
    /// convergent of `ξ`, so only those are tested. Otherwise the arcs are
    /// scanned.
    pub fn classify(&self, xi: f64) -> Option<Fraction> {
        let xi = xi - xi.floor();
        let w = self.half_width;
        if 2.0 * w * (self.q_max as f64).powi(2) < 1.0 {
            convergents(xi, self.q_max)
                .into_iter()
                .map(|(h, k)| Fraction::canonical(h, k))
                .find(|f| f.circle_distance(xi) <= w)
        } else {
            self.classify_by_scan(xi)
        }
    }

    pub fn classify_by_scan(&self, xi: f64) -> Option<Fraction> {
        let xi = xi - xi.floor();
        self.arcs
            .iter()
            .find(|a| a.center.circle_distance(xi) <= self.half_width)
            .map(|a| a.center)
    }

    pub fn is_minor(&self, xi: f64) -> bool {
        self.classify(xi).is_none()
    }
}

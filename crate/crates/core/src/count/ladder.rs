//! The convolution ladder: row `j + 1` is row `j` convolved with the sparse
//! single-coordinate kernel of coordinate `j + 1`, truncated to a fixed
//! length.
//!
//! Rows start in `u128` and fall back to `BigUint` once a checked operation
//! overflows. Big rows use schoolbook convolution, or NTT with CRT
//! reconstruction when the row is long enough for it to pay off.

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicBool, Ordering};

use super::ntt;
use crate::error::{Result, WaringError};

/// `(position, weight)` pairs of a single-coordinate generating polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseKernel {
    pub entries: Vec<(usize, u64)>,
}

impl SparseKernel {
    /// Weight 1 at `c * m^k` for `1 <= m`, positions below `len`.
    pub fn powers(k: u32, c: u64, len: usize) -> Self {
        let mut entries = Vec::new();
        let mut m: u64 = 1;
        while let Some(pos) = m.checked_pow(k).and_then(|v| v.checked_mul(c)) {
            if pos as u128 >= len as u128 {
                break;
            }
            entries.push((pos as usize, 1));
            m += 1;
        }
        SparseKernel { entries }
    }

    /// As [`SparseKernel::powers`] but with `m` capped at `x`.
    pub fn powers_up_to(k: u32, c: u64, x: u64, len: usize) -> Self {
        let mut kern = Self::powers(k, c, len);
        kern.entries.truncate(x as usize);
        kern
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ConvolutionStrategy {
    /// u128 schoolbook, then big-integer schoolbook or NTT by size.
    #[default]
    Auto,
    Schoolbook,
    /// Force the NTT path for every step (for cross-checking).
    Ntt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LadderConfig {
    /// Maximum number of stored big-integer cells.
    pub max_cells: u128,
    pub strategy: ConvolutionStrategy,
    /// In `Auto` mode, big-integer steps with `len * nnz` above this use NTT.
    pub ntt_threshold: u128,
}

impl Default for LadderConfig {
    fn default() -> Self {
        LadderConfig {
            max_cells: 50_000_000,
            strategy: ConvolutionStrategy::Auto,
            ntt_threshold: 1 << 24,
        }
    }
}

enum Row {
    Small(Vec<u128>),
    Big(Vec<BigUint>),
}

impl Row {
    fn into_big(self) -> Vec<BigUint> {
        match self {
            Row::Small(v) => v.into_iter().map(BigUint::from).collect(),
            Row::Big(v) => v,
        }
    }

    fn to_big(&self) -> Vec<BigUint> {
        match self {
            Row::Small(v) => v.iter().map(|&x| BigUint::from(x)).collect(),
            Row::Big(v) => v.clone(),
        }
    }
}

const CHUNK: usize = 2048;

fn step_small(cur: &[u128], kernel: &SparseKernel, len: usize) -> Option<Vec<u128>> {
    let overflow = AtomicBool::new(false);
    let mut out = vec![0u128; len];
    out.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, chunk)| {
        let base = ci * CHUNK;
        for (off, slot) in chunk.iter_mut().enumerate() {
            let t = base + off;
            let mut acc: u128 = 0;
            for &(p, w) in &kernel.entries {
                if p > t {
                    break;
                }
                let c = cur[t - p];
                if c == 0 {
                    continue;
                }
                match c.checked_mul(w as u128).and_then(|v| acc.checked_add(v)) {
                    Some(v) => acc = v,
                    None => {
                        overflow.store(true, Ordering::Relaxed);
                        return;
                    }
                }
            }
            *slot = acc;
        }
    });
    (!overflow.load(Ordering::Relaxed)).then_some(out)
}

fn step_big_schoolbook(cur: &[BigUint], kernel: &SparseKernel, len: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); len];
    out.par_iter_mut().enumerate().for_each(|(t, slot)| {
        for &(p, w) in &kernel.entries {
            if p > t {
                break;
            }
            let c = &cur[t - p];
            if c.is_zero() {
                continue;
            }
            if w == 1 {
                *slot += c;
            } else {
                *slot += c * w;
            }
        }
    });
    out
}

fn step(row: Row, kernel: &SparseKernel, len: usize, cfg: &LadderConfig) -> Row {
    let nnz = kernel.entries.len() as u128;
    match (cfg.strategy, row) {
        (ConvolutionStrategy::Ntt, row) => {
            let big = row.into_big();
            match ntt::convolve(&big, &kernel.entries, len) {
                Some(v) => Row::Big(v),
                None => Row::Big(step_big_schoolbook(&big, kernel, len)),
            }
        }
        (_, Row::Small(cur)) => match step_small(&cur, kernel, len) {
            Some(v) => Row::Small(v),
            None => step(Row::Big(Row::Small(cur).into_big()), kernel, len, cfg),
        },
        (strategy, Row::Big(cur)) => {
            let use_ntt = strategy == ConvolutionStrategy::Auto
                && (len as u128) * nnz > cfg.ntt_threshold;
            if use_ntt {
                if let Some(v) = ntt::convolve(&cur, &kernel.entries, len) {
                    return Row::Big(v);
                }
            }
            Row::Big(step_big_schoolbook(&cur, kernel, len))
        }
    }
}

fn first_row(kernel: &SparseKernel, len: usize) -> Row {
    let mut row = vec![0u128; len];
    for &(p, w) in &kernel.entries {
        if p < len {
            row[p] += w as u128;
        }
    }
    Row::Small(row)
}

/// Runs the ladder over `kernels` (one per coordinate) with rows of length
/// `len`. Returns every row when `keep_all`, otherwise only the last one.
pub fn run_ladder(
    kernels: &[SparseKernel],
    len: usize,
    keep_all: bool,
    cfg: &LadderConfig,
    what: &'static str,
) -> Result<Vec<Vec<BigUint>>> {
    assert!(!kernels.is_empty(), "ladder needs at least one kernel");
    let rows_kept = if keep_all { kernels.len() } else { 1 };
    let required = rows_kept as u128 * len as u128;
    if required > cfg.max_cells {
        return Err(WaringError::Capacity {
            what,
            required,
            budget: cfg.max_cells,
        });
    }
    let mut out = Vec::with_capacity(rows_kept);
    let mut row = first_row(&kernels[0], len);
    for kernel in &kernels[1..] {
        if keep_all {
            out.push(row.to_big());
        }
        row = step(row, kernel, len, cfg);
    }
    out.push(row.into_big());
    Ok(out)
}

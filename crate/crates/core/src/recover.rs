//! The two recovery schemes and the bridged sup-error.
//!
//! Both schemes only look at the rank sequence `R` of the observed increments:
//!
//! * randomized: the `k`-th recovered increment is the `R_k`-th order
//!   statistic of the increments of an independent auxiliary Brownian motion;
//! * quantile: the `k`-th recovered increment is `n^(-1/2) Q(R_k / (n + 1))`.
//!
//! The drift of `W` cannot be recovered, so errors are measured after removing
//! the straight line through the endpoint difference.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::levy::{partial_sums, GridPath};
use crate::normal::quantile_unchecked;
use crate::ranks::{compute_ranks, order_statistics, RankSequence};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Randomized,
    Quantile,
}

impl Scheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Randomized => "randomized",
            Scheme::Quantile => "quantile",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "randomized" | "randomised" => Ok(Scheme::Randomized),
            "quantile" => Ok(Scheme::Quantile),
            other => Err(Error::domain(alloc::format!("unknown scheme {other:?} (expected randomized or quantile)"))),
        }
    }
}

/// The plotting-position quantiles `Q(k/(n+1))`, `k = 1..=n`.
///
/// The upper half is stored as the exact negation of the lower half, so the
/// table sums to exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PlottingQuantiles {
    values: Vec<f64>,
}

impl PlottingQuantiles {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("grid size n must be at least 1"));
        }
        let denom = (n + 1) as f64;
        let mut values = alloc::vec![0.0; n];
        let half = n.div_ceil(2);
        for k in 1..=half {
            values[k - 1] = quantile_unchecked(k as f64 / denom);
        }
        for k in half + 1..=n {
            values[k - 1] = -values[n - k];
        }
        Ok(Self { values })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// `Q(rank / (n + 1))` for a 1-based rank.
    pub fn at_rank(&self, rank: usize) -> f64 {
        self.values[rank - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// `max_k |Q(k/(n+1))|`, attained at `k = 1`.
    pub fn max_abs(&self) -> f64 {
        self.values[0].abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryOutput {
    pub scheme: Scheme,
    pub path: GridPath,
    /// Recovered value at `t = 1`.
    pub terminal: f64,
    /// [`RankSequence::fingerprint`] of the ranks that drove the recovery.
    pub rank_fingerprint: u64,
    /// Ties among the observed increments.
    pub tie_count: usize,
}

/// Quantile scheme for precomputed ranks and table.
pub fn recover_quantile_with(ranks: &RankSequence, table: &PlottingQuantiles) -> Result<RecoveryOutput> {
    let n = ranks.len();
    if table.n() != n {
        return Err(Error::LengthMismatch { expected: n, actual: table.n() });
    }
    let scale = 1.0 / libm::sqrt(n as f64);
    let increments: Vec<f64> = ranks.ranks.iter().map(|&r| table.at_rank(r) * scale).collect();
    let path = partial_sums(&increments);
    Ok(RecoveryOutput {
        scheme: Scheme::Quantile,
        terminal: path.terminal(),
        path,
        rank_fingerprint: ranks.fingerprint(),
        tie_count: ranks.tie_count,
    })
}

/// Deterministic recovery: `Ŵ_{i/n} = n^(-1/2) Σ_{k<=i} Q(R_k / (n+1))`.
pub fn recover_quantile(dx: &[f64]) -> Result<RecoveryOutput> {
    let ranks = compute_ranks(dx)?;
    let table = PlottingQuantiles::new(dx.len())?;
    recover_quantile_with(&ranks, &table)
}

/// Randomized scheme for precomputed ranks.
pub fn recover_randomized_with(ranks: &RankSequence, aux_dw: &[f64]) -> Result<RecoveryOutput> {
    if aux_dw.len() != ranks.len() {
        return Err(Error::LengthMismatch { expected: ranks.len(), actual: aux_dw.len() });
    }
    let sorted = order_statistics(aux_dw)?;
    let increments: Vec<f64> = ranks.ranks.iter().map(|&r| sorted[r - 1]).collect();
    let path = partial_sums(&increments);
    Ok(RecoveryOutput {
        scheme: Scheme::Randomized,
        terminal: path.terminal(),
        path,
        rank_fingerprint: ranks.fingerprint(),
        tie_count: ranks.tie_count,
    })
}

/// Reorder the auxiliary increments `aux_dw` to the ranks of `dx` and sum.
pub fn recover_randomized(dx: &[f64], aux_dw: &[f64]) -> Result<RecoveryOutput> {
    if aux_dw.len() != dx.len() {
        return Err(Error::LengthMismatch { expected: dx.len(), actual: aux_dw.len() });
    }
    recover_randomized_with(&compute_ranks(dx)?, aux_dw)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BridgeError {
    pub sup_error: f64,
    /// Grid index `i` (time `i/n`) where the sup is attained; first one on ties.
    pub argmax_index: usize,
}

/// `max_i |W_i − Ŵ_i − (W_n − Ŵ_n) i/n|` over two paths on the same grid.
pub fn bridge_sup(truth: &GridPath, estimate: &GridPath) -> Result<BridgeError> {
    let n = truth.n();
    if estimate.n() != n {
        return Err(Error::LengthMismatch { expected: n, actual: estimate.n() });
    }
    let mut best = BridgeError { sup_error: 0.0, argmax_index: 0 };
    if n == 0 {
        return Ok(best);
    }
    let end_gap = truth.terminal() - estimate.terminal();
    for (i, (w, v)) in truth.values.iter().zip(&estimate.values).enumerate() {
        let dev = ((w - v) - end_gap * (i as f64 / n as f64)).abs();
        if dev > best.sup_error {
            best = BridgeError { sup_error: dev, argmax_index: i };
        }
    }
    Ok(best)
}

/// Bridged sup-error of a recovery against the true Brownian increments.
pub fn bridge_error(true_dw: &[f64], recovered: &RecoveryOutput) -> Result<BridgeError> {
    if true_dw.len() != recovered.path.n() {
        return Err(Error::LengthMismatch { expected: recovered.path.n(), actual: true_dw.len() });
    }
    bridge_sup(&partial_sums(true_dw), &recovered.path)
}

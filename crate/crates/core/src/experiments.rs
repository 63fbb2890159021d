//! Monte Carlo sweeps over grid sizes and log-log rate fits.
//!
//! Replicate `r` at grid size `n` simulates from stream
//! `derive_stream_id([n, r, 0])`; the randomized scheme draws its auxiliary
//! Brownian increments from `derive_stream_id([n, r, 1])`. Every replicate is
//! therefore an independent pure task, and [`summarize`] only depends on the
//! multiset of records, so results do not depend on scheduling.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::levy::{simulate, LevyModel};
use crate::ranks::compute_ranks;
use crate::recover::{bridge_error, recover_quantile_with, recover_randomized_with, PlottingQuantiles, Scheme};
use crate::rng::{derive_stream_id, gaussian_stream, SeedSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub model: LevyModel,
    /// Strictly increasing grid sizes.
    pub n_grid: Vec<usize>,
    pub replicates: usize,
    pub schemes: Vec<Scheme>,
    pub master_seed: u64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() {
            return Err(Error::domain("n_grid is empty"));
        }
        if self.n_grid[0] == 0 {
            return Err(Error::domain("n_grid entries must be >= 1"));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("n_grid must be strictly increasing"));
        }
        if self.replicates == 0 {
            return Err(Error::domain("replicates must be >= 1"));
        }
        if self.schemes.is_empty() {
            return Err(Error::domain("no recovery scheme selected"));
        }
        Ok(())
    }

    /// `-1/2 + p/4` with `p = max(β* + 0.01, 0.01)` capped at 2.
    pub fn theory_slope(&self) -> f64 {
        let p = (self.model.beta_star() + 0.01).clamp(0.01, 2.0);
        -0.5 + p / 4.0
    }
}

pub fn replicate_stream(n: usize, replicate: usize) -> u64 {
    derive_stream_id(&[n as u64, replicate as u64, 0])
}

pub fn auxiliary_stream(n: usize, replicate: usize) -> u64 {
    derive_stream_id(&[n as u64, replicate as u64, 1])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicateRecord {
    pub scheme: Scheme,
    pub n: usize,
    pub replicate: usize,
    pub sup_error: f64,
    pub argmax_index: usize,
    pub rank_fingerprint: u64,
    pub tie_count: usize,
}

/// Simulate one replicate and recover it with every configured scheme.
///
/// `table` must be the plotting-quantile table for `n`.
pub fn run_replicate(
    config: &SweepConfig,
    n: usize,
    replicate: usize,
    table: &PlottingQuantiles,
) -> Result<Vec<ReplicateRecord>> {
    let stream_id = replicate_stream(n, replicate);
    let wrap = |e: Error| Error::Replicate { n, stream_id, source: Box::new(e) };
    let sample = simulate(&config.model, n, SeedSpec::new(config.master_seed, stream_id)).map_err(wrap)?;
    let ranks = compute_ranks(&sample.dx).map_err(wrap)?;
    let mut out = Vec::with_capacity(config.schemes.len());
    for &scheme in &config.schemes {
        let recovered = match scheme {
            Scheme::Quantile => recover_quantile_with(&ranks, table),
            Scheme::Randomized => {
                let aux_seed = SeedSpec::new(config.master_seed, auxiliary_stream(n, replicate));
                let scale = 1.0 / libm::sqrt(n as f64);
                let aux: Vec<f64> = gaussian_stream(aux_seed, n).into_iter().map(|z| z * scale).collect();
                recover_randomized_with(&ranks, &aux)
            }
        }
        .map_err(wrap)?;
        let err = bridge_error(&sample.dw, &recovered).map_err(wrap)?;
        out.push(ReplicateRecord {
            scheme,
            n,
            replicate,
            sup_error: err.sup_error,
            argmax_index: err.argmax_index,
            rank_fingerprint: recovered.rank_fingerprint,
            tie_count: recovered.tie_count,
        });
    }
    Ok(out)
}

/// Linearly interpolated sample quantile of sorted data (Hyndman–Fan type 7).
pub fn sample_quantile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let h = (sorted.len() - 1) as f64 * p;
    let lo = libm::floor(h) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Ordinary least squares of `ln(error)` on `ln(n)`; returns `(slope,
/// intercept)`, or `None` with fewer than two distinct sizes or a
/// non-positive error.
pub fn fit_rate(rows: &[(f64, f64)]) -> Option<(f64, f64)> {
    if rows.len() < 2 || rows.iter().any(|&(n, e)| !(n > 0.0 && e > 0.0 && e.is_finite())) {
        return None;
    }
    let m = rows.len() as f64;
    let xs: Vec<f64> = rows.iter().map(|r| libm::log(r.0)).collect();
    let ys: Vec<f64> = rows.iter().map(|r| libm::log(r.1)).collect();
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateRow {
    pub n: usize,
    pub median_error: f64,
    pub q90_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub scheme: Scheme,
    pub per_n: Vec<RateRow>,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    /// `-1/2 + p/4` at the smallest admissible `p` (see [`SweepConfig::theory_slope`]).
    pub theory_slope: f64,
    /// Exponents over `p ∈ [β* + 0.01, 2]`: `(theory_slope, 0)`.
    pub theory_band: (f64, f64),
}

/// Aggregate replicate records into one fit per configured scheme.
pub fn summarize(config: &SweepConfig, records: &[ReplicateRecord]) -> Vec<RateFit> {
    config
        .schemes
        .iter()
        .map(|&scheme| {
            let per_n: Vec<RateRow> = config
                .n_grid
                .iter()
                .map(|&n| {
                    let mut errs: Vec<f64> =
                        records.iter().filter(|r| r.scheme == scheme && r.n == n).map(|r| r.sup_error).collect();
                    errs.sort_by(f64::total_cmp);
                    RateRow { n, median_error: sample_quantile(&errs, 0.5), q90_error: sample_quantile(&errs, 0.9) }
                })
                .collect();
            let pairs: Vec<(f64, f64)> = per_n.iter().map(|r| (r.n as f64, r.median_error)).collect();
            let fit = fit_rate(&pairs);
            let theory_slope = config.theory_slope();
            RateFit {
                scheme,
                per_n,
                slope: fit.map(|f| f.0),
                intercept: fit.map(|f| f.1),
                theory_slope,
                theory_band: (theory_slope, 0.0),
            }
        })
        .collect()
}

/// `true` when every scheme saw the same rank sequence in each replicate.
pub fn schemes_agree(records: &[ReplicateRecord]) -> bool {
    records.iter().all(|a| {
        records
            .iter()
            .filter(|b| b.n == a.n && b.replicate == a.replicate)
            .all(|b| b.rank_fingerprint == a.rank_fingerprint)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Ordered by `n`, then replicate, then scheme as configured.
    pub records: Vec<ReplicateRecord>,
    pub fits: Vec<RateFit>,
}

/// Single-threaded sweep.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let mut records = Vec::new();
    for &n in &config.n_grid {
        let table = PlottingQuantiles::new(n)?;
        for r in 0..config.replicates {
            records.extend(run_replicate(config, n, r, &table)?);
        }
    }
    let fits = summarize(config, &records);
    Ok(SweepResult { records, fits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn brownian_config(n_grid: Vec<usize>, replicates: usize, schemes: Vec<Scheme>) -> SweepConfig {
        SweepConfig { model: LevyModel::brownian(), n_grid, replicates, schemes, master_seed: 2024 }
    }

    #[test]
    fn fit_examples() {
        let (s, _) = fit_rate(&[(10.0, 1.0), (100.0, 0.1)]).unwrap();
        assert!((s + 1.0).abs() < 1e-14);
        let c = 3.0;
        let (s, _) = fit_rate(&[(10.0, c * libm::pow(10.0, -0.5)), (100.0, c * 0.1)]).unwrap();
        assert!((s + 0.5).abs() < 1e-14);
        let rows: Vec<(f64, f64)> = [4.0, 16.0, 64.0].iter().map(|&n| (n, 2.0 * libm::pow(n, -0.25))).collect();
        let (s, i) = fit_rate(&rows).unwrap();
        assert!((s + 0.25).abs() < 1e-14);
        assert!((i - libm::log(2.0)).abs() < 1e-14);
        assert!(fit_rate(&[(10.0, 1.0)]).is_none());
        assert!(fit_rate(&[(10.0, 1.0), (100.0, 0.0)]).is_none());
        assert!(fit_rate(&[(10.0, 1.0), (10.0, 0.5)]).is_none());
    }

    #[test]
    fn sample_quantile_interpolates() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(sample_quantile(&xs, 0.5), 2.5);
        assert_eq!(sample_quantile(&xs, 0.0), 1.0);
        assert_eq!(sample_quantile(&xs, 1.0), 4.0);
        assert!((sample_quantile(&xs, 0.9) - 3.7).abs() < 1e-15);
        assert_eq!(sample_quantile(&[5.0], 0.9), 5.0);
    }

    #[test]
    fn degenerate_sweep_has_no_slope() {
        let cfg = brownian_config(vec![4], 1, vec![Scheme::Quantile]);
        let a = run_sweep(&cfg).unwrap();
        let b = run_sweep(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.records.len(), 1);
        assert_eq!(a.fits[0].slope, None);
        assert_eq!(a.fits[0].per_n[0].median_error, a.records[0].sup_error);
    }

    #[test]
    fn config_validation() {
        assert!(brownian_config(vec![], 1, vec![Scheme::Quantile]).validate().is_err());
        assert!(brownian_config(vec![8, 4], 1, vec![Scheme::Quantile]).validate().is_err());
        assert!(brownian_config(vec![4, 4], 1, vec![Scheme::Quantile]).validate().is_err());
        assert!(brownian_config(vec![0, 4], 1, vec![Scheme::Quantile]).validate().is_err());
        assert!(brownian_config(vec![4], 0, vec![Scheme::Quantile]).validate().is_err());
        assert!(brownian_config(vec![4], 1, vec![]).validate().is_err());
    }

    #[test]
    fn theory_slope_tracks_beta_star() {
        let cfg = brownian_config(vec![4], 1, vec![Scheme::Quantile]);
        assert!((cfg.theory_slope() + 0.4975).abs() < 1e-15);
        let stable = crate::levy::JumpPart::SymmetricStable { alpha: 1.5, scale: 1.0 };
        let cfg = SweepConfig { model: LevyModel::new(1.0, 0.0, stable).unwrap(), ..cfg };
        assert!((cfg.theory_slope() - (-0.5 + 1.51 / 4.0)).abs() < 1e-15);
    }

    #[test]
    fn both_schemes_share_ranks() {
        let cfg = brownian_config(vec![16, 64], 5, vec![Scheme::Randomized, Scheme::Quantile]);
        let res = run_sweep(&cfg).unwrap();
        assert_eq!(res.records.len(), 2 * 5 * 2);
        assert!(schemes_agree(&res.records));
        assert_eq!(res.fits.len(), 2);
        assert!(res.fits.iter().all(|f| f.slope.is_some()));
    }
}

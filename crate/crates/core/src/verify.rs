//! Numeric checks of the quantitative statements behind the quantile scheme.
//!
//! * [`lemma1_check`]: `∫₀¹ (Q(u) − Q_n(u))² du <= 3.73/n`, where `Q_n` is the
//!   step function equal to `Q(k/(n+1))` on `[(k−1)/n, k/n)`.
//! * [`empirical_quantile_l2`]: the same distance for the empirical quantile
//!   function of a sample.
//! * [`eta_diagnostics`]: the residuals `η_k` whose partial sums are the
//!   bridged recovery error, and their order-statistic part `η̃_k`.
//! * scanners for the tail inequality `1 − u <= √(π/2) φ(Q(u))`, the Mills
//!   ratio bound and the `Φ ∘ Q` round trip.

use alloc::vec::Vec;

use crate::accum::{exact_sum, ExactSum};
use crate::levy::PathSample;
use crate::normal::{cdf_pair, density, mills_gap, quantile_unchecked};
use crate::quad::integrate;
use crate::ranks::{compute_ranks, order_statistics};
use crate::recover::PlottingQuantiles;
use crate::{Error, Result};

/// Constant of the `O(1/n)` bound on the plotting-position step function.
pub const LEMMA1_CONSTANT: f64 = 3.73;

/// Subdivision budget per grid cell.
const MAX_CELL_INTERVALS: usize = 4000;

/// Required agreement between quadrature and the closed form on end cells.
pub const ENDPOINT_AGREEMENT: f64 = 1e-8;

/// `∫ (Q(u) − c_k)²` over the grid cells `[(k−1)/n, k/n]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDistance {
    pub n: usize,
    pub integral: f64,
    /// Quadrature value of the first cell `[0, 1/n]`.
    pub first_cell_quadrature: f64,
    /// Closed form of the first cell via `∫_{-∞}^a (z − c)² φ(z) dz`.
    pub first_cell_analytic: f64,
    /// Quadrature value of the last cell `[(n−1)/n, 1]`.
    pub last_cell_quadrature: f64,
    pub last_cell_analytic: f64,
}

impl StepDistance {
    pub fn endpoint_discrepancy(&self) -> f64 {
        (self.first_cell_quadrature - self.first_cell_analytic)
            .abs()
            .max((self.last_cell_quadrature - self.last_cell_analytic).abs())
    }
}

/// `∫_{-∞}^{a} (z − c)² φ(z) dz = Φ(a)(1 + c²) − aφ(a) + 2cφ(a)`.
fn lower_gaussian_moment(a: f64, c: f64) -> f64 {
    if a == f64::INFINITY {
        return 1.0 + c * c;
    }
    let dens = density(a);
    cdf_pair(a).0 * (1.0 + c * c) - a * dens + 2.0 * c * dens
}

/// `∫_{b}^{∞} (z − c)² φ(z) dz = Φ̄(b)(1 + c²) + bφ(b) − 2cφ(b)`.
fn upper_gaussian_moment(b: f64, c: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return 1.0 + c * c;
    }
    let dens = density(b);
    cdf_pair(b).1 * (1.0 + c * c) + b * dens - 2.0 * c * dens
}

/// L² distance between `Q` and the step function taking `levels[k−1]` on the
/// `k`-th of `n = levels.len()` equal cells. Each cell is integrated to an
/// absolute tolerance of `1e−12 / n`.
pub fn step_l2_distance(levels: &[f64]) -> Result<StepDistance> {
    let n = levels.len();
    if n == 0 {
        return Err(Error::domain("step function needs at least one level"));
    }
    if let Some(bad) = levels.iter().find(|v| !v.is_finite()) {
        return Err(Error::domain(alloc::format!("non-finite level {bad}")));
    }
    let nf = n as f64;
    let tolerance = 1e-12 / nf;
    let mut total = ExactSum::new();
    let mut first = 0.0;
    let mut last = 0.0;
    for (k, &c) in levels.iter().enumerate() {
        let a = k as f64 / nf;
        let b = if k + 1 == n { 1.0 } else { (k + 1) as f64 / nf };
        // Cells in the upper half are integrated as their mirror image near 0,
        // using Q(1 − v) = −Q(v); 1 − a and 1 − b are exact there.
        let (lo, hi, level) = if a >= 0.5 { (1.0 - b, 1.0 - a, -c) } else { (a, b, c) };
        let cell = integrate(
            |u| {
                let d = quantile_unchecked(u) - level;
                d * d
            },
            lo,
            hi,
            tolerance,
            MAX_CELL_INTERVALS,
        )?;
        if k == 0 {
            first = cell.value;
        }
        if k + 1 == n {
            last = cell.value;
        }
        total.add(cell.value);
    }
    let (first_analytic, last_analytic) = if n == 1 {
        let whole = lower_gaussian_moment(f64::INFINITY, levels[0]);
        (whole, whole)
    } else {
        (
            lower_gaussian_moment(quantile_unchecked(1.0 / nf), levels[0]),
            upper_gaussian_moment(quantile_unchecked((n - 1) as f64 / nf), levels[n - 1]),
        )
    };
    Ok(StepDistance {
        n,
        integral: total.value(),
        first_cell_quadrature: first,
        first_cell_analytic: first_analytic,
        last_cell_quadrature: last,
        last_cell_analytic: last_analytic,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileGridDistance {
    pub n: usize,
    pub integral: f64,
    /// `3.73 / n`.
    pub bound: f64,
    /// `integral <= bound`.
    pub pass: bool,
    pub detail: StepDistance,
}

pub fn lemma1_check(n: usize) -> Result<QuantileGridDistance> {
    let table = PlottingQuantiles::new(n)?;
    let detail = step_l2_distance(table.as_slice())?;
    let bound = LEMMA1_CONSTANT / n as f64;
    Ok(QuantileGridDistance { n, integral: detail.integral, bound, pass: detail.integral <= bound, detail })
}

/// `∫₀¹ (Q*_n(u) − Q(u))² du` for the empirical quantile function of `z`.
pub fn empirical_quantile_l2(z: &[f64]) -> Result<f64> {
    let sorted = order_statistics(z)?;
    Ok(step_l2_distance(&sorted)?.integral)
}

/// Normalising divisor for `Σ η̃²`: `ln ln n`, or 1 below `n = 16`.
pub fn lnln_divisor(n: usize) -> f64 {
    if n < 16 {
        1.0
    } else {
        libm::log(libm::log(n as f64))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaDiagnostics {
    pub n: usize,
    /// `Σ η̃_k` with `η̃_k = [Δ_n W]_{R_k} − n^(-1/2) Q(R_k/(n+1)) − W_1/n`.
    pub sum_eta: f64,
    /// `Σ η̃_k²`.
    pub sum_eta_sq: f64,
    /// `n Σ η̃_k² / ln ln n` (divisor 1 for `n < 16`).
    pub normalized: f64,
    /// `Σ η_k` with `η_k = (Δ_n W)_k − n^(-1/2) Q(R_k/(n+1)) − W_1/n`.
    pub sum_eta_full: f64,
    /// `max_i |Σ_{k<=i} η_k|`: the bridged error of the quantile recovery.
    pub max_partial_full: f64,
}

/// Residual diagnostics for one sample, using its true Brownian increments.
pub fn eta_diagnostics(sample: &PathSample) -> Result<EtaDiagnostics> {
    let n = sample.n;
    if n < 3 {
        return Err(Error::domain(alloc::format!("eta diagnostics need n >= 3, got {n}")));
    }
    if sample.dx.len() != n || sample.dw.len() != n {
        return Err(Error::LengthMismatch { expected: n, actual: sample.dx.len().min(sample.dw.len()) });
    }
    let ranks = compute_ranks(&sample.dx)?;
    let table = PlottingQuantiles::new(n)?;
    let sorted_dw = order_statistics(&sample.dw)?;
    let scale = 1.0 / libm::sqrt(n as f64);
    let mean_step = sample.w1 / n as f64;

    let tilde: Vec<f64> =
        ranks.ranks.iter().map(|&r| sorted_dw[r - 1] - scale * table.at_rank(r) - mean_step).collect();
    let full: Vec<f64> =
        ranks.ranks.iter().zip(&sample.dw).map(|(&r, &w)| w - scale * table.at_rank(r) - mean_step).collect();

    let sum_eta_sq = exact_sum(tilde.iter().map(|e| e * e));
    let mut running = ExactSum::new();
    let mut max_partial_full: f64 = 0.0;
    for &e in &full {
        running.add(e);
        max_partial_full = max_partial_full.max(running.value().abs());
    }
    Ok(EtaDiagnostics {
        n,
        sum_eta: exact_sum(tilde.iter().copied()),
        sum_eta_sq,
        normalized: sum_eta_sq * n as f64 / lnln_divisor(n),
        sum_eta_full: running.value(),
        max_partial_full,
    })
}

/// Result of scanning `1 − u <= √(π/2) φ(Q(u)) + slack` on a grid in `(1/2, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailInequalityScan {
    pub points: usize,
    pub failures: usize,
    /// `min (rhs − lhs)` over the grid.
    pub min_margin: f64,
    /// `|1/2 − √(π/2) φ(0)|`, the gap at `u = 1/2`.
    pub gap_at_half: f64,
}

pub const TAIL_INEQUALITY_SLACK: f64 = 1e-12;

/// Check `1 − u <= √(π/2) φ(Q(u))` at `u_i = 1/2 + i/(2(points+1))`.
pub fn scan_tail_inequality(points: usize) -> TailInequalityScan {
    let c = libm::sqrt(core::f64::consts::FRAC_PI_2);
    let mut failures = 0;
    let mut min_margin = f64::INFINITY;
    for i in 1..=points {
        let u = 0.5 + 0.5 * i as f64 / (points + 1) as f64;
        let margin = c * density(quantile_unchecked(u)) - (1.0 - u);
        if margin + TAIL_INEQUALITY_SLACK < 0.0 {
            failures += 1;
        }
        min_margin = min_margin.min(margin);
    }
    TailInequalityScan { points, failures, min_margin, gap_at_half: (0.5 - c * density(quantile_unchecked(0.5))).abs() }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MillsScan {
    pub points: usize,
    /// Points where the gap is not positive.
    pub failures: usize,
    /// Points where the gap is representable as a normal-range-or-subnormal
    /// `f64` but [`crate::MillsGap::value`] is not positive.
    pub value_failures: usize,
    /// Points where the gap is below the smallest positive `f64`.
    pub underflowed: usize,
    pub min_relative: f64,
}

/// Check `φ(q)/q − Φ̄(q) > 0` at `q_i = q_max · i / points`.
pub fn scan_mills(points: usize, q_max: f64) -> Result<MillsScan> {
    // ln of the smallest positive subnormal, with a little headroom
    let ln_tiny = libm::log(f64::MIN_POSITIVE * f64::EPSILON) + 1.0;
    let mut scan = MillsScan { points, failures: 0, value_failures: 0, underflowed: 0, min_relative: f64::INFINITY };
    for i in 1..=points {
        let q = q_max * i as f64 / points as f64;
        let gap = mills_gap(q)?;
        if !gap.is_positive() {
            scan.failures += 1;
        }
        if gap.ln_value() > ln_tiny {
            if !(gap.value() > 0.0) {
                scan.value_failures += 1;
            }
        } else {
            scan.underflowed += 1;
        }
        scan.min_relative = scan.min_relative.min(gap.relative);
    }
    Ok(scan)
}

/// Round-trip and symmetry scan of the quantile function on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundTripScan {
    pub points: usize,
    /// `max |Φ(Q(u)) − u|`.
    pub max_error: f64,
    /// Pairs `(u, 1 − u)` with an exactly representable complement.
    pub symmetric_pairs: usize,
    /// Of those, pairs with `Q(u) + Q(1 − u) != 0`.
    pub symmetry_failures: usize,
    /// Adjacent grid points where `Q` fails to increase strictly.
    pub monotone_violations: usize,
}

/// `points` probabilities in `[lo, 1 − lo]`: log-spaced on `[lo, 1/2)`,
/// mirrored as `1 − u` above one half (plus `1/2` itself for odd `points`),
/// increasing.
pub fn log_spaced_probabilities(points: usize, lo: f64) -> Vec<f64> {
    let half = points / 2;
    let (l0, l1) = (libm::log(lo), libm::log(0.5));
    let lower: Vec<f64> = (0..half).map(|i| libm::exp(l0 + (i as f64 / half as f64) * (l1 - l0))).collect();
    let mut grid = lower.clone();
    if points % 2 == 1 {
        grid.push(0.5);
    }
    grid.extend(lower.iter().rev().map(|u| 1.0 - u));
    grid
}

pub fn scan_round_trip(grid: &[f64]) -> Result<RoundTripScan> {
    let mut scan = RoundTripScan {
        points: grid.len(),
        max_error: 0.0,
        symmetric_pairs: 0,
        symmetry_failures: 0,
        monotone_violations: 0,
    };
    let mut prev: Option<(f64, f64)> = None;
    for &u in grid {
        let q = crate::normal::quantile(u)?;
        scan.max_error = scan.max_error.max((cdf_pair(q).0 - u).abs());
        let complement = 1.0 - u;
        if 1.0 - complement == u {
            scan.symmetric_pairs += 1;
            let mirrored = crate::normal::quantile(complement)?;
            if q + mirrored != 0.0 {
                scan.symmetry_failures += 1;
            }
        }
        if let Some((pu, pq)) = prev {
            if u > pu && !(q > pq) {
                scan.monotone_violations += 1;
            }
        }
        prev = Some((u, q));
    }
    Ok(scan)
}

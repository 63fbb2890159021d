//! Models `X = Y + σW` (plus a linear drift) and exact simulation of their
//! increments on the grid `{k/n}`.
//!
//! Increments are drawn from their exact laws, so there is no time
//! discretisation bias: `Δ_n W` is i.i.d. `N(0, 1/n)`, a compound Poisson part
//! contributes a Poisson(`rate/n`) number of jumps per cell, and a symmetric
//! stable part contributes a stable variate with scale `scale · n^(-1/alpha)`.

use alloc::vec::Vec;

use crate::accum::prefix_sums;
use crate::rng::{SeedSpec, VariateStream};
use crate::{Error, Result};

/// Law of a single compound Poisson jump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpDist {
    Gaussian {
        mean: f64,
        sd: f64,
    },
    /// `+a` with probability `p`, `-a` otherwise.
    TwoPoint {
        a: f64,
        p: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpPart {
    None,
    CompoundPoisson { rate: f64, jump: JumpDist },
    SymmetricStable { alpha: f64, scale: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyModel {
    sigma: f64,
    drift: f64,
    jump: JumpPart,
}

impl LevyModel {
    pub fn new(sigma: f64, drift: f64, jump: JumpPart) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::domain(alloc::format!("sigma must be finite and > 0, got {sigma}")));
        }
        if !drift.is_finite() {
            return Err(Error::domain(alloc::format!("drift must be finite, got {drift}")));
        }
        match jump {
            JumpPart::None => {}
            JumpPart::CompoundPoisson { rate, jump } => {
                if !(rate > 0.0 && rate.is_finite()) {
                    return Err(Error::domain(alloc::format!("jump rate must be finite and > 0, got {rate}")));
                }
                match jump {
                    JumpDist::Gaussian { mean, sd } => {
                        if !mean.is_finite() || !(sd >= 0.0 && sd.is_finite()) {
                            return Err(Error::domain("gaussian jump needs finite mean and sd >= 0"));
                        }
                    }
                    JumpDist::TwoPoint { a, p } => {
                        if !a.is_finite() || !(0.0..=1.0).contains(&p) {
                            return Err(Error::domain("two-point jump needs finite a and p in [0, 1]"));
                        }
                    }
                }
            }
            JumpPart::SymmetricStable { alpha, scale } => {
                if !(alpha > 0.0 && alpha < 2.0) {
                    return Err(Error::domain(alloc::format!("stable alpha must lie in (0, 2), got {alpha}")));
                }
                if !(scale > 0.0 && scale.is_finite()) {
                    return Err(Error::domain(alloc::format!("stable scale must be finite and > 0, got {scale}")));
                }
            }
        }
        Ok(Self { sigma, drift, jump })
    }

    /// Standard Brownian motion: `σ = 1`, no drift, no jumps.
    pub fn brownian() -> Self {
        Self { sigma: 1.0, drift: 0.0, jump: JumpPart::None }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn drift(&self) -> f64 {
        self.drift
    }

    pub fn jump(&self) -> JumpPart {
        self.jump
    }

    /// Blumenthal–Getoor index of the jump part.
    pub fn beta_star(&self) -> f64 {
        match self.jump {
            JumpPart::None | JumpPart::CompoundPoisson { .. } => 0.0,
            JumpPart::SymmetricStable { alpha, .. } => alpha,
        }
    }
}

/// One replicate: observed increments `dx` and the Brownian increments `dw`
/// they were built from.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    pub n: usize,
    pub dx: Vec<f64>,
    pub dw: Vec<f64>,
    /// `W_1`, the correctly rounded sum of `dw`.
    pub w1: f64,
    /// Total number of compound Poisson jumps on `[0, 1]`.
    pub jump_count: u64,
}

/// A path sampled at `0, 1/n, ..., 1`; `values[0] == 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPath {
    pub values: Vec<f64>,
}

impl GridPath {
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn terminal(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn increments(&self) -> Vec<f64> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// Path of partial sums of `increments`, each correctly rounded.
pub fn partial_sums(increments: &[f64]) -> GridPath {
    GridPath { values: prefix_sums(increments.iter().copied()) }
}

fn jump_increment(stream: &mut VariateStream, model: &LevyModel, n: usize, count: &mut u64) -> Result<f64> {
    Ok(match model.jump {
        JumpPart::None => 0.0,
        JumpPart::CompoundPoisson { rate, jump } => {
            let k = stream.poisson(rate / n as f64)?;
            *count += k;
            let mut sum = 0.0;
            for _ in 0..k {
                sum += match jump {
                    JumpDist::Gaussian { mean, sd } => mean + sd * stream.gaussian(),
                    JumpDist::TwoPoint { a, p } => {
                        if stream.uniform_open() < p {
                            a
                        } else {
                            -a
                        }
                    }
                };
            }
            sum
        }
        JumpPart::SymmetricStable { alpha, scale } => {
            stream.symmetric_stable(alpha, scale * libm::pow(n as f64, -1.0 / alpha))?
        }
    })
}

/// Simulate `Δ_n X` together with the underlying `Δ_n W`.
///
/// All `n` Brownian increments are drawn first, then the jump increments cell
/// by cell, all from the single stream `seed`.
pub fn simulate(model: &LevyModel, n: usize, seed: SeedSpec) -> Result<PathSample> {
    if n == 0 {
        return Err(Error::domain("grid size n must be at least 1"));
    }
    let mut stream = VariateStream::new(seed);
    let step_sd = 1.0 / libm::sqrt(n as f64);
    let dw: Vec<f64> = (0..n).map(|_| stream.gaussian() * step_sd).collect();
    let drift_step = model.drift / n as f64;
    let mut jump_count = 0;
    let mut dx = Vec::with_capacity(n);
    for &w in &dw {
        let jump = jump_increment(&mut stream, model, n, &mut jump_count)?;
        dx.push(model.sigma * w + drift_step + jump);
    }
    let w1 = crate::accum::exact_sum(dw.iter().copied());
    Ok(PathSample { n, dx, dw, w1, jump_count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn model_validation() {
        assert!(LevyModel::new(-1.0, 0.0, JumpPart::None).is_err());
        assert!(LevyModel::new(0.0, 0.0, JumpPart::None).is_err());
        assert!(LevyModel::new(1.0, f64::NAN, JumpPart::None).is_err());
        let stable = JumpPart::SymmetricStable { alpha: 2.0, scale: 1.0 };
        assert!(LevyModel::new(1.0, 0.0, stable).is_err());
        let cp = JumpPart::CompoundPoisson { rate: 0.0, jump: JumpDist::Gaussian { mean: 0.0, sd: 1.0 } };
        assert!(LevyModel::new(1.0, 0.0, cp).is_err());
        let tp = JumpPart::CompoundPoisson { rate: 1.0, jump: JumpDist::TwoPoint { a: 1.0, p: 1.5 } };
        assert!(LevyModel::new(1.0, 0.0, tp).is_err());
    }

    #[test]
    fn beta_star_follows_jump_part() {
        let cp = JumpPart::CompoundPoisson { rate: 5.0, jump: JumpDist::TwoPoint { a: 1.0, p: 0.5 } };
        assert_eq!(LevyModel::brownian().beta_star(), 0.0);
        assert_eq!(LevyModel::new(1.0, 0.0, cp).unwrap().beta_star(), 0.0);
        let st = JumpPart::SymmetricStable { alpha: 1.5, scale: 1.0 };
        assert_eq!(LevyModel::new(1.0, 0.0, st).unwrap().beta_star(), 1.5);
    }

    #[test]
    fn pure_brownian_observes_w() {
        let s = simulate(&LevyModel::brownian(), 4, SeedSpec::new(1, 2)).unwrap();
        assert_eq!(s.dx, s.dw);
        assert_eq!(s.dx.len(), 4);
        assert_eq!(s.w1, crate::accum::exact_sum(s.dw.iter().copied()));
    }

    #[test]
    fn drift_and_scale_are_applied_per_cell() {
        let m = LevyModel::new(2.0, 3.0, JumpPart::None).unwrap();
        let s = simulate(&m, 1, SeedSpec::new(9, 0)).unwrap();
        assert_eq!(s.dx[0], 2.0 * s.dw[0] + 3.0);
    }

    #[test]
    fn zero_grid_is_rejected() {
        assert!(simulate(&LevyModel::brownian(), 0, SeedSpec::new(0, 0)).is_err());
    }

    #[test]
    fn simulation_is_reproducible() {
        let m = LevyModel::new(1.0, 0.0, JumpPart::SymmetricStable { alpha: 1.2, scale: 0.5 }).unwrap();
        let a = simulate(&m, 50, SeedSpec::new(4, 4)).unwrap();
        let b = simulate(&m, 50, SeedSpec::new(4, 4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn brownian_increment_variance() {
        let n = 1_000_000;
        let s = simulate(&LevyModel::brownian(), n, SeedSpec::new(77, 0)).unwrap();
        let scale = libm::sqrt(n as f64);
        let z: Vec<f64> = s.dw.iter().map(|w| w * scale).collect();
        let m = z.iter().sum::<f64>() / n as f64;
        let v = z.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n as f64 - 1.0);
        assert!((v - 1.0).abs() < 0.01, "var {v}");
    }

    #[test]
    fn compound_poisson_count_has_mean_rate() {
        let cp = JumpPart::CompoundPoisson { rate: 5.0, jump: JumpDist::Gaussian { mean: 0.0, sd: 1.0 } };
        let m = LevyModel::new(1.0, 0.0, cp).unwrap();
        let reps = 1000;
        let total: u64 = (0..reps).map(|r| simulate(&m, 1000, SeedSpec::new(5, r)).unwrap().jump_count).sum();
        let mean = total as f64 / reps as f64;
        // sd of the mean is sqrt(5 / 1000)
        assert!((mean - 5.0).abs() < 3.0 * libm::sqrt(5.0 / reps as f64), "mean {mean}");
    }

    #[test]
    fn partial_sum_examples() {
        assert_eq!(partial_sums(&[1.0, -1.0, 2.0]).values, vec![0.0, 1.0, 0.0, 2.0]);
        assert_eq!(partial_sums(&[]).values, vec![0.0]);
        assert_eq!(partial_sums(&[0.5, 0.5]).values, vec![0.0, 0.5, 1.0]);
    }
}

//! The verification suite behind `bridgesift verify`.
//!
//! Each check produces one [`CheckRecord`]. Hard checks decide the exit code;
//! the others are reported for inspection.

use std::io::Write;

use bridgesift_core::experiments::sample_quantile;
use bridgesift_core::rng::{derive_stream_id, gaussian_stream};
use bridgesift_core::verify::{
    eta_diagnostics, lemma1_check, lnln_divisor, log_spaced_probabilities, scan_mills, scan_round_trip,
    scan_tail_inequality, ENDPOINT_AGREEMENT, TAIL_INEQUALITY_SLACK,
};
use bridgesift_core::{simulate, JumpDist, JumpPart, LevyModel, SeedSpec};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::csvio::real;
use crate::error::Result;
use crate::sweep::pool;

pub const L2_GRID: [usize; 8] = [1, 2, 5, 10, 100, 1_000, 10_000, 100_000];
pub const ROUND_TRIP_TOLERANCE: f64 = 1e-12;
pub const ETA_SUM_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 20_260_101;

/// Stream lane reserved for verification draws.
const VERIFY_LANE: u64 = 2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub family: &'static str,
    pub name: String,
    pub inputs: Value,
    pub computed: Value,
    pub bound: Option<f64>,
    pub pass: bool,
    /// Whether a failure makes the whole run fail.
    pub hard: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub tool_version: &'static str,
    pub master_seed: u64,
    pub records: Vec<CheckRecord>,
}

impl VerifyReport {
    pub fn hard_failures(&self) -> Vec<&CheckRecord> {
        self.records.iter().filter(|r| r.hard && !r.pass).collect()
    }

    pub fn families(&self) -> Vec<&'static str> {
        let mut f: Vec<_> = self.records.iter().map(|r| r.family).collect();
        f.dedup();
        f
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut out, self)?;
        out.write_all(b"\n")
    }

    /// One row per record; `inputs` and `computed` are embedded as compact JSON.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| std::io::Error::other(e.to_string());
        w.write_record(["family", "name", "inputs", "computed", "bound", "pass", "hard"]).map_err(io)?;
        for r in &self.records {
            w.write_record([
                r.family.to_string(),
                r.name.clone(),
                r.inputs.to_string(),
                r.computed.to_string(),
                r.bound.map_or_else(String::new, real),
                r.pass.to_string(),
                r.hard.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush()
    }
}

fn record(
    family: &'static str,
    name: String,
    inputs: Value,
    computed: Value,
    bound: Option<f64>,
    pass: bool,
    hard: bool,
) -> CheckRecord {
    CheckRecord { family, name, inputs, computed, bound, pass, hard }
}

fn quantile_grid_records(out: &mut Vec<CheckRecord>) -> Result<()> {
    let checks = L2_GRID.par_iter().map(|&n| lemma1_check(n)).collect::<bridgesift_core::Result<Vec<_>>>()?;
    for c in &checks {
        out.push(record(
            "quantile_grid_l2",
            format!("integral n={}", c.n),
            json!({ "n": c.n }),
            json!({ "integral": c.integral, "n_times_integral": c.integral * c.n as f64 }),
            Some(c.bound),
            c.pass,
            true,
        ));
        let d = c.detail.endpoint_discrepancy();
        out.push(record(
            "quantile_grid_l2",
            format!("endpoint cells n={}", c.n),
            json!({ "n": c.n }),
            json!({
                "first_quadrature": c.detail.first_cell_quadrature,
                "first_analytic": c.detail.first_cell_analytic,
                "last_quadrature": c.detail.last_cell_quadrature,
                "last_analytic": c.detail.last_cell_analytic,
                "discrepancy": d,
            }),
            Some(ENDPOINT_AGREEMENT),
            d <= ENDPOINT_AGREEMENT,
            true,
        ));
    }
    let increases = checks.windows(2).filter(|w| w[1].integral >= w[0].integral).count();
    out.push(record(
        "quantile_grid_l2",
        "decreasing in n".to_string(),
        json!({ "n": L2_GRID }),
        json!({ "adjacent_increases": increases }),
        None,
        increases == 0,
        false,
    ));
    Ok(())
}

fn round_trip_records(out: &mut Vec<CheckRecord>) -> Result<()> {
    let grid = log_spaced_probabilities(10_000, 1e-10);
    let s = scan_round_trip(&grid)?;
    out.push(record(
        "quantile_round_trip",
        "cdf(quantile(u)) - u".to_string(),
        json!({ "points": s.points, "lo": 1e-10, "hi": 1.0 - 1e-10 }),
        json!({ "max_error": s.max_error, "monotone_violations": s.monotone_violations }),
        Some(ROUND_TRIP_TOLERANCE),
        s.max_error <= ROUND_TRIP_TOLERANCE && s.monotone_violations == 0,
        true,
    ));
    out.push(record(
        "quantile_round_trip",
        "quantile(u) + quantile(1 - u) == 0".to_string(),
        json!({ "points": s.points }),
        json!({ "pairs_checked": s.symmetric_pairs, "failures": s.symmetry_failures }),
        Some(0.0),
        s.symmetry_failures == 0,
        true,
    ));
    Ok(())
}

fn eta_models() -> Vec<(&'static str, LevyModel)> {
    let cp = JumpPart::CompoundPoisson { rate: 5.0, jump: JumpDist::Gaussian { mean: 0.0, sd: 1.0 } };
    let st = JumpPart::SymmetricStable { alpha: 1.5, scale: 1.0 };
    vec![
        ("brownian", LevyModel::brownian()),
        ("compound_poisson", LevyModel::new(1.0, 0.0, cp).expect("valid model")),
        ("stable", LevyModel::new(1.0, 0.0, st).expect("valid model")),
    ]
}

fn verify_seed(master: u64, n: usize, r: usize) -> SeedSpec {
    SeedSpec::new(master, derive_stream_id(&[n as u64, r as u64, VERIFY_LANE]))
}

fn eta_sum_records(out: &mut Vec<CheckRecord>, master: u64) -> Result<()> {
    for (label, model) in eta_models() {
        for n in [3usize, 10, 1_000, 100_000] {
            let sample = simulate(&model, n, verify_seed(master, n, 0))?;
            let d = eta_diagnostics(&sample)?;
            out.push(record(
                "eta_zero_sum",
                format!("sum of eta-tilde, {label}, n={n}"),
                json!({ "model": label, "n": n }),
                json!({ "sum_eta": d.sum_eta, "sum_eta_sq": d.sum_eta_sq }),
                Some(ETA_SUM_TOLERANCE),
                d.sum_eta.abs() <= ETA_SUM_TOLERANCE,
                true,
            ));
        }
    }
    Ok(())
}

fn eta_scaling_records(out: &mut Vec<CheckRecord>, master: u64) -> Result<()> {
    let grid: Vec<usize> = (8..=16).map(|k| 1usize << k).collect();
    let replicates = 100;
    let mut medians = Vec::with_capacity(grid.len());
    for &n in &grid {
        let mut normalized = (0..replicates)
            .into_par_iter()
            .map(|r| {
                let sample = simulate(&LevyModel::brownian(), n, verify_seed(master, n, r))?;
                Ok(eta_diagnostics(&sample)?.normalized)
            })
            .collect::<bridgesift_core::Result<Vec<f64>>>()?;
        normalized.sort_by(f64::total_cmp);
        medians.push(sample_quantile(&normalized, 0.5));
    }
    let hi = medians.iter().copied().fold(f64::MIN, f64::max);
    let lo = medians.iter().copied().fold(f64::MAX, f64::min);
    out.push(record(
        "eta_scaling",
        "median of n * sum(eta-tilde^2) / ln ln n".to_string(),
        json!({ "model": "brownian", "n": grid, "replicates": replicates }),
        json!({ "medians": medians, "max_over_min": hi / lo }),
        Some(5.0),
        hi / lo < 5.0,
        false,
    ));
    Ok(())
}

fn empirical_l2_records(out: &mut Vec<CheckRecord>, master: u64) -> Result<()> {
    let replicates = 100;
    for n in [1_000usize, 10_000] {
        let mut scaled = (0..replicates)
            .into_par_iter()
            .map(|r| {
                let z = gaussian_stream(verify_seed(master, n, r), n);
                Ok(bridgesift_core::verify::empirical_quantile_l2(&z)? * n as f64 / lnln_divisor(n))
            })
            .collect::<bridgesift_core::Result<Vec<f64>>>()?;
        scaled.sort_by(f64::total_cmp);
        out.push(record(
            "empirical_quantile_l2",
            format!("median of n * L2 / ln ln n, n={n}"),
            json!({ "n": n, "replicates": replicates }),
            json!({ "median": sample_quantile(&scaled, 0.5), "q90": sample_quantile(&scaled, 0.9) }),
            None,
            scaled.iter().all(|v| v.is_finite() && *v >= 0.0),
            false,
        ));
    }
    Ok(())
}

fn inequality_records(out: &mut Vec<CheckRecord>) -> Result<()> {
    let t = scan_tail_inequality(100_000);
    out.push(record(
        "tail_inequality",
        "1 - u <= sqrt(pi/2) phi(Q(u)) on (1/2, 1)".to_string(),
        json!({ "points": t.points, "slack": TAIL_INEQUALITY_SLACK }),
        json!({ "failures": t.failures, "min_margin": t.min_margin, "gap_at_half": t.gap_at_half }),
        Some(0.0),
        t.failures == 0,
        false,
    ));
    let m = scan_mills(10_000, 40.0)?;
    out.push(record(
        "mills_gap",
        "phi(q)/q - upper tail(q) > 0 on (0, 40]".to_string(),
        json!({ "points": m.points, "q_max": 40.0 }),
        json!({
            "failures": m.failures,
            "value_failures": m.value_failures,
            "underflowed": m.underflowed,
            "min_relative": m.min_relative,
        }),
        Some(0.0),
        m.failures == 0 && m.value_failures == 0,
        false,
    ));
    Ok(())
}

/// Run every check. `threads` as for [`crate::sweep::pool`].
pub fn run_verification(master_seed: u64, threads: Option<usize>) -> Result<VerifyReport> {
    pool(threads)?.install(|| {
        let mut records = Vec::new();
        quantile_grid_records(&mut records)?;
        round_trip_records(&mut records)?;
        eta_sum_records(&mut records, master_seed)?;
        inequality_records(&mut records)?;
        eta_scaling_records(&mut records, master_seed)?;
        empirical_l2_records(&mut records, master_seed)?;
        Ok(VerifyReport { tool_version: crate::manifest::TOOL_VERSION, master_seed, records })
    })
}

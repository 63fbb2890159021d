//! Subcommands of the `bridgesift` binary.

use std::path::{Path, PathBuf};

use bridgesift_core::experiments::{auxiliary_stream, schemes_agree};
use bridgesift_core::rng::gaussian_stream;
use bridgesift_core::{compute_ranks, recover::recover_quantile_with, recover::recover_randomized_with, simulate};
use bridgesift_core::{PlottingQuantiles, Scheme, SeedSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::Config;
use crate::csvio::{self, write_file, Format};
use crate::error::{CliError, Result};
use crate::manifest::{manifest_path_for, RunManifest};
use crate::report::{run_verification, DEFAULT_SEED};
use crate::sweep::run_sweep_parallel;

#[derive(Debug, Parser)]
#[command(name = "bridgesift", version, about = "Recover Brownian paths from the ranks of Lévy increments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one path of increments from a config file.
    Simulate(SimulateArgs),
    /// Recover a Brownian path from a CSV of increments.
    Recover(RecoverArgs),
    /// Run a Monte Carlo sweep of recovery errors.
    Sweep(SweepArgs),
    /// Run the numerical verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Quantile,
    Randomized,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Quantile => Scheme::Quantile,
            SchemeArg::Randomized => Scheme::Randomized,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Overrides `seed.master`.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct RecoverArgs {
    /// CSV with a header and an increment column (`dx`).
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub scheme: SchemeArg,
    #[arg(long)]
    pub out: PathBuf,
    /// Master seed of the auxiliary Brownian stream; required for `randomized`.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
    /// Overrides `seed.master`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; 0 or unset means all cores.
    #[arg(long, env = "BRIDGESIFT_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Report file; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, env = "BRIDGESIFT_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Recover(a) => cmd_recover(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Verify(a) => cmd_verify(&a),
    }
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let config = Config::load(&args.config)?;
    let model = config.model()?;
    let n = config.simulate_n()?;
    let seed = config.seed(args.seed)?;
    let sample = simulate(&model, n, seed)?;
    match Format::from(args.format) {
        Format::Csv => write_file(&args.out, |w| csvio::path_sample_csv(w, &sample))?,
        Format::Json => write_file(&args.out, |w| csvio::path_sample_json(w, &sample))?,
    }
    let mut manifest = RunManifest::new("simulate", &config.canonical(), Some(seed.master_seed));
    manifest.outputs.push(display(&args.out));
    manifest.write(&manifest_path_for(&args.out))
}

pub fn cmd_recover(args: &RecoverArgs) -> Result<()> {
    let scheme = Scheme::from(args.scheme);
    if scheme == Scheme::Randomized && args.seed.is_none() {
        return Err(CliError::Usage("--scheme randomized needs --seed for the auxiliary Brownian stream".into()));
    }
    let dx = csvio::read_increments(&args.input)?;
    let n = dx.len();
    let ranks = compute_ranks(&dx)?;
    let recovered = match scheme {
        Scheme::Quantile => recover_quantile_with(&ranks, &PlottingQuantiles::new(n)?)?,
        Scheme::Randomized => {
            let seed = SeedSpec::new(args.seed.expect("checked above"), auxiliary_stream(n, 0));
            let scale = 1.0 / (n as f64).sqrt();
            let aux: Vec<f64> = gaussian_stream(seed, n).into_iter().map(|z| z * scale).collect();
            recover_randomized_with(&ranks, &aux)?
        }
    };
    if recovered.tie_count > 0 {
        eprintln!(
            "warning: {} tied increment value(s); ties ranked by position (earlier gets the smaller rank)",
            recovered.tie_count
        );
    }
    match Format::from(args.format) {
        Format::Csv => write_file(&args.out, |w| csvio::grid_path_csv(w, &recovered.path))?,
        Format::Json => write_file(&args.out, |w| csvio::grid_path_json(w, scheme, &recovered.path))?,
    }
    let mut canonical = format!("recover.scheme={scheme}\n");
    if let Some(s) = args.seed {
        canonical.push_str(&format!("recover.seed={s}\n"));
    }
    let mut manifest = RunManifest::new("recover", &canonical, args.seed);
    manifest.tie_count = Some(recovered.tie_count);
    manifest.outputs.push(display(&args.out));
    manifest.write(&manifest_path_for(&args.out))
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let config_file = Config::load(&args.config)?;
    let config = config_file.sweep(args.seed)?;
    let result = run_sweep_parallel(&config, args.threads)?;
    if !schemes_agree(&result.records) {
        return Err(CliError::Verification("schemes consumed different rank sequences".into()));
    }
    std::fs::create_dir_all(&args.out).map_err(|e| CliError::io(&args.out, e))?;
    let format = Format::from(args.format);
    let ext = format.extension();
    let replicates_path = args.out.join(format!("replicates.{ext}"));
    let summary_path = args.out.join(format!("summary.{ext}"));
    match format {
        Format::Csv => {
            write_file(&replicates_path, |w| csvio::records_csv(w, &result.records))?;
            write_file(&summary_path, |w| csvio::summary_csv(w, &result.fits))?;
        }
        Format::Json => {
            write_file(&replicates_path, |w| csvio::records_json(w, &result.records))?;
            write_file(&summary_path, |w| csvio::summary_json(w, &result.fits))?;
        }
    }
    for fit in &result.fits {
        let slope = fit.slope.map_or_else(|| csvio::ABSENT.to_string(), |s| format!("{s:.4}"));
        println!(
            "{}: fitted slope {slope}; theory exponent band [{:.4}, {:.4}] (tolerances are engineering choices)",
            fit.scheme, fit.theory_band.0, fit.theory_band.1
        );
    }
    let mut manifest = RunManifest::new("sweep", &config_file.canonical(), Some(config.master_seed));
    manifest.outputs.push(display(&replicates_path));
    manifest.outputs.push(display(&summary_path));
    manifest.write(&args.out.join("manifest.json"))
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<()> {
    let report = run_verification(args.seed, args.threads)?;
    let format = Format::from(args.format);
    let write = |w: &mut dyn std::io::Write| match format {
        Format::Csv => report.write_csv(w),
        Format::Json => report.write_json(w),
    };
    match &args.out {
        Some(path) => {
            write_file(path, |w| write(w))?;
            let mut manifest = RunManifest::new("verify", &format!("verify.seed={}\n", args.seed), Some(args.seed));
            manifest.outputs.push(display(path));
            manifest.write(&manifest_path_for(path))?;
        }
        None => write(&mut std::io::stdout().lock()).map_err(|e| CliError::io("<stdout>", e))?,
    }
    for family in report.families() {
        let (total, passed) = report
            .records
            .iter()
            .filter(|r| r.family == family)
            .fold((0, 0), |(t, p), r| (t + 1, p + usize::from(r.pass)));
        eprintln!("{family}: {passed}/{total} passed");
    }
    let failed = report.hard_failures();
    if failed.is_empty() {
        Ok(())
    } else {
        let names: Vec<_> = failed.iter().map(|r| format!("{} / {}", r.family, r.name)).collect();
        Err(CliError::Verification(names.join("; ")))
    }
}

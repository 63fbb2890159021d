//! Flat `key = value` run configuration.
//!
//! One entry per line; `#` starts a comment; blank lines are ignored. Keys are
//! dotted paths from a fixed vocabulary ([`KEYS`]); unknown or repeated keys are
//! rejected. Lists (`sweep.n_grid`, `sweep.schemes`) are comma separated.
//!
//! ```text
//! model.sigma = 1
//! model.jump.kind = compound_poisson
//! model.jump.rate = 5
//! model.jump.dist = gaussian
//! seed.master = 20260101
//! sweep.n_grid = 256, 512, 1024
//! sweep.replicates = 200
//! sweep.schemes = quantile, randomized
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use bridgesift_core::{JumpDist, JumpPart, LevyModel, Scheme, SeedSpec, SweepConfig};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// Every accepted key with its default, or `None` when it has no default.
pub const KEYS: &[(&str, Option<&str>)] = &[
    ("model.sigma", Some("1")),
    ("model.drift", Some("0")),
    ("model.jump.kind", Some("none")),
    ("model.jump.rate", None),
    ("model.jump.dist", Some("gaussian")),
    ("model.jump.mean", Some("0")),
    ("model.jump.sd", Some("1")),
    ("model.jump.a", Some("1")),
    ("model.jump.p", Some("0.5")),
    ("model.jump.alpha", None),
    ("model.jump.scale", Some("1")),
    ("simulate.n", None),
    ("seed.master", None),
    ("seed.stream", Some("0")),
    ("sweep.n_grid", None),
    ("sweep.replicates", None),
    ("sweep.schemes", Some("quantile")),
];

const COMPOUND_POISSON_KEYS: &[&str] =
    &["model.jump.rate", "model.jump.dist", "model.jump.mean", "model.jump.sd", "model.jump.a", "model.jump.p"];
const STABLE_KEYS: &[&str] = &["model.jump.alpha", "model.jump.scale"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl FromStr for Config {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "config line {}: expected `key = value`, got `{line}`",
                    lineno + 1
                )));
            };
            let key = key.trim();
            let value = value.trim();
            if !KEYS.iter().any(|(k, _)| *k == key) {
                return Err(CliError::config(key, "unknown key"));
            }
            if value.is_empty() {
                return Err(CliError::config(key, "empty value"));
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(CliError::config(key, "given more than once"));
            }
        }
        Ok(Config { entries })
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        text.parse()
    }

    /// Sorted `key=value` lines of the explicitly given entries.
    pub fn canonical(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// Hex SHA-256 of [`Config::canonical`].
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    pub fn is_set(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn raw(&self, key: &str) -> Result<&str> {
        if let Some(v) = self.entries.get(key) {
            return Ok(v);
        }
        KEYS.iter()
            .find(|(k, _)| *k == key)
            .and_then(|(_, d)| *d)
            .ok_or_else(|| CliError::config(key, "required but missing"))
    }

    fn parse<T: FromStr>(&self, key: &str, what: &str) -> Result<T> {
        let raw = self.raw(key)?;
        raw.parse().map_err(|_| CliError::config(key, format!("expected {what}, got `{raw}`")))
    }

    fn real(&self, key: &str) -> Result<f64> {
        let v: f64 = self.parse(key, "a real number")?;
        if !v.is_finite() {
            return Err(CliError::config(key, format!("must be finite, got {v}")));
        }
        Ok(v)
    }

    fn positive(&self, key: &str) -> Result<f64> {
        let v = self.real(key)?;
        if v <= 0.0 {
            return Err(CliError::config(key, format!("must be > 0, got {v}")));
        }
        Ok(v)
    }

    fn count(&self, key: &str) -> Result<usize> {
        let v: usize = self.parse(key, "a positive integer")?;
        if v == 0 {
            return Err(CliError::config(key, "must be at least 1"));
        }
        Ok(v)
    }

    fn reject_unused(&self, keys: &[&str], kind: &str) -> Result<()> {
        match keys.iter().find(|k| self.is_set(k)) {
            Some(k) => Err(CliError::config(*k, format!("not used when model.jump.kind = {kind}"))),
            None => Ok(()),
        }
    }

    pub fn model(&self) -> Result<LevyModel> {
        let sigma = self.positive("model.sigma")?;
        let drift = self.real("model.drift")?;
        let kind = self.raw("model.jump.kind")?;
        let jump = match kind {
            "none" => {
                self.reject_unused(COMPOUND_POISSON_KEYS, kind)?;
                self.reject_unused(STABLE_KEYS, kind)?;
                JumpPart::None
            }
            "compound_poisson" => {
                self.reject_unused(STABLE_KEYS, kind)?;
                let rate = self.positive("model.jump.rate")?;
                let dist = match self.raw("model.jump.dist")? {
                    "gaussian" => {
                        self.reject_unused(&["model.jump.a", "model.jump.p"], "compound_poisson with gaussian jumps")?;
                        let sd = self.real("model.jump.sd")?;
                        if sd < 0.0 {
                            return Err(CliError::config("model.jump.sd", format!("must be >= 0, got {sd}")));
                        }
                        JumpDist::Gaussian { mean: self.real("model.jump.mean")?, sd }
                    }
                    "two_point" => {
                        self.reject_unused(
                            &["model.jump.mean", "model.jump.sd"],
                            "compound_poisson with two_point jumps",
                        )?;
                        let p = self.real("model.jump.p")?;
                        if !(0.0..=1.0).contains(&p) {
                            return Err(CliError::config("model.jump.p", format!("must lie in [0, 1], got {p}")));
                        }
                        JumpDist::TwoPoint { a: self.real("model.jump.a")?, p }
                    }
                    other => {
                        return Err(CliError::config(
                            "model.jump.dist",
                            format!("expected gaussian or two_point, got `{other}`"),
                        ))
                    }
                };
                JumpPart::CompoundPoisson { rate, jump: dist }
            }
            "stable" => {
                self.reject_unused(COMPOUND_POISSON_KEYS, kind)?;
                let alpha = self.real("model.jump.alpha")?;
                if !(alpha > 0.0 && alpha < 2.0) {
                    return Err(CliError::config("model.jump.alpha", format!("must lie in (0, 2), got {alpha}")));
                }
                JumpPart::SymmetricStable { alpha, scale: self.positive("model.jump.scale")? }
            }
            other => {
                return Err(CliError::config(
                    "model.jump.kind",
                    format!("expected none, compound_poisson or stable, got `{other}`"),
                ))
            }
        };
        LevyModel::new(sigma, drift, jump).map_err(|e| CliError::config("model", e.to_string()))
    }

    /// `seed.master`, unless `seed_override` is given.
    pub fn master_seed(&self, seed_override: Option<u64>) -> Result<u64> {
        match seed_override {
            Some(s) => Ok(s),
            None => self.parse("seed.master", "an unsigned 64-bit integer"),
        }
    }

    pub fn simulate_n(&self) -> Result<usize> {
        self.count("simulate.n")
    }

    pub fn seed(&self, seed_override: Option<u64>) -> Result<SeedSpec> {
        let stream = self.parse("seed.stream", "an unsigned 64-bit integer")?;
        Ok(SeedSpec::new(self.master_seed(seed_override)?, stream))
    }

    pub fn sweep(&self, seed_override: Option<u64>) -> Result<SweepConfig> {
        let key = "sweep.n_grid";
        let n_grid = self
            .raw(key)?
            .split(',')
            .map(|s| {
                let s = s.trim();
                match s.parse::<usize>() {
                    Ok(n) if n > 0 => Ok(n),
                    _ => Err(CliError::config(key, format!("expected positive integers, got `{s}`"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::config(key, "must be strictly increasing"));
        }
        let key = "sweep.schemes";
        let mut schemes = self
            .raw(key)?
            .split(',')
            .map(|s| s.trim().parse::<Scheme>().map_err(|e| CliError::config(key, e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        schemes.sort();
        schemes.dedup();
        let config = SweepConfig {
            model: self.model()?,
            n_grid,
            replicates: self.count("sweep.replicates")?,
            schemes,
            master_seed: self.master_seed(seed_override)?,
        };
        config.validate().map_err(|e| CliError::config("sweep", e.to_string()))?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Config> {
        text.parse()
    }

    fn key_of(e: CliError) -> String {
        match e {
            CliError::Config { key, .. } => key,
            other => panic!("expected a config error, got {other}"),
        }
    }

    #[test]
    fn defaults_give_brownian_motion() {
        let c = parse("").unwrap();
        assert_eq!(c.model().unwrap(), LevyModel::brownian());
    }

    #[test]
    fn comments_whitespace_and_order_do_not_change_the_digest() {
        let a = parse("model.sigma = 2\nsimulate.n=10\n").unwrap();
        let b = parse("# header\n  simulate.n =  10   # grid\n\nmodel.sigma=2\n").unwrap();
        assert_eq!(a.canonical(), "model.sigma=2\nsimulate.n=10\n");
        assert_eq!(a.digest(), b.digest());
        assert_eq!(a.digest().len(), 64);
    }

    #[test]
    fn negative_sigma_names_the_key() {
        let e = parse("model.sigma = -1").unwrap().model().unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("sigma"));
    }

    #[test]
    fn rejects_unknown_repeated_and_malformed_entries() {
        assert_eq!(key_of(parse("model.sgima = 1").unwrap_err()), "model.sgima");
        assert_eq!(key_of(parse("model.sigma = 1\nmodel.sigma = 2").unwrap_err()), "model.sigma");
        assert!(matches!(parse("model.sigma 1"), Err(CliError::Usage(_))));
        assert_eq!(key_of(parse("model.sigma = abc").unwrap().model().unwrap_err()), "model.sigma");
    }

    #[test]
    fn jump_models() {
        let cp = parse("model.jump.kind = compound_poisson\nmodel.jump.rate = 5").unwrap();
        assert_eq!(
            cp.model().unwrap().jump(),
            JumpPart::CompoundPoisson { rate: 5.0, jump: JumpDist::Gaussian { mean: 0.0, sd: 1.0 } }
        );
        let tp = parse(
            "model.jump.kind = compound_poisson\nmodel.jump.rate = 2\nmodel.jump.dist = two_point\nmodel.jump.a = 0.3",
        )
        .unwrap();
        assert_eq!(
            tp.model().unwrap().jump(),
            JumpPart::CompoundPoisson { rate: 2.0, jump: JumpDist::TwoPoint { a: 0.3, p: 0.5 } }
        );
        let st = parse("model.jump.kind = stable\nmodel.jump.alpha = 1.5").unwrap();
        assert_eq!(st.model().unwrap().jump(), JumpPart::SymmetricStable { alpha: 1.5, scale: 1.0 });

        let missing_rate = parse("model.jump.kind = compound_poisson").unwrap();
        assert_eq!(key_of(missing_rate.model().unwrap_err()), "model.jump.rate");
        let bad_alpha = parse("model.jump.kind = stable\nmodel.jump.alpha = 2").unwrap();
        assert_eq!(key_of(bad_alpha.model().unwrap_err()), "model.jump.alpha");
        let stray = parse("model.jump.rate = 5").unwrap();
        assert_eq!(key_of(stray.model().unwrap_err()), "model.jump.rate");
    }

    #[test]
    fn sweep_settings() {
        let c =
            parse("seed.master = 7\nsweep.n_grid = 4, 8,16\nsweep.replicates = 3\nsweep.schemes = randomized,quantile")
                .unwrap();
        let s = c.sweep(None).unwrap();
        assert_eq!(s.n_grid, vec![4, 8, 16]);
        assert_eq!(s.replicates, 3);
        assert_eq!(s.schemes, vec![Scheme::Randomized, Scheme::Quantile]);
        assert_eq!(s.master_seed, 7);
        assert_eq!(c.sweep(Some(9)).unwrap().master_seed, 9);

        let unsorted = parse("seed.master = 1\nsweep.n_grid = 8, 4\nsweep.replicates = 1").unwrap();
        assert_eq!(key_of(unsorted.sweep(None).unwrap_err()), "sweep.n_grid");
        let no_seed = parse("sweep.n_grid = 8\nsweep.replicates = 1").unwrap();
        assert_eq!(key_of(no_seed.sweep(None).unwrap_err()), "seed.master");
    }
}

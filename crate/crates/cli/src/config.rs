//! Run configuration: defaults, then a `key=value` file, then flags.

use std::path::{Path, PathBuf};

use cvtele_core::{TeleportParams, DEFAULT_CUTOFF, MAX_CUTOFF};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub q: f64,
    pub cutoff: usize,
    pub beta_max: f64,
    pub steps: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Number of outcomes drawn by `sample`.
    pub count: usize,
    /// Angles per magnitude in the `fig2` sweep; 1 keeps beta real and positive.
    pub angles: usize,
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            q: 0.5,
            cutoff: DEFAULT_CUTOFF,
            beta_max: 3.0,
            steps: 121,
            seed: 1,
            tolerance: 1e-8,
            count: 1000,
            angles: 1,
            output_path: None,
        }
    }
}

/// Partial configuration; `None` leaves the lower-precedence value in place.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub q: Option<f64>,
    pub cutoff: Option<usize>,
    pub beta_max: Option<f64>,
    pub steps: Option<usize>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub count: Option<usize>,
    pub angles: Option<usize>,
    pub output_path: Option<PathBuf>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("line {line}: cannot parse {key} = {value:?}")))
}

impl ConfigOverrides {
    /// Parses `key = value` lines. Blank lines and `#` comments are skipped;
    /// dashes and underscores in keys are interchangeable.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut out = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {line}: expected key=value, got {content:?}"))
            })?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            match key.as_str() {
                "q" => out.q = Some(parse_value(&key, value, line)?),
                "cutoff" => out.cutoff = Some(parse_value(&key, value, line)?),
                "beta_max" => out.beta_max = Some(parse_value(&key, value, line)?),
                "steps" => out.steps = Some(parse_value(&key, value, line)?),
                "seed" => out.seed = Some(parse_value(&key, value, line)?),
                "tolerance" => out.tolerance = Some(parse_value(&key, value, line)?),
                "count" => out.count = Some(parse_value(&key, value, line)?),
                "angles" => out.angles = Some(parse_value(&key, value, line)?),
                "out" | "output_path" => out.output_path = Some(PathBuf::from(value)),
                other => {
                    return Err(CliError::Config(format!(
                        "line {line}: unknown key {other:?}"
                    )))
                }
            }
        }
        Ok(out)
    }
}

impl RunConfig {
    pub fn apply(&mut self, o: &ConfigOverrides) {
        if let Some(v) = o.q {
            self.q = v;
        }
        if let Some(v) = o.cutoff {
            self.cutoff = v;
        }
        if let Some(v) = o.beta_max {
            self.beta_max = v;
        }
        if let Some(v) = o.steps {
            self.steps = v;
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.tolerance {
            self.tolerance = v;
        }
        if let Some(v) = o.count {
            self.count = v;
        }
        if let Some(v) = o.angles {
            self.angles = v;
        }
        if let Some(v) = &o.output_path {
            self.output_path = Some(v.clone());
        }
    }

    /// Defaults, overridden by the optional file, overridden by `flags`.
    pub fn resolve(file: Option<&Path>, flags: &ConfigOverrides) -> Result<Self, CliError> {
        let mut config = Self::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            config.apply(&ConfigOverrides::parse(&text)?);
        }
        config.apply(flags);
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        TeleportParams::new(self.q, self.cutoff).map_err(|e| CliError::Config(e.to_string()))?;
        if self.cutoff < 2 || self.cutoff > MAX_CUTOFF {
            return Err(CliError::Config(format!(
                "cutoff must lie in 2..={MAX_CUTOFF}, got {}",
                self.cutoff
            )));
        }
        if !(self.beta_max.is_finite() && self.beta_max > 0.0) {
            return Err(CliError::Config(format!(
                "beta_max must be positive, got {}",
                self.beta_max
            )));
        }
        if self.steps < 2 {
            return Err(CliError::Config(format!(
                "steps must be at least 2, got {}",
                self.steps
            )));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(CliError::Config(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.count == 0 {
            return Err(CliError::Config("count must be at least 1".into()));
        }
        if self.angles == 0 {
            return Err(CliError::Config("angles must be at least 1".into()));
        }
        Ok(())
    }

    pub fn params(&self) -> Result<TeleportParams, CliError> {
        Ok(TeleportParams::new(self.q, self.cutoff)?)
    }

    pub fn output_or(&self, default: &str) -> PathBuf {
        self.output_path
            .clone()
            .unwrap_or_else(|| PathBuf::from(default))
    }
}

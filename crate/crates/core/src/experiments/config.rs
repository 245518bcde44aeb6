use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algorithms::OffsetMode;
use crate::error::{Error, Result};
use crate::lattice::GoodBadParams;

/// Ensemble size when none is configured.
pub const DEFAULT_ENSEMBLE: usize = 50;

/// Sweep lengths used by the distribution and payoff experiments.
pub const DEFAULT_T_GRID: [f64; 10] = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 100.0];

/// Largest scaled problem energy in ensemble sweeps. Larger than the
/// single-instance default so a `T = 100` sweep is close to adiabatic.
pub const DEFAULT_SCALE_TARGET: f64 = 200.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

/// Settings shared by every experiment. Stored as TOML: scalar keys at the
/// top, with `[offset]` and `[lattice]` sections.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub dims: Vec<usize>,
    pub ensemble: usize,
    pub t_grid: Vec<f64>,
    pub seed: u64,
    pub steps: Option<usize>,
    pub scale_target: f64,
    pub jobs: Option<usize>,
    pub out_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
    pub offset: OffsetMode,
    /// Good/bad generator settings; `None` picks per-dimension defaults.
    pub lattice: Option<GoodBadParams>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            name: "experiment".into(),
            dims: vec![2],
            ensemble: DEFAULT_ENSEMBLE,
            t_grid: DEFAULT_T_GRID.to_vec(),
            seed: 1,
            steps: None,
            scale_target: DEFAULT_SCALE_TARGET,
            jobs: None,
            out_dir: PathBuf::from("out"),
            formats: vec![OutputFormat::Csv],
            offset: OffsetMode::DefaultTable,
            lattice: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.dims.is_empty() {
            return bad("dims must not be empty".into());
        }
        if self.ensemble == 0 {
            return bad("ensemble must be at least 1".into());
        }
        if self.t_grid.is_empty() || self.t_grid.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return bad("t_grid needs positive, finite sweep lengths".into());
        }
        if self.steps == Some(0) {
            return bad("steps must be at least 1".into());
        }
        if !(self.scale_target > 0.0 && self.scale_target.is_finite()) {
            return bad(format!("scale_target {}", self.scale_target));
        }
        if self.jobs == Some(0) {
            return bad("jobs must be at least 1".into());
        }
        if let Some(l) = &self.lattice {
            if l.entry_range < 1 {
                return bad("lattice.entry_range must be at least 1".into());
            }
        }
        Ok(())
    }

    pub fn lattice_params(&self, dim: usize) -> GoodBadParams {
        self.lattice
            .clone()
            .unwrap_or_else(|| GoodBadParams::for_dim(dim))
    }

    pub fn wants(&self, f: OutputFormat) -> bool {
        self.formats.contains(&f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_through_toml() {
        let mut c = ExperimentConfig {
            name: "payoff".into(),
            dims: vec![2, 3],
            steps: Some(2000),
            jobs: Some(2),
            formats: vec![OutputFormat::Csv, OutputFormat::Svg],
            offset: OffsetMode::Linear { alpha: 1.5 },
            ..ExperimentConfig::default()
        };
        c.lattice = Some(GoodBadParams {
            entry_range: 3,
            num_ops: 12,
        });
        let text = c.to_toml().unwrap();
        assert!(text.contains("[offset]"));
        assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), c);
        let d = ExperimentConfig::default();
        assert_eq!(
            ExperimentConfig::from_toml(&d.to_toml().unwrap()).unwrap(),
            d
        );
    }

    #[test]
    fn rejects_bad_values() {
        assert!(ExperimentConfig::from_toml("ensemble = 0").is_err());
        assert!(ExperimentConfig::from_toml("t_grid = [1.0, -2.0]").is_err());
        assert!(ExperimentConfig::from_toml("bogus = 1").is_err());
        assert!(ExperimentConfig::from_toml("dims = []").is_err());
        let c = ExperimentConfig::from_toml("seed = 9\n[offset]\nmode = \"oracle\"\n").unwrap();
        assert_eq!((c.seed, c.offset), (9, OffsetMode::Oracle));
    }
}

//! Run configuration files.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::engine::{Cabin, Direction, SimConfig, DEFAULT_WALK_SCALE};
use crate::error::ConfigError;
use crate::experiment::{SweepSpec, DEFAULT_RUNS};
use crate::layouts;
use crate::stochastic::{ActionTime, RngSeed};
use crate::strategies::BoardingStrategy;

/// A luggage time given by preset name (`A`, `B`) or as constant seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LuggageSpec {
    Seconds(f64),
    Preset(String),
}

impl LuggageSpec {
    pub fn resolve(&self) -> Result<ActionTime, ConfigError> {
        match self {
            LuggageSpec::Seconds(s) => Ok(ActionTime::Constant(*s)),
            LuggageSpec::Preset(name) => parse_luggage(name),
        }
    }
}

/// `A`, `B`, `walk`, or a number of seconds.
pub fn parse_luggage(text: &str) -> Result<ActionTime, ConfigError> {
    let text = text.trim();
    if let Some(t) = ActionTime::preset(text) {
        return Ok(t);
    }
    text.parse::<f64>()
        .ok()
        .filter(|v| *v >= 0.0 && v.is_finite())
        .map(ActionTime::Constant)
        .ok_or_else(|| ConfigError::Invalid(format!("unknown luggage preset `{text}`")))
}

/// Door ids from a list such as `1L,3L` or `1,3`; the side letter is ignored.
pub fn parse_doors(text: &str) -> Result<Vec<u8>, ConfigError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_door)
        .collect()
}

pub fn parse_door(text: &str) -> Result<u8, ConfigError> {
    text.trim_end_matches(|c: char| c.is_ascii_alphabetic())
        .parse()
        .map_err(|_| ConfigError::Invalid(format!("bad door `{text}`")))
}

fn default_lf() -> f64 {
    1.0
}

fn default_luggage() -> LuggageSpec {
    LuggageSpec::Preset("A".into())
}

fn default_strategy() -> String {
    "random".into()
}

/// Contents of a run configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Built-in layout name or path to a layout file.
    pub layout: String,
    #[serde(default = "default_lf")]
    pub load_factor: f64,
    #[serde(default)]
    pub interference_factor: f64,
    /// Door labels such as `"1L"`; all doors when absent.
    #[serde(default)]
    pub doors: Option<Vec<String>>,
    #[serde(default = "default_luggage")]
    pub luggage: LuggageSpec,
    /// `random`, `outside-in`, `back-to-front[:N]`, `rotating-zone[:N]`.
    #[serde(default = "default_strategy")]
    pub strategy: String,
    /// One seat label per line; overrides `strategy`.
    #[serde(default)]
    pub order_file: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_direction")]
    pub direction: Direction,
    #[serde(default)]
    pub balance_doors: bool,
    #[serde(default)]
    pub walk_scale: Option<f64>,
}

fn default_direction() -> Direction {
    Direction::Boarding
}

impl RunConfig {
    pub fn new(layout: impl Into<String>) -> Self {
        RunConfig {
            layout: layout.into(),
            load_factor: default_lf(),
            interference_factor: 0.0,
            doors: None,
            luggage: default_luggage(),
            strategy: default_strategy(),
            order_file: None,
            seed: 0,
            direction: Direction::Boarding,
            balance_doors: false,
            walk_scale: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Format(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    /// Resolves layout, presets and strategy. Relative paths are taken from
    /// `base_dir` when given.
    pub fn to_sim_config(&self, base_dir: Option<&Path>) -> Result<SimConfig, ConfigError> {
        let rel = |p: &Path| match base_dir {
            Some(b) if p.is_relative() => b.join(p),
            _ => p.to_path_buf(),
        };
        let grid = if layouts::builtin(&self.layout).is_some() {
            layouts::load(&self.layout)?
        } else {
            layouts::load(&rel(Path::new(&self.layout)).display().to_string())?
        };
        let mut cfg = SimConfig::new(Arc::new(Cabin::new(grid)));
        cfg.load_factor = self.load_factor;
        cfg.interference_factor = self.interference_factor;
        cfg.active_doors = self
            .doors
            .as_ref()
            .map(|d| d.iter().map(|s| parse_door(s)).collect::<Result<Vec<_>, _>>())
            .transpose()?;
        cfg.luggage = self.luggage.resolve()?;
        cfg.strategy = match &self.order_file {
            Some(p) => {
                let p = rel(p);
                let text = std::fs::read_to_string(&p).map_err(|source| ConfigError::Io {
                    path: p.display().to_string(),
                    source,
                })?;
                BoardingStrategy::user_defined_from_text(&text)
            }
            None => self.strategy.parse()?,
        };
        cfg.seed = RngSeed(self.seed);
        cfg.direction = self.direction;
        cfg.balance_doors = self.balance_doors;
        cfg.walk_scale = self.walk_scale.unwrap_or(DEFAULT_WALK_SCALE);
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Contents of a sweep file: a base run plus the grids to cross.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub base: RunConfig,
    /// Empty grids keep the base value.
    #[serde(default)]
    pub interference_factors: Vec<f64>,
    #[serde(default)]
    pub load_factors: Vec<f64>,
    #[serde(default)]
    pub luggage: Vec<LuggageSpec>,
    #[serde(default)]
    pub doors: Vec<Vec<String>>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_runs() -> usize {
    DEFAULT_RUNS
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Format(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn to_spec(&self) -> Result<SweepSpec, ConfigError> {
        let or_base = |v: &[f64], base: f64| if v.is_empty() { vec![base] } else { v.to_vec() };
        let mut spec = SweepSpec::new(
            or_base(&self.interference_factors, self.base.interference_factor),
            or_base(&self.load_factors, self.base.load_factor),
        );
        spec.luggage = self.luggage.iter().map(LuggageSpec::resolve).collect::<Result<_, _>>()?;
        spec.doors = self
            .doors
            .iter()
            .map(|set| set.iter().map(|d| parse_door(d)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?;
        spec.n_runs = self.runs;
        spec.base_seed = self.seed;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn door_labels() {
        assert_eq!(parse_doors("1L, 3L").unwrap(), vec![1, 3]);
        assert_eq!(parse_doors("2").unwrap(), vec![2]);
        assert!(parse_doors("L").is_err());
    }

    #[test]
    fn luggage_forms() {
        assert_eq!(parse_luggage("B").unwrap(), ActionTime::preset("B").unwrap());
        assert_eq!(parse_luggage("6.5").unwrap(), ActionTime::Constant(6.5));
        assert!(parse_luggage("C").is_err());
        assert!(parse_luggage("-1").is_err());
    }

    #[test]
    fn minimal_file() {
        let c = RunConfig::from_toml("layout = \"b737\"\nluggage = 8\ndoors = [\"1L\"]\n").unwrap();
        assert_eq!(c.luggage, LuggageSpec::Seconds(8.0));
        let sim = c.to_sim_config(None).unwrap();
        assert_eq!(sim.active_doors, Some(vec![1]));
        assert_eq!(sim.n_pax(), 189);
    }

    #[test]
    fn unknown_key_is_format_error() {
        assert!(matches!(RunConfig::from_toml("layout = \"b737\"\nlf = 1\n"), Err(ConfigError::Format(_))));
    }

    #[test]
    fn sweep_file() {
        let text = "runs = 3\nload_factors = [0.5, 1.0]\nluggage = [6, \"B\"]\ndoors = [[\"1L\"], [\"1L\", \"3L\"]]\n[base]\nlayout = \"prp-wide\"\ninterference_factor = 0.5\n";
        let spec = SweepConfig::from_toml(text).unwrap().to_spec().unwrap();
        assert_eq!(spec.interference_factors, vec![0.5]);
        assert_eq!(spec.load_factors, vec![0.5, 1.0]);
        assert_eq!(spec.luggage.len(), 2);
        assert_eq!(spec.doors, vec![vec![1], vec![1, 3]]);
        assert_eq!(spec.n_runs, 3);
    }

    #[test]
    fn zero_load_factor_is_rejected() {
        let mut c = RunConfig::new("b737");
        c.load_factor = 0.0;
        assert!(c.to_sim_config(None).is_err());
    }
}

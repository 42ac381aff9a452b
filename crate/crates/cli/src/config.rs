//! Sweep configuration file (TOML) and its merge with command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use ghz_discord::channels::ChannelKind;
use ghz_discord::sweep::{parse_grid, preset_r_values, FamilySpec, Measure, SweepConfig};
use ghz_discord::{Execution, OptimizerConfig};
use serde::Deserialize;

/// A grid written either as `"start:stop:count"` or as an explicit list.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum GridSpec {
    Range(String),
    Values(Vec<f64>),
}

impl GridSpec {
    pub fn resolve(&self) -> Result<Vec<f64>> {
        match self {
            GridSpec::Range(s) => Ok(parse_grid(s)?),
            GridSpec::Values(v) => Ok(v.clone()),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSection {
    pub theta_points: Option<usize>,
    pub phi_points: Option<usize>,
    pub top_seeds: Option<usize>,
    pub simplex_tolerance: Option<f64>,
    pub max_evaluations: Option<usize>,
    pub max_grid_points: Option<usize>,
    pub initial_step: Option<f64>,
}

impl OptimizerSection {
    fn apply(&self, cfg: &mut OptimizerConfig) {
        macro_rules! set {
            ($($f:ident),*) => {$(if let Some(v) = self.$f { cfg.$f = v; })*};
        }
        set!(
            theta_points,
            phi_points,
            top_seeds,
            simplex_tolerance,
            max_evaluations,
            max_grid_points,
            initial_step
        );
    }
}

/// Contents of a `--config` file. Every key is optional.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub family: Option<String>,
    pub n: Option<usize>,
    pub mu: Option<f64>,
    pub channels: Option<Vec<String>>,
    pub p_grid: Option<GridSpec>,
    pub r_grid: Option<GridSpec>,
    pub measures: Option<Vec<String>>,
    pub targets: Option<Vec<usize>>,
    pub out: Option<PathBuf>,
    pub sequential: Option<bool>,
    #[serde(default)]
    pub optimizer: OptimizerSection,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid config file {}", path.display()))
    }
}

/// Sweep settings given on the command line; `Some` overrides the file.
#[derive(Clone, Debug, Default)]
pub struct SweepOverrides {
    pub family: Option<String>,
    pub n: Option<usize>,
    pub mu: Option<f64>,
    pub channels: Option<String>,
    pub p_grid: Option<String>,
    pub r_grid: Option<String>,
    pub measures: Option<String>,
    pub targets: Option<String>,
    pub out: Option<PathBuf>,
    pub sequential: bool,
}

pub fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(String::from)
        .collect()
}

pub fn parse_channels(items: &[String]) -> Result<Vec<ChannelKind>> {
    if items.len() == 1 && items[0].eq_ignore_ascii_case("all") {
        return Ok(ChannelKind::ALL.to_vec());
    }
    items.iter().map(|s| Ok(s.parse::<ChannelKind>()?)).collect()
}

pub fn parse_measures(items: &[String]) -> Result<Vec<Measure>> {
    items.iter().map(|s| Ok(s.parse::<Measure>()?)).collect()
}

/// Resolved sweep plus the output destination (`None` = stdout).
pub struct ResolvedSweep {
    pub config: SweepConfig,
    pub out: Option<PathBuf>,
}

/// Merges file values and flags (flags win) over the built-in defaults:
/// 3-qubit Werner-GHZ at `mu = 0.5`, all channels, `p` in `0:1:11`,
/// measures QD and GQD_HS.
pub fn resolve_sweep(file: FileConfig, flags: SweepOverrides) -> Result<ResolvedSweep> {
    let family = flags
        .family
        .or(file.family)
        .unwrap_or_else(|| "werner-ghz".into());
    let p_grid = match flags.p_grid {
        Some(s) => parse_grid(&s)?,
        None => file
            .p_grid
            .map(|g| g.resolve())
            .transpose()?
            .unwrap_or_else(|| parse_grid("0:1:11").expect("valid default grid")),
    };
    let family = match family.to_ascii_lowercase().as_str() {
        "werner-ghz" | "werner" => FamilySpec::WernerGhz {
            n_qubits: flags.n.or(file.n).unwrap_or(3),
            mu: flags.mu.or(file.mu).unwrap_or(0.5),
        },
        "rindler" => {
            let r_grid = match flags.r_grid {
                Some(s) => parse_grid(&s)?,
                None => file
                    .r_grid
                    .map(|g| g.resolve())
                    .transpose()?
                    .unwrap_or_else(preset_r_values),
            };
            FamilySpec::Rindler { r_grid }
        }
        other => bail!("unknown family '{other}' (expected werner-ghz or rindler)"),
    };
    let channels = match flags.channels {
        Some(s) => parse_channels(&split_list(&s))?,
        None => match file.channels {
            Some(v) => parse_channels(&v)?,
            None => ChannelKind::ALL.to_vec(),
        },
    };
    let measures = match flags.measures {
        Some(s) => parse_measures(&split_list(&s))?,
        None => match file.measures {
            Some(v) => parse_measures(&v)?,
            None => vec![Measure::Qd, Measure::GqdHs],
        },
    };
    let targets = match flags.targets {
        Some(s) => Some(
            split_list(&s)
                .iter()
                .map(|t| {
                    t.parse::<usize>()
                        .with_context(|| format!("bad qubit index '{t}'"))
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        None => file.targets,
    };
    let mut optimizer = OptimizerConfig::default();
    file.optimizer.apply(&mut optimizer);
    let sequential = flags.sequential || file.sequential.unwrap_or(false);
    let config = SweepConfig {
        family,
        channels,
        p_grid,
        measures,
        targets,
        optimizer,
        execution: if sequential {
            Execution::Sequential
        } else {
            Execution::best_available()
        },
    };
    config.validate()?;
    Ok(ResolvedSweep {
        config,
        out: flags.out.or(file.out),
    })
}

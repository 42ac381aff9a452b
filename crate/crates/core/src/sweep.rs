//! Parameter sweeps over decoherence strength, Werner weight and
//! acceleration angle, with CSV output.

use std::f64::consts::PI;
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use crate::channels::{kraus_set, ChannelAssignment, ChannelKind};
use crate::discord::{self, gqd_closed_form, DiscordResult};
use crate::error::{invalid, Error, Result};
use crate::optimize::OptimizerConfig;
use crate::par::{self, Execution};
use crate::states::{StateFamily, R_MAX};

/// CSV header written by [`write_csv`].
pub const CSV_HEADER: [&str; 9] = [
    "family",
    "channel",
    "p",
    "mu",
    "r",
    "measure",
    "value",
    "converged",
    "evaluations",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measure {
    Qd,
    GqdHs,
    GqdEntropic,
    GqdClosed,
}

impl Measure {
    pub const ALL: [Measure; 4] = [
        Measure::Qd,
        Measure::GqdHs,
        Measure::GqdEntropic,
        Measure::GqdClosed,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Measure::Qd => "QD",
            Measure::GqdHs => "GQD_HS",
            Measure::GqdEntropic => "GQD_ENTROPIC",
            Measure::GqdClosed => "GQD_CLOSED",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let m = match s.trim().to_ascii_uppercase().replace('-', "_").as_str() {
            "QD" => Measure::Qd,
            "GQD_HS" | "GQD" => Measure::GqdHs,
            "GQD_ENTROPIC" => Measure::GqdEntropic,
            "GQD_CLOSED" => Measure::GqdClosed,
            other => return Err(invalid(format!("unknown measure '{other}'"))),
        };
        Ok(m)
    }
}

/// State family of a sweep together with its non-`p` grid.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    WernerGhz { n_qubits: usize, mu: f64 },
    Rindler { r_grid: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub family: FamilySpec,
    pub channels: Vec<ChannelKind>,
    pub p_grid: Vec<f64>,
    pub measures: Vec<Measure>,
    /// Qubits the channel acts on; `None` means all of them.
    pub targets: Option<Vec<usize>>,
    pub optimizer: OptimizerConfig,
    /// Scheduling across grid points.
    pub execution: Execution,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.channels.is_empty() {
            return Err(Error::Config("no channels selected".into()));
        }
        if self.measures.is_empty() {
            return Err(Error::Config("no measures selected".into()));
        }
        if self.p_grid.is_empty() {
            return Err(Error::Config("p grid is empty".into()));
        }
        if let Some(p) = self.p_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::Config(format!("p = {p} outside [0, 1]")));
        }
        match &self.family {
            FamilySpec::WernerGhz { n_qubits, mu } => {
                if !(2..=crate::qmatrix::MAX_QUBITS).contains(n_qubits) {
                    return Err(Error::Config(format!("unsupported qubit count {n_qubits}")));
                }
                if !(0.0..=1.0).contains(mu) {
                    return Err(Error::Config(format!("mu = {mu} outside [0, 1]")));
                }
            }
            FamilySpec::Rindler { r_grid } => {
                if r_grid.is_empty() {
                    return Err(Error::Config("r grid is empty".into()));
                }
                if let Some(r) = r_grid.iter().find(|r| !(0.0..=R_MAX).contains(*r)) {
                    return Err(Error::Config(format!("r = {r} outside [0, π/4]")));
                }
            }
        }
        self.optimizer
            .validate()
            .map_err(|e| Error::Config(e.to_string()))
    }

    /// Grid points in sweep order: for the accelerated family `r` is the
    /// outer index and `p` the inner one.
    pub fn grid_points(&self) -> Vec<(StateFamily, f64)> {
        match &self.family {
            FamilySpec::WernerGhz { n_qubits, mu } => self
                .p_grid
                .iter()
                .map(|&p| {
                    (
                        StateFamily::WernerGhz {
                            n_qubits: *n_qubits,
                            mu: *mu,
                        },
                        p,
                    )
                })
                .collect(),
            FamilySpec::Rindler { r_grid } => r_grid
                .iter()
                .flat_map(|&r| {
                    self.p_grid
                        .iter()
                        .map(move |&p| (StateFamily::RindlerGhz { r }, p))
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub family: String,
    pub channel: ChannelKind,
    pub p: f64,
    pub mu: Option<f64>,
    pub r: Option<f64>,
    pub measure: Measure,
    pub value: f64,
    pub converged: bool,
    pub evaluations: usize,
}

/// A row that was skipped, with the reason.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepWarning {
    pub channel: ChannelKind,
    pub p: f64,
    pub r: Option<f64>,
    pub measure: Measure,
    pub message: String,
}

impl fmt::Display for SweepWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "skipped {} for {} at p={}", self.measure, self.channel, self.p)?;
        if let Some(r) = self.r {
            write!(f, ", r={r}")?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub warnings: Vec<SweepWarning>,
}

/// Evaluates one discord measure on an evolved state.
pub fn evaluate_measure(
    measure: Measure,
    rho: &crate::DensityMatrix,
    optimizer: &OptimizerConfig,
) -> Result<DiscordResult> {
    match measure {
        Measure::Qd => discord::global_qd(rho, optimizer),
        Measure::GqdHs => discord::gqd_hs(rho, optimizer),
        Measure::GqdEntropic => discord::gqd_entropic(rho, optimizer),
        Measure::GqdClosed => Err(invalid("closed form is not a numerical measure")),
    }
}

enum Cell {
    Row(SweepRow),
    Skipped(SweepWarning),
}

fn sweep_point(
    config: &SweepConfig,
    channel: ChannelKind,
    family: &StateFamily,
    p: f64,
) -> Result<Vec<Cell>> {
    let (mu, r) = match *family {
        StateFamily::WernerGhz { mu, .. } => (Some(mu), None),
        StateFamily::RindlerGhz { r } => (None, Some(r)),
    };
    let needs_state = config.measures.iter().any(|&m| m != Measure::GqdClosed);
    let evolved = if needs_state {
        let assignment = ChannelAssignment {
            channel: kraus_set(channel, p)?,
            targets: config.targets.clone(),
        };
        Some(assignment.apply(&family.build()?)?)
    } else {
        None
    };

    let mut cells = Vec::with_capacity(config.measures.len());
    for &measure in &config.measures {
        let row = |value: f64, converged: bool, evaluations: usize| SweepRow {
            family: family.label(),
            channel,
            p,
            mu,
            r,
            measure,
            value,
            converged,
            evaluations,
        };
        if measure == Measure::GqdClosed {
            let closed = if config.targets.is_some() {
                Err(Error::Unsupported(
                    "closed forms assume the channel acts on every qubit".into(),
                ))
            } else {
                gqd_closed_form(family, channel, p)
            };
            match closed {
                Ok(v) => cells.push(Cell::Row(row(v, true, 0))),
                Err(Error::Unsupported(message)) => cells.push(Cell::Skipped(SweepWarning {
                    channel,
                    p,
                    r,
                    measure,
                    message,
                })),
                Err(e) => return Err(e),
            }
            continue;
        }
        let rho = evolved.as_ref().expect("state built for numerical measures");
        let res = evaluate_measure(measure, rho, &config.optimizer)?;
        cells.push(Cell::Row(row(res.value, res.converged, res.evaluations)));
    }
    Ok(cells)
}

/// Runs every (channel, grid point, measure) combination.
///
/// Rows are ordered by channel, then grid point, then measure, regardless of
/// the execution mode.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutput> {
    config.validate()?;
    let points = config.grid_points();
    let tasks: Vec<(ChannelKind, StateFamily, f64)> = config
        .channels
        .iter()
        .flat_map(|&c| points.iter().map(move |&(f, p)| (c, f, p)))
        .collect();
    let results = par::map(config.execution, &tasks, |(channel, family, p)| {
        sweep_point(config, *channel, family, *p)
    });

    let mut out = SweepOutput::default();
    for cells in results {
        for cell in cells? {
            match cell {
                Cell::Row(r) => out.rows.push(r),
                Cell::Skipped(w) => out.warnings.push(w),
            }
        }
    }
    Ok(out)
}

/// Formats a number with 12 significant digits in positional notation.
///
/// Zero is written as `0.000000000000`; magnitudes below `1e-9` switch to
/// scientific notation.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0.000000000000".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    if x.abs() < 1e-9 {
        return format!("{x:.11e}");
    }
    // exponent after rounding to 12 significant digits
    let sci = format!("{x:.11e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    let decimals = (11 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

fn optional(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

/// Writes rows with the [`CSV_HEADER`] columns.
pub fn write_csv<W: Write>(rows: &[SweepRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record([
            row.family.clone(),
            row.channel.label().to_string(),
            format_number(row.p),
            optional(row.mu),
            optional(row.r),
            row.measure.label().to_string(),
            format_number(row.value),
            row.converged.to_string(),
            row.evaluations.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes rows to `path` as CSV.
pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    let file = File::create(path)?;
    write_csv(rows, BufWriter::new(file))
}

/// `count` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|i| {
                if i == count - 1 {
                    stop
                } else {
                    start + (stop - start) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

/// Parses `start:stop:count` into a grid, or a single number into a
/// one-point grid. The tokens `pi/4` and `pi` are accepted as endpoints.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let num = |s: &str| -> Result<f64> {
        let s = s.trim();
        let lowered = s.to_ascii_lowercase();
        match lowered.as_str() {
            "pi" => Ok(PI),
            "pi/2" => Ok(PI / 2.0),
            "pi/4" => Ok(PI / 4.0),
            _ => s
                .parse()
                .map_err(|_| Error::Config(format!("cannot parse '{s}' as a number"))),
        }
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [single] => Ok(vec![num(single)?]),
        [start, stop, count] => {
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad point count in grid '{spec}'")))?;
            if count == 0 {
                return Err(Error::Config(format!("grid '{spec}' has no points")));
            }
            Ok(linspace(num(start)?, num(stop)?, count))
        }
        _ => Err(Error::Config(format!(
            "grid '{spec}' is not of the form start:stop:count"
        ))),
    }
}

/// Names accepted by [`figure_preset`].
pub const FIGURE_PRESETS: [&str; 7] = ["fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b", "fig4"];

/// Acceleration angles used for the p-sweeps of the accelerated family.
pub fn preset_r_values() -> Vec<f64> {
    linspace(0.0, R_MAX, 5)
}

/// Sweep configuration for a named figure.
///
/// * `fig1a`/`fig1b`: global discord against `p` at `mu = 0.5`, 3 / 6 qubits,
///   all six channels.
/// * `fig2a`/`fig2b`: the same for Hilbert–Schmidt geometric discord.
/// * `fig3a`/`fig3b`: geometric discord of the accelerated-observer state
///   against `p` for five values of `r`, amplitude damping / bit-phase flip.
/// * `fig4`: global and geometric discord against `r` (33 points) at
///   `p = 0.5`, all six channels.
pub fn figure_preset(name: &str) -> Result<SweepConfig> {
    let p101 = linspace(0.0, 1.0, 101);
    let werner = |n_qubits: usize, measure: Measure| SweepConfig {
        family: FamilySpec::WernerGhz { n_qubits, mu: 0.5 },
        channels: ChannelKind::ALL.to_vec(),
        p_grid: p101.clone(),
        measures: vec![measure],
        targets: None,
        optimizer: OptimizerConfig::default(),
        execution: Execution::best_available(),
    };
    let rindler_p = |channel: ChannelKind| SweepConfig {
        family: FamilySpec::Rindler {
            r_grid: preset_r_values(),
        },
        channels: vec![channel],
        p_grid: p101.clone(),
        measures: vec![Measure::GqdHs],
        targets: None,
        optimizer: OptimizerConfig::default(),
        execution: Execution::best_available(),
    };
    let cfg = match name {
        "fig1a" => werner(3, Measure::Qd),
        "fig1b" => werner(6, Measure::Qd),
        "fig2a" => werner(3, Measure::GqdHs),
        "fig2b" => werner(6, Measure::GqdHs),
        "fig3a" => rindler_p(ChannelKind::AmplitudeDamping),
        "fig3b" => rindler_p(ChannelKind::BitPhaseFlip),
        "fig4" => SweepConfig {
            family: FamilySpec::Rindler {
                r_grid: linspace(0.0, R_MAX, 33),
            },
            channels: ChannelKind::ALL.to_vec(),
            p_grid: vec![0.5],
            measures: vec![Measure::Qd, Measure::GqdHs],
            targets: None,
            optimizer: OptimizerConfig::default(),
            execution: Execution::best_available(),
        },
        other => {
            return Err(Error::Config(format!(
                "unknown figure preset '{other}' (expected one of {})",
                FIGURE_PRESETS.join(", ")
            )))
        }
    };
    Ok(cfg)
}

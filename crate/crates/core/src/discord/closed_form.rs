//! Closed-form Hilbert–Schmidt geometric discord for GHZ-type states with
//! the same channel acting on every qubit.
//!
//! Three families are tabulated: the three- and six-qubit Werner-GHZ states
//! (quadratic in `mu`) and the tripartite accelerated-observer state
//! (proportional to `cos⁴ r`). The expressions are evaluated literally.
//!
//! The depolarizing expressions for the three-qubit Werner family and for the
//! accelerated-observer family disagree with direct evaluation of the
//! evolved state (the first does not vanish at `p = 1`); they are kept as
//! given and flagged by [`is_discrepant_by_design`].

use std::fmt;

use crate::channels::ChannelKind;
use crate::error::{invalid, Error, Result};
use crate::states::StateFamily;

/// Which tabulated family an expression belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClosedFormTable {
    WernerGhz3,
    WernerGhz6,
    Rindler,
}

impl ClosedFormTable {
    pub const ALL: [ClosedFormTable; 3] = [
        ClosedFormTable::WernerGhz3,
        ClosedFormTable::WernerGhz6,
        ClosedFormTable::Rindler,
    ];

    pub fn for_family(family: &StateFamily) -> Result<Self> {
        match *family {
            StateFamily::WernerGhz { n_qubits: 3, .. } => Ok(ClosedFormTable::WernerGhz3),
            StateFamily::WernerGhz { n_qubits: 6, .. } => Ok(ClosedFormTable::WernerGhz6),
            StateFamily::RindlerGhz { .. } => Ok(ClosedFormTable::Rindler),
            StateFamily::WernerGhz { n_qubits, .. } => Err(Error::Unsupported(format!(
                "no closed form for {n_qubits}-qubit Werner-GHZ states (only 3 and 6)"
            ))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ClosedFormTable::WernerGhz3 => "werner-ghz-3",
            ClosedFormTable::WernerGhz6 => "werner-ghz-6",
            ClosedFormTable::Rindler => "rindler",
        }
    }

    /// Channels with a tabulated expression.
    pub fn channels(self) -> &'static [ChannelKind] {
        use ChannelKind::*;
        match self {
            ClosedFormTable::WernerGhz3 | ClosedFormTable::WernerGhz6 => &ChannelKind::ALL,
            ClosedFormTable::Rindler => &[
                AmplitudeDamping,
                Depolarizing,
                PhaseDamping,
                PhaseFlip,
                BitPhaseFlip,
            ],
        }
    }
}

impl fmt::Display for ClosedFormTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Rows whose expression is known not to match the evolved state.
pub fn is_discrepant_by_design(table: ClosedFormTable, kind: ChannelKind) -> bool {
    kind == ChannelKind::Depolarizing
        && matches!(table, ClosedFormTable::WernerGhz3 | ClosedFormTable::Rindler)
}

/// Tabulated geometric discord of `family` after `kind` at strength `p` on
/// every qubit.
pub fn gqd_closed_form(family: &StateFamily, kind: ChannelKind, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("decoherence parameter p = {p} outside [0, 1]")));
    }
    let table = ClosedFormTable::for_family(family)?;
    let q = 1.0 - p;
    match (table, *family) {
        (ClosedFormTable::WernerGhz3, StateFamily::WernerGhz { mu, .. }) => {
            let m2 = mu * mu;
            let v = match kind {
                ChannelKind::AmplitudeDamping | ChannelKind::PhaseDamping => 0.5 * q.powi(3) * m2,
                ChannelKind::Depolarizing => {
                    (4.0 - 3.0 * p).powi(4) * q.powi(2) * m2 / 512.0
                        + p * p * (4.0 + p * (7.0 - 3.0 * p)).powi(2) * m2 / 512.0
                }
                ChannelKind::BitFlip | ChannelKind::BitPhaseFlip => {
                    1.5 * p * p * (1.0 - 3.0 * p + 2.0 * p * p).powi(2) * m2
                        + 0.5 * (1.0 - p * (3.0 - 3.0 * p + 2.0 * p * p)).powi(2) * m2
                }
                ChannelKind::PhaseFlip => 0.5 * (1.0 - 2.0 * p).powi(6) * m2,
            };
            Ok(v)
        }
        (ClosedFormTable::WernerGhz6, StateFamily::WernerGhz { mu, .. }) => {
            let m2 = mu * mu;
            let v = match kind {
                ChannelKind::AmplitudeDamping | ChannelKind::PhaseDamping => 0.5 * q.powi(6) * m2,
                ChannelKind::Depolarizing => 0.5 * q.powi(12) * m2,
                ChannelKind::BitFlip | ChannelKind::BitPhaseFlip => {
                    20.0 * q.powi(6) * p.powi(6) * m2
                        + 7.5 * q.powi(4) * p.powi(4) * (1.0 - 2.0 * p + 2.0 * p * p).powi(2) * m2
                        + 0.5 * (q.powi(6) + p.powi(6)).powi(2) * m2
                        + 3.0
                            * q.powi(2)
                            * p.powi(2)
                            * (1.0 - 4.0 * p + 6.0 * p.powi(2) - 4.0 * p.powi(3) + 2.0 * p.powi(4)).powi(2)
                            * m2
                }
                ChannelKind::PhaseFlip => 0.5 * (1.0 - 2.0 * p).powi(12) * m2,
            };
            Ok(v)
        }
        (ClosedFormTable::Rindler, StateFamily::RindlerGhz { r }) => {
            let c4 = r.cos().powi(4);
            let v = match kind {
                ChannelKind::AmplitudeDamping | ChannelKind::PhaseDamping => 0.5 * q.powi(3) * c4,
                ChannelKind::Depolarizing => {
                    (4.0 - 3.0 * p).powi(4) * q.powi(2) * c4 / 512.0
                        + p * p * (4.0 - 7.0 * p + 3.0 * p * p) * c4 / 512.0
                }
                ChannelKind::PhaseFlip => 0.5 * (1.0 - 2.0 * p).powi(6) * c4,
                ChannelKind::BitPhaseFlip => {
                    1.5 * p * p * (1.0 - 3.0 * p + 2.0 * p * p).powi(2) * c4
                        + 0.5 * (1.0 - 3.0 * p + 3.0 * p * p - 2.0 * p.powi(3)).powi(2) * c4
                }
                ChannelKind::BitFlip => {
                    return Err(Error::Unsupported(
                        "no closed form for the accelerated-observer state under bit flip".into(),
                    ))
                }
            };
            Ok(v)
        }
        _ => unreachable!("table matches family"),
    }
}

//! Global and geometric quantum discord of multipartite GHZ-type states.
//!
//! The crate builds N-qubit Werner-GHZ states and the tripartite state seen by
//! two uniformly accelerated observers, evolves them through single-qubit
//! Kraus channels applied to every qubit, and evaluates
//!
//! * global quantum discord (relative entropy to the locally measured state,
//!   minus the single-party contributions),
//! * Hilbert–Schmidt geometric discord (squared distance to the locally
//!   dephased state),
//! * the entropic multipartite geometric discord,
//!
//! each minimized over local projective measurements by a deterministic
//! multi-start simplex search. Closed-form geometric-discord expressions for
//! the supported state/channel pairs live in [`discord::closed_form`].
//!
//! Sweeps over the decoherence strength `p`, the Werner weight `mu` and the
//! acceleration angle `r` run data-parallel on rayon when the `parallel`
//! feature is enabled (default) and sequentially otherwise.

#[cfg(test)]
macro_rules! assert_close {
    ($a:expr, $b:expr, $tol:expr) => {{
        let (a, b, tol): (f64, f64, f64) = ($a, $b, $tol);
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }};
}

pub mod channels;
pub mod discord;
pub mod error;
pub mod optimize;
pub mod par;
pub mod qmatrix;
pub mod report;
pub mod states;
pub mod sweep;

pub use channels::{ChannelAssignment, ChannelKind, KrausChannel};
pub use discord::{DiscordResult, MeasurementBasis, MeasurementProfile};
pub use error::{Error, Result};
pub use optimize::OptimizerConfig;
pub use par::Execution;
pub use qmatrix::{ComplexMatrix, DensityMatrix};
pub use states::StateFamily;

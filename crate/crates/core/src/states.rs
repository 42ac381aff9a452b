//! Initial states: N-qubit Werner-GHZ mixtures and the tripartite GHZ state
//! shared by one inertial and two uniformly accelerated observers.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::qmatrix::{ComplexMatrix, DensityMatrix, MAX_QUBITS};

/// Largest admissible acceleration angle (infinite acceleration).
pub const R_MAX: f64 = FRAC_PI_4;

/// Parameterized initial state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StateFamily {
    /// `(1-mu) I/2^n + mu |GHZ><GHZ|`.
    WernerGhz { n_qubits: usize, mu: f64 },
    /// Qubits `A, B_I, C_I` after tracing out region-II modes, with both
    /// accelerated observers at the same acceleration angle `r`.
    RindlerGhz { r: f64 },
}

impl StateFamily {
    pub fn n_qubits(&self) -> usize {
        match *self {
            StateFamily::WernerGhz { n_qubits, .. } => n_qubits,
            StateFamily::RindlerGhz { .. } => 3,
        }
    }

    pub fn build(&self) -> Result<DensityMatrix> {
        match *self {
            StateFamily::WernerGhz { n_qubits, mu } => werner_ghz(n_qubits, mu),
            StateFamily::RindlerGhz { r } => rindler_tripartite(r),
        }
    }

    /// Short label used in CSV output, e.g. `werner-ghz-3` or `rindler`.
    pub fn label(&self) -> String {
        match *self {
            StateFamily::WernerGhz { n_qubits, .. } => format!("werner-ghz-{n_qubits}"),
            StateFamily::RindlerGhz { .. } => "rindler".to_string(),
        }
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            StateFamily::WernerGhz { n_qubits, mu } => write!(f, "werner-ghz(n={n_qubits}, mu={mu})"),
            StateFamily::RindlerGhz { r } => write!(f, "rindler(r={r})"),
        }
    }
}

/// N-qubit Werner-GHZ state `(1-mu) I/2^n + mu |ψ><ψ|`, `|ψ> = (|0…0> + |1…1>)/√2`.
pub fn werner_ghz(n_qubits: usize, mu: f64) -> Result<DensityMatrix> {
    if !(2..=MAX_QUBITS).contains(&n_qubits) {
        return Err(invalid(format!(
            "Werner-GHZ needs 2..={MAX_QUBITS} qubits, got {n_qubits}"
        )));
    }
    if !(0.0..=1.0).contains(&mu) {
        return Err(invalid(format!("mu = {mu} outside [0, 1]")));
    }
    let dim = 1usize << n_qubits;
    let last = dim - 1;
    let noise = (1.0 - mu) / dim as f64;
    let mut m = ComplexMatrix::from_diagonal(&vec![noise; dim]);
    for &(i, j) in &[(0, 0), (0, last), (last, 0), (last, last)] {
        m[(i, j)] += Complex64::new(0.5 * mu, 0.0);
    }
    DensityMatrix::from_matrix_unchecked(n_qubits, m)
}

/// Tripartite state on `|A B_I C_I>` with equal acceleration angle `r` for
/// the two accelerated qubits.
///
/// Nonzero entries: `½cos⁴r` at `|000>`, `½cos²r sin²r` at `|001>` and
/// `|010>`, `½sin⁴r` at `|011>`, `½` at `|111>`, and the coherence `½cos²r`
/// between `|000>` and `|111>`.
pub fn rindler_tripartite(r: f64) -> Result<DensityMatrix> {
    if !(0.0..=R_MAX).contains(&r) {
        return Err(invalid(format!("r = {r} outside [0, π/4]")));
    }
    let (s, c) = r.sin_cos();
    let (c2, s2) = (c * c, s * s);
    let mut m = ComplexMatrix::from_diagonal(&[
        0.5 * c2 * c2,
        0.5 * c2 * s2,
        0.5 * s2 * c2,
        0.5 * s2 * s2,
        0.0,
        0.0,
        0.0,
        0.5,
    ]);
    m[(0, 7)] = Complex64::new(0.5 * c2, 0.0);
    m[(7, 0)] = Complex64::new(0.5 * c2, 0.0);
    DensityMatrix::from_matrix_unchecked(3, m)
}

/// Acceleration angle `r = arccos((exp(-2πω/a) + 1)^(-1/2))` in natural
/// units (`c = 1`).
pub fn acceleration_to_r(acceleration: f64, omega: f64) -> Result<f64> {
    if acceleration.is_nan() || acceleration <= 0.0 || omega.is_nan() || omega <= 0.0 {
        return Err(invalid(format!(
            "acceleration and frequency must be positive (a = {acceleration}, ω = {omega})"
        )));
    }
    let boltzmann = (-2.0 * PI * omega / acceleration).exp();
    Ok((1.0 + boltzmann).powf(-0.5).acos())
}

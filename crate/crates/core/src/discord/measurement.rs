use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::optimize::canonical_pair;
use crate::qmatrix::{ComplexMatrix, Op2};

/// Rank-one projective measurement on one qubit.
///
/// `Π_1 = |u><u|` with `u = (cos(θ/2), e^{-iφ} sin(θ/2))`, so
///
/// ```text
/// Π_1 = [ cos²(θ/2)               e^{iφ} cos(θ/2) sin(θ/2) ]
///       [ e^{-iφ} cos(θ/2) sin(θ/2)   sin²(θ/2)            ]
/// ```
///
/// and `Π_2 = I - Π_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementBasis {
    theta: f64,
    phi: f64,
    projectors: [ComplexMatrix; 2],
}

impl MeasurementBasis {
    /// Angles are wrapped into `θ ∈ [0, π]`, `φ ∈ [-π, π)`.
    pub fn new(theta: f64, phi: f64) -> Self {
        let (theta, phi) = canonical_pair(theta, phi);
        let (s, c) = (0.5 * theta).sin_cos();
        let phase = Complex64::from_polar(1.0, phi);
        let p1 = ComplexMatrix::from_2x2(
            Complex64::new(c * c, 0.0),
            phase * (c * s),
            phase.conj() * (c * s),
            Complex64::new(s * s, 0.0),
        );
        let p2 = &ComplexMatrix::identity(2) - &p1;
        MeasurementBasis {
            theta,
            phi,
            projectors: [p1, p2],
        }
    }

    /// σ_z eigenbasis: `Π_1 = |0><0|`, `Π_2 = |1><1|`.
    pub fn sigma_z() -> Self {
        Self::new(0.0, 0.0)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn projectors(&self) -> &[ComplexMatrix; 2] {
        &self.projectors
    }

    /// True when `{Π_1, Π_2}` coincides with `{|0><0|, |1><1|}` up to labels.
    pub fn is_sigma_z_equivalent(&self, tol: f64) -> bool {
        self.theta.sin().abs() <= tol
    }
}

/// Unitary whose rows are `<u|` and `<v|` for the basis at `(θ, φ)`:
/// conjugating by it rotates the measurement basis onto `|0>, |1>`.
pub(crate) fn basis_rotation(theta: f64, phi: f64) -> Op2 {
    let (s, c) = (0.5 * theta).sin_cos();
    let phase = Complex64::from_polar(1.0, phi);
    [
        Complex64::new(c, 0.0),
        phase * s,
        Complex64::new(s, 0.0),
        -phase * c,
    ]
}

/// One measurement basis per qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementProfile(Vec<MeasurementBasis>);

impl MeasurementProfile {
    pub fn new(bases: Vec<MeasurementBasis>) -> Self {
        MeasurementProfile(bases)
    }

    /// σ_z on every qubit.
    pub fn sigma_z(n_qubits: usize) -> Self {
        MeasurementProfile(vec![MeasurementBasis::sigma_z(); n_qubits])
    }

    /// Profile from `[θ_0, φ_0, θ_1, φ_1, …]`.
    pub fn from_angles(angles: &[f64]) -> Result<Self> {
        if !angles.len().is_multiple_of(2) {
            return Err(invalid("angle vector must hold (θ, φ) pairs"));
        }
        Ok(MeasurementProfile(
            angles
                .chunks_exact(2)
                .map(|p| MeasurementBasis::new(p[0], p[1]))
                .collect(),
        ))
    }

    pub fn angles(&self) -> Vec<f64> {
        self.0.iter().flat_map(|b| [b.theta, b.phi]).collect()
    }

    pub fn bases(&self) -> &[MeasurementBasis] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_sigma_z_equivalent(&self, tol: f64) -> bool {
        self.0.iter().all(|b| b.is_sigma_z_equivalent(tol))
    }
}

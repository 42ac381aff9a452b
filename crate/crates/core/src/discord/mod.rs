//! Entropies, local dephasing and the three discord measures.
//!
//! All entropies are in bits. For a measurement profile `Π` with product
//! projectors `Π_k`, the locally measured state is `Φ(ρ) = Σ_k Π_k ρ Π_k`.
//!
//! * global discord: `min_Π [S(Φ(ρ)) - S(ρ)] - Σ_j [S(Φ_j(ρ_j)) - S(ρ_j)]`
//! * Hilbert–Schmidt geometric discord: `min_Π ‖ρ - Φ(ρ)‖²`
//! * entropic geometric discord:
//!   `Σ_j S(ρ_j) - S(ρ) - max_Π [Σ_j S(Φ_j(ρ_j)) - S(Φ(ρ))]`
//!
//! The relative entropy `S(ρ‖Φ(ρ))` is evaluated as `S(Φ(ρ)) - S(ρ)`, which
//! holds for any pinching and avoids logarithms of singular matrices.
//!
//! The minimizations work in the rotated frame where the profile becomes
//! the computational basis: there `Φ(ρ)` is diagonal with the outcome
//! distribution `P`, so `S(Φ(ρ)) = H(P)` and `‖ρ - Φ(ρ)‖² = Tr ρ² - Σ P²`.
//! [`dephase`] and [`global_qd_at`] keep the direct matrix route.

pub mod closed_form;
mod measurement;

pub use closed_form::{gqd_closed_form, is_discrepant_by_design, ClosedFormTable};
pub use measurement::{MeasurementBasis, MeasurementProfile};

use crate::channels::apply_1q_channel;
use crate::error::{invalid, Result};
use crate::optimize::{minimize, Minimum, Negated, Objective, OptimizerConfig};
use crate::qmatrix::{
    hs_norm_sq, left_apply_1q, partial_trace, qubit_mask, right_apply_adjoint_1q, ComplexMatrix,
    DensityMatrix,
};
use measurement::basis_rotation;

/// Eigenvalues (or probabilities) below this are treated as exactly zero.
pub const ENTROPY_CUTOFF: f64 = 1e-12;
/// Negative results above `-CLAMP_WINDOW` are reported as zero.
pub const CLAMP_WINDOW: f64 = 1e-9;

/// `-Σ p log₂ p` over entries above [`ENTROPY_CUTOFF`].
pub fn shannon_entropy(probabilities: impl IntoIterator<Item = f64>) -> f64 {
    probabilities
        .into_iter()
        .filter(|&p| p > ENTROPY_CUTOFF)
        .map(|p| -p * p.log2())
        .sum()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(shannon_entropy(rho.eigenvalues()?))
}

/// Locally dephased state `Σ_k Π_k ρ Π_k`.
pub fn dephase(rho: &DensityMatrix, profile: &MeasurementProfile) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    if profile.len() != n {
        return Err(invalid(format!(
            "profile has {} bases for a {n}-qubit state",
            profile.len()
        )));
    }
    let mut m = rho.matrix().clone();
    for (q, basis) in profile.bases().iter().enumerate() {
        let [p1, p2] = basis.projectors();
        m = apply_1q_channel(&m, n, q, &[p1.to_op2(), p2.to_op2()]);
    }
    DensityMatrix::from_matrix_unchecked(n, m)
}

fn single_qubit_marginals(rho: &DensityMatrix) -> Result<Vec<DensityMatrix>> {
    (0..rho.n_qubits()).map(|q| partial_trace(rho, &[q])).collect()
}

/// Global discord for a fixed profile, before minimization.
pub fn global_qd_at(rho: &DensityMatrix, profile: &MeasurementProfile) -> Result<f64> {
    let measured = dephase(rho, profile)?;
    let mut value = von_neumann_entropy(&measured)? - von_neumann_entropy(rho)?;
    for (q, marginal) in single_qubit_marginals(rho)?.iter().enumerate() {
        let local = MeasurementProfile::new(vec![profile.bases()[q].clone()]);
        let measured = dephase(marginal, &local)?;
        value -= von_neumann_entropy(&measured)? - von_neumann_entropy(marginal)?;
    }
    Ok(value)
}

/// `‖ρ - Φ(ρ)‖²` for a fixed profile.
pub fn gqd_hs_at(rho: &DensityMatrix, profile: &MeasurementProfile) -> Result<f64> {
    let measured = dephase(rho, profile)?;
    Ok(hs_norm_sq(&(rho.matrix() - measured.matrix())))
}

/// Minimized discord value with its minimizing profile.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscordResult {
    pub value: f64,
    pub minimizer: MeasurementProfile,
    pub evaluations: usize,
    pub converged: bool,
}

/// Precomputed state data for fast objective evaluation.
struct Landscape<'a> {
    rho: &'a DensityMatrix,
    entropy: f64,
    purity: f64,
    marginals: Vec<ComplexMatrix>,
    marginal_entropies: Vec<f64>,
}

impl<'a> Landscape<'a> {
    fn new(rho: &'a DensityMatrix) -> Result<Self> {
        let marginals = single_qubit_marginals(rho)?;
        let marginal_entropies = marginals.iter().map(von_neumann_entropy).collect::<Result<_>>()?;
        Ok(Landscape {
            rho,
            entropy: von_neumann_entropy(rho)?,
            purity: rho.purity(),
            marginals: marginals.into_iter().map(DensityMatrix::into_matrix).collect(),
            marginal_entropies,
        })
    }

    fn n_qubits(&self) -> usize {
        self.rho.n_qubits()
    }

    /// Outcome distribution of the product measurement at `angles`.
    fn outcome_distribution(&self, angles: &[f64]) -> Vec<f64> {
        let n = self.n_qubits();
        let mut m = self.rho.matrix().clone();
        let dim = m.dim();
        for q in 0..n {
            let w = basis_rotation(angles[2 * q], angles[2 * q + 1]);
            let mask = qubit_mask(n, q);
            left_apply_1q(m.as_mut_slice(), dim, mask, &w);
            right_apply_adjoint_1q(m.as_mut_slice(), dim, mask, &w);
        }
        m.diagonal().iter().map(|z| z.re).collect()
    }

    /// `Σ_j S(Φ_j(ρ_j))` for the local measurements at `angles`.
    fn measured_marginal_entropy(&self, angles: &[f64]) -> f64 {
        self.marginals
            .iter()
            .enumerate()
            .map(|(q, m)| {
                let w = basis_rotation(angles[2 * q], angles[2 * q + 1]);
                // <u|ρ_j|u> with <u| the first row of w
                let p0 = (w[0] * w[0].conj() * m[(0, 0)]
                    + w[0] * w[1].conj() * m[(0, 1)]
                    + w[1] * w[0].conj() * m[(1, 0)]
                    + w[1] * w[1].conj() * m[(1, 1)])
                    .re
                    .clamp(0.0, 1.0);
                shannon_entropy([p0, 1.0 - p0])
            })
            .sum()
    }

    fn global_qd(&self, angles: &[f64]) -> f64 {
        let joint = shannon_entropy(self.outcome_distribution(angles)) - self.entropy;
        let local = self.measured_marginal_entropy(angles) - self.marginal_entropies.iter().sum::<f64>();
        joint - local
    }

    fn gqd_hs(&self, angles: &[f64]) -> f64 {
        let probs = self.outcome_distribution(angles);
        self.purity - probs.iter().map(|p| p * p).sum::<f64>()
    }

    /// `Σ_j S(Φ_j(ρ_j)) - S(Φ(ρ))`, maximized by the entropic measure.
    fn entropic_bracket(&self, angles: &[f64]) -> f64 {
        self.measured_marginal_entropy(angles) - shannon_entropy(self.outcome_distribution(angles))
    }
}

struct LandscapeObjective<'l, 'a> {
    landscape: &'l Landscape<'a>,
    measure: fn(&Landscape<'a>, &[f64]) -> f64,
}

impl Objective for LandscapeObjective<'_, '_> {
    fn arity(&self) -> usize {
        2 * self.landscape.n_qubits()
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        (self.measure)(self.landscape, x)
    }
}

fn clamp(value: f64) -> f64 {
    if value < 0.0 && value > -CLAMP_WINDOW {
        0.0
    } else {
        value
    }
}

fn to_result(min: Minimum, value: f64) -> Result<DiscordResult> {
    Ok(DiscordResult {
        value: clamp(value),
        minimizer: MeasurementProfile::from_angles(&min.point)?,
        evaluations: min.evaluations,
        converged: min.converged,
    })
}

/// Global quantum discord minimized over local projective measurements.
pub fn global_qd(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<DiscordResult> {
    let landscape = Landscape::new(rho)?;
    let objective = LandscapeObjective {
        landscape: &landscape,
        measure: Landscape::global_qd,
    };
    let min = minimize(&objective, config)?;
    let value = min.value;
    to_result(min, value)
}

/// Hilbert–Schmidt geometric discord: minimal `‖ρ - Φ(ρ)‖²`.
pub fn gqd_hs(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<DiscordResult> {
    let landscape = Landscape::new(rho)?;
    let objective = LandscapeObjective {
        landscape: &landscape,
        measure: Landscape::gqd_hs,
    };
    let min = minimize(&objective, config)?;
    let value = min.value;
    to_result(min, value)
}

/// Entropic multipartite geometric discord.
pub fn gqd_entropic(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<DiscordResult> {
    let landscape = Landscape::new(rho)?;
    let objective = LandscapeObjective {
        landscape: &landscape,
        measure: Landscape::entropic_bracket,
    };
    let min = minimize(&Negated(&objective), config)?;
    let bracket_max = -min.value;
    let value = landscape.marginal_entropies.iter().sum::<f64>() - landscape.entropy - bracket_max;
    to_result(min, value)
}

/// Objective evaluations through the fast rotated-frame route, exposed for
/// cross-checking against [`global_qd_at`] and [`gqd_hs_at`].
pub fn objective_values(rho: &DensityMatrix, angles: &[f64]) -> Result<(f64, f64, f64)> {
    if angles.len() != 2 * rho.n_qubits() {
        return Err(invalid(format!(
            "expected {} angles, got {}",
            2 * rho.n_qubits(),
            angles.len()
        )));
    }
    let l = Landscape::new(rho)?;
    let entropic = l.marginal_entropies.iter().sum::<f64>() - l.entropy - l.entropic_bracket(angles);
    Ok((l.global_qd(angles), l.gqd_hs(angles), entropic))
}

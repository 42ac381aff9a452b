//! Single-qubit Kraus channels and their action on N-qubit registers.
//!
//! Two evaluation routes are provided. [`apply`] materializes the lifted
//! operators `E_k = e_{k_1} ⊗ … ⊗ e_{k_n}` and sums `E_k ρ E_k†`; it is the
//! literal construction and is kept for cross-checking and small registers.
//! [`apply_sequential`] applies the single-qubit channel to one target at a
//! time with strided kernels and never builds a `2^n`-dimensional operator.
//! Channels acting on distinct qubits commute, so both routes agree.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::qmatrix::{
    left_apply_1q, pauli, qubit_mask, right_apply_adjoint_1q, tensor_all, ComplexMatrix, DensityMatrix, Op2,
};

/// Completeness tolerance for single-qubit Kraus sets.
pub const COMPLETENESS_TOL: f64 = 1e-12;

/// Upper bound on the number of complex entries materialized by [`lift`]
/// (2^25 entries, 512 MiB).
pub const DEFAULT_LIFT_BUDGET: usize = 1 << 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChannelKind {
    AmplitudeDamping,
    PhaseDamping,
    Depolarizing,
    BitFlip,
    PhaseFlip,
    BitPhaseFlip,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 6] = [
        ChannelKind::AmplitudeDamping,
        ChannelKind::PhaseDamping,
        ChannelKind::Depolarizing,
        ChannelKind::BitFlip,
        ChannelKind::PhaseFlip,
        ChannelKind::BitPhaseFlip,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ChannelKind::AmplitudeDamping => "amplitude-damping",
            ChannelKind::PhaseDamping => "phase-damping",
            ChannelKind::Depolarizing => "depolarizing",
            ChannelKind::BitFlip => "bit-flip",
            ChannelKind::PhaseFlip => "phase-flip",
            ChannelKind::BitPhaseFlip => "bit-phase-flip",
        }
    }

    /// The Pauli operator of a flip channel.
    pub fn flip_pauli(self) -> Option<ComplexMatrix> {
        match self {
            ChannelKind::BitFlip => Some(pauli::x()),
            ChannelKind::PhaseFlip => Some(pauli::z()),
            ChannelKind::BitPhaseFlip => Some(pauli::y()),
            _ => None,
        }
    }

    pub fn is_flip(self) -> bool {
        self.flip_pauli().is_some()
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let kind = match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "amplitude-damping" | "ad" => ChannelKind::AmplitudeDamping,
            "phase-damping" | "pd" => ChannelKind::PhaseDamping,
            "depolarizing" | "dep" => ChannelKind::Depolarizing,
            "bit-flip" | "bf" => ChannelKind::BitFlip,
            "phase-flip" | "pf" => ChannelKind::PhaseFlip,
            "bit-phase-flip" | "bpf" => ChannelKind::BitPhaseFlip,
            other => return Err(invalid(format!("unknown channel '{other}'"))),
        };
        Ok(kind)
    }
}

/// A single-qubit channel at decoherence strength `p`.
///
/// Operators are stored exactly as constructed, in the order listed by
/// [`kraus_set`].
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    kind: ChannelKind,
    p: f64,
    operators: Vec<ComplexMatrix>,
}

/// Builds the Kraus operators of `kind` at strength `p`.
///
/// * amplitude damping: `diag(1, √(1-p))`, `√p |0><1|`
/// * phase damping: `diag(1, √(1-p))`, `diag(0, √p)`
/// * depolarizing: `√(1-3p/4) I`, `√(p/4) σx`, `√(p/4) σy`, `√(p/4) σz`
/// * bit / phase / bit-phase flip: `√(1-p) I`, `√p σ` with `σ = σx / σz / σy`
pub fn kraus_set(kind: ChannelKind, p: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("decoherence parameter p = {p} outside [0, 1]")));
    }
    let re = |x: f64| Complex64::new(x, 0.0);
    let zero = re(0.0);
    let operators = match kind {
        ChannelKind::AmplitudeDamping => vec![
            ComplexMatrix::from_diagonal(&[1.0, (1.0 - p).sqrt()]),
            ComplexMatrix::from_2x2(zero, re(p.sqrt()), zero, zero),
        ],
        ChannelKind::PhaseDamping => vec![
            ComplexMatrix::from_diagonal(&[1.0, (1.0 - p).sqrt()]),
            ComplexMatrix::from_diagonal(&[0.0, p.sqrt()]),
        ],
        ChannelKind::Depolarizing => {
            let w = (p / 4.0).sqrt();
            vec![
                pauli::identity().scale_real((1.0 - 0.75 * p).sqrt()),
                pauli::x().scale_real(w),
                pauli::y().scale_real(w),
                pauli::z().scale_real(w),
            ]
        }
        ChannelKind::BitFlip | ChannelKind::PhaseFlip | ChannelKind::BitPhaseFlip => {
            let sigma = kind.flip_pauli().expect("flip channel");
            vec![
                pauli::identity().scale_real((1.0 - p).sqrt()),
                sigma.scale_real(p.sqrt()),
            ]
        }
    };
    Ok(KrausChannel { kind, p, operators })
}

impl KrausChannel {
    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    /// `max |Σ_k E_k† E_k - I|` entrywise.
    pub fn completeness_deviation(&self) -> f64 {
        completeness_deviation(&self.operators)
    }

    /// Applies the channel to `rho` on `targets` with the sequential kernels.
    pub fn apply(&self, rho: &DensityMatrix, targets: &[usize]) -> Result<DensityMatrix> {
        apply_sequential(self, rho, targets)
    }

    /// Applies the channel to every qubit of `rho`.
    pub fn apply_all(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let targets: Vec<usize> = (0..rho.n_qubits()).collect();
        apply_sequential(self, rho, &targets)
    }

    fn ops2(&self) -> Vec<Op2> {
        self.operators.iter().map(ComplexMatrix::to_op2).collect()
    }
}

/// `max |Σ_k E_k† E_k - I|` entrywise for any operator list of equal size.
pub fn completeness_deviation(operators: &[ComplexMatrix]) -> f64 {
    let dim = operators[0].dim();
    let sum = operators
        .iter()
        .fold(ComplexMatrix::zeros(dim), |acc, e| &acc + &(&e.adjoint() * e));
    sum.max_abs_diff(&ComplexMatrix::identity(dim))
}

/// Channel plus the qubits it acts on (`None` means every qubit).
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelAssignment {
    pub channel: KrausChannel,
    pub targets: Option<Vec<usize>>,
}

impl ChannelAssignment {
    pub fn all(channel: KrausChannel) -> Self {
        ChannelAssignment {
            channel,
            targets: None,
        }
    }

    pub fn on(channel: KrausChannel, targets: Vec<usize>) -> Self {
        ChannelAssignment {
            channel,
            targets: Some(targets),
        }
    }

    pub fn targets_for(&self, n_qubits: usize) -> Result<Vec<usize>> {
        let targets = match &self.targets {
            Some(t) => t.clone(),
            None => (0..n_qubits).collect(),
        };
        check_targets(&targets, n_qubits)?;
        Ok(targets)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let targets = self.targets_for(rho.n_qubits())?;
        apply_sequential(&self.channel, rho, &targets)
    }
}

fn check_targets(targets: &[usize], n_qubits: usize) -> Result<()> {
    let mut seen = vec![false; n_qubits];
    for &q in targets {
        if q >= n_qubits {
            return Err(invalid(format!(
                "target qubit {q} out of range for {n_qubits} qubits"
            )));
        }
        if std::mem::replace(&mut seen[q], true) {
            return Err(invalid(format!("target qubit {q} listed twice")));
        }
    }
    Ok(())
}

/// All `m^n` tensor-product Kraus operators of `channel` acting on every
/// qubit of an `n`-qubit register.
pub fn lift(channel: &KrausChannel, n_qubits: usize) -> Result<Vec<ComplexMatrix>> {
    let targets: Vec<usize> = (0..n_qubits).collect();
    lift_on(channel, n_qubits, &targets, DEFAULT_LIFT_BUDGET)
}

/// Lifted operators for `channel` on `targets`, identity elsewhere.
///
/// Fails with [`Error::ResourceBudget`] when the operators would hold more
/// than `budget` complex entries.
pub fn lift_on(
    channel: &KrausChannel,
    n_qubits: usize,
    targets: &[usize],
    budget: usize,
) -> Result<Vec<ComplexMatrix>> {
    if n_qubits == 0 || n_qubits > crate::qmatrix::MAX_QUBITS {
        return Err(invalid(format!("cannot lift to {n_qubits} qubits")));
    }
    check_targets(targets, n_qubits)?;
    let m = channel.operators.len();
    let dim = 1usize << n_qubits;
    let count = (m as u128).pow(targets.len() as u32);
    let entries = count * (dim * dim) as u128;
    if entries > budget as u128 {
        return Err(Error::ResourceBudget(format!(
            "{count} lifted {dim}x{dim} operators ({entries} entries) exceed the budget of \
             {budget}; use apply_sequential"
        )));
    }
    let id = pauli::identity();
    let mut is_target = vec![false; n_qubits];
    for &q in targets {
        is_target[q] = true;
    }

    let mut out = Vec::with_capacity(count as usize);
    // mixed-radix counter over the per-target operator choice
    let mut choice = vec![0usize; targets.len()];
    loop {
        let mut next = 0;
        let factors: Vec<&ComplexMatrix> = (0..n_qubits)
            .map(|q| {
                if is_target[q] {
                    let k = choice[next];
                    next += 1;
                    &channel.operators[k]
                } else {
                    &id
                }
            })
            .collect();
        out.push(tensor_all(factors)?);

        let mut pos = targets.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < m {
                break;
            }
            choice[pos] = 0;
        }
    }
}

/// `Σ_k E_k ρ E_k†` with the lifted operators.
pub fn apply(channel: &KrausChannel, rho: &DensityMatrix, targets: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    let ops = lift_on(channel, n, targets, DEFAULT_LIFT_BUDGET)?;
    let out = ops.iter().fold(ComplexMatrix::zeros(rho.dim()), |acc, e| {
        &acc + &rho.matrix().conjugate_by(e)
    });
    DensityMatrix::from_matrix_unchecked(n, out)
}

/// Qubit-by-qubit application of the single-qubit channel to `targets`.
pub fn apply_sequential(
    channel: &KrausChannel,
    rho: &DensityMatrix,
    targets: &[usize],
) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    check_targets(targets, n)?;
    let ops = channel.ops2();
    let mut current = rho.matrix().clone();
    for &q in targets {
        current = apply_1q_channel(&current, n, q, &ops);
    }
    DensityMatrix::from_matrix_unchecked(n, current)
}

/// `Σ_k K_k m K_k†` with each `K_k` acting on qubit `q`.
pub(crate) fn apply_1q_channel(m: &ComplexMatrix, n_qubits: usize, q: usize, ops: &[Op2]) -> ComplexMatrix {
    let mask = qubit_mask(n_qubits, q);
    let dim = m.dim();
    let mut acc = ComplexMatrix::zeros(dim);
    let mut scratch = m.clone();
    for k in ops {
        if k.iter().all(|z| z.norm_sqr() == 0.0) {
            continue;
        }
        scratch.as_mut_slice().copy_from_slice(m.as_slice());
        left_apply_1q(scratch.as_mut_slice(), dim, mask, k);
        right_apply_adjoint_1q(scratch.as_mut_slice(), dim, mask, k);
        for (a, s) in acc.as_mut_slice().iter_mut().zip(scratch.as_slice()) {
            *a += s;
        }
    }
    acc
}

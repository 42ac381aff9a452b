#![allow(dead_code)]

use ghz_discord::qmatrix::{tensor_all, ComplexMatrix, DensityMatrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Full-rank random state `G G† / tr(G G†)` with a complex Ginibre `G`.
pub fn random_state(n_qubits: usize, rng: &mut impl Rng) -> DensityMatrix {
    let dim = 1 << n_qubits;
    let g = ComplexMatrix::from_fn(dim, |_, _| gaussian(rng));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(n_qubits, m.scale_real(1.0 / tr)).unwrap()
}

/// Random single-qubit unitary `e^{iα} Rz(β) Ry(γ) Rz(δ)`.
pub fn random_unitary_1q(rng: &mut impl Rng) -> ComplexMatrix {
    let tau = std::f64::consts::TAU;
    let [a, b, g, d]: [f64; 4] = std::array::from_fn(|_| rng.random::<f64>() * tau);
    let e = |x: f64| Complex64::from_polar(1.0, x);
    let (s, c) = (0.5 * g).sin_cos();
    ComplexMatrix::from_2x2(
        e(a - 0.5 * b - 0.5 * d) * c,
        -e(a - 0.5 * b + 0.5 * d) * s,
        e(a + 0.5 * b - 0.5 * d) * s,
        e(a + 0.5 * b + 0.5 * d) * c,
    )
}

/// `U_0 ⊗ … ⊗ U_{n-1}` with independent random factors.
pub fn random_local_unitary(n_qubits: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let factors: Vec<ComplexMatrix> = (0..n_qubits).map(|_| random_unitary_1q(rng)).collect();
    tensor_all(&factors).unwrap()
}

pub fn conjugate(rho: &DensityMatrix, u: &ComplexMatrix) -> DensityMatrix {
    DensityMatrix::new(rho.n_qubits(), rho.matrix().conjugate_by(u)).unwrap()
}

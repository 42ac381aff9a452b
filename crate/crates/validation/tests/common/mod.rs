use ghz_discord::qmatrix::{ComplexMatrix, DensityMatrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Full-rank random state `G G† / tr(G G†)` with a complex Ginibre `G`.
pub fn random_state(n_qubits: usize, rng: &mut impl Rng) -> DensityMatrix {
    let dim = 1 << n_qubits;
    let g = ComplexMatrix::from_fn(dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(n_qubits, m.scale_real(1.0 / tr)).unwrap()
}

//! Dense complex linear algebra sized for small qubit registers.
//!
//! Matrices are stored row-major. Qubit 0 is the leftmost tensor factor, i.e.
//! the most significant bit of a computational-basis index: on an `n`-qubit
//! register qubit `q` is addressed by the bit mask `1 << (n - 1 - q)`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Largest register handled by this crate.
pub const MAX_QUBITS: usize = 8;
/// Largest matrix dimension, `2^MAX_QUBITS`.
pub const MAX_DIM: usize = 1 << MAX_QUBITS;

/// Entrywise tolerance for `|m_ij - conj(m_ji)|` on density matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on `|Tr rho - 1|`.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted for a positive semidefinite state.
pub const POSITIVITY_TOL: f64 = -1e-10;
/// Hermiticity precondition for the eigensolver.
pub const EIGEN_HERMITIAN_TOL: f64 = 1e-10;

/// A single-qubit operator in row-major order `[m00, m01, m10, m11]`.
pub(crate) type Op2 = [Complex64; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix, `dim x dim`, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        ComplexMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("matrix dimension must be positive"));
        }
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = Complex64::new(d, 0.0);
        }
        m
    }

    /// 2x2 matrix from its four row-major entries.
    pub fn from_2x2(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        ComplexMatrix {
            dim: 2,
            data: vec![m00, m01, m10, m11],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |i, j| self.data[j * n + i].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).collect()
    }

    /// `max |m_ij - conj(m_ji)|`.
    pub fn max_hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_hermitian_deviation() <= tol
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `u * self * u^dagger`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> ComplexMatrix {
        &(u * self) * &u.adjoint()
    }

    pub(crate) fn to_op2(&self) -> Op2 {
        debug_assert_eq!(self.dim, 2);
        [self.data[0], self.data[1], self.data[2], self.data[3]]
    }

    fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self.data[i * self.dim + j];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.dim && j < self.dim, "index out of bounds");
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.dim && j < self.dim, "index out of bounds");
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = a
        .dim
        .checked_mul(b.dim)
        .filter(|&d| d <= MAX_DIM)
        .ok_or(Error::DimensionTooLarge {
            dim: a.dim.saturating_mul(b.dim),
            max: MAX_DIM,
        })?;
    let mut out = ComplexMatrix::zeros(dim);
    let bd = b.dim;
    for i in 0..a.dim {
        for j in 0..a.dim {
            let aij = a.data[i * a.dim + j];
            if aij == ZERO {
                continue;
            }
            for k in 0..bd {
                for l in 0..bd {
                    out.data[(i * bd + k) * dim + j * bd + l] = aij * b.data[k * bd + l];
                }
            }
        }
    }
    Ok(out)
}

/// Left-to-right Kronecker product of a nonempty list of factors.
pub fn tensor_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> Result<ComplexMatrix> {
    let mut iter = factors.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| invalid("tensor product of an empty list"))?;
    iter.try_fold(first.clone(), |acc, m| tensor(&acc, m))
}

/// Eigenvalues of a Hermitian matrix, sorted in descending order.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(m)?.0)
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Eigenvalues are returned in descending order; column `k` of the returned
/// matrix is the normalized eigenvector for eigenvalue `k`.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let deviation = m.max_hermitian_deviation();
    if deviation > EIGEN_HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.dim;
    let eig = SymmetricEigen::try_new(m.to_nalgebra(), f64::EPSILON, 0)
        .ok_or_else(|| Error::Eigensolver(format!("no convergence for {n}x{n} matrix")))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// Applies a real function to the spectrum of a Hermitian matrix: `V f(Λ) V†`.
pub fn hermitian_map(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let (values, vectors) = hermitian_eigen(m)?;
    let n = m.dim;
    let mapped: Vec<f64> = values.iter().map(|&v| f(v)).collect();
    Ok(ComplexMatrix::from_fn(n, |i, j| {
        (0..n)
            .map(|k| vectors[(i, k)] * mapped[k] * vectors[(j, k)].conj())
            .sum()
    }))
}

/// Squared Hilbert–Schmidt norm `Tr(m† m) = Σ |m_ij|²`.
pub fn hs_norm_sq(m: &ComplexMatrix) -> f64 {
    m.data.iter().map(Complex64::norm_sqr).sum()
}

/// Bit mask selecting qubit `q` of an `n`-qubit register.
#[inline]
pub(crate) fn qubit_mask(n_qubits: usize, q: usize) -> usize {
    1 << (n_qubits - 1 - q)
}

/// In place `m <- K m` where `K` acts on the qubit selected by `mask`.
pub(crate) fn left_apply_1q(data: &mut [Complex64], dim: usize, mask: usize, k: &Op2) {
    for i0 in (0..dim).filter(|i| i & mask == 0) {
        let i1 = i0 | mask;
        let (lo, hi) = data.split_at_mut(i1 * dim);
        let row0 = &mut lo[i0 * dim..(i0 + 1) * dim];
        let row1 = &mut hi[..dim];
        for (a, b) in row0.iter_mut().zip(row1.iter_mut()) {
            let (x0, x1) = (*a, *b);
            *a = k[0] * x0 + k[1] * x1;
            *b = k[2] * x0 + k[3] * x1;
        }
    }
}

/// In place `m <- m K†` where `K` acts on the qubit selected by `mask`.
pub(crate) fn right_apply_adjoint_1q(data: &mut [Complex64], dim: usize, mask: usize, k: &Op2) {
    let kc = [k[0].conj(), k[1].conj(), k[2].conj(), k[3].conj()];
    for row in data.chunks_exact_mut(dim) {
        for j0 in (0..dim).filter(|j| j & mask == 0) {
            let j1 = j0 | mask;
            let (x0, x1) = (row[j0], row[j1]);
            row[j0] = x0 * kc[0] + x1 * kc[1];
            row[j1] = x0 * kc[2] + x1 * kc[3];
        }
    }
}

#[cfg(test)]
/// `K m K†` with the single-qubit operator `K` acting on qubit `q`.
pub(crate) fn conjugate_1q(m: &ComplexMatrix, n_qubits: usize, q: usize, k: &Op2) -> ComplexMatrix {
    let mask = qubit_mask(n_qubits, q);
    let mut out = m.clone();
    left_apply_1q(&mut out.data, out.dim, mask, k);
    right_apply_adjoint_1q(&mut out.data, out.dim, mask, k);
    out
}

/// Density operator on `n_qubits` qubits.
///
/// Constructed through [`DensityMatrix::new`], which checks Hermiticity,
/// unit trace and positivity against the crate tolerances.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(n_qubits: usize, matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(n_qubits, matrix)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Checks only the register shape; used for states produced by
    /// trace- and positivity-preserving maps.
    pub(crate) fn from_matrix_unchecked(n_qubits: usize, matrix: ComplexMatrix) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(invalid(format!(
                "qubit count {n_qubits} outside 1..={MAX_QUBITS}"
            )));
        }
        if matrix.dim != 1 << n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_qubits,
                found: matrix.dim,
            });
        }
        Ok(DensityMatrix { n_qubits, matrix })
    }

    /// Verifies the density-matrix invariants.
    pub fn validate(&self) -> Result<()> {
        let deviation = self.matrix.max_hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "Hermiticity deviation {deviation:e}"
            )));
        }
        let trace = self.matrix.trace();
        if (trace - ONE).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {trace}")));
        }
        let min = self.min_eigenvalue()?;
        if min < POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        hs_norm_sq(&self.matrix)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.last().expect("nonempty spectrum"))
    }

    /// `ρ_A ⊗ ρ_B` as a state on the concatenated register.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let m = tensor(&self.matrix, &other.matrix)?;
        DensityMatrix::from_matrix_unchecked(self.n_qubits + other.n_qubits, m)
    }
}

/// Reduced state on the qubits listed in `keep`.
///
/// The output register follows the order of `keep`: `keep[0]` becomes the
/// leftmost qubit of the reduced state.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_qubits;
    if keep.is_empty() {
        return Err(invalid("partial trace needs at least one kept qubit"));
    }
    let mut seen = vec![false; n];
    for &q in keep {
        if q >= n {
            return Err(invalid(format!("qubit {q} out of range for {n} qubits")));
        }
        if std::mem::replace(&mut seen[q], true) {
            return Err(invalid(format!("qubit {q} listed twice")));
        }
    }
    let traced: Vec<usize> = (0..n).filter(|&q| !seen[q]).collect();

    let spread = |qubits: &[usize], idx: usize| -> usize {
        let k = qubits.len();
        qubits
            .iter()
            .enumerate()
            .filter(|(pos, _)| idx >> (k - 1 - pos) & 1 == 1)
            .map(|(_, &q)| qubit_mask(n, q))
            .fold(0, |acc, m| acc | m)
    };
    let keep_idx: Vec<usize> = (0..1usize << keep.len()).map(|a| spread(keep, a)).collect();
    let trace_idx: Vec<usize> = (0..1usize << traced.len()).map(|t| spread(&traced, t)).collect();

    let kd = keep_idx.len();
    let m = &rho.matrix;
    let out = ComplexMatrix::from_fn(kd, |a, b| {
        trace_idx
            .iter()
            .map(|&t| m[(keep_idx[a] | t, keep_idx[b] | t)])
            .sum()
    });
    DensityMatrix::from_matrix_unchecked(keep.len(), out)
}

/// Pauli matrices and other fixed single-qubit operators.
pub mod pauli {
    use super::ComplexMatrix;
    use num_complex::Complex64;

    const O: Complex64 = Complex64::new(0.0, 0.0);
    const I: Complex64 = Complex64::new(0.0, 1.0);
    const R: Complex64 = Complex64::new(1.0, 0.0);

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_2x2(O, R, R, O)
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_2x2(O, -I, I, O)
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_2x2(R, O, O, -R)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn ghz3() -> DensityMatrix {
        let mut m = ComplexMatrix::zeros(8);
        for &(i, j) in &[(0, 0), (0, 7), (7, 0), (7, 7)] {
            m[(i, j)] = c(0.5);
        }
        DensityMatrix::new(3, m).unwrap()
    }

    #[test]
    fn identity_tensor_identity() {
        let i4 = tensor(&pauli::identity(), &pauli::identity()).unwrap();
        assert_eq!(i4, ComplexMatrix::identity(4));
    }

    #[test]
    fn zz_conjugation_keeps_00_11_coherence() {
        let zz = tensor(&pauli::z(), &pauli::z()).unwrap();
        let mut e = ComplexMatrix::zeros(4);
        e[(0, 3)] = c(1.0);
        let out = e.conjugate_by(&zz);
        assert_eq!(out, e);
    }

    #[test]
    fn tensor_block_structure() {
        let a = ComplexMatrix::from_2x2(c(2.0), c(3.0), c(5.0), c(7.0));
        let b = ComplexMatrix::from_fn(4, |i, j| c((i * 4 + j) as f64));
        let ab = tensor(&a, &b).unwrap();
        assert_eq!(ab.dim(), 8);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(ab[(i, j)], c(2.0) * b[(i, j)]);
                assert_eq!(ab[(i + 4, j)], c(5.0) * b[(i, j)]);
            }
        }
    }

    #[test]
    fn tensor_rejects_oversized_result() {
        let a = ComplexMatrix::identity(32);
        let b = ComplexMatrix::identity(16);
        assert!(matches!(
            tensor(&a, &b),
            Err(Error::DimensionTooLarge { dim: 512, .. })
        ));
    }

    #[test]
    fn ghz_marginal_is_maximally_mixed() {
        let red = partial_trace(&ghz3(), &[0]).unwrap();
        assert_eq!(red.n_qubits(), 1);
        assert_close!(red.get(0, 0).re, 0.5, 1e-15);
        assert_close!(red.get(1, 1).re, 0.5, 1e-15);
        assert_close!(red.get(0, 1).norm(), 0.0, 1e-15);
    }

    #[test]
    fn partial_trace_respects_keep_order() {
        // |0><0| on qubit 0, |1><1| on qubit 1
        let a = DensityMatrix::new(1, ComplexMatrix::from_diagonal(&[1.0, 0.0])).unwrap();
        let b = DensityMatrix::new(1, ComplexMatrix::from_diagonal(&[0.0, 1.0])).unwrap();
        let ab = a.tensor(&b).unwrap();
        let swapped = partial_trace(&ab, &[1, 0]).unwrap();
        assert_close!(swapped.get(2, 2).re, 1.0, 1e-15);
        let kept = partial_trace(&ab, &[1]).unwrap();
        assert_eq!(kept, b);
    }

    #[test]
    fn partial_trace_argument_errors() {
        let rho = ghz3();
        assert!(partial_trace(&rho, &[]).is_err());
        assert!(partial_trace(&rho, &[3]).is_err());
        assert!(partial_trace(&rho, &[1, 1]).is_err());
    }

    #[test]
    fn eigenvalues_of_small_matrices() {
        let v = hermitian_eigenvalues(&pauli::identity()).unwrap();
        assert_eq!(v.len(), 2);
        assert_close!(v[0], 1.0, 1e-15);
        assert_close!(v[1], 1.0, 1e-15);
        let v = hermitian_eigenvalues(&pauli::x()).unwrap();
        assert_close!(v[0], 1.0, 1e-15);
        assert_close!(v[1], -1.0, 1e-15);
        let v = hermitian_eigenvalues(&pauli::y()).unwrap();
        assert_close!(v[0], 1.0, 1e-15);
        assert_close!(v[1], -1.0, 1e-15);
    }

    #[test]
    fn eigensolver_rejects_non_hermitian() {
        let m = ComplexMatrix::from_2x2(c(0.0), c(1.0), c(0.0), c(0.0));
        assert!(matches!(
            hermitian_eigenvalues(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn hs_norm_examples() {
        assert_eq!(hs_norm_sq(&ComplexMatrix::zeros(4)), 0.0);
        assert_eq!(hs_norm_sq(&ComplexMatrix::identity(4)), 4.0);
        let rho = ghz3();
        let diag = ComplexMatrix::from_fn(8, |i, j| if i == j { rho.get(i, j) } else { c(0.0) });
        assert_close!(hs_norm_sq(&(rho.matrix() - &diag)), 0.5, 1e-15);
    }

    #[test]
    fn hermitian_map_reconstructs_matrix() {
        let m = ComplexMatrix::from_2x2(
            c(2.0),
            Complex64::new(0.5, -0.25),
            Complex64::new(0.5, 0.25),
            c(-1.0),
        );
        let back = hermitian_map(&m, |x| x).unwrap();
        assert!(back.max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn single_qubit_kernel_matches_lifted_conjugation() {
        let k = ComplexMatrix::from_2x2(
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.2, 0.7),
            Complex64::new(0.0, -0.4),
            Complex64::new(0.9, 0.0),
        );
        let m = ComplexMatrix::from_fn(8, |i, j| Complex64::new((i + 2 * j) as f64, i as f64 - j as f64));
        let i2 = pauli::identity();
        let lifted = tensor_all([&i2, &k, &i2]).unwrap();
        let expected = m.conjugate_by(&lifted);
        let got = conjugate_1q(&m, 3, 1, &k.to_op2());
        assert!(got.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(1, ComplexMatrix::from_diagonal(&[0.6, 0.6])).is_err());
        assert!(DensityMatrix::new(1, ComplexMatrix::from_diagonal(&[1.5, -0.5])).is_err());
        let nonherm = ComplexMatrix::from_2x2(c(0.5), c(0.1), c(0.0), c(0.5));
        assert!(DensityMatrix::new(1, nonherm).is_err());
        assert!(DensityMatrix::new(2, ComplexMatrix::identity(2).scale_real(0.5)).is_err());
    }
}

//! Hermitian operators: the carrier type for effects, states and Choi
//! matrices, plus the spectral utilities built on the Jacobi solver.

use super::eig::{jacobi_hermitian, EigenDecomposition};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Hermiticity tolerance for construction (max-entry norm).
pub const HERMITICITY_TOL: f64 = 1e-12;

/// A validated Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    /// Wraps a matrix after checking `‖M - M†‖_max ≤ 1e-12`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, HERMITICITY_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                context: "HermitianOperator::new",
                expected: "square matrix".into(),
                found: format!("{}x{}", matrix.rows(), matrix.cols()),
            });
        }
        let residual = matrix.hermiticity_residual();
        if residual > tol {
            return Err(Error::NotHermitian { residual, tol });
        }
        // Store the symmetrized matrix so later arithmetic sees an exactly
        // Hermitian operand.
        Ok(HermitianOperator {
            matrix: matrix.symmetrized(),
        })
    }

    /// Wraps `(M + M†)/2` without a residual check; used on solver output
    /// that carries known roundoff.
    pub fn symmetrize(matrix: &ComplexMatrix) -> Self {
        assert!(matrix.is_square());
        HermitianOperator {
            matrix: matrix.symmetrized(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        HermitianOperator {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        HermitianOperator {
            matrix: ComplexMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn add(&self, other: &Self) -> Self {
        HermitianOperator {
            matrix: &self.matrix + &other.matrix,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        HermitianOperator {
            matrix: &self.matrix - &other.matrix,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianOperator {
            matrix: self.matrix.scale_re(s),
        }
    }

    /// `s·self + (1-s)·other`.
    pub fn mix(&self, other: &Self, s: f64) -> Self {
        self.scale(s).add(&other.scale(1.0 - s))
    }

    pub fn eig(&self) -> EigenDecomposition {
        jacobi_hermitian(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eig().eigenvalues[0]
    }

    /// `true` iff the minimum eigenvalue is at least `-tol`.
    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }

    /// Operator square root. Eigenvalues in `[-1e-9, 0)` are clamped to
    /// zero; anything more negative is rejected.
    pub fn sqrt_psd(&self) -> Result<Self> {
        const CLAMP: f64 = 1e-9;
        let eig = self.eig();
        if eig.eigenvalues[0] < -CLAMP {
            return Err(Error::NotPsd {
                min_eigenvalue: eig.eigenvalues[0],
            });
        }
        let m = eig.reconstruct_with(|l| if l <= 0.0 { 0.0 } else { l.sqrt() });
        Ok(HermitianOperator::symmetrize(&m))
    }

    /// Nearest PSD operator: eigenvalues clamped at zero.
    pub fn psd_projection(&self) -> Self {
        let eig = self.eig();
        if eig.eigenvalues[0] >= 0.0 {
            return self.clone();
        }
        HermitianOperator::symmetrize(&eig.reconstruct_with(|l| l.max(0.0)))
    }

    /// Largest singular value, computed as `sqrt(λ_max(M† M))`.
    pub fn operator_norm(&self) -> f64 {
        operator_norm(&self.matrix)
    }
}

/// Largest singular value of an arbitrary square matrix.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    let gram = HermitianOperator::symmetrize(&m.adjoint().matmul(m));
    let eig = gram.eig();
    eig.eigenvalues.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// `ab - ba`. Anti-Hermitian for Hermitian inputs, so it is returned as a
/// plain matrix.
pub fn commutator(a: &HermitianOperator, b: &HermitianOperator) -> Result<ComplexMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            context: "commutator",
            expected: format!("dim {}", a.dim()),
            found: format!("dim {}", b.dim()),
        });
    }
    let ab = a.matrix().matmul(b.matrix());
    let ba = b.matrix().matmul(a.matrix());
    Ok(&ab - &ba)
}

/// Numerical rank of the Gram matrix of Hilbert–Schmidt inner products.
/// Singular values below `tol` times the largest are treated as zero.
pub fn operator_gram_rank(ops: &[HermitianOperator], tol: f64) -> Result<usize> {
    if ops.is_empty() {
        return Err(Error::EmptyObservable);
    }
    let dim = ops[0].dim();
    for op in ops {
        if op.dim() != dim {
            return Err(Error::DimensionMismatch {
                context: "operator_gram_rank",
                expected: format!("dim {dim}"),
                found: format!("dim {}", op.dim()),
            });
        }
    }
    let n = ops.len();
    let gram = ComplexMatrix::from_fn(n, n, |i, j| {
        ops[i].matrix().hs_inner(ops[j].matrix())
    });
    let eig = HermitianOperator::symmetrize(&gram).eig();
    let largest = eig.eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
    if largest == 0.0 {
        return Ok(0);
    }
    Ok(eig
        .eigenvalues
        .iter()
        .filter(|&&l| l.abs() > tol * largest)
        .count())
}

/// Pauli matrices and common qubit constructions.
pub mod pauli {
    use super::*;

    pub fn sigma_x() -> HermitianOperator {
        HermitianOperator::new(ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0])).unwrap()
    }

    pub fn sigma_y() -> HermitianOperator {
        HermitianOperator::new(ComplexMatrix::from_rows(&[
            vec![(0.0, 0.0), (0.0, -1.0)],
            vec![(0.0, 1.0), (0.0, 0.0)],
        ]))
        .unwrap()
    }

    pub fn sigma_z() -> HermitianOperator {
        HermitianOperator::new(ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0])).unwrap()
    }

    /// `n·σ` for a Bloch vector `n`.
    pub fn bloch_dot_sigma(n: [f64; 3]) -> HermitianOperator {
        let m = ComplexMatrix::from_rows(&[
            vec![(n[2], 0.0), (n[0], -n[1])],
            vec![(n[0], n[1]), (-n[2], 0.0)],
        ]);
        HermitianOperator::new(m).unwrap()
    }

    /// `(I + n·σ)/2`; a projector when `|n| = 1`.
    pub fn bloch_effect(n: [f64; 3]) -> HermitianOperator {
        HermitianOperator::identity(2)
            .scale(0.5)
            .add(&bloch_dot_sigma(n).scale(0.5))
    }

    /// Bloch decomposition `(t, n)` of a qubit operator
    /// `E = (t I + n·σ)/2`, so `t = Tr E` and `n_k = Tr[E σ_k]`.
    pub fn bloch_components(e: &HermitianOperator) -> (f64, [f64; 3]) {
        assert_eq!(e.dim(), 2);
        let t = e.trace();
        let nx = e.matrix().hs_inner(sigma_x().matrix()).re;
        let ny = e.matrix().hs_inner(sigma_y().matrix()).re;
        let nz = e.matrix().hs_inner(sigma_z().matrix()).re;
        (t, [nx, ny, nz])
    }
}

//! Hermitian eigendecomposition by cyclic complex Jacobi sweeps.
//!
//! Every matrix this crate diagonalizes has dimension at most ~16, where
//! Jacobi is both simple and accurate: each rotation annihilates one
//! off-diagonal pair exactly, and the off-diagonal mass decreases
//! monotonically until it sits at roundoff level.
//!
//! A complex rotation on the `(p, q)` plane combines the phase
//! `P = diag(1, e^{-iβ})` that makes the pivot entry real with the usual
//! real rotation from the symmetric case, so the plane update is
//!
//! ```text
//! U[p][p] = c      U[p][q] = s
//! U[q][p] = -s e^{-iβ}   U[q][q] = c e^{-iβ}
//! ```
//!
//! with `b = |b| e^{iβ}` the pivot, `θ = (a_qq - a_pp) / (2|b|)` and
//! `t = sgn(θ) / (|θ| + sqrt(θ² + 1))`.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;

/// Result of an eigendecomposition: `h = V diag(λ) V†` with ascending `λ`
/// and orthonormal columns in `V`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Rebuilds `V diag(λ) V†`; used by reconstruction checks and the
    /// operator functions (square roots, projections).
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let d = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(d, d);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let fl = f(lambda);
            if fl == 0.0 {
                continue;
            }
            for i in 0..d {
                let vik = v.at(i, k);
                for j in 0..d {
                    out.add_at(i, j, vik * v.at(j, k).conj() * fl);
                }
            }
        }
        out
    }
}

const MAX_SWEEPS: usize = 64;

/// Diagonalizes a Hermitian matrix. The caller guarantees hermiticity;
/// only the lower/upper agreement implicit in the updates is used.
pub fn jacobi_hermitian(matrix: &ComplexMatrix) -> EigenDecomposition {
    let d = matrix.rows();
    let mut m = matrix.clone();
    let mut v = ComplexMatrix::identity(d);

    let scale = m.max_abs().max(1.0);
    let stop = 1e-15 * scale;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..d {
            for q in (p + 1)..d {
                off = off.max(m.at(p, q).norm());
            }
        }
        if off <= stop {
            break;
        }

        for p in 0..d {
            for q in (p + 1)..d {
                let b = m.at(p, q);
                let babs = b.norm();
                if babs <= stop * 1e-2 {
                    continue;
                }
                let phase = b / babs; // e^{iβ}
                let app = m.at(p, p).re;
                let aqq = m.at(q, q).re;
                let theta = (aqq - app) / (2.0 * babs);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // Row update: M <- U† M.
                for k in 0..d {
                    let mpk = m.at(p, k);
                    let mqk = m.at(q, k);
                    m.set(p, k, mpk * c - mqk * phase * s);
                    m.set(q, k, mpk * s + mqk * phase * c);
                }
                // Column update: M <- M U, and accumulate V <- V U.
                let phase_c = phase.conj(); // e^{-iβ}
                for k in 0..d {
                    let mkp = m.at(k, p);
                    let mkq = m.at(k, q);
                    m.set(k, p, mkp * c - mkq * phase_c * s);
                    m.set(k, q, mkp * s + mkq * phase_c * c);

                    let vkp = v.at(k, p);
                    let vkq = v.at(k, q);
                    v.set(k, p, vkp * c - vkq * phase_c * s);
                    v.set(k, q, vkp * s + vkq * phase_c * c);
                }
                // Clean up the annihilated pair and enforce real diagonal.
                m.set(p, q, Complex64::new(0.0, 0.0));
                m.set(q, p, Complex64::new(0.0, 0.0));
                m.set(p, p, Complex64::new(m.at(p, p).re, 0.0));
                m.set(q, q, Complex64::new(m.at(q, q).re, 0.0));
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| m.at(a, a).re.partial_cmp(&m.at(b, b).re).unwrap());

    let eigenvalues: Vec<f64> = order.iter().map(|&k| m.at(k, k).re).collect();
    let eigenvectors =
        ComplexMatrix::from_fn(d, d, |i, j| v.at(i, order[j]));

    EigenDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Common eigenbasis of a family of pairwise-commuting Hermitian
/// matrices, as orthonormal columns.
///
/// Degeneracy is resolved by recursive sub-diagonalization: the basis is
/// refined one operator at a time, splitting each degenerate block by the
/// eigenvalue clusters of the next operator restricted to it. The result
/// is deterministic; callers are expected to verify it a posteriori
/// (e.g. by checking the dual conditions of a copier built on it).
pub fn simultaneous_eigenbasis(ops: &[super::hermitian::HermitianOperator]) -> ComplexMatrix {
    assert!(!ops.is_empty(), "need at least one operator");
    let d = ops[0].dim();
    let mut basis = ComplexMatrix::identity(d);
    let mut blocks: Vec<Vec<usize>> = vec![(0..d).collect()];

    for op in ops {
        assert_eq!(op.dim(), d, "operators must share a dimension");
        let scale = op.matrix().max_abs().max(1.0);
        let gap = 1e-8 * scale;
        let mut next_blocks = Vec::new();
        for block in &blocks {
            if block.len() == 1 {
                next_blocks.push(block.clone());
                continue;
            }
            let k = block.len();
            // Restriction B† H B of the operator to the block's span.
            let restricted = ComplexMatrix::from_fn(k, k, |r, c| {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..d {
                    for j in 0..d {
                        acc += basis.at(i, block[r]).conj()
                            * op.matrix().at(i, j)
                            * basis.at(j, block[c]);
                    }
                }
                acc
            });
            let eig = jacobi_hermitian(&restricted.symmetrized());
            // Rotate the block's basis columns by the eigenvectors.
            let mut rotated = vec![vec![Complex64::new(0.0, 0.0); k]; d];
            for (col, item) in rotated.iter_mut().enumerate().take(d) {
                for (c, slot) in item.iter_mut().enumerate() {
                    for r in 0..k {
                        *slot += basis.at(col, block[r]) * eig.eigenvectors.at(r, c);
                    }
                }
            }
            for (c, &target) in block.iter().enumerate() {
                for (row, item) in rotated.iter().enumerate() {
                    basis.set(row, target, item[c]);
                }
            }
            // Split by eigenvalue clusters.
            let mut cluster = vec![block[0]];
            for c in 1..k {
                if eig.eigenvalues[c] - eig.eigenvalues[c - 1] > gap {
                    next_blocks.push(std::mem::take(&mut cluster));
                }
                cluster.push(block[c]);
            }
            next_blocks.push(cluster);
        }
        blocks = next_blocks;
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_is_its_own_decomposition() {
        let sz = ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]);
        let eig = jacobi_hermitian(&sz);
        assert_eq!(eig.eigenvalues, vec![-1.0, 1.0]);
    }

    #[test]
    fn sigma_x_eigensystem() {
        // Characteristic polynomial λ² - 1 gives λ = ∓1 with
        // eigenprojectors (I ∓ σx)/2.
        let sx = ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]);
        let eig = jacobi_hermitian(&sx);
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);

        let v0 = eig.eigenvectors.column(0);
        let proj = ComplexMatrix::outer(&v0, &v0);
        let minus = ComplexMatrix::from_real(2, &[0.5, -0.5, -0.5, 0.5]);
        assert!(proj.max_abs_diff(&minus) < 1e-14);
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let eig = jacobi_hermitian(&ComplexMatrix::identity(5));
        for l in eig.eigenvalues {
            assert!((l - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn simultaneous_basis_for_commuting_projector_families() {
        use super::super::hermitian::{pauli, HermitianOperator};
        // σz ⊗ I and I ⊗ σz commute; the recursion must refine the
        // four-fold degeneracy of the first by the second.
        let i2 = ComplexMatrix::identity(2);
        let a = HermitianOperator::new(pauli::sigma_z().matrix().tensor(&i2)).unwrap();
        let b = HermitianOperator::new(i2.tensor(pauli::sigma_z().matrix())).unwrap();
        let basis = simultaneous_eigenbasis(&[a.clone(), b.clone()]);
        // Orthonormal and diagonalizing for both.
        let gram = basis.adjoint().matmul(&basis);
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
        for op in [a, b] {
            let rotated = basis.adjoint().matmul(op.matrix()).matmul(&basis);
            for i in 0..4 {
                for j in 0..4 {
                    if i != j {
                        assert!(rotated.at(i, j).norm() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn complex_pivot_matrix() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = ComplexMatrix::from_rows(&[
            vec![(2.0, 0.0), (0.0, 1.0)],
            vec![(0.0, -1.0), (2.0, 0.0)],
        ]);
        let eig = jacobi_hermitian(&m);
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 3.0).abs() < 1e-14);
        let rebuilt = eig.reconstruct_with(|l| l);
        assert!(rebuilt.max_abs_diff(&m) < 1e-13);
    }
}

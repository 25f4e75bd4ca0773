//! Dense complex linear algebra: matrices, Hermitian operators and the
//! Jacobi eigensolver everything else is built on.

mod eig;
mod hermitian;
mod matrix;

pub use eig::{jacobi_hermitian, simultaneous_eigenbasis, EigenDecomposition};
pub use hermitian::{
    commutator, operator_gram_rank, operator_norm, pauli, HermitianOperator, HERMITICITY_TOL,
};
pub use matrix::{ComplexMatrix, Factor};

//! Dependency-free dense complex linear algebra for small Hermitian problems.

mod eig;
mod matrix;
mod random;

pub use eig::{clip_eigenvalue, hermitian_eig, spectral_apply, EigenDecomposition, CLIP_TOL};
pub use matrix::{basis_vector, pauli, ComplexMatrix, MAX_DIM};
pub use random::{
    ginibre, haar_random_unitary, random_density_matrix, random_hermitian, random_unit_vector,
    SeededRng,
};

/// Default Hermiticity tolerance used when diagonalizing already-validated operators.
pub const EIG_TOL: f64 = 1e-8;

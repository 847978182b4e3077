//! Complex linear algebra kernel: matrices, Hermitian eigenproblems
//! (cyclic Jacobi), SVD, functional calculus, random generation, and
//! matrix (de)serialization.

pub mod eig;
pub mod funcalc;
pub mod hermitian;
pub mod io;
pub mod matrix;
pub mod random;

pub use eig::{singular_values, svd, Svd};
pub use funcalc::{apply_fn, apply_fn_on_domain, polar, power_psd, sqrt_psd, Polar};
pub use hermitian::{
    diagonal_part, from_eigensystem, pinch_diagonal, HermitianMatrix, SpectralDecomposition,
};
pub use io::MatrixDoc;
pub use matrix::ComplexMatrix;
pub use random::{
    random_contraction, random_expansive, random_gaussian, random_hermitian_in_interval,
    random_psd, random_psd_block, random_unitary, PsdBlock, SpectrumLaw,
};

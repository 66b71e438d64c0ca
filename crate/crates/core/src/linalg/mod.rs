//! Dense, banded and operator-level linear algebra.

pub mod banded;
pub mod dense;
pub mod eigen;
pub mod matrix_market;
pub mod operator;
pub mod vector;

pub use banded::{banded_to_dense, BandedSymmetricMatrix};
pub use dense::{DenseMatrix, DenseSymmetricMatrix};
pub use eigen::{
    apply_matrix_function_small, dense_sym_eigendecomposition, tridiag_eigendecomposition,
    SymmetricEigen,
};
pub use operator::{
    CountingOperator, DiagonalOperator, SparseSymmetricOperator, SquaredShifted, SymmetricOperator,
};
pub use vector::{dot, norm2, DenseVector};

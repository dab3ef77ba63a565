#pragma once

// Thin wrappers over the LAPACK routines the analysis needs.

#include "pescado/core.hpp"

namespace pescado::linalg {

struct SymTridiagEigen {
    VectorXd values;
    MatrixXd vectors;
};

/// Lowest `count` eigenpairs of the symmetric tridiagonal matrix (diag, offdiag).
SymTridiagEigen sym_tridiag_lowest(const VectorXd& diag, const VectorXd& offdiag, int count);

struct GeneralEigen {
    VectorXcd values;
    /// Right eigenvectors as columns, unit 2-norm.
    MatrixXcd vectors;
};

/// Full eigendecomposition of a general complex matrix (zgeev).
GeneralEigen general_eigen(const MatrixXcd& a);

struct InverseResult {
    MatrixXcd inverse;
    /// Reciprocal 1-norm condition estimate from zgecon.
    double rcond = 0.0;
    bool pseudo = false;
    /// Count of singular values discarded by the pseudoinverse.
    int truncated = 0;
};

/// Inverse of a square matrix. Falls back to the SVD pseudoinverse (singular
/// values below pinv_rtol * s_max discarded) when the 1-norm condition
/// estimate exceeds cond_limit or the LU factorization is singular.
InverseResult robust_inverse(const MatrixXcd& a, double cond_limit, double pinv_rtol = 1e-13);

/// Moore-Penrose pseudoinverse via zgesdd.
MatrixXcd pseudo_inverse(const MatrixXcd& a, double rtol, int* truncated = nullptr);

}  // namespace pescado::linalg

#pragma once

#include "rwsolv/precond.hpp"
#include "rwsolv/sparse.hpp"

namespace rwsolv {

/// Incomplete Cholesky with zero fill, in L D L^T form: the factor keeps
/// exactly the lower-triangular pattern of rev(ordering applied to a).
/// Breakdown (a nonpositive pivot) raises std::runtime_error.
IncompleteLdl ic0(const SparseMatrix& a, const Permutation& ordering);

struct IctParams {
    /// Entries below drop_tol times the 2-norm of their matrix row are
    /// dropped before they are applied.
    double drop_tol = 1e-3;
    /// Per-row cap on stored entries, unit diagonal included; 0 = unbounded.
    int max_row_nnz = 0;
};

/// Threshold incomplete Cholesky in L D L^T form. Rows are eliminated with
/// full fill-in, small entries dropped by threshold and then trimmed to the
/// row cap. A nonpositive pivot is first compensated with the diagonal mass
/// of that row's dropped entries; if that fails, std::runtime_error.
IncompleteLdl ict(const SparseMatrix& a, const Permutation& ordering,
                  const IctParams& params = {});

}  // namespace rwsolv

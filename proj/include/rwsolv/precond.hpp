#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rwsolv/sparse.hpp"

namespace rwsolv {

/// Build provenance stored in the serialization sidecar.
struct PrecondMeta {
    std::string method = "stochastic";  // stochastic | ic0 | ict | ldu
    std::uint64_t seed = 0;
    double delta = 0.0;
    double alpha = 0.0;
    int min_walks = 0;
    bool sign_scaling = false;
    bool walk_reuse = false;
};

/// Incomplete L D L^T factorization of rev(P A P^T): `lower` is unit lower
/// triangular with the unit diagonal stored, `diag` is positive.
struct IncompleteLdl {
    SparseMatrix lower;
    std::vector<double> diag;
    Permutation ordering;
    PrecondMeta meta;

    int n() const { return lower.n; }
    /// Factor nonzeros, unit diagonal included (the C of the cost model).
    std::int64_t nonzeros() const { return lower.nnz(); }

    static IncompleteLdl identity(int n);
};

/// Incomplete L D U factorization of rev(P A P^T) for asymmetric matrices;
/// both triangular factors are unit diagonal.
struct IncompleteLdu {
    SparseMatrix lower;
    std::vector<double> diag;
    SparseMatrix upper;
    Permutation ordering;
    PrecondMeta meta;

    int n() const { return lower.n; }
};

/// Writes base.L.mtx, base.D.mtx and base.json (ordering + build parameters).
void save_ldl(const std::string& base_path, const IncompleteLdl& f);
IncompleteLdl load_ldl(const std::string& base_path);

}  // namespace rwsolv

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rwsolv/precond.hpp"
#include "rwsolv/sparse.hpp"

namespace rwsolv {

/// Per-iteration multiplication count of preconditioned CG: one matrix-vector
/// product (e), one preconditioner application (2c - n), and five vector
/// kernels of which four are counted here; the convergence-test dot product
/// is the remaining n, reported by the instrumented counter.
std::int64_t count_m1(std::int64_t c, std::int64_t e, std::int64_t n);

/// Applies (L D L^T)^{-1}: unit forward solve, diagonal scaling, unit
/// backward solve against a cached transpose. Costs 2C - N multiplications.
class LdlApplier {
public:
    explicit LdlApplier(const IncompleteLdl& f);

    int n() const { return lower_.n; }
    std::int64_t mults_per_apply() const;

    /// z = (L D L^T)^{-1} r.
    void apply(const std::vector<double>& r, std::vector<double>& z) const;

private:
    SparseMatrix lower_;
    SparseMatrix upper_;
    std::vector<double> inv_diag_;
};

/// One-shot convenience wrapper around LdlApplier.
std::vector<double> apply_ldl_inverse(const IncompleteLdl& f, const std::vector<double>& r);

struct SolveReport {
    std::vector<double> solution;
    int n = 0;
    std::int64_t matrix_nonzeros = 0;   // E, full storage
    std::int64_t precond_nonzeros = 0;  // C, unit diagonal included
    int iterations = 0;
    bool converged = false;
    /// True relative residual ||b - A x|| / ||b|| at exit.
    double relative_residual = 0.0;
    /// Recursive relative residual after each iteration.
    std::vector<double> residual_history;
    std::int64_t m1_model = 0;         // count_m1(C, E, N)
    std::int64_t m1_instrumented = 0;  // measured cost of one full iteration
    std::int64_t m2 = 0;               // m1_model * iterations
    /// True-residual refreshes and convergence verification, kept out of the
    /// per-iteration count.
    std::int64_t verification_mults = 0;
};

/// Preconditioned conjugate gradients on rev(P A P^T) y = rev(P b), solution
/// mapped back to x. Starts from zero, stops on the recursive residual and
/// confirms against the true residual before declaring convergence; the
/// recursive residual is refreshed from the true one every ten iterations.
/// max_iter 0 selects 10 * ceil(sqrt(n)).
SolveReport pcg_solve(const SparseMatrix& a, const std::vector<double>& b,
                      const IncompleteLdl& precond, double tol = 1e-6, int max_iter = 0,
                      const std::function<void(int, double)>& observer = {});

}  // namespace rwsolv

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "rwsolv/baselines.hpp"
#include "rwsolv/krylov.hpp"
#include "rwsolv/ordering.hpp"
#include "rwsolv/sparse.hpp"
#include "rwsolv/stopping.hpp"

namespace rwsolv {

enum class Method { stochastic, ic0, ict };

Method method_from_name(const std::string& name);
std::string method_name(Method m);

struct CompareOptions {
    std::vector<Method> methods = {Method::stochastic, Method::ic0, Method::ict};
    StoppingCriterion stop;
    /// Ordering for the stochastic build; the incomplete-factor baselines
    /// keep their own (natural by default, where they are at their best).
    OrderingStrategy ordering = OrderingStrategy::random;
    OrderingStrategy baseline_ordering = OrderingStrategy::natural;
    double tol = 1e-6;
    std::uint64_t seed = 1;
    int max_iter = 0;
    bool walk_reuse = true;
    bool sign_scaling = false;
    /// Pick the ICT drop tolerance so its factor size matches the stochastic
    /// factor; falls back to ict_params when no stochastic row is requested.
    bool ict_size_match = true;
    double ict_match_tol_pct = 10.0;
    IctParams ict_params;
};

/// One line of the comparison table. r_vs_hybrid is this row's m2 over the
/// stochastic row's m2 (1 for the stochastic row itself, 0 when no
/// stochastic row was produced).
struct CompareRow {
    std::string method;
    int n = 0;
    std::int64_t e = 0;
    std::int64_t c = 0;
    std::int64_t m1 = 0;
    int i = 0;
    std::int64_t m2 = 0;
    double wall_precond_s = 0.0;
    double wall_solve_s = 0.0;
    double r_vs_hybrid = 0.0;
};

struct CompareResult {
    CompareRow row;
    SolveReport report;
};

/// Builds each requested preconditioner, solves A x = b with it, and fills
/// one row per method. The stochastic method runs first regardless of the
/// requested order (its factor size anchors the ICT size match); rows come
/// back in the requested order.
std::vector<CompareResult> run_compare(const SparseMatrix& a, const std::vector<double>& b,
                                       const CompareOptions& opts = {});

/// Header plus one CSV line per row:
/// method,n,e,c,m1,i,m2,wall_precond_s,wall_solve_s,r_vs_hybrid
void write_csv(std::ostream& out, const std::vector<CompareResult>& results);

/// Bisects the ICT drop tolerance (log scale) until the factor's stored
/// entries land within tol_pct percent of target_c. Throws std::runtime_error
/// when the target is outside the reachable range or the search stalls.
IctParams size_match_ict(const SparseMatrix& a, const Permutation& ordering,
                         std::int64_t target_c, double tol_pct = 10.0);

}  // namespace rwsolv

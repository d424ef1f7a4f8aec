#include "rwsolv/bench.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "rwsolv/precond_builder.hpp"

namespace rwsolv {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CompareResult run_method(Method m, const SparseMatrix& a, const std::vector<double>& b,
                         const CompareOptions& opts, const Permutation& stoch_perm,
                         const Permutation& base_perm, std::int64_t stochastic_c) {
    CompareResult res;
    const auto t0 = std::chrono::steady_clock::now();
    IncompleteLdl f;
    switch (m) {
        case Method::stochastic: {
            BuildOptions bo;
            bo.use_walk_reuse = opts.walk_reuse;
            bo.sign_scaling = opts.sign_scaling;
            f = build_preconditioner(a, stoch_perm, opts.stop, opts.seed, bo);
            break;
        }
        case Method::ic0:
            f = ic0(a, base_perm);
            break;
        case Method::ict: {
            IctParams params = opts.ict_params;
            if (opts.ict_size_match && stochastic_c > 0)
                params = size_match_ict(a, base_perm, stochastic_c, opts.ict_match_tol_pct);
            f = ict(a, base_perm, params);
            break;
        }
    }
    res.row.wall_precond_s = seconds_since(t0);

    const auto t1 = std::chrono::steady_clock::now();
    res.report = pcg_solve(a, b, f, opts.tol, opts.max_iter);
    res.row.wall_solve_s = seconds_since(t1);

    res.row.method = method_name(m);
    res.row.n = res.report.n;
    res.row.e = res.report.matrix_nonzeros;
    res.row.c = res.report.precond_nonzeros;
    res.row.m1 = res.report.m1_model;
    res.row.i = res.report.iterations;
    res.row.m2 = res.report.m2;
    return res;
}

}  // namespace

Method method_from_name(const std::string& name) {
    if (name == "stochastic") return Method::stochastic;
    if (name == "ic0") return Method::ic0;
    if (name == "ict") return Method::ict;
    throw std::invalid_argument("unknown method '" + name + "'");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::stochastic: return "stochastic";
        case Method::ic0: return "ic0";
        case Method::ict: return "ict";
    }
    throw std::logic_error("unreachable");
}

std::vector<CompareResult> run_compare(const SparseMatrix& a, const std::vector<double>& b,
                                       const CompareOptions& opts) {
    a.check_structure();
    if (static_cast<int>(b.size()) != a.n)
        throw std::invalid_argument("run_compare: right-hand side size mismatch");
    if (opts.methods.empty()) throw std::invalid_argument("run_compare: no methods requested");

    const Permutation stoch_perm = make_ordering(a, opts.ordering, opts.seed);
    const Permutation base_perm = make_ordering(a, opts.baseline_ordering, opts.seed);

    // The stochastic row anchors the ICT size match and the m2 ratios, so it
    // is computed first even when listed later.
    bool want_stochastic = false;
    for (Method m : opts.methods) want_stochastic |= (m == Method::stochastic);

    CompareResult stochastic_result;
    std::int64_t stochastic_c = 0;
    std::int64_t stochastic_m2 = 0;
    if (want_stochastic) {
        stochastic_result = run_method(Method::stochastic, a, b, opts, stoch_perm, base_perm, 0);
        stochastic_c = stochastic_result.row.c;
        stochastic_m2 = stochastic_result.row.m2;
    }

    std::vector<CompareResult> out;
    out.reserve(opts.methods.size());
    bool stochastic_emitted = false;
    for (Method m : opts.methods) {
        if (m == Method::stochastic) {
            if (stochastic_emitted)
                throw std::invalid_argument("run_compare: duplicate stochastic method");
            out.push_back(stochastic_result);
            stochastic_emitted = true;
        } else {
            out.push_back(run_method(m, a, b, opts, stoch_perm, base_perm, stochastic_c));
        }
    }
    for (CompareResult& r : out)
        r.row.r_vs_hybrid =
            stochastic_m2 > 0 ? static_cast<double>(r.row.m2) / static_cast<double>(stochastic_m2)
                              : 0.0;
    return out;
}

void write_csv(std::ostream& out, const std::vector<CompareResult>& results) {
    out << "method,n,e,c,m1,i,m2,wall_precond_s,wall_solve_s,r_vs_hybrid\n";
    for (const CompareResult& r : results) {
        const CompareRow& row = r.row;
        out << row.method << ',' << row.n << ',' << row.e << ',' << row.c << ',' << row.m1 << ','
            << row.i << ',' << row.m2 << ',' << row.wall_precond_s << ',' << row.wall_solve_s
            << ',' << row.r_vs_hybrid << '\n';
    }
}

IctParams size_match_ict(const SparseMatrix& a, const Permutation& ordering,
                         std::int64_t target_c, double tol_pct) {
    if (target_c <= 0) throw std::invalid_argument("size_match_ict: nonpositive target");
    const double rel_tol = tol_pct / 100.0;
    const auto within = [&](std::int64_t c) {
        return std::abs(static_cast<double>(c - target_c)) <=
               rel_tol * static_cast<double>(target_c);
    };
    const auto count = [&](double drop_tol) {
        IctParams p;
        p.drop_tol = drop_tol;
        return ict(a, ordering, p).nonzeros();
    };

    // Stored entries shrink as drop_tol grows; bracket the target, then
    // bisect in log space.  Bracketing walks down from the sparse end so the
    // near-complete factorization at tiny tolerances is only ever computed
    // when the target actually calls for it.
    double hi = 1.0;  // diagonal-only end
    std::int64_t c_hi = count(hi);
    if (within(c_hi)) return IctParams{hi, 0};
    if (c_hi > target_c)
        throw std::runtime_error("size_match_ict: target " + std::to_string(target_c) +
                                 " below diagonal-only size " + std::to_string(c_hi));
    double lo = 1e-1;
    std::int64_t c_lo = count(lo);
    while (c_lo < target_c && lo > 1e-8) {
        if (within(c_lo)) return IctParams{lo, 0};
        hi = lo;
        lo *= 1e-1;
        c_lo = count(lo);
    }
    if (within(c_lo)) return IctParams{lo, 0};
    if (c_lo < target_c)
        throw std::runtime_error("size_match_ict: target " + std::to_string(target_c) +
                                 " outside reachable range [" + std::to_string(c_hi) + ", " +
                                 std::to_string(c_lo) + "]");

    for (int iter = 0; iter < 60; ++iter) {
        const double mid = std::exp(0.5 * (std::log(lo) + std::log(hi)));
        const std::int64_t c_mid = count(mid);
        if (within(c_mid)) return IctParams{mid, 0};
        if (c_mid > target_c)
            lo = mid;
        else
            hi = mid;
    }
    throw std::runtime_error("size_match_ict: no drop tolerance found within " +
                             std::to_string(tol_pct) + "% of target " + std::to_string(target_c));
}

}  // namespace rwsolv

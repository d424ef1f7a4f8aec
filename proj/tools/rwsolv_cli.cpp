#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rwsolv/bench.hpp"
#include "rwsolv/matrix_market.hpp"
#include "rwsolv/ordering.hpp"
#include "rwsolv/sparse.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitNoConvergence = 3;

std::string rhs_path_for(const std::string& matrix_path) {
    std::string stem = matrix_path;
    const std::string ext = ".mtx";
    if (stem.size() > ext.size() && stem.compare(stem.size() - ext.size(), ext.size(), ext) == 0)
        stem.resize(stem.size() - ext.size());
    return stem + ".b.mtx";
}

int run_gen(const std::vector<int>& grid, const std::string& out) {
    const rwsolv::SparseMatrix a = rwsolv::gen_laplace3d(grid[0], grid[1], grid[2]);
    rwsolv::write_matrix_market(out, a);
    const std::vector<double> b(a.n, 1.0);
    const std::string rhs_path = rhs_path_for(out);
    rwsolv::write_vector_market(rhs_path, b);
    std::cout << "wrote " << out << " (n=" << a.n << ", nnz=" << a.nnz() << ") and " << rhs_path
              << "\n";
    return kExitOk;
}

int run_compare(const std::string& matrix_path, const std::string& rhs_arg,
                const std::vector<std::string>& method_names, const rwsolv::CompareOptions& base,
                const std::string& ordering_name, const std::string& baseline_ordering_name,
                const std::string& out_path) {
    rwsolv::CompareOptions opts = base;
    opts.ordering = rwsolv::ordering_from_name(ordering_name);
    opts.baseline_ordering = rwsolv::ordering_from_name(baseline_ordering_name);
    opts.methods.clear();
    for (const std::string& name : method_names)
        opts.methods.push_back(rwsolv::method_from_name(name));

    const rwsolv::SparseMatrix a = rwsolv::read_matrix_market(matrix_path);
    std::vector<double> b;
    if (rhs_arg == "ones")
        b.assign(a.n, 1.0);
    else
        b = rwsolv::read_vector_market(rhs_arg);

    const std::vector<rwsolv::CompareResult> results = rwsolv::run_compare(a, b, opts);

    if (out_path.empty()) {
        rwsolv::write_csv(std::cout, results);
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
        rwsolv::write_csv(out, results);
        std::cout << "wrote " << out_path << "\n";
    }

    for (const rwsolv::CompareResult& r : results)
        if (!r.report.converged) {
            std::cerr << r.row.method << " did not converge within " << r.report.iterations
                      << " iterations (relative residual " << r.report.relative_residual << ")\n";
            return kExitNoConvergence;
        }
    return kExitOk;
}

int run_size_match(const std::string& matrix_path, std::int64_t target_c, double tol_pct,
                   const std::string& ordering_name, std::uint64_t seed) {
    const rwsolv::SparseMatrix a = rwsolv::read_matrix_market(matrix_path);
    const rwsolv::Permutation perm =
        rwsolv::make_ordering(a, rwsolv::ordering_from_name(ordering_name), seed);
    const rwsolv::IctParams params = rwsolv::size_match_ict(a, perm, target_c, tol_pct);
    const std::int64_t c = rwsolv::ict(a, perm, params).nonzeros();
    std::cout << "drop_tol=" << params.drop_tol << " c=" << c << " target=" << target_c << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse solver toolkit: stochastic preconditioning and baselines"};
    app.require_subcommand(1);

    CLI::App* gen = app.add_subcommand("gen", "write a 3-D Poisson test matrix and a unit rhs");
    std::vector<int> grid;
    std::string gen_out;
    gen->add_option("--grid", grid, "grid extents NX NY NZ")->expected(3)->required();
    gen->add_option("--out", gen_out, "output Matrix Market path")->required();

    CLI::App* cmp = app.add_subcommand("compare", "benchmark preconditioners on one system");
    std::string matrix_path;
    std::string rhs_arg = "ones";
    std::vector<std::string> method_names = {"stochastic", "ic0", "ict"};
    std::string ordering = "random";
    std::string baseline_ordering = "natural";
    std::string out_path;
    rwsolv::CompareOptions opts;
    cmp->add_option("--matrix", matrix_path, "Matrix Market input")->required();
    cmp->add_option("--rhs", rhs_arg, "right-hand side path, or 'ones'");
    cmp->add_option("--method", method_names, "methods: stochastic, ic0, ict")->delimiter(',');
    cmp->add_option("--delta", opts.stop.delta, "walk-length accuracy parameter");
    cmp->add_option("--alpha", opts.stop.alpha, "walk-length confidence level");
    cmp->add_option("--min-walks", opts.stop.min_walks, "minimum walks per node");
    cmp->add_option("--ordering", ordering, "stochastic ordering: natural, random, md, cm");
    cmp->add_option("--baseline-ordering", baseline_ordering,
                    "ic0/ict ordering: natural, random, md, cm");
    cmp->add_option("--tol", opts.tol, "relative residual tolerance");
    cmp->add_option("--seed", opts.seed, "master seed");
    cmp->add_option("--max-iter", opts.max_iter, "iteration cap (0 = automatic)");
    cmp->add_option("--out", out_path, "CSV output path (default: stdout)");
    cmp->add_flag("!--no-walk-reuse", opts.walk_reuse, "disable sub-walk reuse");
    cmp->add_flag("--sign-scaling", opts.sign_scaling, "admit positive off-diagonals");
    cmp->add_flag("!--no-size-match", opts.ict_size_match,
                  "use --ict-drop-tol instead of matching the stochastic factor size");
    cmp->add_option("--ict-drop-tol", opts.ict_params.drop_tol, "ICT drop tolerance");
    cmp->add_option("--ict-max-row-nnz", opts.ict_params.max_row_nnz,
                    "ICT per-row entry cap (0 = unbounded)");
    cmp->add_option("--ict-match-tol-pct", opts.ict_match_tol_pct,
                    "size-match tolerance, percent");

    CLI::App* sm = app.add_subcommand("size-match", "find an ICT drop tolerance for a target size");
    std::string sm_matrix;
    std::int64_t target_c = 0;
    double tol_pct = 10.0;
    std::string sm_ordering = "natural";
    std::uint64_t sm_seed = 1;
    sm->add_option("--matrix", sm_matrix, "Matrix Market input")->required();
    sm->add_option("--target-c", target_c, "target stored entries of the factor")->required();
    sm->add_option("--tol-pct", tol_pct, "acceptance window, percent");
    sm->add_option("--ordering", sm_ordering, "ordering: natural, random, md, cm");
    sm->add_option("--seed", sm_seed, "ordering seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (gen->parsed()) return run_gen(grid, gen_out);
        if (cmp->parsed())
            return run_compare(matrix_path, rhs_arg, method_names, opts, ordering,
                               baseline_ordering, out_path);
        if (sm->parsed()) return run_size_match(sm_matrix, target_c, tol_pct, sm_ordering, sm_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}

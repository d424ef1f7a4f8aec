#include "rwsolv/general.hpp"

#include <stdexcept>
#include <string>

namespace rwsolv {

IncompleteLdu build_ldu(const SparseMatrix& a, const Permutation& ordering,
                        const StoppingCriterion& stop, std::uint64_t seed,
                        const BuildOptions& opts) {
    a.check_structure();
    if (static_cast<int>(ordering.size()) != a.n)
        throw std::invalid_argument("build_ldu: ordering size mismatch");

    if (opts.validate) {
        const RMatrixCertificate rows = validate_r_matrix(a);
        const RMatrixCertificate cols = validate_r_matrix(transpose(a));
        std::string why;
        if (!rows.diag_positive)
            why = "diagonal is not positive";
        else if (!opts.sign_scaling && !rows.offdiag_nonpositive)
            why = "positive off-diagonal entries require sign scaling";
        else if (!rows.row_dominant)
            why = "rows are not weakly diagonally dominant with a strict row";
        else if (!cols.row_dominant)
            why = "columns are not weakly diagonally dominant with a strict column";
        else if (!rows.irreducible)
            why = "matrix graph is not connected";
        if (!why.empty()) throw std::invalid_argument("build_ldu: " + why);
    }

    const SparseMatrix b = apply_permutation(a, ordering);
    const PositionFactor fa = factorize_positions(b, stop, seed, 0, opts);
    const PositionFactor ft = factorize_positions(transpose(b), stop, seed, 1, opts);

    IncompleteLdu f;
    f.upper = rev_matrix(fa.y);
    f.lower = transpose(rev_matrix(ft.y));
    f.diag.resize(a.n);
    for (int i = 0; i < a.n; ++i) f.diag[i] = 1.0 / fa.z_diag[a.n - 1 - i];
    f.ordering = ordering;
    f.meta = PrecondMeta{"ldu",      seed,           stop.delta,
                         stop.alpha, stop.min_walks, opts.sign_scaling,
                         opts.use_walk_reuse};
    return f;
}

std::vector<double> apply_ldu_inverse(const IncompleteLdu& f, const std::vector<double>& r) {
    const int n = f.n();
    if (static_cast<int>(r.size()) != n)
        throw std::invalid_argument("apply_ldu_inverse: vector size mismatch");
    std::vector<double> z(r);
    for (int i = 0; i < n; ++i) {
        double s = z[i];
        for (int e = f.lower.row_ptr[i]; e < f.lower.row_ptr[i + 1]; ++e) {
            const int j = f.lower.col_idx[e];
            if (j < i) s -= f.lower.values[e] * z[j];
        }
        z[i] = s;
    }
    for (int i = 0; i < n; ++i) {
        if (f.diag[i] == 0.0)
            throw std::runtime_error("apply_ldu_inverse: zero diagonal entry at " +
                                     std::to_string(i));
        z[i] /= f.diag[i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = z[i];
        for (int e = f.upper.row_ptr[i]; e < f.upper.row_ptr[i + 1]; ++e) {
            const int j = f.upper.col_idx[e];
            if (j > i) s -= f.upper.values[e] * z[j];
        }
        z[i] = s;
    }
    return z;
}

}  // namespace rwsolv

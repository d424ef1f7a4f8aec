#include "rwsolv/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rwsolv {

namespace {

/// Splits rev(ordering applied to a) into per-row lower entries and diagonal.
struct EliminationInput {
    SparseMatrix m;
    std::vector<double> diag;
};

EliminationInput prepare(const SparseMatrix& a, const Permutation& ordering,
                         const std::string& context) {
    a.check_structure();
    if (static_cast<int>(ordering.size()) != a.n)
        throw std::invalid_argument(context + ": ordering size mismatch");
    require_r_matrix(a, context);

    EliminationInput in;
    in.m = rev_matrix(apply_permutation(a, ordering));
    in.diag.assign(a.n, 0.0);
    for (int i = 0; i < a.n; ++i)
        for (int e = in.m.row_ptr[i]; e < in.m.row_ptr[i + 1]; ++e)
            if (in.m.col_idx[e] == i) in.diag[i] = in.m.values[e];
    return in;
}

IncompleteLdl assemble(const SparseMatrix& a, const Permutation& ordering,
                       const std::vector<std::vector<std::pair<int, double>>>& rows,
                       std::vector<double> diag, const std::string& method) {
    IncompleteLdl f;
    f.lower.n = a.n;
    f.lower.symmetric_hint = false;
    f.lower.row_ptr.assign(a.n + 1, 0);
    std::size_t total = 0;
    for (const auto& row : rows) total += row.size() + 1;
    f.lower.col_idx.reserve(total);
    f.lower.values.reserve(total);
    for (int i = 0; i < a.n; ++i) {
        for (const auto& [j, v] : rows[i]) {
            f.lower.col_idx.push_back(j);
            f.lower.values.push_back(v);
        }
        f.lower.col_idx.push_back(i);
        f.lower.values.push_back(1.0);
        f.lower.row_ptr[i + 1] = static_cast<int>(f.lower.col_idx.size());
    }
    f.diag = std::move(diag);
    f.ordering = ordering;
    f.meta.method = method;
    return f;
}

}  // namespace

IncompleteLdl ic0(const SparseMatrix& a, const Permutation& ordering) {
    EliminationInput in = prepare(a, ordering, "ic0");
    const SparseMatrix& m = in.m;
    const int n = a.n;

    // rows[i] holds the strictly-lower entries of L's row i, ascending.
    std::vector<std::vector<std::pair<int, double>>> rows(n);
    std::vector<double> d(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double di = in.diag[i];
        for (int e = m.row_ptr[i]; e < m.row_ptr[i + 1]; ++e) {
            const int j = m.col_idx[e];
            if (j >= i) continue;
            // Merge the finished prefix of row i with row j over their
            // common columns t < j.
            double s = m.values[e];
            auto it_i = rows[i].begin();
            auto it_j = rows[j].begin();
            while (it_i != rows[i].end() && it_j != rows[j].end()) {
                if (it_i->first < it_j->first) {
                    ++it_i;
                } else if (it_j->first < it_i->first) {
                    ++it_j;
                } else {
                    s -= it_i->second * d[it_i->first] * it_j->second;
                    ++it_i;
                    ++it_j;
                }
            }
            const double lij = s / d[j];
            rows[i].emplace_back(j, lij);
            di -= lij * lij * d[j];
        }
        if (di <= 0.0)
            throw std::runtime_error("ic0: nonpositive pivot at position " + std::to_string(i));
        d[i] = di;
    }
    return assemble(a, ordering, rows, std::move(d), "ic0");
}

IncompleteLdl ict(const SparseMatrix& a, const Permutation& ordering, const IctParams& params) {
    if (params.drop_tol < 0.0) throw std::invalid_argument("ict: negative drop tolerance");
    if (params.max_row_nnz == 1)
        throw std::invalid_argument("ict: row cap of one leaves no room beside the diagonal");
    EliminationInput in = prepare(a, ordering, "ict");
    const SparseMatrix& m = in.m;
    const int n = a.n;

    std::vector<std::vector<std::pair<int, double>>> rows(n);
    std::vector<double> d(n, 0.0);
    // Column t of L so far, needed to push row t's eliminations into later rows.
    std::vector<std::vector<std::pair<int, double>>> cols(n);

    for (int i = 0; i < n; ++i) {
        double row_norm2 = 0.0;
        for (int e = m.row_ptr[i]; e < m.row_ptr[i + 1]; ++e)
            row_norm2 += m.values[e] * m.values[e];
        const double threshold = params.drop_tol * std::sqrt(row_norm2);

        std::map<int, double> w;
        for (int e = m.row_ptr[i]; e < m.row_ptr[i + 1]; ++e)
            if (m.col_idx[e] < i) w[m.col_idx[e]] = m.values[e];

        double di = in.diag[i];
        double dropped = 0.0;  // diagonal mass of the entries dropped below
        for (auto it = w.begin(); it != w.end(); ++it) {
            const int t = it->first;
            const double wt = it->second;
            if (std::abs(wt) < threshold) {
                dropped += wt * wt / d[t];
                continue;
            }
            const double lit = wt / d[t];
            for (const auto& [j, ljt] : cols[t])
                if (j < i) w[j] -= lit * d[t] * ljt;
            rows[i].emplace_back(t, lit);
            di -= lit * lit * d[t];
        }

        if (di <= 0.0) di += dropped;
        if (di <= 0.0)
            throw std::runtime_error("ict: nonpositive pivot at position " + std::to_string(i));
        d[i] = di;

        if (params.max_row_nnz > 0 &&
            static_cast<int>(rows[i].size()) > params.max_row_nnz - 1) {
            auto& row = rows[i];
            std::nth_element(row.begin(), row.begin() + (params.max_row_nnz - 1), row.end(),
                             [](const auto& x, const auto& y) {
                                 return std::abs(x.second) > std::abs(y.second);
                             });
            row.resize(params.max_row_nnz - 1);
            std::sort(row.begin(), row.end());
        }
        for (const auto& [t, lit] : rows[i]) cols[t].emplace_back(i, lit);
    }
    return assemble(a, ordering, rows, std::move(d), "ict");
}

}  // namespace rwsolv

#include "rwsolv/walk_game.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rwsolv {

namespace {

constexpr double kEscapeSlack = 1e-12;  // relative roundoff allowance on row sums

WalkGame build_common(const SparseMatrix& a, const std::vector<double>* b, bool scaled) {
    a.check_structure();
    if (b && static_cast<int>(b->size()) != a.n)
        throw std::invalid_argument("build_game: right-hand side size mismatch");

    WalkGame g;
    g.n = a.n;
    g.nbr_ptr.assign(a.n + 1, 0);
    g.escape.resize(a.n);
    g.diag.resize(a.n);
    if (b) g.price.resize(a.n);
    if (scaled) g.edge_sign.reserve(a.nnz());
    g.nbr.reserve(a.nnz());
    g.cum_prob.reserve(a.nnz());

    for (int i = 0; i < a.n; ++i) {
        double diag = 0.0;
        for (int e = a.row_ptr[i]; e < a.row_ptr[i + 1]; ++e)
            if (a.col_idx[e] == i) diag = a.values[e];
        if (diag <= 0.0)
            throw std::invalid_argument("build_game: nonpositive diagonal at row " +
                                        std::to_string(i));
        g.diag[i] = diag;
        if (b) g.price[i] = -(*b)[i] / diag;

        // Off-diagonal sum in column order; generators that balance rows by
        // negating this exact sum get an exactly-zero escape probability.
        double offdiag_sum = 0.0;
        double cum = 0.0;
        for (int e = a.row_ptr[i]; e < a.row_ptr[i + 1]; ++e) {
            const int j = a.col_idx[e];
            if (j == i) continue;
            const double v = a.values[e];
            offdiag_sum += scaled ? std::abs(v) : v;
            double p;
            if (scaled) {
                p = std::abs(v) / diag;
                g.edge_sign.push_back(v < 0.0 ? 1 : -1);
            } else {
                if (v > 0.0)
                    throw std::invalid_argument(
                        "build_game: positive off-diagonal (negative transition probability) at (" +
                        std::to_string(i) + "," + std::to_string(j) + ")");
                p = -v / diag;
            }
            cum += p;
            g.nbr.push_back(j);
            g.cum_prob.push_back(cum);
        }
        g.nbr_ptr[i + 1] = static_cast<int>(g.nbr.size());

        const double esc = scaled ? (diag - offdiag_sum) / diag : (diag + offdiag_sum) / diag;
        if (esc < -kEscapeSlack)
            throw std::invalid_argument("build_game: row " + std::to_string(i) +
                                        " is not diagonally dominant (negative escape)");
        g.escape[i] = esc < 0.0 ? 0.0 : esc;
    }
    return g;
}

void require_column_dominance(const SparseMatrix& a) {
    std::vector<double> col_abs(a.n, 0.0);
    std::vector<double> diag(a.n, 0.0);
    for (int i = 0; i < a.n; ++i)
        for (int e = a.row_ptr[i]; e < a.row_ptr[i + 1]; ++e) {
            if (a.col_idx[e] == i)
                diag[i] = a.values[e];
            else
                col_abs[a.col_idx[e]] += std::abs(a.values[e]);
        }
    for (int j = 0; j < a.n; ++j)
        if (col_abs[j] - diag[j] > kEscapeSlack * std::max(1.0, col_abs[j]))
            throw std::invalid_argument("build_scaled_game: column " + std::to_string(j) +
                                        " is not diagonally dominant");
}

}  // namespace

WalkGame build_game(const SparseMatrix& a) { return build_common(a, nullptr, false); }

WalkGame build_game(const SparseMatrix& a, const std::vector<double>& b) {
    return build_common(a, &b, false);
}

WalkGame build_scaled_game(const SparseMatrix& a) {
    require_column_dominance(a);
    return build_common(a, nullptr, true);
}

WalkGame build_scaled_game(const SparseMatrix& a, const std::vector<double>& b) {
    require_column_dominance(a);
    return build_common(a, &b, true);
}

StepOutcome sample_step_with(const WalkGame& game, int node, double u) {
    const int begin = game.nbr_ptr[node];
    const int end = game.nbr_ptr[node + 1];
    if (begin == end || u >= game.cum_prob[end - 1]) return {true, -1, 1};
    int e = begin;
    while (game.cum_prob[e] <= u) ++e;
    return {false, game.nbr[e], game.scaled() ? game.edge_sign[e] : 1};
}

StepOutcome sample_step(const WalkGame& game, int node, WalkRng& rng) {
    return sample_step_with(game, node, rng.next_double());
}

}  // namespace rwsolv

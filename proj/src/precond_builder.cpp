#include "rwsolv/precond_builder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "rwsolv/rng.hpp"
#include "rwsolv/walk_game.hpp"

namespace rwsolv {

namespace {

void bump_hit(std::vector<std::pair<int, std::int64_t>>& hits, int key, std::int64_t w) {
    for (auto& kv : hits)
        if (kv.first == key) {
            kv.second += w;
            return;
        }
    hits.emplace_back(key, w);
}

/// Open sub-walk: started at `pos` by the transition leaving walk_seq[step].
struct ScanEntry {
    int pos;
    std::int64_t step;
    int sign_at_push;       // running edge-sign product at the start visit
    std::int64_t returns;   // signed returns to pos, relative to the start
};

}  // namespace

void accumulate_walk(RowRecord& rec, int start, int end, std::int64_t self_returns,
                     std::int64_t length, int end_sign) {
    if (end >= start)
        throw std::invalid_argument("accumulate_walk: end " + std::to_string(end) +
                                    " does not precede start " + std::to_string(start));
    rec.walks += 1;
    rec.self_visits += 1 + self_returns;  // the start visit always counts +1
    if (end >= 0) bump_hit(rec.end_hits, end, end_sign);
    rec.lengths.add(static_cast<double>(length));
}

void extract_reused_walks(const std::vector<int>& walk_seq, std::vector<RowRecord>& records,
                          bool escaped, const std::vector<int>& step_signs) {
    if (walk_seq.empty()) return;
    if (!step_signs.empty() && step_signs.size() + 1 != walk_seq.size())
        throw std::invalid_argument("extract_reused_walks: one step sign per transition required");

    std::vector<ScanEntry> stack;
    int sign = 1;
    const std::int64_t steps = static_cast<std::int64_t>(walk_seq.size());
    for (std::int64_t l = 0; l < steps; ++l) {
        if (l > 0 && !step_signs.empty()) sign *= step_signs[l - 1];
        const int p = walk_seq[l];
        while (!stack.empty() && stack.back().pos > p) {
            const ScanEntry e = stack.back();
            stack.pop_back();
            if (l - e.step >= 2)
                accumulate_walk(records.at(e.pos), e.pos, p, e.returns, l - e.step,
                                sign * e.sign_at_push);
        }
        if (!stack.empty() && stack.back().pos == p)
            stack.back().returns += sign * stack.back().sign_at_push;
        else
            stack.push_back({p, l, sign, 0});
    }
    if (escaped) {
        // The walk left walk_seq.back() for the initial home, so every still
        // open sub-walk ended there as well: one more step, award zero, no
        // end hit. Dropping them instead would skew the samples toward
        // absorption.
        for (const ScanEntry& e : stack)
            if (steps - e.step >= 2)
                accumulate_walk(records.at(e.pos), e.pos, -1, e.returns, steps - e.step);
    }
}

FinalizedRow finalize_row(int k, const RowRecord& rec, const SparseMatrix& b) {
    if (k < 0 || k >= b.n) throw std::invalid_argument("finalize_row: position out of range");

    double d = 0.0;
    double w_up = 0.0;
    std::map<int, double> row;  // position -> numerator, divided through below
    for (int e = b.row_ptr[k]; e < b.row_ptr[k + 1]; ++e) {
        const int j = b.col_idx[e];
        const double v = b.values[e];
        if (j == k)
            d = v;
        else if (j > k)
            w_up += std::abs(v);
        else
            row[j] = v;
    }
    if (d <= 0.0)
        throw std::runtime_error("finalize_row: nonpositive diagonal at position " +
                                 std::to_string(k));
    w_up /= d;

    FinalizedRow out;
    if (w_up == 0.0) {
        // Every neighbor is already a home: the one-step transitions are the
        // whole story and the row is exact.
        for (const auto& [i, v] : row) out.entries.emplace_back(i, v / d);
        out.z_diag = 1.0 / d;
        return out;
    }

    if (rec.walks <= 0)
        throw std::runtime_error("finalize_row: no walks recorded for position " +
                                 std::to_string(k));
    const double m = static_cast<double>(rec.walks);
    for (auto& kv : row) kv.second /= d;
    for (const auto& [home, hits] : rec.end_hits) {
        if (home < 0 || home >= k)
            throw std::invalid_argument("finalize_row: end hit at or above the row");
        row[home] -= w_up * (static_cast<double>(hits) / m);
    }
    const double returns = static_cast<double>(rec.self_visits - rec.walks);
    const double z = (1.0 + w_up * (returns / m)) / d;
    if (!(z > 0.0))
        throw std::runtime_error("finalize_row: nonpositive pivot estimate at position " +
                                 std::to_string(k));

    for (const auto& [i, v] : row)
        if (v != 0.0) out.entries.emplace_back(i, v);
    out.z_diag = z;
    return out;
}

PositionFactor factorize_positions(const SparseMatrix& b, const StoppingCriterion& stop,
                                   std::uint64_t seed, std::uint64_t stream,
                                   const BuildOptions& opts) {
    b.check_structure();
    const int n = b.n;
    const WalkGame game = opts.sign_scaling ? build_scaled_game(b) : build_game(b);

    std::vector<RowRecord> records(n);
    std::vector<FinalizedRow> rows(n);
    const double q = stop.quantile();
    const std::int64_t floor_walks = std::max(1, stop.min_walks);

    std::vector<int> seq;
    std::vector<int> sgn;
    for (int k = 0; k < n; ++k) {
        const int row_begin = game.nbr_ptr[k];
        const int row_end = game.nbr_ptr[k + 1];
        int first_up = row_begin;
        while (first_up < row_end && game.nbr[first_up] < k) ++first_up;

        if (first_up < row_end) {
            // Fresh walks start with a conditional upward step; the mass of
            // the remaining outcomes is folded into the finalize formulas.
            const double cum_lo = first_up > row_begin ? game.cum_prob[first_up - 1] : 0.0;
            const double cum_hi = game.cum_prob[row_end - 1];
            std::int64_t fresh = 0;
            while (records[k].lengths.count < floor_walks ||
                   !stop.satisfied(records[k].lengths, q)) {
                WalkRng rng(seed, stream, static_cast<std::uint64_t>(k),
                            static_cast<std::uint64_t>(fresh++));
                seq.assign(1, k);
                sgn.clear();

                const double u = cum_lo + rng.next_double() * (cum_hi - cum_lo);
                int e0 = first_up;
                while (e0 + 1 < row_end && u >= game.cum_prob[e0]) ++e0;
                int cur = game.nbr[e0];
                seq.push_back(cur);
                sgn.push_back(game.scaled() ? game.edge_sign[e0] : 1);

                bool escaped = false;
                while (cur >= k) {
                    const StepOutcome out = sample_step(game, cur, rng);
                    if (out.escaped) {
                        escaped = true;
                        break;
                    }
                    cur = out.next;
                    seq.push_back(cur);
                    sgn.push_back(out.sign);
                    if (static_cast<std::int64_t>(sgn.size()) > opts.step_cap)
                        throw std::runtime_error("factorize_positions: step cap exceeded at position " +
                                                 std::to_string(k));
                }

                if (opts.use_walk_reuse) {
                    extract_reused_walks(seq, records, escaped, sgn);
                } else {
                    int s = 1;
                    std::int64_t ret = 0;
                    for (std::size_t t = 1; t < seq.size(); ++t) {
                        s *= sgn[t - 1];
                        if (seq[t] == k) ret += s;
                    }
                    accumulate_walk(records[k], k, escaped ? -1 : seq.back(), ret,
                                    static_cast<std::int64_t>(sgn.size()) + (escaped ? 1 : 0), s);
                }
            }
        }

        rows[k] = finalize_row(k, records[k], b);
        records[k] = RowRecord{};
    }

    PositionFactor out;
    out.z_diag.resize(n);
    out.y.n = n;
    out.y.symmetric_hint = false;
    out.y.row_ptr.assign(n + 1, 0);
    std::size_t total = 0;
    for (int k = 0; k < n; ++k) total += rows[k].entries.size() + 1;
    out.y.col_idx.reserve(total);
    out.y.values.reserve(total);
    for (int k = 0; k < n; ++k) {
        for (const auto& [i, v] : rows[k].entries) {
            out.y.col_idx.push_back(i);
            out.y.values.push_back(v);
        }
        out.y.col_idx.push_back(k);
        out.y.values.push_back(1.0);
        out.y.row_ptr[k + 1] = static_cast<int>(out.y.col_idx.size());
        out.z_diag[k] = rows[k].z_diag;
    }
    return out;
}

IncompleteLdl build_preconditioner(const SparseMatrix& a, const Permutation& ordering,
                                   const StoppingCriterion& stop, std::uint64_t seed,
                                   const BuildOptions& opts) {
    a.check_structure();
    if (static_cast<int>(ordering.size()) != a.n)
        throw std::invalid_argument("build_preconditioner: ordering size mismatch");

    if (opts.validate) require_r_matrix(a, "build_preconditioner", opts.sign_scaling);

    const SparseMatrix b = apply_permutation(a, ordering);
    PositionFactor pf = factorize_positions(b, stop, seed, 0, opts);

    IncompleteLdl f;
    f.lower = transpose(rev_matrix(pf.y));
    f.diag.resize(a.n);
    for (int i = 0; i < a.n; ++i) f.diag[i] = 1.0 / pf.z_diag[a.n - 1 - i];
    f.ordering = ordering;
    f.meta = PrecondMeta{"stochastic", seed,          stop.delta,
                         stop.alpha,   stop.min_walks, opts.sign_scaling,
                         opts.use_walk_reuse};
    return f;
}

}  // namespace rwsolv

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "rwsolv/precond_builder.hpp"
#include "rwsolv/sparse.hpp"
#include "rwsolv/stopping.hpp"

using namespace rwsolv;

namespace {

SparseMatrix chain3() {
    return from_triplets(3, {{0, 0, 2.0}, {0, 1, -1.0},
                             {1, 0, -1.0}, {1, 1, 2.0}, {1, 2, -1.0},
                             {2, 1, -1.0}, {2, 2, 2.0}});
}

std::int64_t hits_at(const RowRecord& rec, int home) {
    for (const auto& [h, c] : rec.end_hits)
        if (h == home) return c;
    return 0;
}

oracle::LdlFactors to_oracle(const IncompleteLdl& f) {
    oracle::LdlFactors out;
    out.l = oracle::from_sparse(f.lower);
    out.d = f.diag;
    return out;
}

double factor_residual(const SparseMatrix& a, const IncompleteLdl& f) {
    const auto target = oracle::from_sparse(rev_matrix(apply_permutation(a, f.ordering)));
    const auto product = oracle::ldl_product(to_oracle(f));
    return oracle::frob_diff(target, product) / oracle::frob(target);
}

}  // namespace

TEST_CASE("accumulate_walk sums counts and rejects non-descending ends") {
    RowRecord rec;
    accumulate_walk(rec, 5, 2, 1, 7);
    accumulate_walk(rec, 5, 2, 0, 3);
    accumulate_walk(rec, 5, -1, 0, 4);  // escaped walk: no end hit
    REQUIRE(rec.walks == 3);
    REQUIRE(rec.self_visits == 3 + 1);  // one start visit per walk plus one return
    REQUIRE(hits_at(rec, 2) == 2);
    REQUIRE(rec.lengths.count == 3);
    REQUIRE_THAT(rec.lengths.mean, Catch::Matchers::WithinAbs((7.0 + 3.0 + 4.0) / 3.0, 1e-15));

    REQUIRE_THROWS_AS(accumulate_walk(rec, 5, 5, 0, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(accumulate_walk(rec, 5, 8, 0, 2), std::invalid_argument);

    SECTION("signed end hits accumulate with their sign") {
        RowRecord s;
        accumulate_walk(s, 5, 2, 0, 3, +1);
        accumulate_walk(s, 5, 2, 0, 3, -1);
        accumulate_walk(s, 5, 2, 0, 3, -1);
        REQUIRE(hits_at(s, 2) == -1);
    }
}

TEST_CASE("extract_reused_walks recovers the nested sub-walks") {
    // Walk for row 2 wandering through 4..8 before absorbing at 1.
    const std::vector<int> seq{2, 4, 6, 4, 5, 7, 6, 3, 2, 5, 8, 1};
    std::vector<RowRecord> rec(9);
    extract_reused_walks(seq, rec);

    // Original walk: 11 steps, one return to 2, ends at 1.
    REQUIRE(rec[2].walks == 1);
    REQUIRE(rec[2].self_visits == 2);
    REQUIRE(hits_at(rec[2], 1) == 1);
    REQUIRE(rec[2].lengths.count == 1);
    REQUIRE(rec[2].lengths.mean == 11.0);

    // Sub-walk 4,6,4,5,7,6,3: starts upward, one return, ends at 3.
    REQUIRE(rec[4].walks == 1);
    REQUIRE(rec[4].self_visits == 2);
    REQUIRE(hits_at(rec[4], 3) == 1);
    REQUIRE(rec[4].lengths.mean == 6.0);

    // Two sub-walks from 5: 5,7,6,3 and 5,8,1.
    REQUIRE(rec[5].walks == 2);
    REQUIRE(rec[5].self_visits == 2);
    REQUIRE(hits_at(rec[5], 3) == 1);
    REQUIRE(hits_at(rec[5], 1) == 1);
    REQUIRE_THAT(rec[5].lengths.mean, Catch::Matchers::WithinAbs(2.5, 1e-15));

    // Every sub-walk starting with a downward step is discarded.
    for (int i : {0, 1, 3, 6, 7, 8}) {
        REQUIRE(rec[i].walks == 0);
        REQUIRE(rec[i].end_hits.empty());
    }
}

TEST_CASE("extract_reused_walks keeps only upward-starting sub-walks") {
    std::vector<RowRecord> rec(6);
    extract_reused_walks({3, 5, 4, 1}, rec);
    REQUIRE(rec[3].walks == 1);
    REQUIRE(rec[3].self_visits == 1);
    REQUIRE(hits_at(rec[3], 1) == 1);
    REQUIRE(rec[3].lengths.mean == 3.0);
    REQUIRE(rec[5].walks == 0);
    REQUIRE(rec[4].walks == 0);

    SECTION("a two-node descent yields nothing") {
        std::vector<RowRecord> r2(6);
        extract_reused_walks({5, 3}, r2);
        for (const auto& r : r2) REQUIRE(r.walks == 0);
    }
}

TEST_CASE("extract_reused_walks credits open walks on escape") {
    std::vector<RowRecord> rec(6);
    extract_reused_walks({2, 4, 5}, rec, true);
    REQUIRE(rec[2].walks == 1);
    REQUIRE(rec[2].end_hits.empty());
    REQUIRE(rec[2].lengths.mean == 3.0);
    REQUIRE(rec[4].walks == 1);
    REQUIRE(rec[4].end_hits.empty());
    REQUIRE(rec[4].lengths.mean == 2.0);
    REQUIRE(rec[5].walks == 0);  // single node before the escape: too short

    SECTION("without the escape flag the open entries stay uncredited") {
        std::vector<RowRecord> r2(6);
        extract_reused_walks({2, 4, 5}, r2, false);
        for (const auto& r : r2) REQUIRE(r.walks == 0);
    }
}

TEST_CASE("extract_reused_walks carries step signs into the credits") {
    std::vector<RowRecord> rec(5);
    extract_reused_walks({2, 4, 1}, rec, false, {+1, -1});
    REQUIRE(rec[2].walks == 1);
    REQUIRE(hits_at(rec[2], 1) == -1);
    REQUIRE(rec[2].lengths.mean == 2.0);
    REQUIRE(rec[4].walks == 0);  // length-1 sub-walk is below the exclusion cut
}

TEST_CASE("finalize_row emits the exact row when nothing lies above") {
    const auto b = chain3();
    RowRecord rec;  // no walks needed
    const auto row = finalize_row(2, rec, b);
    REQUIRE(row.entries.size() == 1);
    REQUIRE(row.entries[0].first == 1);
    REQUIRE(row.entries[0].second == -0.5);
    REQUIRE(row.z_diag == 0.5);
}

TEST_CASE("finalize_row folds walk statistics into the one-step-exact form") {
    const auto b = chain3();
    RowRecord rec;
    rec.walks = 3'000'000;
    rec.self_visits = 5'000'000;  // 2e6 returns beyond the starts
    rec.end_hits = {{0, 1'000'000}};
    const auto row = finalize_row(1, rec, b);
    REQUIRE(row.entries.size() == 1);
    REQUIRE(row.entries[0].first == 0);
    // -B_10/B_11 one-step part plus the walk tail: -1/2 - 1/2 * (1/3) = -2/3.
    REQUIRE_THAT(row.entries[0].second, Catch::Matchers::WithinAbs(-2.0 / 3.0, 1e-12));
    // (1 + w_up * returns/walks) / d = (1 + 1/2 * 2/3) / 2 = 2/3.
    REQUIRE_THAT(row.z_diag, Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-12));
}

TEST_CASE("finalize_row failure modes") {
    const auto b = chain3();
    SECTION("no walks on a row that needs them") {
        RowRecord rec;
        REQUIRE_THROWS_AS(finalize_row(1, rec, b), std::runtime_error);
    }
    SECTION("end hit at or above the row") {
        RowRecord rec;
        rec.walks = 10;
        rec.self_visits = 10;
        rec.end_hits = {{1, 10}};
        REQUIRE_THROWS_AS(finalize_row(1, rec, b), std::invalid_argument);
    }
    SECTION("sign-cancelled statistics can push the pivot nonpositive") {
        RowRecord rec;
        rec.walks = 10;
        rec.self_visits = -100;
        rec.end_hits = {{0, 5}};
        REQUIRE_THROWS_AS(finalize_row(1, rec, b), std::runtime_error);
    }
    SECTION("position out of range") {
        RowRecord rec;
        REQUIRE_THROWS_AS(finalize_row(7, rec, b), std::invalid_argument);
    }
}

TEST_CASE("build_preconditioner is deterministic per seed") {
    const auto a = gen_laplace3d(5, 5, 2);
    const auto perm = Permutation::identity(a.n);
    StoppingCriterion stop;
    stop.delta = 0.2;

    const auto f1 = build_preconditioner(a, perm, stop, 42);
    const auto f2 = build_preconditioner(a, perm, stop, 42);
    REQUIRE(f1.lower.col_idx == f2.lower.col_idx);
    REQUIRE(f1.lower.values == f2.lower.values);
    REQUIRE(f1.diag == f2.diag);

    const auto f3 = build_preconditioner(a, perm, stop, 43);
    REQUIRE(f1.lower.values != f3.lower.values);
}

TEST_CASE("built factors are unit lower with positive pivots inside the fill pattern") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const int n = 10 + static_cast<int>(3 * seed);
        const auto a = oracle::random_r_matrix(n, 0.2, seed);
        const auto perm = Permutation::identity(n);
        StoppingCriterion stop;
        stop.delta = 0.3;
        const auto f = build_preconditioner(a, perm, stop, seed);

        REQUIRE(f.n() == n);
        for (double d : f.diag) REQUIRE(d > 0.0);

        // Unit diagonal stored as the last entry of each row.
        for (int i = 0; i < n; ++i) {
            const int last = f.lower.row_ptr[i + 1] - 1;
            REQUIRE(f.lower.col_idx[last] == i);
            REQUIRE(f.lower.values[last] == 1.0);
            for (int k = f.lower.row_ptr[i]; k < last; ++k) REQUIRE(f.lower.col_idx[k] < i);
        }

        const auto fill = sym_factor_pattern(rev_matrix(apply_permutation(a, perm)));
        REQUIRE(pattern_subset(f.lower, fill));
    }
}

TEST_CASE("factorization residual shrinks within the margin budget") {
    const auto a = gen_laplace3d(10, 10, 1);
    StoppingCriterion stop;
    stop.delta = 0.01;
    const auto f = build_preconditioner(a, Permutation::identity(a.n), stop, 7);
    REQUIRE(factor_residual(a, f) < 0.1);
}

TEST_CASE("walk reuse does not change the quality of the factor") {
    const auto a = gen_laplace3d(10, 10, 1);
    StoppingCriterion stop;
    stop.delta = 0.01;
    BuildOptions no_reuse;
    no_reuse.use_walk_reuse = false;
    const auto f = build_preconditioner(a, Permutation::identity(a.n), stop, 7, no_reuse);
    REQUIRE_FALSE(f.meta.walk_reuse);
    REQUIRE(factor_residual(a, f) < 0.1);
}

TEST_CASE("rows with only lower neighbors reproduce the complete factorization") {
    // Trees attached parent-first: every childless node sees only lower ids,
    // and the complete factorization leaves those rows untouched.
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const int n = 6 + static_cast<int>(seed % 5);
        const auto a = oracle::random_tree_r_matrix(n, seed);
        StoppingCriterion stop;
        stop.delta = 0.5;
        const auto f = build_preconditioner(a, Permutation::identity(n), stop, seed);

        const auto rev = oracle::from_sparse(rev_matrix(a));
        const auto exact = oracle::dense_ldl(rev);
        const auto got = oracle::from_sparse(f.lower);

        const auto dense_a = oracle::from_sparse(a);
        int exact_rows = 0;
        for (int k = 0; k < n; ++k) {
            bool all_lower = true;
            for (int j = 0; j < n; ++j)
                if (j > k && dense_a.at(k, j) != 0.0) all_lower = false;
            if (!all_lower) continue;
            ++exact_rows;
            // Position k lands at elimination step n-1-k of the reversed
            // matrix; its Y row becomes that column of L.
            const int step = n - 1 - k;
            REQUIRE_THAT(f.diag[step], Catch::Matchers::WithinAbs(exact.d[step], 1e-12));
            for (int i = step + 1; i < n; ++i)
                REQUIRE_THAT(got.at(i, step),
                             Catch::Matchers::WithinAbs(exact.l.at(i, step), 1e-12));
        }
        REQUIRE(exact_rows >= 1);  // a parent-first tree always has childless nodes
    }
}

TEST_CASE("sign scaling is bit-identical on all-negative off-diagonals") {
    const auto a = oracle::random_r_matrix(20, 0.25, 31);
    StoppingCriterion stop;
    stop.delta = 0.3;
    BuildOptions plain, scaled;
    scaled.sign_scaling = true;
    const auto f1 = build_preconditioner(a, Permutation::identity(20), stop, 5, plain);
    const auto f2 = build_preconditioner(a, Permutation::identity(20), stop, 5, scaled);
    REQUIRE(f1.lower.col_idx == f2.lower.col_idx);
    REQUIRE(f1.lower.values == f2.lower.values);
    REQUIRE(f1.diag == f2.diag);
    REQUIRE(f2.meta.sign_scaling);
}

TEST_CASE("build_preconditioner validates its inputs") {
    const auto bad = from_triplets(2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 2.0}});
    StoppingCriterion stop;
    SECTION("positive off-diagonal rejected in plain mode") {
        REQUIRE_THROWS_WITH(build_preconditioner(bad, Permutation::identity(2), stop, 1),
                            Catch::Matchers::ContainsSubstring("build_preconditioner"));
    }
    SECTION("the same matrix is admitted under sign scaling") {
        BuildOptions opts;
        opts.sign_scaling = true;
        const auto f = build_preconditioner(bad, Permutation::identity(2), stop, 1, opts);
        REQUIRE(f.n() == 2);
        for (double d : f.diag) REQUIRE(d > 0.0);
    }
    SECTION("ordering size mismatch") {
        const auto a = chain3();
        REQUIRE_THROWS_AS(build_preconditioner(a, Permutation::identity(2), stop, 1),
                          std::invalid_argument);
    }
    SECTION("step cap aborts runaway walks") {
        const auto a = gen_laplace3d(6, 6, 1);
        BuildOptions opts;
        opts.step_cap = 1;
        REQUIRE_THROWS_AS(build_preconditioner(a, Permutation::identity(a.n), stop, 1, opts),
                          std::runtime_error);
    }
}

TEST_CASE("meta records the build parameters") {
    const auto a = chain3();
    StoppingCriterion stop;
    stop.delta = 0.12;
    stop.alpha = 0.95;
    stop.min_walks = 33;
    const auto f = build_preconditioner(a, Permutation::identity(3), stop, 77);
    REQUIRE(f.meta.method == "stochastic");
    REQUIRE(f.meta.seed == 77);
    REQUIRE(f.meta.delta == 0.12);
    REQUIRE(f.meta.alpha == 0.95);
    REQUIRE(f.meta.min_walks == 33);
    REQUIRE(f.meta.walk_reuse);
}

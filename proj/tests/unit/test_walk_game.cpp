#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rwsolv/rng.hpp"
#include "rwsolv/sparse.hpp"
#include "rwsolv/walk_game.hpp"

using namespace rwsolv;

namespace {

SparseMatrix chain3() {
    return from_triplets(3, {{0, 0, 2.0}, {0, 1, -1.0},
                             {1, 0, -1.0}, {1, 1, 2.0}, {1, 2, -1.0},
                             {2, 1, -1.0}, {2, 2, 2.0}});
}

}  // namespace

TEST_CASE("build_game derives probabilities, escapes and prices from the chain") {
    const std::vector<double> b{0.0, 0.0, 4.0};
    const auto game = build_game(chain3(), b);

    REQUIRE(game.n == 3);
    REQUIRE_FALSE(game.scaled());
    REQUIRE(game.has_prices());

    // Node 0: p(0 -> 1) = 1/2, escape 1/2.
    REQUIRE(game.degree(0) == 1);
    REQUIRE(game.cum_prob[game.nbr_ptr[0]] == 0.5);
    REQUIRE(game.escape[0] == 0.5);

    // Node 1 is balanced: p = 1/2 to each side, no escape.
    REQUIRE(game.degree(1) == 2);
    REQUIRE(game.nbr[game.nbr_ptr[1]] == 0);
    REQUIRE(game.nbr[game.nbr_ptr[1] + 1] == 2);
    REQUIRE(game.cum_prob[game.nbr_ptr[1]] == 0.5);
    REQUIRE(game.cum_prob[game.nbr_ptr[1] + 1] == 1.0);
    REQUIRE(game.escape[1] == 0.0);
    REQUIRE(game.neighbor_mass(1) == 1.0);

    // Prices are -b_i / A_ii.
    REQUIRE(game.price[0] == 0.0);
    REQUIRE(game.price[1] == 0.0);
    REQUIRE(game.price[2] == -2.0);

    REQUIRE(game.diag == std::vector<double>{2.0, 2.0, 2.0});
}

TEST_CASE("build_game rejects inadmissible matrices") {
    SECTION("positive off-diagonal") {
        const auto m = from_triplets(2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 2.0}});
        REQUIRE_THROWS_AS(build_game(m), std::invalid_argument);
    }
    SECTION("row dominance violated") {
        const auto m = from_triplets(2, {{0, 0, 1.0}, {0, 1, -2.0}, {1, 0, -2.0}, {1, 1, 3.0}});
        REQUIRE_THROWS_AS(build_game(m), std::invalid_argument);
    }
    SECTION("nonpositive diagonal") {
        const auto m = from_triplets(1, {{0, 0, 0.0}});
        REQUIRE_THROWS_AS(build_game(m), std::invalid_argument);
    }
}

TEST_CASE("build_scaled_game admits positive off-diagonal entries") {
    const auto m = from_triplets(2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 2.0}});
    const auto game = build_scaled_game(m);
    REQUIRE(game.scaled());
    REQUIRE(game.cum_prob[game.nbr_ptr[0]] == 0.5);
    REQUIRE(game.escape[0] == 0.5);
    REQUIRE(game.edge_sign[game.nbr_ptr[0]] == -1);  // positive entry flips the sign
    REQUIRE(game.edge_sign[game.nbr_ptr[1]] == -1);
}

TEST_CASE("scaled game on all-negative off-diagonals matches the plain game") {
    const auto m = chain3();
    const auto plain = build_game(m);
    const auto scaled = build_scaled_game(m);
    REQUIRE(scaled.cum_prob == plain.cum_prob);
    REQUIRE(scaled.escape == plain.escape);
    for (signed char s : scaled.edge_sign) REQUIRE(s == 1);
}

TEST_CASE("build_scaled_game requires column dominance too") {
    // Rows are dominant but column 0 carries |-2| > 1.
    const auto m = from_triplets(2, {{0, 0, 1.0}, {0, 1, -0.5}, {1, 0, -2.0}, {1, 1, 3.0}});
    REQUIRE(validate_r_matrix(m).row_dominant);
    REQUIRE_THROWS_AS(build_scaled_game(m), std::invalid_argument);
}

TEST_CASE("sample_step_with cuts [0,1) into neighbor intervals plus escape") {
    const auto game = build_game(chain3());

    SECTION("interior node splits half and half") {
        const auto left = sample_step_with(game, 1, 0.0);
        REQUIRE_FALSE(left.escaped);
        REQUIRE(left.next == 0);
        const auto edge = sample_step_with(game, 1, 0.499999);
        REQUIRE(edge.next == 0);
        const auto right = sample_step_with(game, 1, 0.5);
        REQUIRE(right.next == 2);
        const auto top = sample_step_with(game, 1, 0.999999);
        REQUIRE_FALSE(top.escaped);
        REQUIRE(top.next == 2);
    }
    SECTION("boundary node escapes on the upper half") {
        const auto stay = sample_step_with(game, 0, 0.25);
        REQUIRE(stay.next == 1);
        const auto gone = sample_step_with(game, 0, 0.5);
        REQUIRE(gone.escaped);
        REQUIRE(gone.next == -1);
        REQUIRE(gone.sign == 1);
    }
    SECTION("signs ride along on scaled games") {
        const auto m = from_triplets(2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 2.0}});
        const auto sg = build_scaled_game(m);
        const auto out = sample_step_with(sg, 0, 0.1);
        REQUIRE(out.next == 1);
        REQUIRE(out.sign == -1);
    }
}

TEST_CASE("sample_step frequencies match the transition law") {
    const auto game = build_game(chain3());
    WalkRng rng(2024, 0, 1, 0);
    const int draws = 20000;
    int to0 = 0, to2 = 0;
    for (int i = 0; i < draws; ++i) {
        const auto out = sample_step(game, 1, rng);
        REQUIRE_FALSE(out.escaped);
        if (out.next == 0) ++to0;
        if (out.next == 2) ++to2;
    }
    REQUIRE(to0 + to2 == draws);
    // Binomial(20000, 1/2): sigma ~ 70.7; allow 4 sigma.
    REQUIRE(std::abs(to0 - draws / 2) < 283);

    int escapes = 0;
    for (int i = 0; i < draws; ++i)
        if (sample_step(game, 0, rng).escaped) ++escapes;
    REQUIRE(std::abs(escapes - draws / 2) < 283);
}

TEST_CASE("deterministic rng streams are stable and distinct") {
    WalkRng a(7, 0, 3, 5);
    WalkRng b(7, 0, 3, 5);
    WalkRng c(7, 1, 3, 5);
    bool all_equal = true;
    for (int i = 0; i < 100; ++i) {
        const double ua = a.next_double();
        REQUIRE(ua >= 0.0);
        REQUIRE(ua < 1.0);
        if (ua != b.next_double()) all_equal = false;
    }
    REQUIRE(all_equal);
    bool any_diff = false;
    WalkRng a2(7, 0, 3, 5);
    for (int i = 0; i < 100; ++i)
        if (a2.next_double() != c.next_double()) any_diff = true;
    REQUIRE(any_diff);
}

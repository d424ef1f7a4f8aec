#pragma once

#include <cstdint>
#include <vector>

#include "rwsolv/rng.hpp"
#include "rwsolv/sparse.hpp"

namespace rwsolv {

/// Random-walk game on the matrix graph. From node i the walker moves to
/// neighbor j with probability p_{i,j} and is absorbed at the initial home
/// with the leftover probability; each day at motel i costs price[i].
/// Edges may carry a +-1 scaling factor (sign-scaled games); plain games
/// leave edge_sign empty, meaning all factors are +1.
struct WalkGame {
    int n = 0;
    std::vector<int> nbr_ptr;           // n+1 row offsets
    std::vector<int> nbr;               // neighbor ids, ascending per row
    std::vector<double> cum_prob;       // per-row cumulative transition probabilities
    std::vector<signed char> edge_sign; // empty => all +1
    std::vector<double> escape;         // initial-home absorption probability per node
    std::vector<double> price;          // -b_i / A_ii; empty when built without b
    std::vector<double> diag;           // A_ii

    bool scaled() const { return !edge_sign.empty(); }
    bool has_prices() const { return !price.empty(); }
    int degree(int i) const { return nbr_ptr[i + 1] - nbr_ptr[i]; }
    /// Total transition mass of node i (1 - escape up to roundoff).
    double neighbor_mass(int i) const {
        return nbr_ptr[i + 1] > nbr_ptr[i] ? cum_prob[nbr_ptr[i + 1] - 1] : 0.0;
    }
};

/// Transition probabilities p_{i,j} = -A_ij / A_ii, escape (sum_j A_ij) / A_ii.
/// Requires positive diagonal, nonpositive off-diagonal entries, and weak row
/// dominance (nonnegative escape). Prices are -b_i / A_ii when b is given.
WalkGame build_game(const SparseMatrix& a);
WalkGame build_game(const SparseMatrix& a, const std::vector<double>& b);

/// Sign-scaled game: p_{i,j} = |A_ij| / A_ii with edge factor -sign(A_ij),
/// escape (A_ii - sum_{j != i} |A_ij|) / A_ii. Admits positive off-diagonal
/// entries; requires a positive diagonal and diagonal dominance both row- and
/// column-wise (unit-magnitude factors cover no more than that).
WalkGame build_scaled_game(const SparseMatrix& a);
WalkGame build_scaled_game(const SparseMatrix& a, const std::vector<double>& b);

struct StepOutcome {
    bool escaped = false;
    int next = -1;
    int sign = 1;
};

/// One transition from `node` driven by a uniform draw from `rng`.
StepOutcome sample_step(const WalkGame& game, int node, WalkRng& rng);

/// Deterministic variant: `u` in [0, 1) selects the outcome directly.
StepOutcome sample_step_with(const WalkGame& game, int node, double u);

}  // namespace rwsolv

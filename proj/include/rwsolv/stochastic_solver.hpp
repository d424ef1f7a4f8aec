#pragma once

#include <cstdint>
#include <vector>

#include "rwsolv/sparse.hpp"
#include "rwsolv/stopping.hpp"
#include "rwsolv/walk_game.hpp"

namespace rwsolv {

/// Walks are aborted past this many sampled steps (defensive; an admissible
/// game absorbs almost surely long before).
inline constexpr std::int64_t kStepCap = 10'000'000;

struct EntryEstimate {
    double value = 0.0;
    double half_width = 0.0;  // confidence half-width at the requested alpha
    std::int64_t walks = 0;
};

/// Per-start-node journey bookkeeping: walk count, end-home hits (initial
/// home tracked separately), and motel visits. Sum of all home hits equals
/// the walk count. Entry order is first-touch order, fixed by the seed.
struct NodeJourney {
    std::int64_t walks = 0;
    std::int64_t initial_home_hits = 0;
    std::vector<std::pair<int, std::int64_t>> end_hits;
    std::vector<std::pair<int, std::int64_t>> motel_visits;
};

/// b-independent record of every journey: enough to reconstruct estimates
/// for any right-hand side by replay.
struct FullJourneyRecord {
    std::vector<int> order;  // processing order (node ids)
    std::vector<double> diag;
    std::vector<NodeJourney> nodes;  // indexed by node id
};

struct SolverState {
    std::vector<double> values;
    FullJourneyRecord record;
};

/// Estimates x_i alone: walks from node i absorb only at initial homes.
/// The game must carry prices (a right-hand side).
EntryEstimate solve_entry(const WalkGame& game, int node, const GainStopping& stop,
                          std::uint64_t seed);

/// Estimates every entry, turning each solved node into a home for later
/// walks. Estimates are computed from the journey record, so replay on the
/// same b reproduces them bit for bit.
SolverState solve_all(const WalkGame& game, const Permutation& ordering,
                      const GainStopping& stop, std::uint64_t seed);

/// Runs the solve_all walk schedule with the b-independent walk-length
/// stopping rule, storing counts instead of consuming prices.
FullJourneyRecord record_journeys(const WalkGame& game, const Permutation& ordering,
                                  const StoppingCriterion& stop, std::uint64_t seed);

/// x'_k = (sum_i H_{k,i} x'_i + sum_i J_{k,i} b_i / A_ii) / M_k in recording
/// order. Linear in b.
std::vector<double> replay(const FullJourneyRecord& record, const std::vector<double>& b);

}  // namespace rwsolv

#include "rwsolv/stochastic_solver.hpp"

#include <stdexcept>

namespace rwsolv {

namespace {

void bump(std::vector<std::pair<int, std::int64_t>>& list, int key, std::int64_t w) {
    for (auto& [k, v] : list)
        if (k == key) {
            v += w;
            return;
        }
    list.emplace_back(key, w);
}

struct WalkResult {
    double gain = 0.0;
    std::int64_t steps = 0;
};

/// One walk from `start`. Records visits/hits into `journey` and returns the
/// walk gain; `awards` and `is_home` describe already-created homes.
WalkResult run_walk(const WalkGame& game, int start, const std::vector<double>& awards,
                    const std::vector<char>& is_home, WalkRng& rng, NodeJourney& journey) {
    WalkResult result;
    int sign = 1;
    int cur = start;
    for (;;) {
        if (result.steps >= kStepCap)
            throw std::runtime_error("stochastic solver: walk exceeded step cap");
        bump(journey.motel_visits, cur, sign);
        if (game.has_prices()) result.gain -= game.price[cur] * sign;
        const StepOutcome out = sample_step(game, cur, rng);
        ++result.steps;
        if (out.escaped) {
            journey.initial_home_hits += 1;
            break;  // initial home pays 0
        }
        sign *= out.sign;
        cur = out.next;
        if (is_home[cur]) {
            bump(journey.end_hits, cur, sign);
            result.gain += awards[cur] * sign;
            break;
        }
    }
    journey.walks += 1;
    return result;
}

/// Estimate for node k from its journey counts. `bd` holds b_i / A_ii.
/// replay feeds the same values, so the two stay bit-identical.
double journey_estimate(const NodeJourney& j, const std::vector<double>& awards,
                        const std::vector<double>& bd) {
    double total = 0.0;
    for (const auto& [node, hits] : j.end_hits)
        total += static_cast<double>(hits) * awards[node];
    for (const auto& [node, visits] : j.motel_visits)
        total += static_cast<double>(visits) * bd[node];
    return total / static_cast<double>(j.walks);
}

}  // namespace

EntryEstimate solve_entry(const WalkGame& game, int node, const GainStopping& stop,
                          std::uint64_t seed) {
    if (!game.has_prices())
        throw std::invalid_argument("solve_entry: game carries no right-hand side");
    if (node < 0 || node >= game.n) throw std::invalid_argument("solve_entry: node out of range");

    const std::vector<double> awards(game.n, 0.0);
    const std::vector<char> is_home(game.n, 0);
    const double q = stop.quantile();
    RunningStats gains;
    NodeJourney journey;
    while (!stop.satisfied(gains, q)) {
        WalkRng rng(seed, 0, static_cast<std::uint64_t>(node), gains.count);
        gains.add(run_walk(game, node, awards, is_home, rng, journey).gain);
    }
    const double sigma = gains.stddev();
    return {gains.mean, q * sigma / std::sqrt(static_cast<double>(gains.count)), gains.count};
}

SolverState solve_all(const WalkGame& game, const Permutation& ordering,
                      const GainStopping& stop, std::uint64_t seed) {
    if (!game.has_prices())
        throw std::invalid_argument("solve_all: game carries no right-hand side");
    if (ordering.size() != game.n) throw std::invalid_argument("solve_all: ordering size mismatch");

    // b_i / A_ii, bitwise equal to what replay recomputes from the same b.
    std::vector<double> bd(game.n);
    for (int i = 0; i < game.n; ++i) bd[i] = -game.price[i];

    SolverState state;
    state.values.assign(game.n, 0.0);
    state.record.order = ordering.inverse;
    state.record.diag = game.diag;
    state.record.nodes.resize(game.n);

    std::vector<char> is_home(game.n, 0);
    const double q = stop.quantile();
    for (int t = 0; t < game.n; ++t) {
        const int k = ordering.inverse[t];
        NodeJourney& journey = state.record.nodes[k];
        RunningStats gains;
        while (!stop.satisfied(gains, q)) {
            WalkRng rng(seed, 0, static_cast<std::uint64_t>(k), gains.count);
            gains.add(run_walk(game, k, state.values, is_home, rng, journey).gain);
        }
        state.values[k] = journey_estimate(journey, state.values, bd);
        is_home[k] = 1;
    }
    return state;
}

FullJourneyRecord record_journeys(const WalkGame& game, const Permutation& ordering,
                                  const StoppingCriterion& stop, std::uint64_t seed) {
    if (ordering.size() != game.n)
        throw std::invalid_argument("record_journeys: ordering size mismatch");

    FullJourneyRecord record;
    record.order = ordering.inverse;
    record.diag = game.diag;
    record.nodes.resize(game.n);

    const std::vector<double> awards(game.n, 0.0);
    std::vector<char> is_home(game.n, 0);
    const double q = stop.quantile();
    for (int t = 0; t < game.n; ++t) {
        const int k = ordering.inverse[t];
        NodeJourney& journey = record.nodes[k];
        RunningStats lengths;
        while (!stop.satisfied(lengths, q)) {
            WalkRng rng(seed, 0, static_cast<std::uint64_t>(k), lengths.count);
            const WalkResult walk = run_walk(game, k, awards, is_home, rng, journey);
            lengths.add(static_cast<double>(walk.steps));
        }
        is_home[k] = 1;
    }
    return record;
}

std::vector<double> replay(const FullJourneyRecord& record, const std::vector<double>& b) {
    const int n = static_cast<int>(record.nodes.size());
    if (static_cast<int>(b.size()) != n)
        throw std::invalid_argument("replay: right-hand side size mismatch");
    std::vector<double> bd(n);
    for (int i = 0; i < n; ++i) bd[i] = b[i] / record.diag[i];
    std::vector<double> x(n, 0.0);
    for (int node : record.order) {
        const NodeJourney& j = record.nodes[node];
        if (j.walks == 0) throw std::runtime_error("replay: node without recorded walks");
        x[node] = journey_estimate(j, x, bd);
    }
    return x;
}

}  // namespace rwsolv

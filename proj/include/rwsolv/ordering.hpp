#pragma once

#include <cstdint>
#include <string>

#include "rwsolv/sparse.hpp"

namespace rwsolv {

enum class OrderingStrategy {
    natural,        // identity
    random,         // seeded shuffle
    min_degree,     // degree-greedy elimination order, reversed
    cuthill_mckee,  // classic BFS ordering, un-reversed
};

OrderingStrategy ordering_from_name(const std::string& name);
std::string ordering_name(OrderingStrategy s);

/// forward[node] = elimination position. min_degree assigns the first
/// eliminated node the last position, so factoring the index-reversed matrix
/// eliminates in greedy order; cuthill_mckee keeps BFS positions, which the
/// reversal turns into the reverse-BFS elimination.
Permutation make_ordering(const SparseMatrix& a, OrderingStrategy strategy, std::uint64_t seed);

}  // namespace rwsolv

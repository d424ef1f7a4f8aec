#include "rwsolv/ordering.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "rwsolv/rng.hpp"

namespace rwsolv {

namespace {

std::vector<std::set<int>> adjacency(const SparseMatrix& a) {
    std::vector<std::set<int>> adj(a.n);
    for (int i = 0; i < a.n; ++i)
        for (int e = a.row_ptr[i]; e < a.row_ptr[i + 1]; ++e) {
            const int j = a.col_idx[e];
            if (j != i) {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
    return adj;
}

Permutation random_order(int n, std::uint64_t seed) {
    std::vector<int> inverse(n);
    std::iota(inverse.begin(), inverse.end(), 0);
    std::uint64_t state = seed ^ 0x5bf0f5b6aa91d9cdULL;
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(splitmix64(state) % static_cast<std::uint64_t>(i + 1));
        std::swap(inverse[i], inverse[j]);
    }
    std::vector<int> forward(n);
    for (int pos = 0; pos < n; ++pos) forward[inverse[pos]] = pos;
    return Permutation::from_forward(std::move(forward));
}

/// Greedy elimination: repeatedly remove a node of minimum current degree
/// (ties by id), turning its neighborhood into a clique. The s-th eliminated
/// node lands at position n-1-s.
Permutation min_degree_order(const SparseMatrix& a) {
    const int n = a.n;
    auto adj = adjacency(a);
    std::set<std::pair<int, int>> queue;  // (degree, node)
    for (int i = 0; i < n; ++i) queue.insert({static_cast<int>(adj[i].size()), i});

    std::vector<int> forward(n, -1);
    for (int s = 0; s < n; ++s) {
        const auto [deg, k] = *queue.begin();
        queue.erase(queue.begin());
        forward[k] = n - 1 - s;

        std::vector<int> nbrs(adj[k].begin(), adj[k].end());
        for (int u : nbrs) {
            queue.erase({static_cast<int>(adj[u].size()), u});
            adj[u].erase(k);
        }
        for (size_t p = 0; p < nbrs.size(); ++p)
            for (size_t t = p + 1; t < nbrs.size(); ++t) {
                adj[nbrs[p]].insert(nbrs[t]);
                adj[nbrs[t]].insert(nbrs[p]);
            }
        for (int u : nbrs) queue.insert({static_cast<int>(adj[u].size()), u});
        adj[k].clear();
    }
    return Permutation::from_forward(std::move(forward));
}

Permutation cuthill_mckee_order(const SparseMatrix& a) {
    const int n = a.n;
    auto adj = adjacency(a);
    std::vector<int> degree(n);
    for (int i = 0; i < n; ++i) degree[i] = static_cast<int>(adj[i].size());

    std::vector<int> forward(n, -1);
    int next_pos = 0;
    std::vector<int> frontier;
    for (;;) {
        // Start each component from a minimum-degree node.
        int start = -1;
        for (int i = 0; i < n; ++i)
            if (forward[i] < 0 && (start < 0 || degree[i] < degree[start])) start = i;
        if (start < 0) break;

        forward[start] = next_pos++;
        frontier.assign(1, start);
        while (!frontier.empty()) {
            std::vector<int> next_frontier;
            for (int u : frontier) {
                std::vector<int> nbrs;
                for (int v : adj[u])
                    if (forward[v] < 0) nbrs.push_back(v);
                std::sort(nbrs.begin(), nbrs.end(), [&](int x, int y) {
                    return degree[x] != degree[y] ? degree[x] < degree[y] : x < y;
                });
                for (int v : nbrs)
                    if (forward[v] < 0) {
                        forward[v] = next_pos++;
                        next_frontier.push_back(v);
                    }
            }
            frontier = std::move(next_frontier);
        }
    }
    return Permutation::from_forward(std::move(forward));
}

}  // namespace

OrderingStrategy ordering_from_name(const std::string& name) {
    if (name == "natural") return OrderingStrategy::natural;
    if (name == "random") return OrderingStrategy::random;
    if (name == "md") return OrderingStrategy::min_degree;
    if (name == "cm") return OrderingStrategy::cuthill_mckee;
    throw std::invalid_argument("unknown ordering '" + name + "'");
}

std::string ordering_name(OrderingStrategy s) {
    switch (s) {
        case OrderingStrategy::natural: return "natural";
        case OrderingStrategy::random: return "random";
        case OrderingStrategy::min_degree: return "md";
        case OrderingStrategy::cuthill_mckee: return "cm";
    }
    throw std::logic_error("unreachable");
}

Permutation make_ordering(const SparseMatrix& a, OrderingStrategy strategy, std::uint64_t seed) {
    a.check_structure();
    switch (strategy) {
        case OrderingStrategy::natural: return Permutation::identity(a.n);
        case OrderingStrategy::random: return random_order(a.n, seed);
        case OrderingStrategy::min_degree: return min_degree_order(a);
        case OrderingStrategy::cuthill_mckee: return cuthill_mckee_order(a);
    }
    throw std::logic_error("unreachable");
}

}  // namespace rwsolv

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kmexact/fl_solver.hpp"
#include "kmexact/metric.hpp"

namespace kmexact {

// Unweighted simple graph; edges canonical (u < v), no loops/duplicates.
struct SimpleGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    void add_edge(int u, int v);
    std::vector<std::uint64_t> closed_neighborhoods() const;  // bitmasks, N[v]
    bool connected() const;
};

// Set-cover input: universe {0..n-1}, m sets as bitmasks, budget k.
struct SetSystem {
    int universe = 0;
    std::vector<std::uint64_t> sets;
    int k = 0;
};

// Shortest-path metric of a connected unit-weight graph. The k-median
// optimum of the result is n-k exactly when g has a dominating set of
// size <= k. Disconnected input is an error.
MetricInstance domset_to_kmedian(const SimpleGraph& g);

struct DomsetReport {
    bool holds = false;       // the iff-characterisation checked out
    Cost opt_cost = 0;        // optimal k-median cost of the reduced instance
    int domination_number = 0;
    bool has_small_domset = false;  // domination_number <= k
    std::string detail;
};

// Verifies, by brute force on both sides, that opt cost == n-k iff a
// dominating set of size <= k exists, and that opt cost >= n-k always.
DomsetReport check_domset_property(const SimpleGraph& g, int k);

// Clients = elements, facilities = sets; distance 1 for membership, odd
// shortest-path distance >= 3 otherwise (pairs separated in the incidence
// graph get the largest finite distance + 2, never below 3). An uncovered
// element is an error.
FLInstance setcover_to_fl(const SetSystem& s);

struct SetcoverReport {
    bool holds = false;
    Cost opt_cost = 0;
    int min_cover_size = 0;   // 0 means no cover exists
    bool has_small_cover = false;
    std::string detail;
};

// Verifies that optimal FL cost with budget k equals n iff a set cover of
// size <= k exists, and that the cost is >= n always.
SetcoverReport check_setcover_property(const SetSystem& s);

// Edge (u,v) iff u != v and dist[u][v] <= r. Monotone in r.
SimpleGraph threshold_graph(const MetricInstance& inst, Cost r);

struct DominatingSetResult {
    int size = 0;
    std::uint64_t witness = 0;  // bitmask; the numerically smallest optimum
};

// Exact domination number by subset enumeration; n <= 20.
DominatingSetResult brute_force_dominating_set(const SimpleGraph& g);

}  // namespace kmexact

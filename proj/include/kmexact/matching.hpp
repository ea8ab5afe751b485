#pragma once

#include <optional>
#include <vector>

#include "kmexact/common.hpp"

namespace kmexact {

struct WeightedEdge {
    int u;
    int v;
    Cost weight;
};

// General undirected graph with nonnegative integer edge weights.
// Endpoints are stored canonically (u < v); duplicates and self-loops are
// rejected at insertion.
class WeightedGraph {
public:
    explicit WeightedGraph(int vertex_count);

    int add_edge(int u, int v, Cost weight);  // returns the edge index

    int vertex_count() const { return v_; }
    const std::vector<WeightedEdge>& edges() const { return edges_; }

private:
    int v_;
    std::vector<WeightedEdge> edges_;
    std::vector<bool> present_;  // v_*v_ bitmap for duplicate detection
};

struct Matching {
    std::vector<int> edge_indices;  // pairwise vertex-disjoint
    Cost total_weight = 0;
};

// Exact minimum-weight perfect matching (blossom, dense O(v^3) flavour).
// Empty optional when no perfect matching exists (including odd v).
// Deterministic: vertices are scanned in index order, so equal-weight
// optima resolve to the same matching on every run.
std::optional<Matching> min_weight_perfect_matching(const WeightedGraph& g);

// Bitmask-DP oracle over saturated-vertex subsets; identical contract.
// Capacity-limited to v <= 20.
std::optional<Matching> brute_force_perfect_matching(const WeightedGraph& g);

}  // namespace kmexact

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kmexact/metric.hpp"

namespace kmexact {

inline constexpr int kMaxClients = 24;  // subset tables must stay addressable

// Facility-location ("supplier") instance: n clients, m candidate
// facilities, budget k, and an n x m client-to-facility distance table.
class FLInstance {
public:
    FLInstance(int clients, int facilities, int k, std::vector<Cost> dist);

    int clients() const { return n_; }
    int facilities() const { return m_; }
    int budget() const { return k_; }
    Cost distance(int client, int facility) const {
        return dist_[client * m_ + facility];
    }
    Cost max_distance() const;

private:
    int n_;
    int m_;
    int k_;
    std::vector<Cost> dist_;
};

// A function 2^clients -> {0..M} u {inf}, stored as a flat 2^n array.
struct SubsetFunction {
    int n = 0;
    std::vector<Cost> values;  // size 1<<n

    static SubsetFunction constant(int n, Cost value);
    // Identity of min-sum convolution: 0 on the empty set, inf elsewhere.
    static SubsetFunction indicator_empty(int n);
};

// cost_1(Y): cheapest single facility serving all of Y; cost_1(empty) = 0.
// Distances are raised to the objective's power on ingestion.
SubsetFunction compute_cost1(const FLInstance& inst, const Objective& obj);

// Min-sum subset convolution: result(Y) = min over disjoint A u B = Y of
// f(A) + g(B). Fast path: ranked zeta/Moebius transforms over one-hot
// value arrays (counts live in uint32 wraparound arithmetic, which is
// exact because true split counts stay below 2^n <= 2^24).
SubsetFunction min_sum_convolve(const SubsetFunction& f, const SubsetFunction& g);

// Direct O(3^n) evaluation of the defining min over splits; the oracle.
SubsetFunction naive_min_sum_convolve(const SubsetFunction& f,
                                      const SubsetFunction& g);

// cost_1 .. cost_k stacked; cost_i(Y) never increases with i.
struct CostTable {
    std::vector<SubsetFunction> levels;  // levels[i-1] = cost_i
};

CostTable build_cost_table(const FLInstance& inst, const Objective& obj,
                           bool use_fast_convolution = true);

struct FLResult {
    std::vector<int> centers;                 // facility index per cluster
    std::vector<std::vector<int>> clusters;   // client lists, parallel to centers
    Cost cost = 0;
    std::uint64_t convolutions = 0;
};

// Optimal clustering of all clients into at most k clusters with centers
// drawn from the facilities: cost_k(full set) plus a backtracked witness.
// Empty optional when no facility exists to serve a client.
std::optional<FLResult> solve_fl(const FLInstance& inst, const Objective& obj,
                                 bool use_fast_convolution = true);

// Enumerates facility subsets of size <= k with nearest-facility
// assignment. Capacity-limited to C(m, k) <= 1e7.
std::optional<FLResult> brute_force_fl(const FLInstance& inst,
                                       const Objective& obj);

// Re-evaluates a witness clustering straight from the distance table.
Cost evaluate_fl_cost(const FLInstance& inst, const Objective& obj,
                      const FLResult& result);

}  // namespace kmexact

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kmexact/matching.hpp"
#include "kmexact/metric.hpp"

namespace kmexact {

// One solver guess: k1/k2/k3 count the clusters of size exactly 1, exactly
// 2, and at least 3 in a hypothesised optimum; c3 holds the guessed centers
// of the big clusters; s is the number of non-center points left for them.
struct Guess {
    int k1 = 0;
    int k2 = 0;
    int k3 = 0;
    std::uint64_t c3 = 0;  // bitmask over points
    int s = 0;             // n - k3 - 2*k2 - k1
};

// Streams every valid guess exactly once, in deterministic order:
// k3 ascending, then k2 ascending (k1 is determined), center subsets in
// ascending bitmask order. With prune_small_type3 (the default), guesses
// whose big clusters could not all reach size 3 are skipped; disabling the
// prune only adds redundant guesses and never changes the optimum.
class GuessEnumerator {
public:
    GuessEnumerator(int n, int k, bool prune_small_type3 = true);

    std::optional<Guess> next();

private:
    bool advance_tuple();

    int n_;
    int k_;
    bool prune_;
    int k3_;
    int k2_;
    bool tuple_ready_ = false;
    std::uint64_t subset_ = 0;
};

std::uint64_t count_guesses(int n, int k, bool prune_small_type3 = true);

enum class AuxRole : std::uint8_t { center_copy, point, isolation, filler };

// The matching graph for one guess: a block of s copies per guessed center
// (W), the unclustered points (Y), k1 zero-weight isolation vertices, and
// s*(k3-1) zero-weight fillers that absorb unused copies.
struct AuxGraph {
    WeightedGraph graph;
    std::vector<AuxRole> role;     // per vertex
    std::vector<int> point_of;     // Y vertex -> point index (else -1)
    std::vector<int> center_of;    // W vertex -> center point index (else -1)
};

AuxGraph build_auxiliary_graph(const MetricInstance& inst, const Guess& g,
                               const Objective& obj);

// Reads a perfect matching of the auxiliary graph back into a clustering
// with exactly k nonempty clusters whose cost equals the matching weight.
Clustering decode_matching(const MetricInstance& inst, const Guess& g,
                           const AuxGraph& aux, const Matching& m,
                           const Objective& obj);

struct SolveStats {
    std::uint64_t guesses_explored = 0;
    std::uint64_t matcher_calls = 0;
    std::uint64_t infeasible_guesses = 0;  // always 0 unless something is wrong
};

struct SolveOptions {
    int threads = 1;           // guess-level parallelism
    bool early_stop = true;    // stop once a cost-0 guess is found
    bool prune_small_type3 = true;
};

struct SolveResult {
    Clustering clustering;
    Cost cost = 0;
    SolveStats stats;
};

// Exact optimum over all clusterings into exactly k nonempty clusters, by
// minimising matching weight over all guesses. Sum objectives only.
SolveResult solve_exact(const MetricInstance& inst, int k, const Objective& obj,
                        const SolveOptions& options = {});

// C(n,k) center-set enumeration with nearest assignment; handles the
// center (max) objective too. Capacity-limited to n <= 16.
std::pair<Clustering, Cost> brute_force_solve(const MetricInstance& inst, int k,
                                              const Objective& obj);

}  // namespace kmexact

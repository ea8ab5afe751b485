#pragma once

#include <string>
#include <vector>

#include "kmexact/common.hpp"

namespace kmexact {

// Subsets of points are one machine word downstream, hence the cap.
inline constexpr int kMaxPoints = 63;
// Per-entry cap leaves headroom for sums of powered distances.
inline constexpr Cost kMaxDistanceEntry = Cost{1} << 40;

// A finite distance space given as an explicit n x n table. Triangle
// inequality is deliberately not required; symmetry only in symmetric mode.
// Immutable after construction and safe to share across threads.
class MetricInstance {
public:
    MetricInstance(int n, std::vector<Cost> dist, bool symmetric = true);
    static MetricInstance from_rows(const std::vector<std::vector<Cost>>& rows,
                                    bool symmetric = true);

    int size() const { return n_; }
    bool symmetric() const { return symmetric_; }
    // Directional lookup: distance(from, to). In symmetric mode the order
    // does not matter; cost evaluation always reads distance(point, center).
    Cost distance(int from, int to) const { return dist_[from * n_ + to]; }

private:
    int n_;
    bool symmetric_;
    std::vector<Cost> dist_;
};

// Reports every violated table invariant ("nonzero diagonal at i",
// "asymmetry at (i,j)", ...); empty result means the instance is valid.
std::vector<std::string> validate_instance(const MetricInstance& inst,
                                           bool symmetric_required);

struct Objective {
    enum class Kind { median, means, power, center };
    Kind kind = Kind::median;
    int z = 1;

    static Objective median() { return {Kind::median, 1}; }
    static Objective means() { return {Kind::means, 2}; }
    static Objective power(int z);
    static Objective center() { return {Kind::center, 1}; }

    bool is_sum() const { return kind != Kind::center; }
    int exponent() const { return z; }
    std::string name() const;
};

// Exactly `centers.size()` nonempty clusters; every cluster contains its
// own center; assignment maps each point to a cluster index.
struct Clustering {
    std::vector<int> centers;
    std::vector<int> assignment;

    int cluster_count() const { return static_cast<int>(centers.size()); }
};

// Cost of connecting `point` to `center`: distance^z for the sum
// objectives, the raw distance for the center (max) objective.
Cost effective_distance(const MetricInstance& inst, int point, int center,
                        const Objective& obj);

// Total clustering cost (sum or max). Throws an input error if the
// clustering violates its invariants against `inst`.
Cost evaluate_cost(const MetricInstance& inst, const Clustering& cl,
                   const Objective& obj);

// Assigns every non-center point to a cheapest center (ties: lowest center
// index); centers always stay in their own cluster. Optimal among all
// clusterings using exactly this center set.
Clustering nearest_assignment(const MetricInstance& inst,
                              const std::vector<int>& centers,
                              const Objective& obj);

}  // namespace kmexact

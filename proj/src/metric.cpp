#include "kmexact/metric.hpp"

#include <algorithm>

namespace kmexact {

MetricInstance::MetricInstance(int n, std::vector<Cost> dist, bool symmetric)
    : n_(n), symmetric_(symmetric), dist_(std::move(dist)) {
    if (n < 1) throw_input("instance needs at least one point");
    if (n > kMaxPoints)
        throw_capacity("instance has " + std::to_string(n) + " points, cap is " +
                       std::to_string(kMaxPoints));
    if (dist_.size() != static_cast<size_t>(n) * n)
        throw_input("distance table size does not match point count");
}

MetricInstance MetricInstance::from_rows(const std::vector<std::vector<Cost>>& rows,
                                         bool symmetric) {
    const int n = static_cast<int>(rows.size());
    std::vector<Cost> flat;
    flat.reserve(static_cast<size_t>(n) * n);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != n)
            throw_input("distance table is not square");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return MetricInstance(n, std::move(flat), symmetric);
}

std::vector<std::string> validate_instance(const MetricInstance& inst,
                                           bool symmetric_required) {
    std::vector<std::string> violations;
    const int n = inst.size();
    for (int i = 0; i < n; ++i) {
        if (inst.distance(i, i) != 0)
            violations.push_back("nonzero diagonal at " + std::to_string(i));
        for (int j = 0; j < n; ++j) {
            const Cost d = inst.distance(i, j);
            if (d < 0)
                violations.push_back("negative distance at (" + std::to_string(i) +
                                     "," + std::to_string(j) + ")");
            else if (d > kMaxDistanceEntry)
                violations.push_back("distance at (" + std::to_string(i) + "," +
                                     std::to_string(j) + ") exceeds 2^40");
            if (symmetric_required && i < j && d != inst.distance(j, i))
                violations.push_back("asymmetry at (" + std::to_string(i) + "," +
                                     std::to_string(j) + ")");
        }
    }
    return violations;
}

Objective Objective::power(int z) {
    if (z < 1) throw_input("power objective needs z >= 1");
    return {Kind::power, z};
}

std::string Objective::name() const {
    switch (kind) {
        case Kind::median: return "median";
        case Kind::means: return "means";
        case Kind::power: return "power" + std::to_string(z);
        case Kind::center: return "center";
    }
    return "?";
}

Cost effective_distance(const MetricInstance& inst, int point, int center,
                        const Objective& obj) {
    if (point < 0 || point >= inst.size() || center < 0 || center >= inst.size())
        throw_input("point index out of range");
    const Cost d = inst.distance(point, center);
    if (obj.kind == Objective::Kind::center || obj.exponent() == 1) return d;
    if (d == 0) return 0;
    return checked_pow(d, obj.exponent());
}

namespace {

void validate_clustering(const MetricInstance& inst, const Clustering& cl) {
    const int n = inst.size();
    const int k = cl.cluster_count();
    if (k < 1 || k > n) throw_input("cluster count out of range");
    if (static_cast<int>(cl.assignment.size()) != n)
        throw_input("assignment does not cover every point");
    std::vector<bool> seen_center(n, false);
    for (int c = 0; c < k; ++c) {
        const int center = cl.centers[c];
        if (center < 0 || center >= n) throw_input("center index out of range");
        if (seen_center[center]) throw_input("duplicate center");
        seen_center[center] = true;
        if (cl.assignment[center] != c)
            throw_input("center " + std::to_string(center) +
                        " is outside its own cluster");
    }
    std::vector<int> sizes(k, 0);
    for (int p = 0; p < n; ++p) {
        const int c = cl.assignment[p];
        if (c < 0 || c >= k) throw_input("assignment to nonexistent cluster");
        ++sizes[c];
    }
    for (int c = 0; c < k; ++c)
        if (sizes[c] == 0) throw_input("empty cluster " + std::to_string(c));
}

}  // namespace

Cost evaluate_cost(const MetricInstance& inst, const Clustering& cl,
                   const Objective& obj) {
    validate_clustering(inst, cl);
    Cost total = 0;
    for (int p = 0; p < inst.size(); ++p) {
        const Cost d = effective_distance(inst, p, cl.centers[cl.assignment[p]], obj);
        total = obj.is_sum() ? checked_add(total, d) : std::max(total, d);
    }
    return total;
}

Clustering nearest_assignment(const MetricInstance& inst,
                              const std::vector<int>& centers,
                              const Objective& obj) {
    if (centers.empty()) throw_input("center list is empty");
    const int n = inst.size();
    std::vector<int> cluster_of(n, -1);
    for (size_t c = 0; c < centers.size(); ++c) {
        const int center = centers[c];
        if (center < 0 || center >= n) throw_input("center index out of range");
        if (cluster_of[center] != -1) throw_input("duplicate center");
        cluster_of[center] = static_cast<int>(c);  // centers stay home
    }
    Clustering cl;
    cl.centers = centers;
    cl.assignment.assign(n, -1);
    for (int p = 0; p < n; ++p) {
        if (cluster_of[p] != -1) {
            cl.assignment[p] = cluster_of[p];
            continue;
        }
        int best = 0;
        Cost best_d = effective_distance(inst, p, centers[0], obj);
        for (size_t c = 1; c < centers.size(); ++c) {
            const Cost d = effective_distance(inst, p, centers[c], obj);
            if (d < best_d ||
                (d == best_d && centers[c] < centers[best])) {
                best = static_cast<int>(c);
                best_d = d;
            }
        }
        cl.assignment[p] = best;
    }
    return cl;
}

}  // namespace kmexact

#include "kmexact/generators.hpp"

#include <algorithm>
#include <random>

namespace kmexact {

MetricInstance gen_grid_l1(int n, std::uint64_t seed, int extent) {
    if (n < 1 || n > kMaxPoints) throw_input("point count out of range");
    if (extent < 1) throw_input("grid extent must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coord(0, extent - 1);
    std::vector<std::pair<int, int>> pts(n);
    for (auto& p : pts) p = {coord(rng), coord(rng)};
    std::vector<Cost> flat(static_cast<size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            flat[static_cast<size_t>(i) * n + j] =
                std::abs(pts[i].first - pts[j].first) +
                std::abs(pts[i].second - pts[j].second);
    return MetricInstance(n, std::move(flat));
}

MetricInstance gen_closure(int n, std::uint64_t seed, Cost max_weight) {
    if (n < 1 || n > kMaxPoints) throw_input("point count out of range");
    if (max_weight < 1) throw_input("max weight must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Cost> w(1, max_weight);
    std::vector<Cost> d(static_cast<size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const Cost v = w(rng);
            d[static_cast<size_t>(i) * n + j] = v;
            d[static_cast<size_t>(j) * n + i] = v;
        }
    // Floyd-Warshall closure turns arbitrary weights into a true metric.
    for (int via = 0; via < n; ++via)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Cost relaxed = d[static_cast<size_t>(i) * n + via] +
                                     d[static_cast<size_t>(via) * n + j];
                if (relaxed < d[static_cast<size_t>(i) * n + j])
                    d[static_cast<size_t>(i) * n + j] = relaxed;
            }
    return MetricInstance(n, std::move(d));
}

FLInstance gen_fl_uniform(int clients, int facilities, int k, Cost max_dist,
                          std::uint64_t seed) {
    if (max_dist < 0) throw_input("max distance must be nonnegative");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Cost> w(0, max_dist);
    std::vector<Cost> flat(static_cast<size_t>(clients) * facilities);
    for (auto& v : flat) v = w(rng);
    return FLInstance(clients, facilities, k, std::move(flat));
}

SimpleGraph gen_connected_graph(int n, int extra_edges, std::uint64_t seed) {
    if (n < 1) throw_input("graph needs at least one vertex");
    std::mt19937_64 rng(seed);
    SimpleGraph g;
    g.n = n;
    std::vector<bool> present(static_cast<size_t>(n) * n, false);
    auto try_add = [&](int u, int v) {
        if (u == v) return false;
        if (u > v) std::swap(u, v);
        const size_t slot = static_cast<size_t>(u) * n + v;
        if (present[slot]) return false;
        present[slot] = true;
        g.edges.emplace_back(u, v);
        return true;
    };
    for (int v = 1; v < n; ++v) {  // random tree keeps it connected
        std::uniform_int_distribution<int> pick(0, v - 1);
        try_add(pick(rng), v);
    }
    std::uniform_int_distribution<int> any(0, n - 1);
    for (int i = 0; i < extra_edges; ++i) try_add(any(rng), any(rng));
    return g;
}

SetSystem gen_covering_system(int universe, int sets, int k, std::uint64_t seed) {
    if (universe < 1 || universe > kMaxClients) throw_input("universe out of range");
    if (sets < 1) throw_input("need at least one set");
    std::mt19937_64 rng(seed);
    SetSystem s;
    s.universe = universe;
    s.k = k;
    const std::uint64_t full = (std::uint64_t{1} << universe) - 1;
    std::uniform_int_distribution<std::uint64_t> mask(1, full);
    for (int j = 0; j < sets; ++j) s.sets.push_back(mask(rng));
    std::uniform_int_distribution<int> pick(0, sets - 1);
    for (int e = 0; e < universe; ++e) {  // patch any uncovered element
        bool covered = false;
        for (const auto& set : s.sets)
            if (set >> e & 1) covered = true;
        if (!covered) s.sets[pick(rng)] |= std::uint64_t{1} << e;
    }
    return s;
}

}  // namespace kmexact

#include "kmexact/reductions.hpp"

#include <algorithm>
#include <bit>
#include <queue>

#include "kmexact/exact_solver.hpp"

namespace kmexact {

void SimpleGraph::add_edge(int u, int v) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw_input("vertex out of range");
    if (u == v) throw_input("self-loop at " + std::to_string(u));
    if (u > v) std::swap(u, v);
    for (const auto& e : edges)
        if (e.first == u && e.second == v)
            throw_input("duplicate edge (" + std::to_string(u) + "," +
                        std::to_string(v) + ")");
    edges.emplace_back(u, v);
}

std::vector<std::uint64_t> SimpleGraph::closed_neighborhoods() const {
    if (n > 64) throw_capacity("neighborhood bitmasks need n <= 64");
    std::vector<std::uint64_t> nb(n);
    for (int v = 0; v < n; ++v) nb[v] = std::uint64_t{1} << v;
    for (const auto& [u, v] : edges) {
        nb[u] |= std::uint64_t{1} << v;
        nb[v] |= std::uint64_t{1} << u;
    }
    return nb;
}

bool SimpleGraph::connected() const {
    if (n == 0) return true;
    std::vector<std::vector<int>> adj(n);
    for (const auto& [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<bool> seen(n, false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    int reached = 1;
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int w : adj[u])
            if (!seen[w]) {
                seen[w] = true;
                ++reached;
                q.push(w);
            }
    }
    return reached == n;
}

namespace {

// Unit-weight BFS distances from each source; -1 where unreachable.
std::vector<std::vector<int>> all_pairs_bfs(int n,
                                            const std::vector<std::vector<int>>& adj) {
    std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
    for (int s = 0; s < n; ++s) {
        dist[s][s] = 0;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (int w : adj[u])
                if (dist[s][w] < 0) {
                    dist[s][w] = dist[s][u] + 1;
                    q.push(w);
                }
        }
    }
    return dist;
}

}  // namespace

MetricInstance domset_to_kmedian(const SimpleGraph& g) {
    if (g.n < 1) throw_input("graph needs at least one vertex");
    if (!g.connected())
        throw_input("graph is disconnected; its shortest-path metric is not finite");
    std::vector<std::vector<int>> adj(g.n);
    for (const auto& [u, v] : g.edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    const auto dist = all_pairs_bfs(g.n, adj);
    std::vector<Cost> flat;
    flat.reserve(static_cast<size_t>(g.n) * g.n);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) flat.push_back(dist[i][j]);
    return MetricInstance(g.n, std::move(flat));
}

DomsetReport check_domset_property(const SimpleGraph& g, int k) {
    if (g.n > 9) throw_capacity("domination property check is capped at 9 vertices");
    if (k < 1 || k > g.n) throw_input("k out of range for the property check");

    DomsetReport report;
    const MetricInstance inst = domset_to_kmedian(g);
    const auto [cl, cost] = brute_force_solve(inst, k, Objective::median());
    (void)cl;
    report.opt_cost = cost;

    const auto ds = brute_force_dominating_set(g);
    report.domination_number = ds.size;
    report.has_small_domset = ds.size <= k;

    const Cost floor = g.n - k;
    const bool cost_hits_floor = (cost == floor);
    report.holds = (cost >= floor) && (cost_hits_floor == report.has_small_domset);
    if (!report.holds)
        report.detail = "cost " + std::to_string(cost) + " vs floor " +
                        std::to_string(floor) + ", domination number " +
                        std::to_string(ds.size);
    return report;
}

FLInstance setcover_to_fl(const SetSystem& s) {
    if (s.universe < 1) throw_input("empty universe");
    if (s.universe > kMaxClients)
        throw_capacity("universe is larger than the client cap");
    const int n = s.universe;
    const int m = static_cast<int>(s.sets.size());
    for (int j = 0; j < m; ++j) {
        if (s.sets[j] == 0) throw_input("set " + std::to_string(j) + " is empty");
        if (n < 64 && (s.sets[j] >> n) != 0)
            throw_input("set " + std::to_string(j) + " has out-of-range elements");
    }
    for (int e = 0; e < n; ++e) {
        bool covered = false;
        for (const auto& set : s.sets)
            if (set >> e & 1) {
                covered = true;
                break;
            }
        if (!covered)
            throw_input("element " + std::to_string(e) +
                        " is not covered by any set");
    }

    // BFS over the bipartite incidence graph: vertices 0..n-1 are elements,
    // n..n+m-1 are sets; membership edges have weight 1.
    std::vector<std::vector<int>> adj(n + m);
    for (int j = 0; j < m; ++j)
        for (int e = 0; e < n; ++e)
            if (s.sets[j] >> e & 1) {
                adj[e].push_back(n + j);
                adj[n + j].push_back(e);
            }
    const auto dist = all_pairs_bfs(n + m, adj);

    // Pairs separated in the incidence graph (the graph may fall apart even
    // when every element is covered) get the largest finite client-facility
    // distance plus 2: still odd, still >= 3, and the cost-n iff survives.
    int max_finite = 1;
    for (int e = 0; e < n; ++e)
        for (int j = 0; j < m; ++j)
            max_finite = std::max(max_finite, dist[e][n + j]);
    std::vector<Cost> flat(static_cast<size_t>(n) * m);
    for (int e = 0; e < n; ++e)
        for (int j = 0; j < m; ++j) {
            const int d = dist[e][n + j];
            flat[static_cast<size_t>(e) * m + j] = (d < 0) ? max_finite + 2 : d;
        }
    return FLInstance(n, m, s.k, std::move(flat));
}

SetcoverReport check_setcover_property(const SetSystem& s) {
    if (s.universe > 12 || static_cast<int>(s.sets.size()) > 8)
        throw_capacity("set-cover property check is capped at n <= 12, m <= 8");
    if (s.k < 1 || s.k > static_cast<int>(s.sets.size()))
        throw_input("budget out of range for the property check");

    SetcoverReport report;
    const FLInstance inst = setcover_to_fl(s);
    const auto result = brute_force_fl(inst, Objective::median());
    if (!result) throw_internal("covering system produced an infeasible instance");
    report.opt_cost = result->cost;

    // Smallest cover by subset enumeration over the family.
    const int m = static_cast<int>(s.sets.size());
    const std::uint64_t universe_mask =
        (s.universe == 64) ? ~std::uint64_t{0}
                           : (std::uint64_t{1} << s.universe) - 1;
    int best = 0;
    std::uint32_t chosen_best = 0;
    for (std::uint32_t pick = 1; pick < (std::uint32_t{1} << m); ++pick) {
        std::uint64_t covered = 0;
        for (std::uint32_t p = pick; p; p &= p - 1)
            covered |= s.sets[std::countr_zero(p)];
        if (covered == universe_mask) {
            const int size = std::popcount(pick);
            if (best == 0 || size < best) {
                best = size;
                chosen_best = pick;
            }
        }
    }
    (void)chosen_best;
    report.min_cover_size = best;
    report.has_small_cover = best > 0 && best <= s.k;

    const Cost floor = s.universe;
    const bool cost_hits_floor = (report.opt_cost == floor);
    report.holds =
        (report.opt_cost >= floor) && (cost_hits_floor == report.has_small_cover);
    if (!report.holds)
        report.detail = "cost " + std::to_string(report.opt_cost) + " vs floor " +
                        std::to_string(floor) + ", min cover " + std::to_string(best);
    return report;
}

SimpleGraph threshold_graph(const MetricInstance& inst, Cost r) {
    if (r < 0) throw_input("threshold radius must be nonnegative");
    SimpleGraph g;
    g.n = inst.size();
    for (int u = 0; u < g.n; ++u)
        for (int v = u + 1; v < g.n; ++v)
            if (inst.distance(u, v) <= r) g.edges.emplace_back(u, v);
    return g;
}

DominatingSetResult brute_force_dominating_set(const SimpleGraph& g) {
    if (g.n > 20) throw_capacity("dominating-set search is capped at 20 vertices");
    if (g.n == 0) return {0, 0};
    const auto nb = g.closed_neighborhoods();
    const std::uint64_t full = (std::uint64_t{1} << g.n) - 1;
    DominatingSetResult best{g.n + 1, 0};
    for (std::uint64_t pick = 0; pick <= full; ++pick) {
        const int size = std::popcount(pick);
        if (size >= best.size) continue;
        std::uint64_t covered = 0;
        for (std::uint64_t p = pick; p; p &= p - 1)
            covered |= nb[std::countr_zero(p)];
        if (covered == full) best = {size, pick};
    }
    return best;
}

}  // namespace kmexact

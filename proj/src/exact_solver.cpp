#include "kmexact/exact_solver.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <thread>

namespace kmexact {

namespace {

std::uint64_t gosper_next(std::uint64_t x) {
    const std::uint64_t c = x & (~x + 1);
    const std::uint64_t r = x + c;
    return (((r ^ x) >> 2) / c) | r;
}

// s = n - k3 - 2*k2 - k1 non-center points must land in the big clusters.
int spare_points(int n, int k1, int k2, int k3) { return n - k3 - 2 * k2 - k1; }

bool tuple_valid(int n, int k1, int k2, int k3, bool prune) {
    const int s = spare_points(n, k1, k2, k3);
    if (s < 0) return false;
    if (k3 == 0) return s == 0;
    return !prune || s >= 2 * k3;
}

std::uint64_t binomial(int n, int r) {
    if (r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    unsigned __int128 acc = 1;
    for (int i = 1; i <= r; ++i) {
        acc = acc * static_cast<unsigned>(n - r + i) / static_cast<unsigned>(i);
        if (acc > ~static_cast<std::uint64_t>(0))
            throw_capacity("binomial coefficient exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(acc);
}

void check_nk(int n, int k) {
    if (k < 1) throw_input("cluster count k must be >= 1");
    if (k > n) throw_input("k exceeds the point count; no partition into k "
                           "nonempty clusters exists");
}

}  // namespace

GuessEnumerator::GuessEnumerator(int n, int k, bool prune_small_type3)
    : n_(n), k_(k), prune_(prune_small_type3), k3_(0), k2_(-1) {
    check_nk(n, k);
    tuple_ready_ = advance_tuple();
}

bool GuessEnumerator::advance_tuple() {
    for (;;) {
        ++k2_;
        if (k2_ > k_ - k3_) {
            ++k3_;
            k2_ = 0;
            if (k3_ > k_) return false;
        }
        const int k1 = k_ - k3_ - k2_;
        if (!tuple_valid(n_, k1, k2_, k3_, prune_)) continue;
        subset_ = (k3_ == 0) ? 0 : ((std::uint64_t{1} << k3_) - 1);
        return true;
    }
}

std::optional<Guess> GuessEnumerator::next() {
    if (!tuple_ready_) return std::nullopt;
    Guess g;
    g.k3 = k3_;
    g.k2 = k2_;
    g.k1 = k_ - k3_ - k2_;
    g.c3 = subset_;
    g.s = spare_points(n_, g.k1, g.k2, g.k3);

    // Step to the next center subset, or the next (k3, k2) tuple.
    bool more = false;
    if (k3_ > 0) {
        const std::uint64_t nxt = gosper_next(subset_);
        if (nxt < (n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_))) {
            subset_ = nxt;
            more = true;
        }
    }
    if (!more) tuple_ready_ = advance_tuple();
    return g;
}

std::uint64_t count_guesses(int n, int k, bool prune_small_type3) {
    check_nk(n, k);
    unsigned __int128 total = 0;
    for (int k3 = 0; k3 <= k; ++k3)
        for (int k2 = 0; k2 + k3 <= k; ++k2)
            if (tuple_valid(n, k - k3 - k2, k2, k3, prune_small_type3))
                total += binomial(n, k3);
    if (total > ~static_cast<std::uint64_t>(0))
        throw_capacity("guess count exceeds 64 bits");
    return static_cast<std::uint64_t>(total);
}

AuxGraph build_auxiliary_graph(const MetricInstance& inst, const Guess& g,
                               const Objective& obj) {
    if (!obj.is_sum())
        throw_input("the matching construction needs a sum objective; "
                    "the center objective is unsupported");
    const int n = inst.size();
    if (g.k1 < 0 || g.k2 < 0 || g.k3 < 0 || g.s < 0) throw_input("malformed guess");
    if (g.s != spare_points(n, g.k1, g.k2, g.k3)) throw_input("guess s is inconsistent");
    if (g.k3 == 0 && g.s != 0)
        throw_input("guess with no big clusters must have s = 0");
    if (std::popcount(g.c3) != g.k3) throw_input("guessed center set has wrong size");
    if (n < 64 && (g.c3 >> n) != 0) throw_input("guessed center out of range");

    std::vector<int> centers;  // ascending point order = block order
    std::vector<int> rest;
    for (int p = 0; p < n; ++p) {
        if (g.c3 >> p & 1)
            centers.push_back(p);
        else
            rest.push_back(p);
    }

    const int w_count = g.s * g.k3;
    const int y_count = n - g.k3;
    const int z_count = g.k3 >= 1 ? g.s * (g.k3 - 1) : 0;
    const int total = w_count + y_count + g.k1 + z_count;

    AuxGraph aux{WeightedGraph(total), {}, {}, {}};
    aux.role.assign(total, AuxRole::filler);
    aux.point_of.assign(total, -1);
    aux.center_of.assign(total, -1);
    const int y_base = w_count;
    const int u_base = y_base + y_count;
    const int z_base = u_base + g.k1;
    for (int j = 0; j < g.k3; ++j)
        for (int c = 0; c < g.s; ++c) {
            aux.role[j * g.s + c] = AuxRole::center_copy;
            aux.center_of[j * g.s + c] = centers[j];
        }
    for (int i = 0; i < y_count; ++i) {
        aux.role[y_base + i] = AuxRole::point;
        aux.point_of[y_base + i] = rest[i];
    }
    for (int i = 0; i < g.k1; ++i) aux.role[u_base + i] = AuxRole::isolation;

    // Y-W: connection cost to the guessed center, identical for all copies.
    for (int i = 0; i < y_count; ++i)
        for (int j = 0; j < g.k3; ++j) {
            const Cost w = effective_distance(inst, rest[i], centers[j], obj);
            for (int c = 0; c < g.s; ++c)
                aux.graph.add_edge(y_base + i, j * g.s + c, w);
        }
    // Y-Y: a matched pair becomes a 2-cluster; either endpoint may serve as
    // its center, so the edge carries the cheaper direction.
    for (int i = 0; i < y_count; ++i)
        for (int j = i + 1; j < y_count; ++j) {
            const Cost w =
                std::min(effective_distance(inst, rest[j], rest[i], obj),
                         effective_distance(inst, rest[i], rest[j], obj));
            aux.graph.add_edge(y_base + i, y_base + j, w);
        }
    // U-Y and Z-W carry zero weight.
    for (int i = 0; i < g.k1; ++i)
        for (int j = 0; j < y_count; ++j)
            aux.graph.add_edge(u_base + i, y_base + j, 0);
    for (int i = 0; i < z_count; ++i)
        for (int j = 0; j < w_count; ++j) aux.graph.add_edge(z_base + i, j, 0);
    return aux;
}

Clustering decode_matching(const MetricInstance& inst, const Guess& g,
                           const AuxGraph& aux, const Matching& m,
                           const Objective& obj) {
    const int v = aux.graph.vertex_count();
    if (static_cast<int>(m.edge_indices.size()) * 2 != v)
        throw_input("matching is not perfect");

    std::vector<int> centers;
    for (int p = 0; p < inst.size(); ++p)
        if (g.c3 >> p & 1) centers.push_back(p);

    // Gather members per guessed center, pairs, and singletons.
    std::vector<std::vector<int>> big_members(g.k3);
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> singles;
    for (int idx : m.edge_indices) {
        const auto& e = aux.graph.edges()[idx];
        const AuxRole ru = aux.role[e.u];
        const AuxRole rv = aux.role[e.v];
        if (ru == AuxRole::center_copy && rv == AuxRole::point) {
            big_members[e.u / g.s].push_back(aux.point_of[e.v]);
        } else if (ru == AuxRole::point && rv == AuxRole::point) {
            pairs.emplace_back(aux.point_of[e.u], aux.point_of[e.v]);
        } else if (ru == AuxRole::point && rv == AuxRole::isolation) {
            singles.push_back(aux.point_of[e.u]);
        } else if (!(ru == AuxRole::center_copy && rv == AuxRole::filler)) {
            throw_internal("matched edge with impossible role pair");
        }
    }
    if (static_cast<int>(pairs.size()) != g.k2 ||
        static_cast<int>(singles.size()) != g.k1)
        throw_internal("decoded cluster shape disagrees with the guess");

    struct Proto {
        int center;
        std::vector<int> members;
    };
    std::vector<Proto> protos;
    for (int j = 0; j < g.k3; ++j)
        protos.push_back({centers[j], std::move(big_members[j])});
    for (auto [a, b] : pairs) {
        if (a > b) std::swap(a, b);
        // Cheaper endpoint serves as center; ties go to the lower index.
        const Cost cost_a = effective_distance(inst, b, a, obj);
        const Cost cost_b = effective_distance(inst, a, b, obj);
        const int center = (cost_a <= cost_b) ? a : b;
        protos.push_back({center, {a == center ? b : a}});
    }
    for (int p : singles) protos.push_back({p, {}});

    std::sort(protos.begin(), protos.end(),
              [](const Proto& x, const Proto& y) { return x.center < y.center; });

    Clustering cl;
    cl.assignment.assign(inst.size(), -1);
    for (size_t c = 0; c < protos.size(); ++c) {
        cl.centers.push_back(protos[c].center);
        cl.assignment[protos[c].center] = static_cast<int>(c);
        for (int p : protos[c].members) cl.assignment[p] = static_cast<int>(c);
    }
    return cl;
}

namespace {

struct GuessOutcome {
    Cost cost = kInfCost;
    std::uint64_t rank = ~std::uint64_t{0};
    Guess guess;
    Matching matching;
    std::uint64_t infeasible = 0;
};

}  // namespace

SolveResult solve_exact(const MetricInstance& inst, int k, const Objective& obj,
                        const SolveOptions& options) {
    const int n = inst.size();
    check_nk(n, k);
    if (!obj.is_sum())
        throw_input("solve_exact handles sum objectives only; use the brute-force "
                    "solver for the center objective");

    const std::uint64_t total = count_guesses(n, k, options.prune_small_type3);
    const int threads =
        std::max(1, std::min<int>(options.threads,
                                  static_cast<int>(std::min<std::uint64_t>(
                                      total, 256))));

    // Workers stride over the deterministic guess stream; a discovered
    // cost-0 guess freezes the stream at its rank, so both the result and
    // the explored count stay schedule-independent.
    std::atomic<std::uint64_t> stop_rank{~std::uint64_t{0}};
    std::vector<GuessOutcome> best_per_worker(threads);

    auto worker = [&](int t) {
        GuessEnumerator en(n, k, options.prune_small_type3);
        GuessOutcome local;
        std::uint64_t rank = 0;
        for (auto g = en.next(); g; g = en.next(), ++rank) {
            if (rank > stop_rank.load(std::memory_order_relaxed)) break;
            if (rank % static_cast<std::uint64_t>(threads) !=
                static_cast<std::uint64_t>(t))
                continue;
            const AuxGraph aux = build_auxiliary_graph(inst, *g, obj);
            auto m = min_weight_perfect_matching(aux.graph);
            if (!m) {  // cannot happen for a valid guess; tracked, not hidden
                ++local.infeasible;
                continue;
            }
            if (m->total_weight < local.cost ||
                (m->total_weight == local.cost && rank < local.rank)) {
                local.cost = m->total_weight;
                local.rank = rank;
                local.guess = *g;
                local.matching = std::move(*m);
                if (options.early_stop && local.cost == 0) {
                    std::uint64_t cur = stop_rank.load();
                    while (rank < cur && !stop_rank.compare_exchange_weak(cur, rank)) {
                    }
                    break;
                }
            }
        }
        best_per_worker[t] = std::move(local);
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    GuessOutcome best;
    std::uint64_t infeasible = 0;
    for (auto& out : best_per_worker) {
        infeasible += out.infeasible;
        if (out.cost < best.cost || (out.cost == best.cost && out.rank < best.rank))
            best = std::move(out);
    }
    if (best.rank == ~std::uint64_t{0})
        throw_internal("no feasible guess; the construction guarantees one");

    const std::uint64_t frozen = stop_rank.load();
    SolveResult result;
    result.stats.guesses_explored = (frozen == ~std::uint64_t{0})
                                        ? total
                                        : std::min(total, frozen + 1);
    result.stats.matcher_calls = result.stats.guesses_explored;
    result.stats.infeasible_guesses = infeasible;
    result.cost = best.cost;
    const AuxGraph aux = build_auxiliary_graph(inst, best.guess, obj);
    result.clustering = decode_matching(inst, best.guess, aux, best.matching, obj);
    return result;
}

std::pair<Clustering, Cost> brute_force_solve(const MetricInstance& inst, int k,
                                              const Objective& obj) {
    const int n = inst.size();
    check_nk(n, k);
    if (n > 16) throw_capacity("brute-force clustering is capped at 16 points");

    Cost best_cost = kInfCost;
    Clustering best;
    std::uint64_t subset = (std::uint64_t{1} << k) - 1;
    const std::uint64_t limit = std::uint64_t{1} << n;
    while (subset < limit) {
        std::vector<int> centers;
        for (int p = 0; p < n; ++p)
            if (subset >> p & 1) centers.push_back(p);
        Clustering cl = nearest_assignment(inst, centers, obj);
        const Cost cost = evaluate_cost(inst, cl, obj);
        if (cost < best_cost) {
            best_cost = cost;
            best = std::move(cl);
        }
        subset = gosper_next(subset);
    }
    return {std::move(best), best_cost};
}

}  // namespace kmexact

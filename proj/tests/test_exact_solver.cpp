#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>

#include "kmexact/exact_solver.hpp"
#include "kmexact/generators.hpp"

using namespace kmexact;

namespace {

// Independent oracle: enumerate (k1,k2,k3) triples directly and count
// center subsets with a Pascal-triangle binomial.
std::uint64_t oracle_guess_count(int n, int k, bool prune) {
    static std::uint64_t pascal[65][65] = {};
    if (!pascal[0][0]) {
        for (int i = 0; i <= 64; ++i) {
            pascal[i][0] = 1;
            for (int j = 1; j <= i; ++j)
                pascal[i][j] = pascal[i - 1][j - 1] + (j <= i - 1 ? pascal[i - 1][j] : 0);
        }
    }
    std::uint64_t total = 0;
    for (int k1 = 0; k1 <= k; ++k1)
        for (int k2 = 0; k1 + k2 <= k; ++k2) {
            const int k3 = k - k1 - k2;
            const int s = n - k3 - 2 * k2 - k1;
            if (s < 0) continue;
            if (k3 == 0 && s != 0) continue;
            if (prune && k3 >= 1 && s < 2 * k3) continue;
            total += pascal[n][k3];
        }
    return total;
}

MetricInstance random_asym_instance(std::mt19937_64& rng, int n, Cost max_d) {
    std::uniform_int_distribution<Cost> d(0, max_d);
    std::vector<Cost> flat(static_cast<size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) flat[i * n + j] = d(rng);
    return MetricInstance(n, std::move(flat), false);
}

}  // namespace

TEST_CASE("n=3, k=3 has the single all-singleton guess") {
    GuessEnumerator en(3, 3);
    auto g = en.next();
    REQUIRE(g.has_value());
    CHECK(g->k1 == 3);
    CHECK(g->k2 == 0);
    CHECK(g->k3 == 0);
    CHECK(g->c3 == 0);
    CHECK(g->s == 0);
    CHECK_FALSE(en.next().has_value());
    CHECK(count_guesses(3, 3) == 1);
}

TEST_CASE("n=6, k=2 guess census") {
    // Valid tuples (k1,k2,k3): (1,0,1) s=4, (0,1,1) s=3, (0,0,2) s=4;
    // all tuples with k3=0 fail the s=0 requirement. Subsets: 6+6+15 = 27,
    // frozen from the independent triple-loop oracle.
    CHECK(oracle_guess_count(6, 2, true) == 27);
    CHECK(count_guesses(6, 2) == 27);

    GuessEnumerator en(6, 2);
    std::uint64_t seen = 0;
    bool saw_102 = false, saw_011 = false, saw_110 = false;
    int subsets_k3_2 = 0;
    while (auto g = en.next()) {
        ++seen;
        if (g->k1 == 1 && g->k2 == 0 && g->k3 == 1) {
            saw_102 = true;
            CHECK(g->s == 4);
        }
        if (g->k1 == 0 && g->k2 == 1 && g->k3 == 1) {
            saw_011 = true;
            CHECK(g->s == 3);
        }
        if (g->k1 == 1 && g->k2 == 1 && g->k3 == 0) saw_110 = true;
        if (g->k3 == 2) {
            ++subsets_k3_2;
            CHECK(g->s == 4);
            CHECK(std::popcount(g->c3) == 2);
        }
    }
    CHECK(seen == 27);
    CHECK(saw_102);
    CHECK(saw_011);
    CHECK_FALSE(saw_110);  // s = 3 != 0 with k3 = 0
    CHECK(subsets_k3_2 == 15);
}

TEST_CASE("count matches stream length, pruned and relaxed") {
    for (int n = 1; n <= 11; ++n)
        for (int k = 1; k <= n; ++k)
            for (bool prune : {true, false}) {
                GuessEnumerator en(n, k, prune);
                std::uint64_t len = 0;
                std::uint64_t prev_rank_c3 = 0;
                int prev_k3 = -1, prev_k2 = -1;
                while (auto g = en.next()) {
                    ++len;
                    // Deterministic order: (k3, k2) lexicographic, subsets
                    // ascending within a tuple.
                    if (g->k3 == prev_k3 && g->k2 == prev_k2)
                        CHECK(g->c3 > prev_rank_c3);
                    else
                        CHECK(std::make_pair(g->k3, g->k2) >
                              std::make_pair(prev_k3, prev_k2));
                    prev_k3 = g->k3;
                    prev_k2 = g->k2;
                    prev_rank_c3 = g->c3;
                }
                CHECK(len == oracle_guess_count(n, k, prune));
                CHECK(count_guesses(n, k, prune) == len);
            }
}

TEST_CASE("guess count stays under the binomial-sum bound") {
    // count <= (k+1)^2 * sum_{i<=n/3} C(n,i), and that sum is <= 1.89^n.
    for (int n = 1; n <= 34; ++n) {
        long double sum = 0;
        long double c = 1;  // C(n,0)
        for (int i = 0; i <= n / 3; ++i) {
            sum += c;
            c = c * (n - i) / (i + 1);
        }
        for (int k = 1; k <= n; ++k) {
            const long double bound =
                static_cast<long double>(k + 1) * (k + 1) * sum;
            CHECK(static_cast<long double>(count_guesses(n, k)) <= bound);
        }
        CHECK(sum <= powl(1.89L, n));
    }
}

TEST_CASE("auxiliary graph for the n=6 k=2 big-cluster guess") {
    const auto inst = gen_grid_l1(6, 1);
    Guess g;
    g.k1 = 0;
    g.k2 = 0;
    g.k3 = 2;
    g.c3 = 0b11;  // centers {0,1}
    g.s = 4;
    const auto aux = build_auxiliary_graph(inst, g, Objective::median());
    CHECK(aux.graph.vertex_count() == 16);  // 8 copies + 4 points + 4 fillers
    CHECK(aux.graph.edges().size() == 70);  // 4*8 + C(4,2) + 0 + 4*8

    // All copies of one center carry the same connection weight.
    for (const auto& e : aux.graph.edges())
        if (aux.role[e.u] == AuxRole::center_copy &&
            aux.role[e.v] == AuxRole::point) {
            const Cost expect = effective_distance(
                inst, aux.point_of[e.v], aux.center_of[e.u], Objective::median());
            CHECK(e.weight == expect);
        }
}

TEST_CASE("center objective is rejected by the construction") {
    const auto inst = gen_grid_l1(5, 2);
    Guess g;
    g.k1 = 5;
    g.k2 = 0;
    g.k3 = 0;
    g.s = 0;
    CHECK_THROWS_AS(build_auxiliary_graph(inst, g, Objective::center()), Error);
    CHECK_THROWS_AS(solve_exact(inst, 2, Objective::center()), Error);
}

TEST_CASE("k = n solves to zero through the all-singleton guess") {
    const auto inst = gen_closure(7, 3);
    const auto res = solve_exact(inst, 7, Objective::median());
    CHECK(res.cost == 0);
    CHECK(res.clustering.cluster_count() == 7);
}

TEST_CASE("line instance solves to 3") {
    const auto inst = MetricInstance::from_rows({
        {0, 1, 3, 7},
        {1, 0, 2, 6},
        {3, 2, 0, 4},
        {7, 6, 4, 0},
    });
    const auto res = solve_exact(inst, 2, Objective::median());
    CHECK(res.cost == 3);
    CHECK(evaluate_cost(inst, res.clustering, Objective::median()) == 3);
    const auto [cl, cost] = brute_force_solve(inst, 2, Objective::median());
    CHECK(cost == 3);
}

TEST_CASE("every valid guess has a feasible matching and decodes exactly") {
    std::mt19937_64 rng(77);
    for (int iter = 0; iter < 12; ++iter) {
        std::uniform_int_distribution<int> nd(2, 8);
        const int n = nd(rng);
        const auto inst = (iter % 2) ? gen_grid_l1(n, rng()) : gen_closure(n, rng());
        for (int k = 1; k <= n; ++k) {
            GuessEnumerator en(n, k);
            while (auto g = en.next()) {
                const auto aux = build_auxiliary_graph(inst, *g, Objective::median());
                auto m = min_weight_perfect_matching(aux.graph);
                REQUIRE(m.has_value());  // the construction guarantees one
                const auto cl =
                    decode_matching(inst, *g, aux, *m, Objective::median());
                CHECK(evaluate_cost(inst, cl, Objective::median()) ==
                      m->total_weight);
                CHECK(cl.cluster_count() == k);
            }
        }
    }
}

TEST_CASE("decode matches cost for arbitrary perfect matchings") {
    // Perturbing the weights makes the matcher hand back other perfect
    // matchings of the same graph; decode must track their true weight.
    std::mt19937_64 rng(99);
    for (int iter = 0; iter < 30; ++iter) {
        std::uniform_int_distribution<int> nd(3, 9);
        const int n = nd(rng);
        const auto inst = gen_closure(n, rng());
        std::uniform_int_distribution<int> kd(1, n);
        const int k = kd(rng);
        GuessEnumerator en(n, k);
        std::vector<Guess> all;
        while (auto g = en.next()) all.push_back(*g);
        std::uniform_int_distribution<size_t> gd(0, all.size() - 1);
        const Guess g = all[gd(rng)];
        const auto aux = build_auxiliary_graph(inst, g, Objective::median());

        WeightedGraph jittered(aux.graph.vertex_count());
        std::uniform_int_distribution<Cost> delta(0, 40);
        for (const auto& e : aux.graph.edges())
            jittered.add_edge(e.u, e.v, delta(rng));
        auto m = min_weight_perfect_matching(jittered);
        REQUIRE(m.has_value());

        Cost true_weight = 0;
        for (int idx : m->edge_indices) true_weight += aux.graph.edges()[idx].weight;
        const auto cl = decode_matching(inst, g, aux, *m, Objective::median());
        CHECK(evaluate_cost(inst, cl, Objective::median()) == true_weight);
    }
}

TEST_CASE("solver agrees with brute force on random instances") {
    std::mt19937_64 rng(20240811);
    for (int iter = 0; iter < 40; ++iter) {
        std::uniform_int_distribution<int> nd(1, 8);
        const int n = nd(rng);
        const auto inst = (iter % 2) ? gen_grid_l1(n, rng()) : gen_closure(n, rng());
        for (int k = 1; k <= n; ++k)
            for (const auto& obj : {Objective::median(), Objective::means()}) {
                const auto res = solve_exact(inst, k, obj);
                const auto [cl, want] = brute_force_solve(inst, k, obj);
                CHECK(res.cost == want);
                CHECK(evaluate_cost(inst, res.clustering, obj) == res.cost);
                CHECK(res.clustering.cluster_count() == k);
            }
    }
}

TEST_CASE("asymmetric tables solve against a direction-aware brute force") {
    std::mt19937_64 rng(13);
    for (int iter = 0; iter < 25; ++iter) {
        std::uniform_int_distribution<int> nd(2, 7);
        const int n = nd(rng);
        const auto inst = random_asym_instance(rng, n, 15);
        std::uniform_int_distribution<int> kd(1, n);
        const int k = kd(rng);
        const auto res = solve_exact(inst, k, Objective::median());
        const auto [cl, want] = brute_force_solve(inst, k, Objective::median());
        CHECK(res.cost == want);
        CHECK(evaluate_cost(inst, res.clustering, Objective::median()) == res.cost);
    }
}

TEST_CASE("dropping the small-type3 prune never changes the optimum") {
    std::mt19937_64 rng(4242);
    for (int iter = 0; iter < 20; ++iter) {
        std::uniform_int_distribution<int> nd(2, 7);
        const int n = nd(rng);
        const auto inst = gen_closure(n, rng());
        std::uniform_int_distribution<int> kd(1, n);
        const int k = kd(rng);
        SolveOptions pruned;
        SolveOptions relaxed;
        relaxed.prune_small_type3 = false;
        relaxed.early_stop = pruned.early_stop = false;
        CHECK(solve_exact(inst, k, Objective::median(), pruned).cost ==
              solve_exact(inst, k, Objective::median(), relaxed).cost);
    }
}

TEST_CASE("thread count does not change the answer or the stats") {
    const auto inst = gen_closure(9, 7);
    SolveOptions base;
    base.early_stop = false;
    auto reference = solve_exact(inst, 4, Objective::median(), base);
    CHECK(reference.stats.guesses_explored == count_guesses(9, 4));
    CHECK(reference.stats.infeasible_guesses == 0);
    for (int threads : {2, 3, 8}) {
        SolveOptions opt = base;
        opt.threads = threads;
        const auto res = solve_exact(inst, 4, Objective::median(), opt);
        CHECK(res.cost == reference.cost);
        CHECK(res.clustering.centers == reference.clustering.centers);
        CHECK(res.clustering.assignment == reference.clustering.assignment);
        CHECK(res.stats.guesses_explored == reference.stats.guesses_explored);
    }
}

TEST_CASE("early stop halts on a zero-cost guess deterministically") {
    const auto inst = MetricInstance::from_rows({
        {0, 0, 0, 0},
        {0, 0, 0, 0},
        {0, 0, 0, 0},
        {0, 0, 0, 0},
    });
    SolveOptions opt;  // early_stop on by default
    const auto res = solve_exact(inst, 2, Objective::median(), opt);
    CHECK(res.cost == 0);
    CHECK(res.stats.guesses_explored < count_guesses(4, 2));
    SolveOptions threaded = opt;
    threaded.threads = 4;
    const auto res2 = solve_exact(inst, 2, Objective::median(), threaded);
    CHECK(res2.stats.guesses_explored == res.stats.guesses_explored);
    CHECK(res2.clustering.centers == res.clustering.centers);
}

TEST_CASE("k out of range is an input error") {
    const auto inst = gen_grid_l1(4, 9);
    CHECK_THROWS_AS(solve_exact(inst, 5, Objective::median()), Error);
    CHECK_THROWS_AS(solve_exact(inst, 0, Objective::median()), Error);
    CHECK_THROWS_AS(brute_force_solve(inst, 5, Objective::median()), Error);
    CHECK_THROWS_AS(count_guesses(4, 5), Error);
}

TEST_CASE("brute force handles the center objective") {
    // Star metric: hub 0 at distance 1 from three leaves, leaves at 2.
    const auto inst = MetricInstance::from_rows({
        {0, 1, 1, 1},
        {1, 0, 2, 2},
        {1, 2, 0, 2},
        {1, 2, 2, 0},
    });
    const auto [cl, radius] = brute_force_solve(inst, 1, Objective::center());
    CHECK(radius == 1);
    CHECK(cl.centers == std::vector<int>{0});
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kmexact/fl_solver.hpp"
#include "kmexact/generators.hpp"

using namespace kmexact;

namespace {

// n=3 clients, m=2 facilities: rows (1,4), (2,3), (5,1).
FLInstance small_instance(int k) {
    return FLInstance(3, 2, k, {1, 4, 2, 3, 5, 1});
}

SubsetFunction random_function(std::mt19937_64& rng, int n, Cost max_v,
                               int inf_percent) {
    std::uniform_int_distribution<Cost> vd(0, max_v);
    std::uniform_int_distribution<int> coin(0, 99);
    SubsetFunction f;
    f.n = n;
    f.values.resize(std::size_t{1} << n);
    for (auto& v : f.values) v = (coin(rng) < inf_percent) ? kInfCost : vd(rng);
    return f;
}

}  // namespace

TEST_CASE("cost1 on the three-client instance") {
    const auto inst = small_instance(1);
    const auto c1 = compute_cost1(inst, Objective::median());
    CHECK(c1.values[0b000] == 0);
    CHECK(c1.values[0b001] == 1);  // client 0 alone: min(1, 4)
    CHECK(c1.values[0b010] == 2);
    CHECK(c1.values[0b100] == 1);
    CHECK(c1.values[0b111] == 8);  // min(1+2+5, 4+3+1)
}

TEST_CASE("convolution identity element") {
    std::mt19937_64 rng(1);
    const auto f = random_function(rng, 6, 30, 10);
    const auto e = SubsetFunction::indicator_empty(6);
    const auto fast = min_sum_convolve(f, e);
    const auto slow = naive_min_sum_convolve(f, e);
    CHECK(fast.values == f.values);
    CHECK(slow.values == f.values);
}

TEST_CASE("self-convolution never exceeds the original when f(empty)=0") {
    std::mt19937_64 rng(2);
    auto f = random_function(rng, 7, 25, 5);
    f.values[0] = 0;
    const auto h = min_sum_convolve(f, f);
    for (size_t y = 0; y < f.values.size(); ++y) {
        if (f.values[y] == kInfCost)
            CHECK(h.values[y] <= f.values[y]);
        else
            CHECK(h.values[y] <= f.values[y]);
    }
}

TEST_CASE("one-element convolution by hand") {
    SubsetFunction f{1, {0, 2}};
    SubsetFunction g{1, {0, 3}};
    const auto naive = naive_min_sum_convolve(f, g);
    CHECK(naive.values[0] == 0);
    // Two splits of {0}: f(empty)+g({0}) = 3 and f({0})+g(empty) = 2.
    CHECK(naive.values[1] == 2);
    const auto fast = min_sum_convolve(f, g);
    CHECK(fast.values == naive.values);
}

TEST_CASE("naive convolution is commutative") {
    std::mt19937_64 rng(3);
    for (int iter = 0; iter < 30; ++iter) {
        const auto f = random_function(rng, 5, 20, 15);
        const auto g = random_function(rng, 5, 20, 15);
        CHECK(naive_min_sum_convolve(f, g).values ==
              naive_min_sum_convolve(g, f).values);
    }
}

TEST_CASE("fast convolution equals the naive oracle") {
    std::mt19937_64 rng(20240811);
    for (int iter = 0; iter < 120; ++iter) {
        std::uniform_int_distribution<int> nd(0, 8);
        const int n = nd(rng);
        const auto f = random_function(rng, n, 50, iter % 3 == 0 ? 25 : 0);
        const auto g = random_function(rng, n, 50, iter % 3 == 0 ? 25 : 0);
        const auto fast = min_sum_convolve(f, g);
        const auto slow = naive_min_sum_convolve(f, g);
        REQUIRE(fast.values == slow.values);
    }
}

TEST_CASE("fast convolution is associative on cost tables") {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 10; ++iter) {
        std::uniform_int_distribution<int> nd(1, 8);
        const int n = nd(rng);
        const auto inst = gen_fl_uniform(n, 4, 2, 12, rng());
        const auto c1 = compute_cost1(inst, Objective::median());
        const auto left = min_sum_convolve(min_sum_convolve(c1, c1), c1);
        const auto right = min_sum_convolve(c1, min_sum_convolve(c1, c1));
        CHECK(left.values == right.values);
    }
}

TEST_CASE("three-client instance solves to 8 then 4") {
    const auto r1 = solve_fl(small_instance(1), Objective::median());
    REQUIRE(r1.has_value());
    CHECK(r1->cost == 8);

    const auto r2 = solve_fl(small_instance(2), Objective::median());
    REQUIRE(r2.has_value());
    CHECK(r2->cost == 4);
    // Clients {0,1} go to facility 0 (cost 3), client {2} to facility 1.
    REQUIRE(r2->centers.size() == 2);
    CHECK(r2->centers == std::vector<int>{0, 1});
    CHECK(r2->clusters[0] == std::vector<int>{0, 1});
    CHECK(r2->clusters[1] == std::vector<int>{2});

    const auto b2 = brute_force_fl(small_instance(2), Objective::median());
    REQUIRE(b2.has_value());
    CHECK(b2->cost == 4);
}

TEST_CASE("budget k = m reduces to the nearest-facility sum") {
    std::mt19937_64 rng(6);
    for (int iter = 0; iter < 10; ++iter) {
        const int n = 6, m = 4;
        const auto inst = gen_fl_uniform(n, m, m, 20, rng());
        Cost want = 0;
        for (int p = 0; p < n; ++p) {
            Cost best = kInfCost;
            for (int c = 0; c < m; ++c) best = std::min(best, inst.distance(p, c));
            want += best;
        }
        const auto res = solve_fl(inst, Objective::median());
        REQUIRE(res.has_value());
        CHECK(res->cost == want);
    }
}

TEST_CASE("all-zero distances cost zero for every budget") {
    for (int k = 1; k <= 3; ++k) {
        const FLInstance inst(4, 3, k, std::vector<Cost>(12, 0));
        const auto res = solve_fl(inst, Objective::median());
        REQUIRE(res.has_value());
        CHECK(res->cost == 0);
    }
}

TEST_CASE("solver equals brute force on random instances") {
    std::mt19937_64 rng(20240811);
    for (int iter = 0; iter < 40; ++iter) {
        std::uniform_int_distribution<int> nd(1, 10), md(1, 6);
        const int n = nd(rng), m = md(rng);
        for (int k = 1; k <= m; ++k) {
            const auto inst = gen_fl_uniform(n, m, k, 15, rng());
            const auto obj = (iter % 3 == 0) ? Objective::means() : Objective::median();
            const auto fast = solve_fl(inst, obj);
            const auto slow = brute_force_fl(inst, obj);
            REQUIRE(fast.has_value());
            REQUIRE(slow.has_value());
            CHECK(fast->cost == slow->cost);
            CHECK(evaluate_fl_cost(inst, obj, *fast) == fast->cost);
            CHECK(evaluate_fl_cost(inst, obj, *slow) == slow->cost);
        }
    }
}

TEST_CASE("cost levels are monotone in both directions") {
    std::mt19937_64 rng(8);
    for (int iter = 0; iter < 8; ++iter) {
        const auto inst = gen_fl_uniform(8, 4, 4, 12, rng());
        const auto table = build_cost_table(inst, Objective::median());
        const auto& levels = table.levels;
        for (size_t i = 1; i < levels.size(); ++i)
            for (size_t y = 0; y < levels[i].values.size(); ++y)
                CHECK(levels[i].values[y] <= levels[i - 1].values[y]);
        // Subset monotonicity: dropping a client never raises the cost.
        for (const auto& level : levels)
            for (size_t y = 0; y < level.values.size(); ++y)
                for (int b = 0; b < 8; ++b)
                    if (y & (std::size_t{1} << b))
                        CHECK(level.values[y ^ (std::size_t{1} << b)] <=
                              level.values[y]);
    }
}

TEST_CASE("facility-less instances are infeasible, k=0 is an error") {
    const FLInstance none(2, 0, 1, {});
    CHECK_FALSE(solve_fl(none, Objective::median()).has_value());
    CHECK_FALSE(brute_force_fl(none, Objective::median()).has_value());
    const FLInstance zero_k(2, 2, 0, {1, 2, 3, 4});
    CHECK_THROWS_AS(solve_fl(zero_k, Objective::median()), Error);
    CHECK_THROWS_AS(brute_force_fl(zero_k, Objective::median()), Error);
}

TEST_CASE("capacity rails") {
    CHECK_THROWS_AS(FLInstance(25, 1, 1, std::vector<Cost>(25, 0)), Error);
    SubsetFunction f{17, std::vector<Cost>(std::size_t{1} << 17, 0)};
    CHECK_THROWS_AS(naive_min_sum_convolve(f, f), Error);
}

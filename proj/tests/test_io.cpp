#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "kmexact/generators.hpp"
#include "kmexact/io.hpp"

using namespace kmexact;

TEST_CASE("minimal KMED file") {
    std::istringstream in("KMED 1\n1 1\n0\n");
    const auto parsed = parse_instance(in, "mem");
    const auto& p = std::get<KmedProblem>(parsed);
    CHECK(p.instance.size() == 1);
    CHECK(p.k == 1);
    CHECK(p.instance.symmetric());
}

TEST_CASE("comments and odd whitespace are tolerated") {
    std::istringstream in(
        "# generated for a smoke test\n"
        "KMED 1\n"
        "# n k\n"
        "  2   1\n"
        "0 5\n"
        "# matrix row below\n"
        "5 0\n");
    const auto parsed = parse_instance(in, "mem");
    CHECK(std::get<KmedProblem>(parsed).instance.distance(0, 1) == 5);
}

TEST_CASE("nonzero diagonal is a named parse error") {
    std::istringstream in("KMED 1\n2 1\n1 0\n0 0\n");
    try {
        parse_instance(in, "mem");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("nonzero diagonal at 0") !=
              std::string::npos);
        CHECK(e.kind() == ErrorKind::input);
    }
}

TEST_CASE("asymmetric tables need the ASYM flag") {
    std::istringstream bad("KMED 1\n2 1\n0 2\n3 0\n");
    CHECK_THROWS_AS(parse_instance(bad, "mem"), Error);
    std::istringstream good("KMED 1\n2 1 ASYM\n0 2\n3 0\n");
    const auto parsed = parse_instance(good, "mem");
    CHECK_FALSE(std::get<KmedProblem>(parsed).instance.symmetric());
}

TEST_CASE("parse errors carry the file position") {
    std::istringstream in("KMED 1\n2 1\n0 x\n0 0\n");
    try {
        parse_instance(in, "input.kmed");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("input.kmed:3:3") != std::string::npos);
        CHECK(msg.find("expected an integer") != std::string::npos);
    }
}

TEST_CASE("KMEDFL file parses") {
    std::istringstream in("KMEDFL 1\n2 2 1\n1 3\n3 1\n");
    const auto parsed = parse_instance(in, "mem");
    const auto& inst = std::get<FLInstance>(parsed);
    CHECK(inst.clients() == 2);
    CHECK(inst.facilities() == 2);
    CHECK(inst.budget() == 1);
    CHECK(inst.distance(0, 1) == 3);
}

TEST_CASE("dimension mismatch is caught") {
    std::istringstream in("KMEDFL 1\n2 2 1\n1 3\n3\n");
    CHECK_THROWS_AS(parse_instance(in, "mem"), Error);
    std::istringstream magic("KMEANS 1\n");
    CHECK_THROWS_AS(parse_instance(magic, "mem"), Error);
}

TEST_CASE("graph and setcover files parse") {
    std::istringstream gin("GRAPH 1\n4 3\n0 1\n1 2\n2 3\n");
    const auto g = std::get<SimpleGraph>(parse_instance(gin, "mem"));
    CHECK(g.n == 4);
    CHECK(g.edges.size() == 3);

    std::istringstream sin("SETCOVER 1\n3 2 1\n2 0 1\n1 2\n");
    const auto s = std::get<SetSystem>(parse_instance(sin, "mem"));
    CHECK(s.universe == 3);
    CHECK(s.sets.size() == 2);
    CHECK(s.k == 1);
    CHECK(s.sets[0] == 0b011);
    CHECK(s.sets[1] == 0b100);
}

TEST_CASE("self-loop in a graph file is rejected with a position") {
    std::istringstream in("GRAPH 1\n3 1\n1 1\n");
    CHECK_THROWS_AS(parse_instance(in, "mem"), Error);
}

TEST_CASE("generated files reparse to equal values") {
    std::mt19937_64 rng(20240811);
    for (int iter = 0; iter < 20; ++iter) {
        std::uniform_int_distribution<int> nd(1, 10);
        const int n = nd(rng);

        const auto inst = gen_closure(n, rng());
        std::ostringstream out;
        write_kmed(out, inst, std::max(1, n / 2));
        std::istringstream back(out.str());
        const auto again = std::get<KmedProblem>(parse_instance(back, "mem"));
        CHECK(again.k == std::max(1, n / 2));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(again.instance.distance(i, j) == inst.distance(i, j));

        const auto fl = gen_fl_uniform(n, 4, 2, 30, rng());
        std::ostringstream fout;
        write_kmedfl(fout, fl);
        std::istringstream fback(fout.str());
        const auto fagain = std::get<FLInstance>(parse_instance(fback, "mem"));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 4; ++j)
                CHECK(fagain.distance(i, j) == fl.distance(i, j));

        const auto graph = gen_connected_graph(n, 4, rng());
        std::ostringstream gout;
        write_graph(gout, graph);
        std::istringstream gback(gout.str());
        const auto gagain = std::get<SimpleGraph>(parse_instance(gback, "mem"));
        CHECK(gagain.n == graph.n);
        CHECK(gagain.edges == graph.edges);

        const auto sys = gen_covering_system(n, 4, 2, rng());
        std::ostringstream sout;
        write_setcover(sout, sys);
        std::istringstream sback(sout.str());
        const auto sagain = std::get<SetSystem>(parse_instance(sback, "mem"));
        CHECK(sagain.universe == sys.universe);
        CHECK(sagain.k == sys.k);
        CHECK(sagain.sets == sys.sets);
    }
}

TEST_CASE("format_name names each variant") {
    std::istringstream in("GRAPH 1\n1 0\n");
    CHECK(format_name(parse_instance(in, "mem")) == "GRAPH");
}

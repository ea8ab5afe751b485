// kmexact command-line front end: solve / fl solve / gen / verify / bench,
// plus a hidden `debug match` for matching-module triage.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <thread>

#include "kmexact/exact_solver.hpp"
#include "kmexact/generators.hpp"
#include "kmexact/io.hpp"
#include "kmexact/reductions.hpp"

using namespace kmexact;
using json = nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                                 start)
        .count();
}

Objective objective_from(const std::string& name, int power_z) {
    if (name == "median") return Objective::median();
    if (name == "means") return Objective::means();
    if (name == "center") return Objective::center();
    if (name == "power") return Objective::power(power_z);
    throw_input("unknown objective '" + name + "'");
}

struct Grouped {
    std::vector<int> centers;
    std::vector<std::vector<int>> clusters;
};

// Clusters sorted by center index, members ascending.
Grouped group_clusters(const Clustering& cl) {
    Grouped g;
    std::vector<int> order(cl.centers.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return cl.centers[a] < cl.centers[b]; });
    std::vector<int> position(cl.centers.size());
    for (size_t i = 0; i < order.size(); ++i) position[order[i]] = static_cast<int>(i);
    g.centers.resize(order.size());
    g.clusters.resize(order.size());
    for (size_t i = 0; i < order.size(); ++i) g.centers[i] = cl.centers[order[i]];
    for (size_t p = 0; p < cl.assignment.size(); ++p)
        g.clusters[position[cl.assignment[p]]].push_back(static_cast<int>(p));
    return g;
}

void emit_record(const Grouped& g, Cost cost, const std::string& objective,
                 const std::string& algorithm, std::int64_t elapsed,
                 const std::uint64_t* guesses, bool as_json) {
    if (as_json) {
        json rec;
        rec["cost"] = cost;
        rec["centers"] = g.centers;
        rec["clusters"] = g.clusters;
        rec["objective"] = objective;
        rec["algorithm"] = algorithm;
        if (guesses) rec["guesses_explored"] = *guesses;
        rec["elapsed_ms"] = elapsed;
        std::cout << rec.dump() << '\n';
        return;
    }
    std::cout << "algorithm: " << algorithm << '\n'
              << "objective: " << objective << '\n'
              << "cost: " << cost << '\n';
    for (size_t i = 0; i < g.centers.size(); ++i) {
        std::cout << "cluster[" << g.centers[i] << "]:";
        for (int p : g.clusters[i]) std::cout << ' ' << p;
        std::cout << '\n';
    }
    if (guesses) std::cout << "guesses explored: " << *guesses << '\n';
    std::cout << "elapsed: " << elapsed << " ms\n";
}

std::ostream& open_sink(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw_input("cannot write '" + path + "'");
    return file;
}

// ---------------------------------------------------------------- solve --

struct SolveArgs {
    std::string file;
    std::string algorithm = "matching";
    std::string objective = "median";
    int power_z = 1;
    int k_override = 0;
    int threads = 0;
    bool as_json = false;
    bool no_early_stop = false;
};

int run_solve(const SolveArgs& a) {
    const auto start = Clock::now();
    auto parsed = parse_instance_file(a.file);
    auto* kmed = std::get_if<KmedProblem>(&parsed);
    if (!kmed) throw_input(a.file + " is not a KMED instance");
    const int k = a.k_override > 0 ? a.k_override : kmed->k;
    const Objective obj = objective_from(a.objective, a.power_z);

    Clustering clustering;
    Cost cost = 0;
    std::uint64_t guesses = 0;
    bool have_guesses = false;
    if (a.algorithm == "matching") {
        SolveOptions opt;
        opt.threads = a.threads > 0
                          ? a.threads
                          : static_cast<int>(std::thread::hardware_concurrency());
        opt.early_stop = !a.no_early_stop;
        auto res = solve_exact(kmed->instance, k, obj, opt);
        clustering = std::move(res.clustering);
        cost = res.cost;
        guesses = res.stats.guesses_explored;
        have_guesses = true;
    } else if (a.algorithm == "brute") {
        auto [cl, c] = brute_force_solve(kmed->instance, k, obj);
        clustering = std::move(cl);
        cost = c;
    } else {
        throw_input("unknown algorithm '" + a.algorithm + "'");
    }
    if (evaluate_cost(kmed->instance, clustering, obj) != cost)
        throw_internal("result does not re-evaluate to its own cost");
    emit_record(group_clusters(clustering), cost, obj.name(), a.algorithm,
                ms_since(start), have_guesses ? &guesses : nullptr, a.as_json);
    return 0;
}

// ------------------------------------------------------------- fl solve --

struct FlSolveArgs {
    std::string file;
    std::string algorithm = "conv";
    std::string objective = "median";
    int power_z = 1;
    bool as_json = false;
};

int run_fl_solve(const FlSolveArgs& a) {
    const auto start = Clock::now();
    auto parsed = parse_instance_file(a.file);
    auto* inst = std::get_if<FLInstance>(&parsed);
    if (!inst) throw_input(a.file + " is not a KMEDFL instance");
    const Objective obj = objective_from(a.objective, a.power_z);

    std::optional<FLResult> res;
    if (a.algorithm == "conv")
        res = solve_fl(*inst, obj, true);
    else if (a.algorithm == "naive-conv")
        res = solve_fl(*inst, obj, false);
    else if (a.algorithm == "brute")
        res = brute_force_fl(*inst, obj);
    else
        throw_input("unknown algorithm '" + a.algorithm + "'");
    if (!res) {
        std::cerr << "infeasible: no facility can serve the clients\n";
        return 2;
    }
    if (evaluate_fl_cost(*inst, obj, *res) != res->cost)
        throw_internal("result does not re-evaluate to its own cost");
    Grouped g{res->centers, res->clusters};
    emit_record(g, res->cost, obj.name(), a.algorithm, ms_since(start), nullptr,
                a.as_json);
    return 0;
}

// ------------------------------------------------------------------ gen --

struct GenCommon {
    std::string out;
};

int run_gen_domset(const std::string& graph_file, int k, const GenCommon& c) {
    auto parsed = parse_instance_file(graph_file);
    auto* g = std::get_if<SimpleGraph>(&parsed);
    if (!g) throw_input(graph_file + " is not a GRAPH instance");
    if (k < 1 || k > g->n) throw_input("k must be in [1, n]");
    const MetricInstance inst = domset_to_kmedian(*g);
    std::ofstream file;
    write_kmed(open_sink(c.out, file), inst, k);
    return 0;
}

int run_gen_setcover(const std::string& sc_file, const GenCommon& c) {
    auto parsed = parse_instance_file(sc_file);
    auto* s = std::get_if<SetSystem>(&parsed);
    if (!s) throw_input(sc_file + " is not a SETCOVER instance");
    const FLInstance inst = setcover_to_fl(*s);
    std::ofstream file;
    write_kmedfl(open_sink(c.out, file), inst);
    return 0;
}

int run_gen_random(const std::string& model, int n, int k, std::uint64_t seed,
                   int extent, Cost max_weight, const GenCommon& c) {
    if (k < 1 || k > n) throw_input("k must be in [1, n]");
    MetricInstance inst = model == "grid-l1"
                              ? gen_grid_l1(n, seed, extent)
                              : gen_closure(n, seed, max_weight);
    std::ofstream file;
    write_kmed(open_sink(c.out, file), inst, k);
    return 0;
}

int run_gen_random_fl(int n, int m, int k, Cost max_dist, std::uint64_t seed,
                      const GenCommon& c) {
    if (k < 1 || k > m) throw_input("k must be in [1, m]");
    const FLInstance inst = gen_fl_uniform(n, m, k, max_dist, seed);
    std::ofstream file;
    write_kmedfl(open_sink(c.out, file), inst);
    return 0;
}

// --------------------------------------------------------------- verify --

int g_verify_failures = 0;

void verdict(const std::string& what, bool ok) {
    std::cout << (ok ? "PASS " : "FAIL ") << what << '\n';
    if (!ok) ++g_verify_failures;
}

void skip(const std::string& what, const std::string& why) {
    std::cout << "SKIP " << what << " (" << why << ")\n";
}

void verify_kmed(const KmedProblem& p) {
    verdict("instance invariants", validate_instance(p.instance,
                                                     p.instance.symmetric())
                                       .empty());
    const int n = p.instance.size();
    for (const auto& obj : {Objective::median(), Objective::means()}) {
        if (n > 16) {
            skip("matching vs brute (" + obj.name() + ")", "n > 16");
            continue;
        }
        SolveOptions opt;
        opt.early_stop = false;
        const auto fast = solve_exact(p.instance, p.k, obj, opt);
        const auto [cl, want] = brute_force_solve(p.instance, p.k, obj);
        verdict("matching vs brute (" + obj.name() + ")", fast.cost == want);
        verdict("result re-evaluates (" + obj.name() + ")",
                evaluate_cost(p.instance, fast.clustering, obj) == fast.cost);
    }
    if (n > 10) {
        skip("per-guess matching lemmas", "n > 10");
        return;
    }
    bool feasible = true, weights_match = true;
    GuessEnumerator en(n, p.k);
    while (auto g = en.next()) {
        const auto aux = build_auxiliary_graph(p.instance, *g, Objective::median());
        auto m = min_weight_perfect_matching(aux.graph);
        if (!m) {
            feasible = false;
            continue;
        }
        const auto cl = decode_matching(p.instance, *g, aux, *m, Objective::median());
        if (evaluate_cost(p.instance, cl, Objective::median()) != m->total_weight)
            weights_match = false;
    }
    verdict("every guess graph has a perfect matching", feasible);
    verdict("decoded cost equals matching weight", weights_match);
}

void verify_kmedfl(const FLInstance& inst) {
    const auto fast = solve_fl(inst, Objective::median(), true);
    if (!fast) {
        verdict("fast solver feasibility", false);
        return;
    }
    verdict("witness re-evaluates",
            evaluate_fl_cost(inst, Objective::median(), *fast) == fast->cost);
    if (inst.clients() <= 16) {
        const auto naive = solve_fl(inst, Objective::median(), false);
        verdict("fast vs naive convolution", naive && naive->cost == fast->cost);
    } else {
        skip("fast vs naive convolution", "n > 16");
    }
    unsigned __int128 combos = 1;
    bool brute_ok = true;
    for (int i = 1; i <= std::min(inst.budget(), inst.facilities()); ++i)
        combos = combos * static_cast<unsigned>(inst.facilities() - i + 1) / i;
    if (combos <= 10'000'000) {
        const auto brute = brute_force_fl(inst, Objective::median());
        brute_ok = brute && brute->cost == fast->cost;
        verdict("conv vs brute", brute_ok);
    } else {
        skip("conv vs brute", "C(m,k) too large");
    }
}

void verify_graph(const SimpleGraph& g, int k_flag) {
    if (g.n > 9) {
        skip("domination property", "n > 9");
        return;
    }
    const int lo = k_flag > 0 ? k_flag : 1;
    const int hi = k_flag > 0 ? k_flag : g.n;
    for (int k = lo; k <= hi; ++k)
        verdict("domination iff at k=" + std::to_string(k),
                check_domset_property(g, k).holds);
}

void verify_setcover(const SetSystem& s) {
    if (s.universe > 12 || s.sets.size() > 8) {
        skip("set-cover property", "beyond brute-force caps");
        return;
    }
    verdict("set-cover iff", check_setcover_property(s).holds);
}

int run_verify(const std::string& file, int k_flag) {
    auto parsed = parse_instance_file(file);
    g_verify_failures = 0;
    if (auto* p = std::get_if<KmedProblem>(&parsed))
        verify_kmed(*p);
    else if (auto* f = std::get_if<FLInstance>(&parsed))
        verify_kmedfl(*f);
    else if (auto* g = std::get_if<SimpleGraph>(&parsed))
        verify_graph(*g, k_flag);
    else
        verify_setcover(std::get<SetSystem>(parsed));
    return g_verify_failures == 0 ? 0 : 3;
}

// ---------------------------------------------------------------- bench --

long double guess_bound(int n, int k) {
    long double sum = 0, c = 1;
    for (int i = 0; i <= n / 3; ++i) {
        sum += c;
        c = c * (n - i) / (i + 1);
    }
    return static_cast<long double>(k + 1) * (k + 1) * sum;
}

std::uint64_t binom(int n, int r) {
    unsigned __int128 acc = 1;
    for (int i = 1; i <= r; ++i)
        acc = acc * static_cast<unsigned>(n - r + i) / static_cast<unsigned>(i);
    return static_cast<std::uint64_t>(acc);
}

int run_bench(int max_n, std::uint64_t seed, int threads, const std::string& out) {
    std::ofstream file;
    std::ostream& csv = open_sink(out, file);
    csv << "n,k,algorithm,elapsed_ms,guesses_explored,cost\n";

    for (int n = 6; n <= std::min(max_n, 16); n += 2) {
        const MetricInstance inst = gen_grid_l1(n, seed + n);
        std::vector<int> ks{2, std::max(2, n / 3), n / 2};
        std::sort(ks.begin(), ks.end());
        ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
        for (int k : ks) {
            SolveOptions opt;
            opt.threads = threads > 0
                              ? threads
                              : static_cast<int>(std::thread::hardware_concurrency());
            opt.early_stop = false;  // keep guesses_explored == count_guesses
            auto t0 = Clock::now();
            const auto res = solve_exact(inst, k, Objective::median(), opt);
            csv << n << ',' << k << ",matching," << ms_since(t0) << ','
                << res.stats.guesses_explored << ',' << res.cost << '\n';
            if (res.stats.guesses_explored != count_guesses(n, k))
                throw_internal("bench explored a different number of guesses");
            std::cerr << "matching n=" << n << " k=" << k
                      << " guesses=" << res.stats.guesses_explored << " bound="
                      << static_cast<double>(guess_bound(n, k))
                      << (static_cast<long double>(res.stats.guesses_explored) <=
                                  guess_bound(n, k)
                              ? " ok"
                              : " OVER")
                      << '\n';

            t0 = Clock::now();
            const auto [cl, cost] = brute_force_solve(inst, k, Objective::median());
            (void)cl;
            csv << n << ',' << k << ",brute," << ms_since(t0) << ','
                << binom(n, k) << ',' << cost << '\n';
            if (cost != res.cost) throw_internal("bench solvers disagree");
        }
    }

    for (int n = 6; n <= std::min(max_n, 20); n += 2) {
        // Larger n -> smaller weights, keeping the value embedding in budget.
        const Cost max_d = n <= 12 ? 8 : (n <= 16 ? 4 : (n <= 18 ? 2 : 1));
        const int m = 5, k = 3;
        const FLInstance inst = gen_fl_uniform(n, m, k, max_d, seed + 100 + n);
        auto t0 = Clock::now();
        const auto conv = solve_fl(inst, Objective::median(), true);
        csv << n << ',' << k << ",conv," << ms_since(t0) << ",0," << conv->cost
            << '\n';
        if (n <= 16) {
            t0 = Clock::now();
            const auto naive = solve_fl(inst, Objective::median(), false);
            csv << n << ',' << k << ",naive-conv," << ms_since(t0) << ",0,"
                << naive->cost << '\n';
            if (naive->cost != conv->cost)
                throw_internal("bench convolutions disagree");
        }
        t0 = Clock::now();
        const auto brute = brute_force_fl(inst, Objective::median());
        csv << n << ',' << k << ",brute-fl," << ms_since(t0) << ",0,"
            << brute->cost << '\n';
        if (brute->cost != conv->cost) throw_internal("bench fl solvers disagree");
        std::cerr << "fl n=" << n << " k=" << k << " ok\n";
    }
    return 0;
}

// ---------------------------------------------------------- debug match --

int run_debug_match(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw_input("cannot open '" + file + "'");
    int v = 0;
    long long m = 0;
    if (!(in >> v >> m)) throw_input("expected 'v m' header");
    WeightedGraph g(v);
    for (long long i = 0; i < m; ++i) {
        int a = 0, b = 0;
        long long w = 0;
        if (!(in >> a >> b >> w)) throw_input("expected 'u v w' edge line");
        g.add_edge(a, b, w);
    }
    const auto matched = min_weight_perfect_matching(g);
    if (!matched) {
        std::cout << "INFEASIBLE\n";
        return 2;
    }
    std::cout << "weight " << matched->total_weight << '\n';
    for (int idx : matched->edge_indices) {
        const auto& e = g.edges()[idx];
        std::cout << e.u << ' ' << e.v << ' ' << e.weight << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact k-median / k-means clustering solvers"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "solve a KMED instance exactly");
    solve->add_option("file", solve_args.file)->required();
    solve->add_option("--algorithm", solve_args.algorithm)
        ->check(CLI::IsMember({"matching", "brute"}));
    solve->add_option("--objective", solve_args.objective)
        ->check(CLI::IsMember({"median", "means", "power", "center"}));
    solve->add_option("--power", solve_args.power_z, "z for --objective power");
    solve->add_option("--k", solve_args.k_override, "override the file's k");
    solve->add_option("--threads", solve_args.threads);
    solve->add_flag("--json", solve_args.as_json);
    solve->add_flag("--no-early-stop", solve_args.no_early_stop);

    FlSolveArgs fl_args;
    auto* fl = app.add_subcommand("fl", "facility-location (supplier) variant");
    auto* fl_solve_cmd = fl->add_subcommand("solve", "solve a KMEDFL instance");
    fl_solve_cmd->add_option("file", fl_args.file)->required();
    fl_solve_cmd->add_option("--algorithm", fl_args.algorithm)
        ->check(CLI::IsMember({"conv", "naive-conv", "brute"}));
    fl_solve_cmd->add_option("--objective", fl_args.objective)
        ->check(CLI::IsMember({"median", "means", "power"}));
    fl_solve_cmd->add_option("--power", fl_args.power_z);
    fl_solve_cmd->add_flag("--json", fl_args.as_json);

    auto* gen = app.add_subcommand("gen", "instance generators");
    GenCommon gen_common;
    std::string gen_graph_file, gen_sc_file, gen_model = "grid-l1";
    int gen_k = 1, gen_n = 8, gen_m = 4, gen_extent = 32;
    Cost gen_max_weight = 50, gen_max_dist = 20;
    std::uint64_t gen_seed = 1;

    auto* gd = gen->add_subcommand("domset", "dominating-set hardness instance");
    gd->add_option("graph", gen_graph_file)->required();
    gd->add_option("--k", gen_k)->required();
    gd->add_option("-o,--out", gen_common.out);

    auto* gs = gen->add_subcommand("setcover", "set-cover hardness instance");
    gs->add_option("system", gen_sc_file)->required();
    gs->add_option("-o,--out", gen_common.out);

    auto* gr = gen->add_subcommand("random", "random KMED instance");
    gr->add_option("--model", gen_model)->check(CLI::IsMember({"grid-l1", "closure"}));
    gr->add_option("--n", gen_n)->required();
    gr->add_option("--k", gen_k)->required();
    gr->add_option("--seed", gen_seed);
    gr->add_option("--extent", gen_extent);
    gr->add_option("--max-weight", gen_max_weight);
    gr->add_option("-o,--out", gen_common.out);

    auto* gf = gen->add_subcommand("random-fl", "random KMEDFL instance");
    gf->add_option("--n", gen_n)->required();
    gf->add_option("--m", gen_m)->required();
    gf->add_option("--k", gen_k)->required();
    gf->add_option("--max-dist", gen_max_dist);
    gf->add_option("--seed", gen_seed);
    gf->add_option("-o,--out", gen_common.out);

    std::string verify_file;
    int verify_k = 0;
    auto* verify = app.add_subcommand("verify", "cross-oracle checks on one instance");
    verify->add_option("file", verify_file)->required();
    verify->add_option("--k", verify_k);

    int bench_max_n = 20, bench_threads = 0;
    std::uint64_t bench_seed = 20240811;
    std::string bench_out;
    auto* bench = app.add_subcommand("bench", "built-in scaling suite, CSV output");
    bench->add_option("--max-n", bench_max_n);
    bench->add_option("--seed", bench_seed);
    bench->add_option("--threads", bench_threads);
    bench->add_option("-o,--out", bench_out);

    std::string debug_file;
    auto* debug = app.add_subcommand("debug")->group("");  // hidden
    auto* debug_match = debug->add_subcommand("match");
    debug_match->add_option("file", debug_file)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) return run_solve(solve_args);
        if (*fl_solve_cmd) return run_fl_solve(fl_args);
        if (*gd) return run_gen_domset(gen_graph_file, gen_k, gen_common);
        if (*gs) return run_gen_setcover(gen_sc_file, gen_common);
        if (*gr)
            return run_gen_random(gen_model, gen_n, gen_k, gen_seed, gen_extent,
                                  gen_max_weight, gen_common);
        if (*gf)
            return run_gen_random_fl(gen_n, gen_m, gen_k, gen_max_dist, gen_seed,
                                     gen_common);
        if (*verify) return run_verify(verify_file, verify_k);
        if (*bench) return run_bench(bench_max_n, bench_seed, bench_threads, bench_out);
        if (*debug_match) return run_debug_match(debug_file);
        std::cerr << app.help();
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        switch (e.kind()) {
            case ErrorKind::input: return 1;
            case ErrorKind::capacity: return 2;
            case ErrorKind::internal: return 3;
        }
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}

#include "kmexact/io.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace kmexact {

namespace {

// Whitespace-separated token reader that tracks line/column for messages
// and skips full-line '#' comments.
class TokenReader {
public:
    TokenReader(std::istream& in, std::string name)
        : in_(in), name_(std::move(name)) {}

    std::string next_token() {
        for (;;) {
            if (pos_ >= line_.size()) {
                if (!std::getline(in_, line_)) fail("unexpected end of file");
                ++line_no_;
                pos_ = 0;
                continue;
            }
            while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_])))
                ++pos_;
            if (pos_ >= line_.size()) continue;
            if (line_[pos_] == '#') {  // comment: rest of the line
                pos_ = line_.size();
                continue;
            }
            const size_t start = pos_;
            while (pos_ < line_.size() &&
                   !std::isspace(static_cast<unsigned char>(line_[pos_])))
                ++pos_;
            token_col_ = start + 1;
            return line_.substr(start, pos_ - start);
        }
    }

    long long next_int(const char* what, long long lo, long long hi) {
        const std::string tok = next_token();
        long long value = 0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
            fail(std::string("expected an integer for ") + what + ", got '" + tok + "'");
        if (value < lo || value > hi)
            fail(std::string(what) + " = " + tok + " is out of range [" +
                 std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return value;
    }

    bool peek_token(std::string* out) {
        // Only peeks within the current line (enough for the ASYM flag).
        size_t p = pos_;
        while (p < line_.size() && std::isspace(static_cast<unsigned char>(line_[p]))) ++p;
        if (p >= line_.size() || line_[p] == '#') return false;
        size_t start = p;
        while (p < line_.size() && !std::isspace(static_cast<unsigned char>(line_[p]))) ++p;
        *out = line_.substr(start, p - start);
        pos_ = p;
        return true;
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw_input(name_ + ":" + std::to_string(line_no_) + ":" +
                    std::to_string(token_col_) + ": " + msg);
    }

private:
    std::istream& in_;
    std::string name_;
    std::string line_;
    size_t pos_ = 0;
    size_t line_no_ = 0;
    size_t token_col_ = 0;
};

ParsedInput parse_kmed(TokenReader& r) {
    const int n = static_cast<int>(r.next_int("n", 1, kMaxPoints));
    const int k = static_cast<int>(r.next_int("k", 1, n));
    std::string flag;
    bool symmetric = true;
    if (r.peek_token(&flag)) {
        if (flag == "ASYM")
            symmetric = false;
        else
            r.fail("unexpected token '" + flag + "' after k (only ASYM is valid)");
    }
    std::vector<Cost> flat;
    flat.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            flat.push_back(r.next_int("distance", 0, kMaxDistanceEntry));
    MetricInstance inst(n, std::move(flat), symmetric);
    const auto violations = validate_instance(inst, symmetric);
    if (!violations.empty()) r.fail("invalid distance table: " + violations.front());
    return KmedProblem{std::move(inst), k};
}

ParsedInput parse_kmedfl(TokenReader& r) {
    const int n = static_cast<int>(r.next_int("n", 1, kMaxClients));
    const int m = static_cast<int>(r.next_int("m", 1, 4096));
    const int k = static_cast<int>(r.next_int("k", 1, m));
    std::vector<Cost> flat;
    flat.reserve(static_cast<size_t>(n) * m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            flat.push_back(r.next_int("distance", 0, kMaxDistanceEntry));
    return FLInstance(n, m, k, std::move(flat));
}

ParsedInput parse_graph(TokenReader& r) {
    const int n = static_cast<int>(r.next_int("n", 1, kMaxPoints));
    const int m = static_cast<int>(r.next_int("m", 0, n * (n - 1) / 2));
    SimpleGraph g;
    g.n = n;
    for (int e = 0; e < m; ++e) {
        const int u = static_cast<int>(r.next_int("u", 0, n - 1));
        const int v = static_cast<int>(r.next_int("v", 0, n - 1));
        try {
            g.add_edge(u, v);
        } catch (const Error& err) {
            r.fail(err.what());
        }
    }
    return g;
}

ParsedInput parse_setcover(TokenReader& r) {
    const int n = static_cast<int>(r.next_int("n", 1, kMaxClients));
    const int m = static_cast<int>(r.next_int("m", 1, 63));
    const int k = static_cast<int>(r.next_int("k", 1, m));
    SetSystem s;
    s.universe = n;
    s.k = k;
    for (int j = 0; j < m; ++j) {
        const int size = static_cast<int>(r.next_int("set size", 1, n));
        std::uint64_t mask = 0;
        for (int t = 0; t < size; ++t) {
            const int e = static_cast<int>(r.next_int("element", 0, n - 1));
            mask |= std::uint64_t{1} << e;
        }
        s.sets.push_back(mask);
    }
    return s;
}

}  // namespace

ParsedInput parse_instance(std::istream& in, const std::string& source_name) {
    TokenReader r(in, source_name);
    const std::string magic = r.next_token();
    const long long version = r.next_int("format version", 1, 1);
    (void)version;
    if (magic == "KMED") return parse_kmed(r);
    if (magic == "KMEDFL") return parse_kmedfl(r);
    if (magic == "GRAPH") return parse_graph(r);
    if (magic == "SETCOVER") return parse_setcover(r);
    r.fail("unrecognized magic '" + magic + "'");
}

ParsedInput parse_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_input("cannot open '" + path + "'");
    return parse_instance(in, path);
}

void write_kmed(std::ostream& out, const MetricInstance& inst, int k) {
    out << "KMED 1\n" << inst.size() << ' ' << k;
    if (!inst.symmetric()) out << " ASYM";
    out << '\n';
    for (int i = 0; i < inst.size(); ++i) {
        for (int j = 0; j < inst.size(); ++j) {
            if (j) out << ' ';
            out << inst.distance(i, j);
        }
        out << '\n';
    }
}

void write_kmedfl(std::ostream& out, const FLInstance& inst) {
    out << "KMEDFL 1\n"
        << inst.clients() << ' ' << inst.facilities() << ' ' << inst.budget()
        << '\n';
    for (int i = 0; i < inst.clients(); ++i) {
        for (int j = 0; j < inst.facilities(); ++j) {
            if (j) out << ' ';
            out << inst.distance(i, j);
        }
        out << '\n';
    }
}

void write_graph(std::ostream& out, const SimpleGraph& g) {
    out << "GRAPH 1\n" << g.n << ' ' << g.edges.size() << '\n';
    for (const auto& [u, v] : g.edges) out << u << ' ' << v << '\n';
}

void write_setcover(std::ostream& out, const SetSystem& s) {
    out << "SETCOVER 1\n"
        << s.universe << ' ' << s.sets.size() << ' ' << s.k << '\n';
    for (const auto& set : s.sets) {
        out << std::popcount(set);
        for (int e = 0; e < 64; ++e)
            if (set >> e & 1) out << ' ' << e;
        out << '\n';
    }
}

std::string format_name(const ParsedInput& input) {
    if (std::holds_alternative<KmedProblem>(input)) return "KMED";
    if (std::holds_alternative<FLInstance>(input)) return "KMEDFL";
    if (std::holds_alternative<SimpleGraph>(input)) return "GRAPH";
    return "SETCOVER";
}

}  // namespace kmexact

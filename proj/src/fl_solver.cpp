#include "kmexact/fl_solver.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace kmexact {

namespace {

// Fast-convolution working set must stay addressable on a desk machine.
constexpr std::size_t kConvolveByteBudget = std::size_t{3} << 30;

std::vector<Cost> powered_table(const FLInstance& inst, const Objective& obj) {
    if (!obj.is_sum())
        throw_input("facility-location solvers handle sum objectives only");
    std::vector<Cost> pd(static_cast<size_t>(inst.clients()) * inst.facilities());
    Cost max_pow = 0;
    for (int p = 0; p < inst.clients(); ++p)
        for (int c = 0; c < inst.facilities(); ++c) {
            Cost v = inst.distance(p, c);
            if (obj.exponent() > 1 && v > 1) v = checked_pow(v, obj.exponent());
            pd[static_cast<size_t>(p) * inst.facilities() + c] = v;
            max_pow = std::max(max_pow, v);
        }
    checked_mul(max_pow, inst.clients());  // M = n*D must fit 64 bits
    return pd;
}

}  // namespace

FLInstance::FLInstance(int clients, int facilities, int k, std::vector<Cost> dist)
    : n_(clients), m_(facilities), k_(k), dist_(std::move(dist)) {
    if (clients < 1) throw_input("instance needs at least one client");
    if (clients > kMaxClients)
        throw_capacity("instance has " + std::to_string(clients) +
                       " clients, cap is " + std::to_string(kMaxClients));
    if (facilities < 0) throw_input("negative facility count");
    if (dist_.size() != static_cast<size_t>(n_) * m_)
        throw_input("client-facility table size mismatch");
    for (Cost d : dist_) {
        if (d < 0) throw_input("negative client-facility distance");
        if (d > kMaxDistanceEntry)
            throw_input("client-facility distance exceeds 2^40");
    }
}

Cost FLInstance::max_distance() const {
    Cost m = 0;
    for (Cost d : dist_) m = std::max(m, d);
    return m;
}

SubsetFunction SubsetFunction::constant(int n, Cost value) {
    SubsetFunction f;
    f.n = n;
    f.values.assign(std::size_t{1} << n, value);
    return f;
}

SubsetFunction SubsetFunction::indicator_empty(int n) {
    SubsetFunction f = constant(n, kInfCost);
    f.values[0] = 0;
    return f;
}

SubsetFunction compute_cost1(const FLInstance& inst, const Objective& obj) {
    const int n = inst.clients();
    const std::vector<Cost> pd = powered_table(inst, obj);
    const std::size_t masks = std::size_t{1} << n;

    SubsetFunction cost1;
    cost1.n = n;
    cost1.values.assign(masks, kInfCost);
    cost1.values[0] = 0;

    std::vector<Cost> sums(masks);
    for (int c = 0; c < inst.facilities(); ++c) {
        sums[0] = 0;
        for (std::size_t mask = 1; mask < masks; ++mask) {
            const int p = std::countr_zero(mask);
            sums[mask] = sums[mask & (mask - 1)] +
                         pd[static_cast<size_t>(p) * inst.facilities() + c];
            if (sums[mask] < cost1.values[mask]) cost1.values[mask] = sums[mask];
        }
    }
    return cost1;
}

namespace {

void check_same_shape(const SubsetFunction& f, const SubsetFunction& g) {
    if (f.n != g.n) throw_input("convolution operands have different ground sets");
    if (f.n < 0 || f.n > kMaxClients)
        throw_capacity("subset functions are capped at " +
                       std::to_string(kMaxClients) + " elements");
    const std::size_t want = std::size_t{1} << f.n;
    if (f.values.size() != want || g.values.size() != want)
        throw_input("subset function has wrong table size");
}

// Largest finite value per subset size; -1 marks an empty rank. These are
// the exact polynomial degrees the embedding needs, so nothing gets
// truncated away.
std::vector<long long> rank_caps(const SubsetFunction& f) {
    std::vector<long long> caps(f.n + 1, -1);
    for (std::size_t mask = 0; mask < f.values.size(); ++mask) {
        const Cost v = f.values[mask];
        if (v == kInfCost) continue;
        if (v < 0) throw_input("subset function values must be nonnegative");
        const int r = std::popcount(mask);
        caps[r] = std::max(caps[r], static_cast<long long>(v));
    }
    return caps;
}

// One-hot value arrays per rank, zeta-transformed in place. Counts live in
// uint32 wraparound arithmetic: every surviving coefficient is an exact
// split count below 2^n <= 2^24, so zero tests are exact.
struct RankedEmbedding {
    std::vector<std::vector<std::uint32_t>> layer;  // [rank] -> masks * width
    std::vector<long long> caps;

    std::size_t width(int r) const {
        return static_cast<std::size_t>(caps[r]) + 1;
    }
};

RankedEmbedding embed_and_zeta(const SubsetFunction& f,
                               const std::vector<long long>& caps) {
    const int n = f.n;
    const std::size_t masks = std::size_t{1} << n;
    RankedEmbedding out;
    out.caps = caps;
    out.layer.resize(n + 1);
    for (int r = 0; r <= n; ++r) {
        if (caps[r] < 0) continue;
        out.layer[r].assign(masks * out.width(r), 0);
    }
    for (std::size_t mask = 0; mask < masks; ++mask) {
        const Cost v = f.values[mask];
        if (v == kInfCost) continue;
        const int r = std::popcount(mask);
        out.layer[r][mask * out.width(r) + static_cast<std::size_t>(v)] = 1;
    }
    for (int r = 0; r <= n; ++r) {
        if (caps[r] < 0) continue;
        auto& data = out.layer[r];
        const std::size_t w = out.width(r);
        for (int bit = 0; bit < n; ++bit) {
            const std::size_t step = std::size_t{1} << bit;
            for (std::size_t mask = 0; mask < masks; ++mask)
                if (mask & step) {
                    std::uint32_t* dst = data.data() + mask * w;
                    const std::uint32_t* src = data.data() + (mask ^ step) * w;
                    for (std::size_t i = 0; i < w; ++i) dst[i] += src[i];
                }
        }
    }
    return out;
}

}  // namespace

SubsetFunction min_sum_convolve(const SubsetFunction& f, const SubsetFunction& g) {
    check_same_shape(f, g);
    const int n = f.n;
    const std::size_t masks = std::size_t{1} << n;

    const std::vector<long long> capf = rank_caps(f);
    const std::vector<long long> capg = rank_caps(g);

    std::size_t bytes = 0;
    std::size_t max_h_width = 0;
    for (int r = 0; r <= n; ++r) {
        if (capf[r] >= 0) bytes += masks * (capf[r] + 1) * sizeof(std::uint32_t);
        if (capg[r] >= 0) bytes += masks * (capg[r] + 1) * sizeof(std::uint32_t);
    }
    for (int r = 0; r <= n; ++r) {
        long long deg = -1;
        for (int i = std::max(0, r - n); i <= std::min(r, n); ++i)
            if (capf[i] >= 0 && capg[r - i] >= 0)
                deg = std::max(deg, capf[i] + capg[r - i]);
        if (deg >= 0) max_h_width = std::max(max_h_width, static_cast<std::size_t>(deg) + 1);
    }
    bytes += masks * max_h_width * sizeof(std::uint32_t);
    if (bytes > kConvolveByteBudget)
        throw_capacity("value embedding needs " + std::to_string(bytes >> 20) +
                       " MiB, over the fast-convolution budget");

    const RankedEmbedding fe = embed_and_zeta(f, capf);
    const RankedEmbedding ge = embed_and_zeta(g, capg);

    std::vector<std::uint8_t> popcnt(masks);
    for (std::size_t mask = 1; mask < masks; ++mask)
        popcnt[mask] = popcnt[mask >> 1] + (mask & 1);

    SubsetFunction h;
    h.n = n;
    h.values.assign(masks, kInfCost);

    std::vector<std::uint32_t> acc;
    for (int r = 0; r <= n; ++r) {
        long long deg = -1;
        for (int i = std::max(0, r - n); i <= std::min(r, n); ++i)
            if (capf[i] >= 0 && capg[r - i] >= 0)
                deg = std::max(deg, capf[i] + capg[r - i]);
        if (deg < 0) continue;
        const std::size_t w = static_cast<std::size_t>(deg) + 1;
        acc.assign(masks * w, 0);

        for (int i = std::max(0, r - n); i <= std::min(r, n); ++i) {
            const int j = r - i;
            if (capf[i] < 0 || capg[j] < 0) continue;
            const std::size_t wf = fe.width(i);
            const std::size_t wg = ge.width(j);
            const int need = std::max(i, j);
            for (std::size_t mask = 0; mask < masks; ++mask) {
                if (popcnt[mask] < need) continue;  // no subsets of that size
                const std::uint32_t* fp = fe.layer[i].data() + mask * wf;
                const std::uint32_t* gp = ge.layer[j].data() + mask * wg;
                std::uint32_t* hp = acc.data() + mask * w;
                for (std::size_t a = 0; a < wf; ++a) {
                    const std::uint32_t fa = fp[a];
                    if (!fa) continue;
                    for (std::size_t b = 0; b < wg; ++b) hp[a + b] += fa * gp[b];
                }
            }
        }

        // Moebius inversion, then read the cheapest surviving value off the
        // masks of exactly this size.
        for (int bit = 0; bit < n; ++bit) {
            const std::size_t step = std::size_t{1} << bit;
            for (std::size_t mask = 0; mask < masks; ++mask)
                if (mask & step) {
                    std::uint32_t* dst = acc.data() + mask * w;
                    const std::uint32_t* src = acc.data() + (mask ^ step) * w;
                    for (std::size_t i = 0; i < w; ++i) dst[i] -= src[i];
                }
        }
        for (std::size_t mask = 0; mask < masks; ++mask) {
            if (popcnt[mask] != r) continue;
            const std::uint32_t* hp = acc.data() + mask * w;
            for (std::size_t v = 0; v < w; ++v)
                if (hp[v]) {
                    h.values[mask] = static_cast<Cost>(v);
                    break;
                }
        }
    }
    return h;
}

SubsetFunction naive_min_sum_convolve(const SubsetFunction& f,
                                      const SubsetFunction& g) {
    check_same_shape(f, g);
    if (f.n > 16) throw_capacity("naive convolution is capped at 16 elements");
    const std::size_t masks = std::size_t{1} << f.n;
    SubsetFunction h;
    h.n = f.n;
    h.values.assign(masks, kInfCost);
    for (std::size_t y = 0; y < masks; ++y) {
        Cost best = kInfCost;
        std::size_t a = y;
        for (;;) {  // all submasks of y, including y and 0
            const Cost fa = f.values[a];
            const Cost gb = g.values[y ^ a];
            if (fa != kInfCost && gb != kInfCost) {
                Cost sum;
                if (__builtin_add_overflow(fa, gb, &sum))
                    throw_capacity("split cost overflows 64 bits");
                best = std::min(best, sum);
            }
            if (a == 0) break;
            a = (a - 1) & y;
        }
        h.values[y] = best;
    }
    return h;
}

CostTable build_cost_table(const FLInstance& inst, const Objective& obj,
                           bool use_fast_convolution) {
    CostTable table;
    table.levels.push_back(compute_cost1(inst, obj));
    // cost_i stabilises once i reaches the client count; later levels are
    // copies and need no convolution.
    const int top = std::min(inst.budget(), inst.clients());
    for (int i = 2; i <= top; ++i) {
        const SubsetFunction& prev = table.levels.back();
        table.levels.push_back(use_fast_convolution
                                   ? min_sum_convolve(prev, table.levels[0])
                                   : naive_min_sum_convolve(prev, table.levels[0]));
    }
    return table;
}

namespace {

int best_facility_for(const FLInstance& inst, const std::vector<Cost>& pd,
                      std::uint32_t members, Cost* cost_out) {
    int best = -1;
    Cost best_cost = kInfCost;
    for (int c = 0; c < inst.facilities(); ++c) {
        Cost sum = 0;
        for (std::uint32_t m = members; m; m &= m - 1)
            sum += pd[static_cast<size_t>(std::countr_zero(m)) * inst.facilities() + c];
        if (sum < best_cost) {
            best_cost = sum;
            best = c;
        }
    }
    if (cost_out) *cost_out = best_cost;
    return best;
}

FLResult assemble_result(const FLInstance& inst, const std::vector<Cost>& pd,
                         std::vector<std::uint32_t> cluster_masks, Cost total) {
    struct Entry {
        int facility;
        std::uint32_t mask;
    };
    std::vector<Entry> entries;
    for (std::uint32_t mask : cluster_masks) {
        if (!mask) continue;
        entries.push_back({best_facility_for(inst, pd, mask, nullptr), mask});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.facility != b.facility) return a.facility < b.facility;
        return a.mask < b.mask;
    });
    FLResult res;
    res.cost = total;
    for (const auto& e : entries) {
        res.centers.push_back(e.facility);
        std::vector<int> members;
        for (std::uint32_t m = e.mask; m; m &= m - 1)
            members.push_back(std::countr_zero(m));
        res.clusters.push_back(std::move(members));
    }
    return res;
}

}  // namespace

std::optional<FLResult> solve_fl(const FLInstance& inst, const Objective& obj,
                                 bool use_fast_convolution) {
    if (inst.budget() < 1) throw_input("facility budget k must be >= 1");
    if (inst.facilities() == 0) return std::nullopt;

    const std::vector<Cost> pd = powered_table(inst, obj);
    const CostTable table = build_cost_table(inst, obj, use_fast_convolution);
    const int levels = static_cast<int>(table.levels.size());
    const std::uint32_t full =
        static_cast<std::uint32_t>((std::size_t{1} << inst.clients()) - 1);

    const Cost opt = table.levels[levels - 1].values[full];
    if (opt == kInfCost) return std::nullopt;

    // Backtrack one cluster per level, scanning submasks in decreasing
    // bitmask order; the first split that reproduces the table value wins.
    std::vector<std::uint32_t> cluster_masks;
    std::uint32_t remaining = full;
    for (int i = levels; i >= 2 && remaining; --i) {
        const Cost want = table.levels[i - 1].values[remaining];
        bool found = false;
        std::uint32_t b = remaining;
        for (;;) {
            const Cost rest = table.levels[i - 2].values[remaining ^ b];
            const Cost own = table.levels[0].values[b];
            if (rest != kInfCost && own != kInfCost && rest + own == want) {
                cluster_masks.push_back(b);
                remaining ^= b;
                found = true;
                break;
            }
            if (b == 0) break;
            b = (b - 1) & remaining;
        }
        if (!found) throw_internal("cost table admits no witness split");
    }
    if (remaining) cluster_masks.push_back(remaining);

    FLResult res = assemble_result(inst, pd, std::move(cluster_masks), opt);
    res.convolutions = static_cast<std::uint64_t>(levels - 1);
    if (evaluate_fl_cost(inst, obj, res) != opt)
        throw_internal("witness clustering does not reproduce the optimal cost");
    return res;
}

std::optional<FLResult> brute_force_fl(const FLInstance& inst,
                                       const Objective& obj) {
    if (inst.budget() < 1) throw_input("facility budget k must be >= 1");
    if (inst.facilities() == 0) return std::nullopt;

    const int m = inst.facilities();
    const int kcap = std::min(inst.budget(), m);
    unsigned __int128 combos = 0;
    for (int j = 1; j <= kcap; ++j) {
        unsigned __int128 c = 1;
        for (int i = 1; i <= j; ++i) c = c * static_cast<unsigned>(m - j + i) / i;
        combos += c;
    }
    if (combos > 10'000'000)
        throw_capacity("facility subset enumeration exceeds 1e7 candidates");

    const std::vector<Cost> pd = powered_table(inst, obj);
    Cost best_cost = kInfCost;
    std::vector<int> best_set;
    std::vector<int> chosen;
    for (int j = 1; j <= kcap; ++j) {
        chosen.assign(j, 0);
        std::iota(chosen.begin(), chosen.end(), 0);
        for (;;) {
            Cost total = 0;
            for (int p = 0; p < inst.clients(); ++p) {
                Cost best = kInfCost;
                for (int c : chosen)
                    best = std::min(best,
                                    pd[static_cast<size_t>(p) * m + c]);
                total += best;
            }
            if (total < best_cost) {
                best_cost = total;
                best_set = chosen;
            }
            int pos = j - 1;
            while (pos >= 0 && chosen[pos] == m - j + pos) --pos;
            if (pos < 0) break;
            ++chosen[pos];
            for (int q = pos + 1; q < j; ++q) chosen[q] = chosen[q - 1] + 1;
        }
    }

    // Nearest-facility assignment (ties to the lowest facility index).
    std::vector<std::uint32_t> cluster_of(best_set.size(), 0);
    for (int p = 0; p < inst.clients(); ++p) {
        int best = 0;
        for (size_t c = 1; c < best_set.size(); ++c)
            if (pd[static_cast<size_t>(p) * m + best_set[c]] <
                pd[static_cast<size_t>(p) * m + best_set[best]])
                best = static_cast<int>(c);
        cluster_of[best] |= (std::uint32_t{1} << p);
    }

    struct Entry {
        int facility;
        std::uint32_t mask;
    };
    std::vector<Entry> entries;
    for (size_t c = 0; c < best_set.size(); ++c)
        if (cluster_of[c]) entries.push_back({best_set[c], cluster_of[c]});
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.facility < b.facility; });

    FLResult res;
    res.cost = best_cost;
    for (const auto& e : entries) {
        res.centers.push_back(e.facility);
        std::vector<int> members;
        for (std::uint32_t mm = e.mask; mm; mm &= mm - 1)
            members.push_back(std::countr_zero(mm));
        res.clusters.push_back(std::move(members));
    }
    return res;
}

Cost evaluate_fl_cost(const FLInstance& inst, const Objective& obj,
                      const FLResult& result) {
    if (result.centers.size() != result.clusters.size())
        throw_input("facility list and cluster list disagree");
    std::vector<bool> seen(inst.clients(), false);
    Cost total = 0;
    for (size_t c = 0; c < result.centers.size(); ++c) {
        const int f = result.centers[c];
        if (f < 0 || f >= inst.facilities()) throw_input("facility out of range");
        if (result.clusters[c].empty()) throw_input("empty cluster in witness");
        for (int p : result.clusters[c]) {
            if (p < 0 || p >= inst.clients() || seen[p])
                throw_input("witness is not a partition of the clients");
            seen[p] = true;
            Cost d = inst.distance(p, f);
            if (obj.exponent() > 1 && d > 1) d = checked_pow(d, obj.exponent());
            total = checked_add(total, d);
        }
    }
    for (bool s : seen)
        if (!s) throw_input("witness leaves a client unassigned");
    return total;
}

}  // namespace kmexact

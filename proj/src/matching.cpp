#include "kmexact/matching.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <utility>

namespace kmexact {

namespace {

constexpr int kMaxMatchingVertices = 2048;

// Dense primal-dual blossom search for a maximum-weight matching,
// 1-indexed, with contracted blossoms occupying ids n+1..2n. Duals are
// kept doubled so they stay integral. Vertices are scanned in index
// order, which fixes the matching among equal-weight optima.
class BlossomSolver {
public:
    explicit BlossomSolver(int n)
        : n_(n),
          size_(2 * n + 1),
          weight_(static_cast<size_t>(size_) * size_, 0),
          end_u_(static_cast<size_t>(size_) * size_, 0),
          end_v_(static_cast<size_t>(size_) * size_, 0),
          lab_(size_, 0),
          match_(size_, 0),
          slack_(size_, 0),
          st_(size_, 0),
          pa_(size_, 0),
          side_(size_, 0),
          vis_(size_, 0),
          flower_(size_),
          flower_from_(static_cast<size_t>(size_) * (n + 1), 0) {
        for (int u = 1; u <= n_; ++u)
            for (int v = 1; v <= n_; ++v) {
                at(end_u_, u, v) = u;
                at(end_v_, u, v) = v;
            }
    }

    void set_weight(int u, int v, long long w) {
        at(weight_, u, v) = w;
        at(weight_, v, u) = w;
    }

    // Returns (total weight, number of matched pairs).
    std::pair<long long, int> run() {
        n_x_ = n_;
        int n_matches = 0;
        long long total = 0;
        for (int u = 0; u <= n_; ++u) {
            st_[u] = u;
            flower_[u].clear();
        }
        long long w_max = 0;
        for (int u = 1; u <= n_; ++u)
            for (int v = 1; v <= n_; ++v) {
                from(u, v) = (u == v ? u : 0);
                w_max = std::max(w_max, at(weight_, u, v));
            }
        for (int u = 1; u <= n_; ++u) lab_[u] = w_max;
        while (grow()) ++n_matches;
        for (int u = 1; u <= n_; ++u)
            if (match_[u] && match_[u] < u) total += at(weight_, u, match_[u]);
        match_result_.assign(n_ + 1, 0);
        for (int u = 1; u <= n_; ++u) match_result_[u] = match_[u];
        return {total, n_matches};
    }

    const std::vector<int>& mates() const { return match_result_; }

private:
    template <typename T>
    T& at(std::vector<T>& m, int u, int v) {
        return m[static_cast<size_t>(u) * size_ + v];
    }
    int& from(int b, int x) {
        return flower_from_[static_cast<size_t>(b) * (n_ + 1) + x];
    }

    long long slack_of(int u, int v) {
        return lab_[at(end_u_, u, v)] + lab_[at(end_v_, u, v)] -
               at(weight_, u, v) * 2;
    }

    void update_slack(int u, int x) {
        if (!slack_[x] || slack_of(u, x) < slack_of(slack_[x], x)) slack_[x] = u;
    }

    void set_slack(int x) {
        slack_[x] = 0;
        for (int u = 1; u <= n_; ++u)
            if (at(weight_, u, x) > 0 && st_[u] != x && side_[st_[u]] == 0)
                update_slack(u, x);
    }

    void queue_push(int x) {
        if (x <= n_) {
            queue_.push_back(x);
        } else {
            for (int sub : flower_[x]) queue_push(sub);
        }
    }

    void set_st(int x, int b) {
        st_[x] = b;
        if (x > n_)
            for (int sub : flower_[x]) set_st(sub, b);
    }

    int rotate_to(int b, int xr) {
        int pr = static_cast<int>(
            std::find(flower_[b].begin(), flower_[b].end(), xr) -
            flower_[b].begin());
        if (pr % 2 == 1) {  // walk the even way around the cycle
            std::reverse(flower_[b].begin() + 1, flower_[b].end());
            return static_cast<int>(flower_[b].size()) - pr;
        }
        return pr;
    }

    void set_match(int u, int v) {
        match_[u] = at(end_v_, u, v);
        if (u > n_) {
            const int eu = at(end_u_, u, v);
            const int xr = from(u, eu);
            const int pr = rotate_to(u, xr);
            for (int i = 0; i < pr; ++i)
                set_match(flower_[u][i], flower_[u][i ^ 1]);
            set_match(xr, v);
            std::rotate(flower_[u].begin(), flower_[u].begin() + pr,
                        flower_[u].end());
        }
    }

    void augment(int u, int v) {
        for (;;) {
            int xnv = st_[match_[u]];
            set_match(u, v);
            if (!xnv) return;
            set_match(xnv, st_[pa_[xnv]]);
            u = st_[pa_[xnv]];
            v = xnv;
        }
    }

    int get_lca(int u, int v) {
        for (++timer_; u || v; std::swap(u, v)) {
            if (u == 0) continue;
            if (vis_[u] == timer_) return u;
            vis_[u] = timer_;
            u = st_[match_[u]];
            if (u) u = st_[pa_[u]];
        }
        return 0;
    }

    void add_blossom(int u, int lca, int v) {
        int b = n_ + 1;
        while (b <= n_x_ && st_[b]) ++b;
        if (b > n_x_) ++n_x_;
        lab_[b] = 0;
        side_[b] = 0;
        match_[b] = match_[lca];
        flower_[b].clear();
        flower_[b].push_back(lca);
        for (int x = u, y; x != lca; x = st_[pa_[y]]) {
            flower_[b].push_back(x);
            flower_[b].push_back(y = st_[match_[x]]);
            queue_push(y);
        }
        std::reverse(flower_[b].begin() + 1, flower_[b].end());
        for (int x = v, y; x != lca; x = st_[pa_[y]]) {
            flower_[b].push_back(x);
            flower_[b].push_back(y = st_[match_[x]]);
            queue_push(y);
        }
        set_st(b, b);
        for (int x = 1; x <= n_x_; ++x) {
            at(weight_, b, x) = 0;
            at(weight_, x, b) = 0;
        }
        for (int x = 1; x <= n_; ++x) from(b, x) = 0;
        for (int xs : flower_[b]) {
            for (int x = 1; x <= n_x_; ++x)
                if (at(weight_, xs, x) > 0 &&
                    (at(weight_, b, x) == 0 || slack_of(xs, x) < slack_of(b, x))) {
                    at(end_u_, b, x) = at(end_u_, xs, x);
                    at(end_v_, b, x) = at(end_v_, xs, x);
                    at(weight_, b, x) = at(weight_, xs, x);
                    at(end_u_, x, b) = at(end_u_, x, xs);
                    at(end_v_, x, b) = at(end_v_, x, xs);
                    at(weight_, x, b) = at(weight_, x, xs);
                }
            for (int x = 1; x <= n_; ++x)
                if (from(xs, x)) from(b, x) = xs;
        }
        set_slack(b);
    }

    void expand_blossom(int b) {
        for (int sub : flower_[b]) set_st(sub, sub);
        const int xr = from(b, at(end_u_, b, pa_[b]));
        const int pr = rotate_to(b, xr);
        for (int i = 0; i < pr; i += 2) {
            const int xs = flower_[b][i];
            const int xns = flower_[b][i + 1];
            pa_[xs] = at(end_u_, xns, xs);
            side_[xs] = 1;
            side_[xns] = 0;
            slack_[xs] = 0;
            set_slack(xns);
            queue_push(xns);
        }
        side_[xr] = 1;
        pa_[xr] = pa_[b];
        for (size_t i = pr + 1; i < flower_[b].size(); ++i) {
            const int xs = flower_[b][i];
            side_[xs] = -1;
            set_slack(xs);
        }
        st_[b] = 0;
    }

    bool on_found_edge(int eu, int ev) {
        const int u = st_[eu];
        const int v = st_[ev];
        if (side_[v] == -1) {
            pa_[v] = eu;
            side_[v] = 1;
            const int nu = st_[match_[v]];
            slack_[v] = 0;
            slack_[nu] = 0;
            side_[nu] = 0;
            queue_push(nu);
        } else if (side_[v] == 0) {
            const int lca = get_lca(u, v);
            if (!lca) {
                augment(u, v);
                augment(v, u);
                return true;
            }
            add_blossom(u, lca, v);
        }
        return false;
    }

    bool grow() {
        std::fill(side_.begin() + 1, side_.begin() + n_x_ + 1, -1);
        std::fill(slack_.begin() + 1, slack_.begin() + n_x_ + 1, 0);
        queue_.clear();
        for (int x = 1; x <= n_x_; ++x)
            if (st_[x] == x && !match_[x]) {
                pa_[x] = 0;
                side_[x] = 0;
                queue_push(x);
            }
        if (queue_.empty()) return false;
        for (;;) {
            while (!queue_.empty()) {
                const int u = queue_.front();
                queue_.pop_front();
                if (side_[st_[u]] == 1) continue;
                for (int v = 1; v <= n_; ++v)
                    if (at(weight_, u, v) > 0 && st_[u] != st_[v]) {
                        if (slack_of(u, v) == 0) {
                            if (on_found_edge(u, v)) return true;
                        } else {
                            update_slack(u, st_[v]);
                        }
                    }
            }
            long long d = std::numeric_limits<long long>::max() / 4;
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[b] == b && side_[b] == 1) d = std::min(d, lab_[b] / 2);
            for (int x = 1; x <= n_x_; ++x)
                if (st_[x] == x && slack_[x]) {
                    const long long sl = slack_of(slack_[x], x);
                    if (side_[x] == -1)
                        d = std::min(d, sl);
                    else if (side_[x] == 0)
                        d = std::min(d, sl / 2);
                }
            for (int u = 1; u <= n_; ++u) {
                if (side_[st_[u]] == 0) {
                    if (lab_[u] <= d) return false;  // staying unmatched is better
                    lab_[u] -= d;
                } else if (side_[st_[u]] == 1) {
                    lab_[u] += d;
                }
            }
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[b] == b) {
                    if (side_[b] == 0)
                        lab_[b] += d * 2;
                    else if (side_[b] == 1)
                        lab_[b] -= d * 2;
                }
            queue_.clear();
            for (int x = 1; x <= n_x_; ++x)
                if (st_[x] == x && slack_[x] && st_[slack_[x]] != x &&
                    slack_of(slack_[x], x) == 0)
                    if (on_found_edge(slack_[x], x)) return true;
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[b] == b && side_[b] == 1 && lab_[b] == 0)
                    expand_blossom(b);
        }
    }

    int n_;
    int size_;
    int n_x_ = 0;
    int timer_ = 0;
    std::vector<long long> weight_;
    std::vector<int> end_u_, end_v_;
    std::vector<long long> lab_;
    std::vector<int> match_, slack_, st_, pa_, side_, vis_;
    std::vector<std::vector<int>> flower_;
    std::vector<int> flower_from_;
    std::vector<int> match_result_;
    std::deque<int> queue_;
};

}  // namespace

WeightedGraph::WeightedGraph(int vertex_count) : v_(vertex_count) {
    if (vertex_count < 0) throw_input("negative vertex count");
    if (vertex_count > kMaxMatchingVertices)
        throw_capacity("graph has " + std::to_string(vertex_count) +
                       " vertices, matching cap is " +
                       std::to_string(kMaxMatchingVertices));
    present_.assign(static_cast<size_t>(v_) * v_, false);
}

int WeightedGraph::add_edge(int u, int v, Cost weight) {
    if (u < 0 || v < 0 || u >= v_ || v >= v_) throw_input("edge endpoint out of range");
    if (u == v) throw_input("self-loop at " + std::to_string(u));
    if (weight < 0) throw_input("negative edge weight");
    if (u > v) std::swap(u, v);
    const size_t slot = static_cast<size_t>(u) * v_ + v;
    if (present_[slot])
        throw_input("duplicate edge (" + std::to_string(u) + "," +
                    std::to_string(v) + ")");
    present_[slot] = true;
    edges_.push_back({u, v, weight});
    return static_cast<int>(edges_.size()) - 1;
}

std::optional<Matching> min_weight_perfect_matching(const WeightedGraph& g) {
    const int v = g.vertex_count();
    if (v % 2 == 1) return std::nullopt;
    if (v == 0) return Matching{};

    Cost max_w = 0;
    for (const auto& e : g.edges()) max_w = std::max(max_w, e.weight);
    // Internal quantities stay below ~4*(v+8)*big; keep them in 63 bits.
    if (max_w > 0 &&
        max_w > (Cost{1} << 60) / (static_cast<Cost>(v / 2 + 1) * (v + 8)))
        throw_capacity("edge weights too large for exact matching at this size");

    // Shift weights so that every perfect matching outweighs any smaller
    // matching: maximising sum(big - w) then minimises sum(w).
    const long long big = static_cast<long long>(v / 2) * max_w + 1;

    BlossomSolver solver(v);
    std::vector<int> edge_index(static_cast<size_t>(v) * v, -1);
    for (size_t i = 0; i < g.edges().size(); ++i) {
        const auto& e = g.edges()[i];
        solver.set_weight(e.u + 1, e.v + 1, big - e.weight);
        edge_index[static_cast<size_t>(e.u) * v + e.v] = static_cast<int>(i);
    }

    const auto [shifted_total, pairs] = solver.run();
    if (pairs < v / 2) return std::nullopt;

    Matching m;
    m.total_weight = static_cast<Cost>(v / 2) * big - shifted_total;
    const auto& mates = solver.mates();
    for (int u = 1; u <= v; ++u) {
        const int w = mates[u];
        if (w > u) {
            const int idx = edge_index[static_cast<size_t>(u - 1) * v + (w - 1)];
            if (idx < 0) throw_internal("matcher used a nonexistent edge");
            m.edge_indices.push_back(idx);
        }
    }
    std::sort(m.edge_indices.begin(), m.edge_indices.end());
    return m;
}

std::optional<Matching> brute_force_perfect_matching(const WeightedGraph& g) {
    const int v = g.vertex_count();
    if (v > 20) throw_capacity("brute-force matching is capped at 20 vertices");
    if (v % 2 == 1) return std::nullopt;
    if (v == 0) return Matching{};

    std::vector<int> edge_index(static_cast<size_t>(v) * v, -1);
    for (size_t i = 0; i < g.edges().size(); ++i) {
        const auto& e = g.edges()[i];
        edge_index[static_cast<size_t>(e.u) * v + e.v] = static_cast<int>(i);
    }

    const std::uint32_t full = (v == 32) ? ~0u : ((1u << v) - 1);
    std::vector<Cost> dp(full + 1, kInfCost);
    std::vector<int> via(full + 1, -1);  // edge used to reach this mask
    dp[0] = 0;
    for (std::uint32_t mask = 0; mask < full; ++mask) {
        if (dp[mask] == kInfCost) continue;
        const int i = std::countr_one(mask);  // lowest unsaturated vertex
        for (int j = i + 1; j < v; ++j) {
            if (mask & (1u << j)) continue;
            const int idx = edge_index[static_cast<size_t>(i) * v + j];
            if (idx < 0) continue;
            const std::uint32_t next = mask | (1u << i) | (1u << j);
            const Cost cand = dp[mask] + g.edges()[idx].weight;
            if (cand < dp[next]) {
                dp[next] = cand;
                via[next] = idx;
            }
        }
    }
    if (dp[full] == kInfCost) return std::nullopt;

    Matching m;
    m.total_weight = dp[full];
    std::uint32_t mask = full;
    while (mask) {
        const int idx = via[mask];
        m.edge_indices.push_back(idx);
        mask &= ~((1u << g.edges()[idx].u) | (1u << g.edges()[idx].v));
    }
    std::sort(m.edge_indices.begin(), m.edge_indices.end());
    return m;
}

}  // namespace kmexact

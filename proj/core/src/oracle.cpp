#include "mcmin/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>

namespace mcmin {

std::size_t StateRelation::size() const {
    std::size_t count = 0;
    for (char c : rel_) count += c != 0;
    return count;
}

namespace {

constexpr std::int64_t kScale = 1'000'000'000'000LL; // capacities in 1e-12 units
constexpr std::int64_t kSlack = 4096;                // absorbs capacity rounding

// Plain Edmonds-Karp on a dense adjacency for the tiny coupling networks.
class MaxFlow {
public:
    explicit MaxFlow(int n) : n_(n), cap_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0) {}

    void add(int u, int v, std::int64_t c) { cap_[idx(u, v)] += c; }

    std::int64_t run(int s, int t) {
        std::int64_t total = 0;
        std::vector<int> parent(static_cast<std::size_t>(n_));
        while (true) {
            std::fill(parent.begin(), parent.end(), -1);
            parent[static_cast<std::size_t>(s)] = s;
            std::queue<int> q;
            q.push(s);
            while (!q.empty() && parent[static_cast<std::size_t>(t)] < 0) {
                const int u = q.front();
                q.pop();
                for (int v = 0; v < n_; ++v) {
                    if (parent[static_cast<std::size_t>(v)] < 0 && cap_[idx(u, v)] > 0) {
                        parent[static_cast<std::size_t>(v)] = u;
                        q.push(v);
                    }
                }
            }
            if (parent[static_cast<std::size_t>(t)] < 0) break;
            std::int64_t push = INT64_MAX;
            for (int v = t; v != s; v = parent[static_cast<std::size_t>(v)])
                push = std::min(push, cap_[idx(parent[static_cast<std::size_t>(v)], v)]);
            for (int v = t; v != s; v = parent[static_cast<std::size_t>(v)]) {
                const int u = parent[static_cast<std::size_t>(v)];
                cap_[idx(u, v)] -= push;
                cap_[idx(v, u)] += push;
            }
            total += push;
        }
        return total;
    }

private:
    std::size_t idx(int u, int v) const {
        return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
    }

    int n_;
    std::vector<std::int64_t> cap_;
};

} // namespace

bool lifting_feasible(const SparseDistribution& mu, const SparseDistribution& nu, const StateRelation& r,
                      double eps) {
    if (eps >= 1.0) return true;
    const auto& em = mu.entries();
    const auto& en = nu.entries();

    // Fast path: the overlap coupling already places 1 - L1/2 mass on the
    // diagonal; sufficient when the diagonal pairs are all related.
    {
        bool diag = true;
        for (const auto& e : em) {
            if (!r.contains(e.to, e.to)) {
                diag = false;
                break;
            }
        }
        if (diag && 1.0 - 0.5 * l1_distance(mu, nu) >= 1.0 - eps) return true;
    }

    const int nm = static_cast<int>(em.size());
    const int nn = static_cast<int>(en.size());
    MaxFlow flow(nm + nn + 2);
    const int src = nm + nn;
    const int snk = nm + nn + 1;
    for (int i = 0; i < nm; ++i) flow.add(src, i, std::llround(em[static_cast<std::size_t>(i)].p * kScale));
    for (int j = 0; j < nn; ++j) flow.add(nm + j, snk, std::llround(en[static_cast<std::size_t>(j)].p * kScale));
    for (int i = 0; i < nm; ++i) {
        for (int j = 0; j < nn; ++j) {
            if (r.contains(em[static_cast<std::size_t>(i)].to, en[static_cast<std::size_t>(j)].to))
                flow.add(i, nm + j, kScale);
        }
    }
    const std::int64_t value = flow.run(src, snk);
    const std::int64_t need = std::llround((1.0 - eps) * static_cast<double>(kScale)) - kSlack;
    return value >= need;
}

StateRelation greatest_eps_bisim(const LabelledMarkovChain& chain, double eps) {
    if (eps < 0.0 || eps > 1.0) throw ValidationError("eps must lie in [0, 1]");
    const state_t n = chain.n_states();
    StateRelation r(n);
    for (state_t s = 0; s < n; ++s) {
        for (state_t t = s; t < n; ++t) {
            if (chain.label(s) == chain.label(t)) r.add(s, t);
        }
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (state_t s = 0; s < n; ++s) {
            for (state_t t = s + 1; t < n; ++t) {
                if (!r.contains(s, t)) continue;
                if (!lifting_feasible(chain.row(s), chain.row(t), r, eps)) {
                    r.remove(s, t);
                    changed = true;
                }
            }
        }
    }
    return r;
}

bool check_prop1(const EpsQuotientCertificate& cert) {
    const DirectSumResult sum = direct_sum(cert.source, cert.target);
    const StateRelation r = greatest_eps_bisim(sum.chain, cert.epsilon / 2.0);
    for (state_t s = 0; s < cert.source.n_states(); ++s) {
        if (!r.contains(s, static_cast<state_t>(sum.offset + cert.mapping[static_cast<std::size_t>(s)])))
            return false;
    }
    return true;
}

} // namespace mcmin

#include "mcmin/refine.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "mcmin/rng.hpp"
#include "mcmin/witness.hpp"

namespace mcmin {

namespace {

// Strict slack on the <= eps2 test; keeps the outer rounds monotone when a
// distance sits exactly on the float boundary.
constexpr double kRefineSlack = 1e-12;

std::vector<state_t> resolve_order(const RefinementConfig& config, state_t n, int iteration) {
    std::vector<state_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    switch (config.order) {
    case RefinementConfig::Order::input:
        break;
    case RefinementConfig::Order::permutation:
        if (static_cast<state_t>(config.permutation.size()) == n) {
            std::vector<char> seen(static_cast<std::size_t>(n), 0);
            for (state_t s : config.permutation) {
                if (s < 0 || s >= n || seen[static_cast<std::size_t>(s)])
                    throw ValidationError("state_order is not a permutation");
                seen[static_cast<std::size_t>(s)] = 1;
            }
            order = config.permutation;
        }
        break;
    case RefinementConfig::Order::seeded: {
        SplitMix64 rng = split_stream(config.seed, static_cast<std::uint64_t>(iteration));
        portable_shuffle(order, rng);
        break;
    }
    }
    return order;
}

Partition refine_once(const LabelledMarkovChain& chain, double eps2, const std::vector<state_t>& order) {
    const state_t n = chain.n_states();
    std::vector<int> rank(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < order.size(); ++i) rank[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

    Partition current = Partition::whole(n);
    while (true) {
        std::vector<std::vector<double>> lumps(static_cast<std::size_t>(n));
        for (state_t s = 0; s < n; ++s)
            lumps[static_cast<std::size_t>(s)] =
                lump(chain, s, current).to_dense(static_cast<std::size_t>(current.n_blocks()));
        auto dist = [&](state_t a, state_t b) {
            const auto& va = lumps[static_cast<std::size_t>(a)];
            const auto& vb = lumps[static_cast<std::size_t>(b)];
            double sum = 0.0;
            for (std::size_t j = 0; j < va.size(); ++j) sum += std::abs(va[j] - vb[j]);
            return sum;
        };

        std::vector<std::vector<state_t>> next;
        for (const auto& blk : current.blocks()) {
            std::vector<state_t> scan = blk;
            std::sort(scan.begin(), scan.end(), [&](state_t a, state_t b) {
                return rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)];
            });
            std::vector<std::vector<state_t>> sub; // in creation order
            for (state_t s : scan) {
                int chosen = -1;
                double chosen_avg = std::numeric_limits<double>::infinity();
                state_t chosen_min = 0;
                for (std::size_t c = 0; c < sub.size(); ++c) {
                    bool ok = true;
                    double total = 0.0;
                    for (state_t t : sub[c]) {
                        if (chain.label(s) != chain.label(t)) {
                            ok = false;
                            break;
                        }
                        const double d = dist(s, t);
                        if (d > eps2 + kRefineSlack) {
                            ok = false;
                            break;
                        }
                        total += d;
                    }
                    if (!ok) continue;
                    const double avg = total / static_cast<double>(sub[c].size());
                    const state_t min_member = *std::min_element(sub[c].begin(), sub[c].end());
                    if (avg < chosen_avg || (avg == chosen_avg && min_member < chosen_min)) {
                        chosen = static_cast<int>(c);
                        chosen_avg = avg;
                        chosen_min = min_member;
                    }
                }
                if (chosen < 0) {
                    sub.push_back({s});
                } else {
                    sub[static_cast<std::size_t>(chosen)].push_back(s);
                }
            }
            for (auto& g : sub) next.push_back(std::move(g));
        }
        Partition refined = Partition::from_blocks(std::move(next), n);
        if (refined.n_blocks() == current.n_blocks()) return refined;
        current = std::move(refined);
    }
}

} // namespace

Partition approx_refine(const LabelledMarkovChain& chain, const RefinementConfig& config) {
    if (config.eps2 < 0.0) throw ValidationError("eps2 must be nonnegative");
    return refine_once(chain, config.eps2, resolve_order(config, chain.n_states(), 0));
}

LabelledMarkovChain lump_average(const LabelledMarkovChain& chain, const Partition& partition) {
    if (partition.n_states() != chain.n_states())
        throw ValidationError("partition is over a different state count than the chain");
    const int k = partition.n_blocks();
    std::vector<label_t> labels(static_cast<std::size_t>(k));
    std::vector<SparseDistribution> rows(static_cast<std::size_t>(k));
    for (int b = 0; b < k; ++b) {
        const auto& blk = partition.block(b);
        for (state_t u : blk) {
            if (chain.label(u) != chain.label(blk.front()))
                throw LabelMismatch("block " + std::to_string(b) + " mixes labels");
        }
        std::vector<double> mean(static_cast<std::size_t>(k), 0.0);
        for (state_t u : blk) {
            for (const auto& e : lump(chain, u, partition).entries())
                mean[static_cast<std::size_t>(e.to)] += e.p;
        }
        for (double& v : mean) v /= static_cast<double>(blk.size());
        labels[static_cast<std::size_t>(b)] = chain.label(blk.front());
        rows[static_cast<std::size_t>(b)] = SparseDistribution::from_dense(mean, 1e-6);
    }
    return LabelledMarkovChain(std::move(labels), std::move(rows), chain.label_names());
}

MinimisationTrace minimise_apr(const LabelledMarkovChain& chain, const RefinementConfig& config,
                               const MinimiseOptions& options) {
    if (config.eps2 < 0.0) throw ValidationError("eps2 must be nonnegative");
    MinimisationTrace trace;
    trace.input = chain;
    trace.algorithm = "apr";
    trace.eps2 = config.eps2;

    QuotientResult q0 = exact_quotient(chain, options.tol_exact);
    trace.steps.push_back(TraceStep{q0.quotient,
                                    q0.mapping,
                                    PerturbationWitness{chain.rows(), 0.0},
                                    Partition::from_mapping(q0.mapping),
                                    std::nullopt,
                                    0.0});

    for (int iteration = 1;; ++iteration) {
        if (options.deadline && std::chrono::steady_clock::now() > *options.deadline)
            throw TimeoutError("minimise_apr exceeded its deadline");
        const LabelledMarkovChain& current = trace.final_chain();
        const state_t n = current.n_states();

        Partition x = refine_once(current, config.eps2, resolve_order(config, n, iteration));
        if (x.n_blocks() == n) break; // all singletons: state count cannot decrease

        PerturbationWitness witness = apr_witness(current, x, options.tol_exact);
        LabelledMarkovChain lumped = lump_average(current, x);
        QuotientResult next = exact_quotient(lumped, options.tol_exact);

        std::vector<state_t> mapping(static_cast<std::size_t>(n));
        for (state_t u = 0; u < n; ++u)
            mapping[static_cast<std::size_t>(u)] = next.mapping[static_cast<std::size_t>(x.block_of(u))];

        trace.steps.push_back(TraceStep{std::move(next.quotient), std::move(mapping), std::move(witness),
                                        std::move(x), std::nullopt, 0.0});
    }
    return trace;
}

} // namespace mcmin

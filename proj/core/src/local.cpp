#include "mcmin/local.hpp"

#include <algorithm>
#include <limits>

#include "mcmin/witness.hpp"

namespace mcmin {

namespace {

LabelledMarkovChain relabelled_absorbing(const LabelledMarkovChain& chain, state_t s, state_t t) {
    std::vector<label_t> labels = chain.labels();
    std::vector<SparseDistribution> rows = chain.rows();
    std::vector<std::string> names = chain.label_names();
    const label_t fresh = static_cast<label_t>(names.size());
    names.push_back("*local*");
    labels[static_cast<std::size_t>(s)] = fresh;
    labels[static_cast<std::size_t>(t)] = fresh;
    rows[static_cast<std::size_t>(s)] = SparseDistribution::point(s);
    rows[static_cast<std::size_t>(t)] = SparseDistribution::point(t);
    return LabelledMarkovChain(std::move(labels), std::move(rows), std::move(names));
}

void check_pair(const LabelledMarkovChain& chain, state_t s, state_t t) {
    if (s == t) throw SameState("local distance of a state with itself is undefined");
    if (s < 0 || t < 0 || s >= chain.n_states() || t >= chain.n_states())
        throw ValidationError("state index out of range");
    if (chain.label(s) != chain.label(t))
        throw LabelMismatch("states " + std::to_string(s) + " and " + std::to_string(t) +
                            " carry different labels");
}

} // namespace

Partition local_partition(const LabelledMarkovChain& chain, state_t s, state_t t, double tol_exact) {
    check_pair(chain, s, t);
    return bisimulation_partition(relabelled_absorbing(chain, s, t), tol_exact);
}

LocalDistanceReport local_distance(const LabelledMarkovChain& chain, state_t s, state_t t, double tol_exact) {
    LocalDistanceReport report;
    report.s = s;
    report.t = t;
    report.partition = local_partition(chain, s, t, tol_exact);
    report.distance = 0.5 * l1_distance(lump(chain, s, report.partition), lump(chain, t, report.partition));
    return report;
}

LabelledMarkovChain merge_pair(const LabelledMarkovChain& chain, state_t s, state_t t,
                               const Partition& partition, double tol_exact) {
    check_pair(chain, s, t);
    if (partition.n_states() != chain.n_states())
        throw ValidationError("partition is over a different state count than the chain");
    const int pair_block = partition.block_of(s);
    if (partition.block_of(t) != pair_block)
        throw ValidationError("partition does not put the merged pair in one block");

    const int k = partition.n_blocks();
    std::vector<label_t> labels(static_cast<std::size_t>(k));
    std::vector<SparseDistribution> rows(static_cast<std::size_t>(k));
    for (int b = 0; b < k; ++b) {
        const auto& blk = partition.block(b);
        const state_t anchor = blk.front();
        for (state_t u : blk) {
            if (chain.label(u) != chain.label(anchor))
                throw LabelMismatch("block " + std::to_string(b) + " mixes labels");
        }
        labels[static_cast<std::size_t>(b)] = chain.label(anchor);
        if (b == pair_block) {
            const std::vector<double> ls = lump(chain, s, partition).to_dense(static_cast<std::size_t>(k));
            const std::vector<double> lt = lump(chain, t, partition).to_dense(static_cast<std::size_t>(k));
            std::vector<double> mean(static_cast<std::size_t>(k));
            for (int j = 0; j < k; ++j)
                mean[static_cast<std::size_t>(j)] =
                    0.5 * (ls[static_cast<std::size_t>(j)] + lt[static_cast<std::size_t>(j)]);
            rows[static_cast<std::size_t>(b)] = SparseDistribution::from_dense(mean, 1e-6);
        } else {
            SparseDistribution anchor_row = lump(chain, anchor, partition);
            for (std::size_t i = 1; i < blk.size(); ++i) {
                const SparseDistribution other = lump(chain, blk[i], partition);
                if (!approx_equal(anchor_row, other, tol_exact)) {
                    throw NotLumpable(b, anchor, blk[i], l1_distance(anchor_row, other),
                                      "non-merged block " + std::to_string(b) +
                                          " has inconsistent lumped rows");
                }
            }
            rows[static_cast<std::size_t>(b)] = std::move(anchor_row);
        }
    }
    return LabelledMarkovChain(std::move(labels), std::move(rows), chain.label_names());
}

MinimisationTrace minimise_local(const LabelledMarkovChain& chain, double eps2, const MinimiseOptions& options) {
    if (eps2 < 0.0) throw ValidationError("eps2 must be nonnegative");
    MinimisationTrace trace;
    trace.input = chain;
    trace.algorithm = "local";
    trace.eps2 = eps2;

    QuotientResult q0 = exact_quotient(chain, options.tol_exact);
    trace.steps.push_back(TraceStep{q0.quotient,
                                    q0.mapping,
                                    PerturbationWitness{chain.rows(), 0.0},
                                    Partition::from_mapping(q0.mapping),
                                    std::nullopt,
                                    0.0});

    while (true) {
        if (options.deadline && std::chrono::steady_clock::now() > *options.deadline)
            throw TimeoutError("minimise_local exceeded its deadline");
        const LabelledMarkovChain& current = trace.final_chain();
        const state_t n = current.n_states();

        // Argmin over all distinct same-label pairs;
        // ties by lexicographically smallest (s, t).
        double best = std::numeric_limits<double>::infinity();
        state_t best_s = -1, best_t = -1;
        for (state_t s = 0; s < n; ++s) {
            for (state_t t = s + 1; t < n; ++t) {
                if (current.label(s) != current.label(t)) continue;
                const double d = local_distance(current, s, t, options.tol_exact).distance;
                if (d < best) {
                    best = d;
                    best_s = s;
                    best_t = t;
                }
            }
        }
        if (best_s < 0 || best > eps2) break;

        Partition x = local_partition(current, best_s, best_t, options.tol_exact);
        PerturbationWitness witness = local_merge_witness(current, best_s, best_t, options.tol_exact);
        LabelledMarkovChain merged = merge_pair(current, best_s, best_t, x, options.tol_exact);
        QuotientResult next = exact_quotient(merged, options.tol_exact);

        std::vector<state_t> mapping(static_cast<std::size_t>(n));
        for (state_t u = 0; u < n; ++u)
            mapping[static_cast<std::size_t>(u)] = next.mapping[static_cast<std::size_t>(x.block_of(u))];

        trace.steps.push_back(TraceStep{std::move(next.quotient), std::move(mapping), std::move(witness),
                                        std::move(x), std::make_pair(best_s, best_t), best});
    }
    return trace;
}

} // namespace mcmin

#include "mcmin/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mcmin/local.hpp"
#include "mcmin/rng.hpp"

namespace mcmin {

std::int64_t sample_size(std::int64_t x_s, double eps, double delta) {
    if (x_s < 1) throw ValidationError("x_s must be at least 1");
    if (eps <= 0.0) throw ValidationError("eps must be positive");
    if (delta <= 0.0 || delta >= 1.0) throw ValidationError("delta must lie in (0, 1)");
    const double bound = std::log(2.0 * static_cast<double>(x_s) / delta) / (2.0 * eps * eps);
    return static_cast<std::int64_t>(std::ceil(bound));
}

SamplingPlan make_sampling_plan(const LabelledMarkovChain& truth, double eps, double delta) {
    SamplingPlan plan;
    plan.eps = eps;
    plan.delta = delta;
    plan.counts.reserve(static_cast<std::size_t>(truth.n_states()));
    for (state_t s = 0; s < truth.n_states(); ++s)
        plan.counts.push_back(sample_size(static_cast<std::int64_t>(truth.row(s).support_size()), eps, delta));
    return plan;
}

namespace {

// Walker alias table over a row's support.
class AliasTable {
public:
    explicit AliasTable(const SparseDistribution& row) {
        const auto& entries = row.entries();
        const std::size_t k = entries.size();
        targets_.reserve(k);
        for (const auto& e : entries) targets_.push_back(e.to);
        prob_.assign(k, 0.0);
        alias_.assign(k, 0);
        std::vector<double> scaled(k);
        for (std::size_t i = 0; i < k; ++i) scaled[i] = e_at(row, i) * static_cast<double>(k);
        std::vector<std::size_t> small, large;
        for (std::size_t i = 0; i < k; ++i) (scaled[i] < 1.0 ? small : large).push_back(i);
        while (!small.empty() && !large.empty()) {
            const std::size_t s = small.back();
            small.pop_back();
            const std::size_t l = large.back();
            prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] = scaled[l] + scaled[s] - 1.0;
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        for (std::size_t i : large) prob_[i] = 1.0;
        for (std::size_t i : small) prob_[i] = 1.0;
    }

    state_t draw(SplitMix64& rng) const {
        const std::size_t k = prob_.size();
        const std::size_t slot = static_cast<std::size_t>(rng.next_below(k));
        return rng.next_double() < prob_[slot] ? targets_[slot] : targets_[alias_[slot]];
    }

private:
    static double e_at(const SparseDistribution& row, std::size_t i) { return row.entries()[i].p; }

    std::vector<state_t> targets_;
    std::vector<double> prob_;
    std::vector<std::size_t> alias_;
};

} // namespace

LabelledMarkovChain sample_chain(const LabelledMarkovChain& truth, const SamplingPlan& plan, std::uint64_t seed) {
    if (plan.counts.size() != static_cast<std::size_t>(truth.n_states()))
        throw ValidationError("sampling plan does not cover every state");
    std::vector<SparseDistribution> rows;
    rows.reserve(plan.counts.size());
    for (state_t s = 0; s < truth.n_states(); ++s) {
        const SparseDistribution& row = truth.row(s);
        const std::int64_t n_s = plan.counts[static_cast<std::size_t>(s)];
        if (n_s <= 0) throw ValidationError("sample count must be positive");
        if (row.support_size() == 1) {
            rows.push_back(row); // deterministic successor: any n_s reproduces it
            continue;
        }
        SplitMix64 rng = split_stream(seed, static_cast<std::uint64_t>(s));
        const AliasTable alias(row);
        std::vector<std::int64_t> counts(row.support_size(), 0);
        const auto& entries = row.entries();
        for (std::int64_t i = 0; i < n_s; ++i) {
            const state_t target = alias.draw(rng);
            const auto it = std::lower_bound(entries.begin(), entries.end(), target,
                                             [](const SparseDistribution::Entry& e, state_t v) { return e.to < v; });
            counts[static_cast<std::size_t>(it - entries.begin())] += 1;
        }
        std::vector<SparseDistribution::Entry> est;
        est.reserve(entries.size());
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (counts[i] > 0)
                est.push_back({entries[i].to, static_cast<double>(counts[i]) / static_cast<double>(n_s)});
        }
        rows.push_back(SparseDistribution::from_entries(std::move(est), 1e-9));
    }
    return LabelledMarkovChain(truth.labels(), std::move(rows), truth.label_names());
}

namespace {

// One support-preserving noisy row: target L1 shift, clipped to the simplex
// and rescaled until realised length is within 1% of the target (never
// above it).
SparseDistribution noisy_row(const SparseDistribution& row, double target, SplitMix64& rng) {
    const auto& entries = row.entries();
    const std::size_t k = entries.size();
    if (k <= 1 || target <= 1e-15) return row;
    for (int attempt = 0; attempt < 64; ++attempt) {
        // Zero-sum direction in the support's tangent space.
        std::vector<double> dir(k);
        double mean = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            dir[i] = rng.next_double() - 0.5;
            mean += dir[i];
        }
        mean /= static_cast<double>(k);
        double norm = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            dir[i] -= mean;
            norm += std::abs(dir[i]);
        }
        if (norm < 1e-12) continue;

        double scale = target / norm;
        for (int rescale = 0; rescale < 24; ++rescale) {
            std::vector<double> cand(k);
            double mass = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                cand[i] = std::max(0.0, entries[i].p + scale * dir[i]);
                mass += cand[i];
            }
            double realized = 0.0;
            std::vector<SparseDistribution::Entry> out(k);
            for (std::size_t i = 0; i < k; ++i) {
                out[i] = {entries[i].to, cand[i] / mass};
                realized += std::abs(out[i].p - entries[i].p);
            }
            if (realized <= target && realized >= 0.99 * target) {
                return SparseDistribution::from_entries(std::move(out), 1e-9);
            }
            if (realized > target) {
                scale *= 0.9 * target / realized;
            } else {
                break; // clipping saturates below the target; try a new direction
            }
        }
    }
    // No direction reached the target length (tiny supports near the simplex
    // boundary); fall back to the largest shift found with a plain direction.
    std::vector<double> dir(k, 0.0);
    std::size_t hi = 0;
    for (std::size_t i = 1; i < k; ++i) {
        if (entries[i].p > entries[hi].p) hi = i;
    }
    for (std::size_t i = 0; i < k; ++i) dir[i] = i == hi ? -1.0 : 1.0 / static_cast<double>(k - 1);
    double norm = 2.0;
    double scale = std::min(target / norm, entries[hi].p / 1.0);
    std::vector<SparseDistribution::Entry> out(k);
    double mass = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        out[i] = {entries[i].to, std::max(0.0, entries[i].p + scale * dir[i])};
        mass += out[i].p;
    }
    for (auto& e : out) e.p /= mass;
    return SparseDistribution::from_entries(std::move(out), 1e-9);
}

} // namespace

LabelledMarkovChain perturb_chain(const LabelledMarkovChain& truth, const PerturbModel& model, std::uint64_t seed) {
    if (model.eps < 0.0 || model.eps > 1.0) throw ValidationError("eps must lie in [0, 1]");
    if (model.delta < 0.0 || model.delta >= 1.0) throw ValidationError("delta must lie in [0, 1)");
    if (model.eps == 0.0) return truth;
    std::vector<SparseDistribution> rows;
    rows.reserve(static_cast<std::size_t>(truth.n_states()));
    for (state_t s = 0; s < truth.n_states(); ++s) {
        SplitMix64 rng = split_stream(seed, static_cast<std::uint64_t>(s));
        const bool tail = rng.next_double() < model.delta;
        const double target = tail ? 2.0 * model.eps : rng.next_double() * model.eps;
        rows.push_back(noisy_row(truth.row(s), target, rng));
    }
    return LabelledMarkovChain(truth.labels(), std::move(rows), truth.label_names());
}

PlantedChain planted_chain(int m_blocks, int n_states, int branching, std::uint64_t seed) {
    if (m_blocks < 1 || n_states < m_blocks) throw ValidationError("need 1 <= m_blocks <= n_states");
    if (branching < 1) throw ValidationError("branching must be positive");

    // Quotient chain: rejection-sample until it is minimal and no same-label
    // pair is trivially mergeable (local distance below a small margin), so
    // recovery experiments have an unambiguous planted structure.
    constexpr double kSeparationMargin = 0.04;
    LabelledMarkovChain quotient;
    for (std::uint64_t attempt = 0;; ++attempt) {
        if (attempt > 512) throw ValidationError("could not plant a separated quotient; relax the parameters");
        SplitMix64 rng = split_stream(seed, 0xfeed0000ULL + attempt);
        std::vector<label_t> labels(static_cast<std::size_t>(m_blocks));
        for (int q = 0; q < m_blocks; ++q) labels[static_cast<std::size_t>(q)] = m_blocks > 1 ? (q % 2) : 0;
        std::vector<SparseDistribution> rows;
        rows.reserve(static_cast<std::size_t>(m_blocks));
        for (int q = 0; q < m_blocks; ++q) {
            const int fanout = std::min(branching, m_blocks);
            std::vector<state_t> targets(static_cast<std::size_t>(m_blocks));
            std::iota(targets.begin(), targets.end(), 0);
            portable_shuffle(targets, rng);
            targets.resize(static_cast<std::size_t>(fanout));
            std::sort(targets.begin(), targets.end());
            std::vector<double> weights(static_cast<std::size_t>(fanout));
            double total = 0.0;
            for (double& w : weights) {
                w = static_cast<double>(1 + rng.next_below(9));
                total += w;
            }
            std::vector<SparseDistribution::Entry> entries;
            entries.reserve(static_cast<std::size_t>(fanout));
            for (int i = 0; i < fanout; ++i)
                entries.push_back({targets[static_cast<std::size_t>(i)],
                                   weights[static_cast<std::size_t>(i)] / total});
            rows.push_back(SparseDistribution::from_entries(std::move(entries), 1e-9));
        }
        LabelledMarkovChain candidate(std::move(labels), std::move(rows), {"a", "b"});
        if (exact_quotient(candidate).quotient.n_states() != m_blocks) continue;
        bool separated = true;
        for (state_t u = 0; u < m_blocks && separated; ++u) {
            for (state_t v = u + 1; v < m_blocks && separated; ++v) {
                if (candidate.label(u) != candidate.label(v)) continue;
                if (local_distance(candidate, u, v).distance < kSeparationMargin) separated = false;
            }
        }
        if (!separated) continue;
        quotient = std::move(candidate);
        break;
    }

    // Contiguous fibers of balanced size.
    std::vector<state_t> mapping(static_cast<std::size_t>(n_states));
    std::vector<std::vector<state_t>> fibers(static_cast<std::size_t>(m_blocks));
    for (int i = 0; i < n_states; ++i) {
        const int q = static_cast<int>((static_cast<long long>(i) * m_blocks) / n_states);
        mapping[static_cast<std::size_t>(i)] = static_cast<state_t>(q);
        fibers[static_cast<std::size_t>(q)].push_back(static_cast<state_t>(i));
    }

    // Lift: spread each quotient probability over the target fiber with
    // random positive weights; lumped rows then agree exactly per fiber.
    std::vector<label_t> labels(static_cast<std::size_t>(n_states));
    std::vector<SparseDistribution> rows(static_cast<std::size_t>(n_states));
    for (int i = 0; i < n_states; ++i) {
        SplitMix64 rng = split_stream(seed, 0xab000000ULL + static_cast<std::uint64_t>(i));
        const state_t q = mapping[static_cast<std::size_t>(i)];
        labels[static_cast<std::size_t>(i)] = quotient.label(q);
        std::vector<SparseDistribution::Entry> entries;
        for (const auto& e : quotient.row(q).entries()) {
            const auto& fiber = fibers[static_cast<std::size_t>(e.to)];
            std::vector<double> weights(fiber.size());
            double total = 0.0;
            for (double& w : weights) {
                w = static_cast<double>(1 + rng.next_below(9));
                total += w;
            }
            for (std::size_t j = 0; j < fiber.size(); ++j)
                entries.push_back({fiber[j], e.p * weights[j] / total});
        }
        rows[static_cast<std::size_t>(i)] = SparseDistribution::from_entries(std::move(entries), 1e-9);
    }
    PlantedChain planted;
    planted.chain = LabelledMarkovChain(std::move(labels), std::move(rows), quotient.label_names());
    planted.mapping = std::move(mapping);
    planted.quotient = std::move(quotient);
    return planted;
}

} // namespace mcmin

#pragma once

#include <cstdint>
#include <vector>

#include "mcmin/lmc.hpp"

namespace mcmin {

/// Per-state sample counts for empirical estimation at error parameter eps
/// and error bound delta: n_s >= ceil(ln(2 x_s / delta) / (2 eps^2)) where
/// x_s is the support size of state s's row.
struct SamplingPlan {
    double eps = 0.0;
    double delta = 0.0;
    std::vector<std::int64_t> counts;
};

/// Smallest integer n with n >= ln(2 x_s / delta) / (2 eps^2).
std::int64_t sample_size(std::int64_t x_s, double eps, double delta);

SamplingPlan make_sampling_plan(const LabelledMarkovChain& truth, double eps, double delta);

/// Empirical estimator: each row becomes the frequency vector of counts[s]
/// seeded draws from the true row (alias-method samplers, one substream per
/// state). Deterministic in (truth, plan, seed).
LabelledMarkovChain sample_chain(const LabelledMarkovChain& truth, const SamplingPlan& plan, std::uint64_t seed);

/// Direct noise injection: per state, with probability 1 - delta shift the
/// row by a random support-preserving zero-sum direction of L1 length at most
/// eps, otherwise of length (up to clipping) 2 eps. Rows stay exactly
/// stochastic; no transitions outside the true support are introduced.
struct PerturbModel {
    double eps = 0.0;
    double delta = 0.0;
};

LabelledMarkovChain perturb_chain(const LabelledMarkovChain& truth, const PerturbModel& model, std::uint64_t seed);

/// Synthetic ground truth with a known exact quotient: a random minimal
/// m-state quotient chain whose states are split into fibers with exactly
/// bisimilar lifted rows. exact_quotient(chain) has precisely m_blocks
/// states and `mapping` is the planted state -> quotient-state map.
struct PlantedChain {
    LabelledMarkovChain chain;
    std::vector<state_t> mapping;
    LabelledMarkovChain quotient;
};

PlantedChain planted_chain(int m_blocks, int n_states, int branching, std::uint64_t seed);

} // namespace mcmin

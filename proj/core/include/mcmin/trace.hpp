#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcmin/lmc.hpp"
#include "mcmin/witness.hpp"

namespace mcmin {

/// One minimisation step Q_{i-1} -> Q_i. For step 0 the "previous" chain is
/// the input itself and the witness is the unchanged transition function
/// (exact quotienting is a 0-quotient).
struct TraceStep {
    LabelledMarkovChain quotient;            // Q_i
    std::vector<state_t> mapping;            // previous states -> Q_i states
    PerturbationWitness witness;             // rows over the previous state space
    Partition partition;                     // the lumped partition X of this step
    std::optional<std::pair<state_t, state_t>> merged_pair; // local algorithm only
    double distance = 0.0;                   // d_local of the merged pair, when present
};

/// The sequence Q_0, Q_1, ..., Q_i produced by a minimisation run, with
/// per-iteration witnesses. Only productive iterations (which reduce the
/// state count) are recorded; the accumulated guarantee is
/// iterations() * eps2.
struct MinimisationTrace {
    LabelledMarkovChain input;
    std::string algorithm; // "local" or "apr"
    double eps2 = 0.0;
    std::vector<TraceStep> steps; // steps[0] is the exact quotient Q_0

    const LabelledMarkovChain& final_chain() const { return steps.back().quotient; }
    int iterations() const { return static_cast<int>(steps.size()) - 1; }
    double bound() const { return iterations() * eps2; }
};

/// Certificate for step i of the trace (i == 0: input -> Q_0 at epsilon 0;
/// i >= 1: Q_{i-1} -> Q_i at the step's realised budget).
EpsQuotientCertificate step_certificate(const MinimisationTrace& trace, std::size_t i);

/// Certificate input -> final chain with epsilon = sum of the step budgets
/// (at most iterations * eps2). Verified during composition.
EpsQuotientCertificate compose_trace(const MinimisationTrace& trace, double tol_exact = kTolExact);

/// Shared knobs for the minimisation loops.
struct MinimiseOptions {
    double tol_exact = kTolExact;
    /// Cooperative deadline checked once per iteration; TimeoutError beyond it.
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

} // namespace mcmin

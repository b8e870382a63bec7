#pragma once

#include <cstdint>
#include <vector>

#include "mcmin/lmc.hpp"
#include "mcmin/trace.hpp"

namespace mcmin {

/// Scan-order policy for approximate refinement. The refinement result is
/// contractually order-sensitive, so the order is part of the configuration:
///  - input: ascending state index (the default),
///  - permutation: an explicit permutation; inside the minimisation loop it
///    applies to iterations whose state count matches its length, all other
///    iterations fall back to input order,
///  - seeded: a portable shuffle, re-drawn per minimisation iteration from
///    substreams of `seed`.
struct RefinementConfig {
    enum class Order { input, permutation, seeded };

    double eps2 = 0.0;
    Order order = Order::input;
    std::vector<state_t> permutation;
    std::uint64_t seed = 0;
};

/// Approximate partition refinement: starting from the one-block partition,
/// repeatedly re-partition every block, scanning states in configured order;
/// a state joins a candidate sub-block only when it shares a label with all
/// of its members and its lumped row over the previous partition is within
/// eps2 (L1) of each member's; among several candidates the one with the
/// smallest average distance wins (ties: least member index). The final
/// partition satisfies: same-block states share a label and have lumped-L1
/// distance at most eps2 over the final partition itself.
Partition approx_refine(const LabelledMarkovChain& chain, const RefinementConfig& config);

/// The chain over the blocks of `partition`: each block's row is the
/// arithmetic mean of its members' lumped rows, labels inherited
/// (LabelMismatch when a block mixes labels).
LabelledMarkovChain lump_average(const LabelledMarkovChain& chain, const Partition& partition);

/// Iterated minimisation: quotient, then alternate approximate refinement,
/// averaged lumping and exact quotienting until the state count stops
/// decreasing.
MinimisationTrace minimise_apr(const LabelledMarkovChain& chain, const RefinementConfig& config,
                               const MinimiseOptions& options = {});

} // namespace mcmin

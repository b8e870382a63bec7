#pragma once

#include <cstddef>
#include <vector>

#include "mcmin/lmc.hpp"
#include "mcmin/witness.hpp"

namespace mcmin {

/// A reflexive, symmetric (not necessarily transitive) relation on one
/// chain's states, stored densely. Used by the desk-scale oracle only.
class StateRelation {
public:
    explicit StateRelation(state_t n) : n_(n), rel_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0) {}

    state_t n_states() const { return n_; }
    bool contains(state_t s, state_t t) const { return rel_[idx(s, t)] != 0; }
    void add(state_t s, state_t t) { rel_[idx(s, t)] = rel_[idx(t, s)] = 1; }
    void remove(state_t s, state_t t) { rel_[idx(s, t)] = rel_[idx(t, s)] = 0; }

    std::size_t size() const;

    bool operator==(const StateRelation&) const = default;

private:
    std::size_t idx(state_t s, state_t t) const {
        return static_cast<std::size_t>(s) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(t);
    }

    state_t n_;
    std::vector<char> rel_;
};

/// Decides whether some coupling of mu and nu places mass >= 1 - eps on R,
/// by exact integer max-flow on the bipartite support network (capacities
/// scaled by 10^12 and rounded; a fixed few-thousand-unit slack absorbs the
/// rounding, i.e. the test is 1 - eps - O(1e-9)).
bool lifting_feasible(const SparseDistribution& mu, const SparseDistribution& nu, const StateRelation& r,
                      double eps);

/// Greatest eps-bisimulation: start from all same-label pairs and delete
/// pairs whose rows fail the eps-lifting against the current relation, until
/// stable. The result is the greatest fixed point and is order-independent.
StateRelation greatest_eps_bisim(const LabelledMarkovChain& chain, double eps);

/// Checks that every source state is (epsilon/2)-bisimilar to its image in
/// the direct sum of the certificate's source and target.
bool check_prop1(const EpsQuotientCertificate& cert);

} // namespace mcmin

#pragma once

#include "mcmin/lmc.hpp"
#include "mcmin/trace.hpp"

namespace mcmin {

struct LocalDistanceReport {
    state_t s = 0;
    state_t t = 0;
    Partition partition; // the X of the local construction; s and t share a block
    double distance = 0.0;
};

/// Bisimulation partition of the chain in which s and t got a fresh common
/// label and were made absorbing. The block containing s also contains t.
/// Throws SameState when s == t and LabelMismatch when their labels differ.
Partition local_partition(const LabelledMarkovChain& chain, state_t s, state_t t, double tol_exact = kTolExact);

/// Local bisimilarity distance: half the L1 distance of the two lumped rows
/// over local_partition(s, t). The least max-row perturbation of only s and t
/// that makes them exactly bisimilar.
LocalDistanceReport local_distance(const LabelledMarkovChain& chain, state_t s, state_t t,
                                   double tol_exact = kTolExact);

/// The chain over the blocks of `partition` (which must be
/// local_partition(s, t)): the block {s, t} receives the arithmetic mean of
/// the two lumped rows, every other block the common lumped row of its
/// members. NotLumpable signals an inconsistent non-{s,t} block, which the
/// construction of the partition rules out short of tolerance failure.
LabelledMarkovChain merge_pair(const LabelledMarkovChain& chain, state_t s, state_t t,
                               const Partition& partition, double tol_exact = kTolExact);

/// Greedy pairwise-merge minimisation: repeatedly merge the same-label pair
/// with the smallest local distance while that distance is at most eps2,
/// re-quotienting after each merge. Ties: lexicographically smallest (s, t).
MinimisationTrace minimise_local(const LabelledMarkovChain& chain, double eps2,
                                 const MinimiseOptions& options = {});

} // namespace mcmin

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcmin/lmc.hpp"

namespace mcmin {

/// An alternative transition function tau' for some base chain, with the
/// claimed maximal per-row L1 deviation. rows[s] replaces the base row of s.
struct PerturbationWitness {
    std::vector<SparseDistribution> rows;
    double budget = 0.0;
};

/// Realised max_s ||rows[s] - base.row(s)||_1.
double witness_deviation(const LabelledMarkovChain& base, const PerturbationWitness& witness);

/// Claim: `target` is an epsilon-quotient of `source`, i.e. under the witness
/// rows the fibers of `mapping` are exactly lumpable and the lumped chain is
/// the exact bisimulation quotient, isomorphic to `target`.
struct EpsQuotientCertificate {
    LabelledMarkovChain source;
    LabelledMarkovChain target;
    std::vector<state_t> mapping;
    PerturbationWitness witness;
    double epsilon = 0.0;
};

/// The trivial certificate: the exact quotient is a 0-quotient.
EpsQuotientCertificate exact_quotient_certificate(const LabelledMarkovChain& chain, double tol_exact = kTolExact);

/// Redistributes mu inside each block so the lumped image equals gamma
/// (a distribution over the partition's block indices), with minimal L1
/// movement: ||mu - nu||_1 == ||(mu(E))_E - gamma||_1. Growth lands on the
/// lowest-index member of a block; draining removes mass in ascending state
/// order.
SparseDistribution adjust_distribution(const SparseDistribution& mu, const Partition& partition,
                                       const SparseDistribution& gamma, double tol = kTolStochastic);

/// The minimal witness that makes s and t exactly bisimilar by changing only
/// their two rows: both are adjusted towards the midpoint of their lumped
/// rows over the local partition. budget == d_local(s, t).
PerturbationWitness local_merge_witness(const LabelledMarkovChain& chain, state_t s, state_t t,
                                        double tol_exact = kTolExact);

/// The witness that makes all states of each block of `partition` exactly
/// bisimilar: each row is adjusted towards its block's average lumped row.
/// For a partition produced by approximate refinement with parameter eps2 the
/// realised budget is at most eps2.
PerturbationWitness apr_witness(const LabelledMarkovChain& chain, const Partition& partition,
                                double tol_exact = kTolExact);

/// Certificate composition: from (M1 -> M2, eps1) and (M2 -> M3, eps2) build
/// (M1 -> M3, eps1 + eps2). c2.source must structurally equal c1.target
/// (ChainMismatch otherwise). The result is verified before it is returned
/// (VerificationFailed otherwise).
EpsQuotientCertificate compose_witnesses(const EpsQuotientCertificate& c1, const EpsQuotientCertificate& c2,
                                         double tol_exact = kTolExact);

struct Verdict {
    bool pass = false;
    double realized_budget = 0.0;
    std::vector<std::string> failures;
};

/// Checks an epsilon-quotient certificate:
///  (a) witness rows are distributions within per-row budget epsilon,
///  (b) the fibers of the mapping are lumpable under the witness,
///  (c) the lumped chain is bisimilar to the target, state by state, decided
///      via the exact quotient of the direct sum,
///  (d) the target itself has no two bisimilar states.
Verdict verify_epsilon_quotient(const EpsQuotientCertificate& cert, double tol_exact = kTolExact,
                                double budget_slack = 1e-9);

/// L1 Chebyshev centre of a set of distributions over {0..dim-1}, restricted
/// to the probability simplex: a distribution gamma minimising
/// max_i ||points[i] - gamma||_1. Closed forms for <= 2 points, a small
/// dense-simplex LP otherwise.
struct ChebyshevResult {
    double radius = 0.0;
    std::vector<double> center;
};
ChebyshevResult l1_chebyshev_center(const std::vector<std::vector<double>>& points);

/// Minimal uniform per-row L1 budget that makes `partition` lumpable: the
/// largest block Chebyshev radius of member lumped rows. +infinity when some
/// block mixes labels.
double min_epsilon_for_partition(const LabelledMarkovChain& chain, const Partition& partition);

} // namespace mcmin

#include "mcmin/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mcmin/local.hpp"
#include "mcmin/simplex.hpp"

namespace mcmin {

namespace {

// Lumped dense row under an arbitrary state -> block map.
std::vector<double> lump_dense(const SparseDistribution& row, const std::vector<state_t>& block_of,
                               std::size_t n_blocks) {
    std::vector<double> out(n_blocks, 0.0);
    for (const auto& e : row.entries()) out[static_cast<std::size_t>(block_of[static_cast<std::size_t>(e.to)])] += e.p;
    return out;
}

double l1_dense(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
    return sum;
}

// Algorithm core shared by the public adjusters: redistribute mu within the
// given blocks so the block sums become gamma. Growth goes to the least
// member of a block, draining walks members in ascending state order.
SparseDistribution adjust_on_blocks(const SparseDistribution& mu, const std::vector<std::vector<state_t>>& blocks,
                                    const std::vector<double>& gamma, state_t n_states) {
    std::vector<double> nu(static_cast<std::size_t>(n_states), 0.0);
    for (const auto& e : mu.entries()) nu[static_cast<std::size_t>(e.to)] = e.p;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        double mu_e = 0.0;
        for (state_t x : blocks[b]) mu_e += nu[static_cast<std::size_t>(x)];
        double m = mu_e - gamma[b];
        if (m <= 0.0) {
            nu[static_cast<std::size_t>(blocks[b].front())] += -m;
        } else {
            for (state_t x : blocks[b]) {
                double& v = nu[static_cast<std::size_t>(x)];
                if (v >= m) {
                    v -= m;
                    m = 0.0;
                } else {
                    m -= v;
                    v = 0.0;
                }
                if (m == 0.0) break;
            }
            // m can retain fp dust when the block drains completely.
        }
    }
    return SparseDistribution::from_dense(nu, 1e-6);
}

std::vector<double> gamma_dense(const SparseDistribution& gamma, int n_blocks) {
    if (gamma.subdistribution() || gamma.max_index() >= n_blocks)
        throw NotADistribution("gamma is not a distribution over the partition's blocks");
    return gamma.to_dense(static_cast<std::size_t>(n_blocks));
}

} // namespace

double witness_deviation(const LabelledMarkovChain& base, const PerturbationWitness& witness) {
    double worst = 0.0;
    for (state_t s = 0; s < base.n_states(); ++s)
        worst = std::max(worst, l1_distance(base.row(s), witness.rows[static_cast<std::size_t>(s)]));
    return worst;
}

EpsQuotientCertificate exact_quotient_certificate(const LabelledMarkovChain& chain, double tol_exact) {
    QuotientResult q = exact_quotient(chain, tol_exact);
    return EpsQuotientCertificate{chain, std::move(q.quotient), std::move(q.mapping),
                                  PerturbationWitness{chain.rows(), 0.0}, 0.0};
}

SparseDistribution adjust_distribution(const SparseDistribution& mu, const Partition& partition,
                                       const SparseDistribution& gamma, double tol) {
    if (mu.subdistribution() || std::abs(mu.mass() - 1.0) > tol)
        throw NotADistribution("mu is not a distribution");
    const std::vector<double> g = gamma_dense(gamma, partition.n_blocks());
    return adjust_on_blocks(mu, partition.blocks(), g, partition.n_states());
}

PerturbationWitness local_merge_witness(const LabelledMarkovChain& chain, state_t s, state_t t,
                                        double tol_exact) {
    const LocalDistanceReport report = local_distance(chain, s, t, tol_exact);
    const Partition& x = report.partition;
    const std::size_t k = static_cast<std::size_t>(x.n_blocks());
    const std::vector<double> ls = lump(chain, s, x).to_dense(k);
    const std::vector<double> lt = lump(chain, t, x).to_dense(k);
    std::vector<double> midpoint(k);
    for (std::size_t j = 0; j < k; ++j) midpoint[j] = 0.5 * (ls[j] + lt[j]);

    PerturbationWitness witness;
    witness.rows = chain.rows();
    witness.rows[static_cast<std::size_t>(s)] = adjust_on_blocks(chain.row(s), x.blocks(), midpoint, chain.n_states());
    witness.rows[static_cast<std::size_t>(t)] = adjust_on_blocks(chain.row(t), x.blocks(), midpoint, chain.n_states());
    witness.budget = report.distance;
    return witness;
}

PerturbationWitness apr_witness(const LabelledMarkovChain& chain, const Partition& partition, double tol_exact) {
    (void)tol_exact;
    const std::size_t k = static_cast<std::size_t>(partition.n_blocks());
    PerturbationWitness witness;
    witness.rows.resize(static_cast<std::size_t>(chain.n_states()));

    // Per block: average lumped row, then adjust every member towards it.
    std::vector<std::vector<double>> averages(k);
    for (std::size_t b = 0; b < k; ++b) {
        const auto& blk = partition.block(static_cast<int>(b));
        for (state_t u : blk) {
            if (chain.label(u) != chain.label(blk.front()))
                throw LabelMismatch("block " + std::to_string(b) + " mixes labels");
        }
        std::vector<double> mean(k, 0.0);
        for (state_t u : blk) {
            for (const auto& e : lump(chain, u, partition).entries()) mean[static_cast<std::size_t>(e.to)] += e.p;
        }
        for (double& v : mean) v /= static_cast<double>(blk.size());
        averages[b] = std::move(mean);
    }
    double budget = 0.0;
    for (state_t u = 0; u < chain.n_states(); ++u) {
        const auto& avg = averages[static_cast<std::size_t>(partition.block_of(u))];
        witness.rows[static_cast<std::size_t>(u)] = adjust_on_blocks(chain.row(u), partition.blocks(), avg, chain.n_states());
        budget = std::max(budget, l1_distance(witness.rows[static_cast<std::size_t>(u)], chain.row(u)));
    }
    witness.budget = budget;
    return witness;
}

EpsQuotientCertificate compose_witnesses(const EpsQuotientCertificate& c1, const EpsQuotientCertificate& c2,
                                         double tol_exact) {
    const LabelledMarkovChain& m1 = c1.source;
    const LabelledMarkovChain& m2 = c1.target;
    const LabelledMarkovChain& m3 = c2.target;
    if (c2.source.n_states() != m2.n_states())
        throw ChainMismatch("c2.source has " + std::to_string(c2.source.n_states()) + " states, c1.target has " +
                            std::to_string(m2.n_states()));
    for (state_t s = 0; s < m2.n_states(); ++s) {
        if (c2.source.label_name(c2.source.label(s)) != m2.label_name(m2.label(s)))
            throw ChainMismatch("c2.source and c1.target disagree on the label of state " + std::to_string(s));
        if (!approx_equal(c2.source.row(s), m2.row(s), tol_exact))
            throw ChainMismatch("c2.source and c1.target disagree on the row of state " + std::to_string(s));
    }

    // f-fibers of the first mapping, indexed by M2 state.
    std::vector<std::vector<state_t>> fibers(static_cast<std::size_t>(m2.n_states()));
    for (state_t x1 = 0; x1 < m1.n_states(); ++x1)
        fibers[static_cast<std::size_t>(c1.mapping[static_cast<std::size_t>(x1)])].push_back(x1);
    for (std::size_t y = 0; y < fibers.size(); ++y) {
        if (fibers[y].empty()) throw ChainMismatch("c1.mapping is not surjective onto its target");
    }

    EpsQuotientCertificate out;
    out.source = m1;
    out.target = m3;
    out.epsilon = c1.epsilon + c2.epsilon;
    out.mapping.resize(static_cast<std::size_t>(m1.n_states()));
    out.witness.rows.resize(static_cast<std::size_t>(m1.n_states()));
    out.witness.budget = out.epsilon;
    for (state_t x1 = 0; x1 < m1.n_states(); ++x1) {
        const state_t x2 = c1.mapping[static_cast<std::size_t>(x1)];
        out.mapping[static_cast<std::size_t>(x1)] = c2.mapping[static_cast<std::size_t>(x2)];
        const std::vector<double> gamma =
            c2.witness.rows[static_cast<std::size_t>(x2)].to_dense(static_cast<std::size_t>(m2.n_states()));
        out.witness.rows[static_cast<std::size_t>(x1)] =
            adjust_on_blocks(c1.witness.rows[static_cast<std::size_t>(x1)], fibers, gamma, m1.n_states());
    }

    const Verdict verdict = verify_epsilon_quotient(out, tol_exact);
    if (!verdict.pass) {
        std::ostringstream oss;
        oss << "composed certificate failed verification:";
        for (const auto& f : verdict.failures) oss << "\n  " << f;
        throw VerificationFailed(oss.str());
    }
    return out;
}

Verdict verify_epsilon_quotient(const EpsQuotientCertificate& cert, double tol_exact, double budget_slack) {
    Verdict verdict;
    const LabelledMarkovChain& src = cert.source;
    const LabelledMarkovChain& tgt = cert.target;
    const state_t n = src.n_states();
    const state_t k = tgt.n_states();

    if (static_cast<state_t>(cert.mapping.size()) != n) {
        verdict.failures.push_back("mapping size does not match the source state count");
        return verdict;
    }
    if (static_cast<state_t>(cert.witness.rows.size()) != n) {
        verdict.failures.push_back("witness row count does not match the source state count");
        return verdict;
    }

    // (a) rows are in-range distributions within the claimed budget.
    for (state_t s = 0; s < n; ++s) {
        const SparseDistribution& row = cert.witness.rows[static_cast<std::size_t>(s)];
        if (row.subdistribution() || std::abs(row.mass() - 1.0) > kTolStochastic) {
            verdict.failures.push_back("witness row " + std::to_string(s) + " is not stochastic (mass " +
                                       std::to_string(row.mass()) + ")");
        }
        if (row.max_index() >= n)
            verdict.failures.push_back("witness row " + std::to_string(s) + " targets an out-of-range state");
        const double dev = l1_distance(row, src.row(s));
        verdict.realized_budget = std::max(verdict.realized_budget, dev);
        if (dev > cert.epsilon + budget_slack) {
            verdict.failures.push_back("row " + std::to_string(s) + " deviates by " + std::to_string(dev) +
                                       " > epsilon " + std::to_string(cert.epsilon));
        }
    }

    // Mapping totality / surjectivity / label preservation.
    std::vector<std::vector<state_t>> fibers(static_cast<std::size_t>(k));
    for (state_t s = 0; s < n; ++s) {
        const state_t q = cert.mapping[static_cast<std::size_t>(s)];
        if (q < 0 || q >= k) {
            verdict.failures.push_back("mapping of state " + std::to_string(s) + " is out of range");
            return verdict;
        }
        fibers[static_cast<std::size_t>(q)].push_back(s);
        if (src.label_name(src.label(s)) != tgt.label_name(tgt.label(q)))
            verdict.failures.push_back("state " + std::to_string(s) + " and its image " + std::to_string(q) +
                                       " carry different labels");
    }
    for (state_t q = 0; q < k; ++q) {
        if (fibers[static_cast<std::size_t>(q)].empty())
            verdict.failures.push_back("target state " + std::to_string(q) + " has an empty fiber");
    }
    if (!verdict.failures.empty()) return verdict;

    // (b) fibers lumpable under the witness rows.
    std::vector<std::vector<double>> fiber_rows(static_cast<std::size_t>(k));
    for (state_t q = 0; q < k; ++q) {
        const auto& fiber = fibers[static_cast<std::size_t>(q)];
        const std::vector<double> anchor =
            lump_dense(cert.witness.rows[static_cast<std::size_t>(fiber.front())], cert.mapping,
                       static_cast<std::size_t>(k));
        for (std::size_t i = 1; i < fiber.size(); ++i) {
            const std::vector<double> other = lump_dense(cert.witness.rows[static_cast<std::size_t>(fiber[i])],
                                                         cert.mapping, static_cast<std::size_t>(k));
            const double dev = l1_dense(anchor, other);
            if (dev > tol_exact * 4.0) {
                verdict.failures.push_back("fiber of target " + std::to_string(q) +
                                           " is not lumpable under the witness: states " +
                                           std::to_string(fiber.front()) + " and " + std::to_string(fiber[i]) +
                                           " differ by " + std::to_string(dev));
            }
        }
        fiber_rows[static_cast<std::size_t>(q)] = anchor;
    }
    if (!verdict.failures.empty()) return verdict;

    // (c) lumped chain bisimilar to the target, via the quotient of the sum.
    std::vector<label_t> lumped_labels(static_cast<std::size_t>(k));
    std::vector<SparseDistribution> lumped_rows(static_cast<std::size_t>(k));
    for (state_t q = 0; q < k; ++q) {
        lumped_labels[static_cast<std::size_t>(q)] = src.label(fibers[static_cast<std::size_t>(q)].front());
        lumped_rows[static_cast<std::size_t>(q)] =
            SparseDistribution::from_dense(fiber_rows[static_cast<std::size_t>(q)], 1e-6);
    }
    LabelledMarkovChain lumped(std::move(lumped_labels), std::move(lumped_rows), src.label_names());
    const DirectSumResult sum = direct_sum(lumped, tgt);
    const QuotientResult joint = exact_quotient(sum.chain, tol_exact);
    bool paired = joint.quotient.n_states() == k;
    for (state_t q = 0; q < k && paired; ++q) {
        if (joint.mapping[static_cast<std::size_t>(q)] !=
            joint.mapping[static_cast<std::size_t>(q + sum.offset)])
            paired = false;
    }
    if (!paired) {
        verdict.failures.push_back("lumped witness chain is not state-by-state bisimilar to the target");
    }

    // (d) the target is an exact quotient: no two bisimilar states.
    if (exact_quotient(tgt, tol_exact).quotient.n_states() != k)
        verdict.failures.push_back("target has two bisimilar states, so it is not a quotient");

    verdict.pass = verdict.failures.empty();
    return verdict;
}

ChebyshevResult l1_chebyshev_center(const std::vector<std::vector<double>>& points) {
    if (points.empty()) throw ValidationError("no points given");
    const std::size_t d = points.front().size();
    for (const auto& p : points) {
        if (p.size() != d) throw ValidationError("points have inconsistent dimension");
    }
    if (points.size() == 1) return {0.0, points.front()};
    if (points.size() == 2) {
        std::vector<double> mid(d);
        double dist = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            mid[j] = 0.5 * (points[0][j] + points[1][j]);
            dist += std::abs(points[0][j] - points[1][j]);
        }
        return {0.5 * dist, std::move(mid)};
    }

    // Variables: gamma_0..gamma_{d-1}, e_{u,j}, r.
    const std::size_t kpts = points.size();
    const std::size_t n_vars = d + kpts * d + 1;
    const std::size_t r_var = d + kpts * d;
    auto evar = [&](std::size_t u, std::size_t j) { return d + u * d + j; };

    std::vector<double> cost(n_vars, 0.0);
    cost[r_var] = 1.0;
    std::vector<lp::Constraint> constraints;
    {
        lp::Constraint simplex_row{std::vector<double>(n_vars, 0.0), lp::Rel::eq, 1.0};
        for (std::size_t j = 0; j < d; ++j) simplex_row.coeffs[j] = 1.0;
        constraints.push_back(std::move(simplex_row));
    }
    for (std::size_t u = 0; u < kpts; ++u) {
        for (std::size_t j = 0; j < d; ++j) {
            lp::Constraint upper{std::vector<double>(n_vars, 0.0), lp::Rel::le, points[u][j]};
            upper.coeffs[j] = 1.0;
            upper.coeffs[evar(u, j)] = -1.0;
            constraints.push_back(std::move(upper));
            lp::Constraint lower{std::vector<double>(n_vars, 0.0), lp::Rel::le, -points[u][j]};
            lower.coeffs[j] = -1.0;
            lower.coeffs[evar(u, j)] = -1.0;
            constraints.push_back(std::move(lower));
        }
        lp::Constraint radius_row{std::vector<double>(n_vars, 0.0), lp::Rel::le, 0.0};
        for (std::size_t j = 0; j < d; ++j) radius_row.coeffs[evar(u, j)] = 1.0;
        radius_row.coeffs[r_var] = -1.0;
        constraints.push_back(std::move(radius_row));
    }
    const lp::Result res = lp::minimize(cost, constraints);
    if (!res.feasible) throw ValidationError("Chebyshev LP unexpectedly infeasible");
    ChebyshevResult out;
    out.radius = std::max(0.0, res.value);
    out.center.assign(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(d));
    return out;
}

double min_epsilon_for_partition(const LabelledMarkovChain& chain, const Partition& partition) {
    if (partition.n_states() != chain.n_states())
        throw ValidationError("partition is over a different state count than the chain");
    double worst = 0.0;
    const std::size_t k = static_cast<std::size_t>(partition.n_blocks());
    for (int b = 0; b < partition.n_blocks(); ++b) {
        const auto& blk = partition.block(b);
        for (state_t u : blk) {
            if (chain.label(u) != chain.label(blk.front())) return std::numeric_limits<double>::infinity();
        }
        if (blk.size() == 1) continue;
        std::vector<std::vector<double>> lumped;
        lumped.reserve(blk.size());
        for (state_t u : blk) lumped.push_back(lump(chain, u, partition).to_dense(k));
        worst = std::max(worst, l1_chebyshev_center(lumped).radius);
    }
    return worst;
}

} // namespace mcmin

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mcmin/errors.hpp"
#include "mcmin/types.hpp"

namespace mcmin {

/// A sparse probability (sub)distribution over dense state indices.
/// Entries are sorted by index, carry no zeros and no negative mass.
class SparseDistribution {
public:
    struct Entry {
        state_t to;
        double p;

        bool operator==(const Entry&) const = default;
    };

    SparseDistribution() = default;

    /// Dirac distribution on `s`.
    static SparseDistribution point(state_t s);

    /// Builds a distribution from (index, mass) pairs. Duplicate indices are
    /// merged, zeros dropped. Throws NotADistribution when an entry is
    /// negative, or when the mass is not 1 within `tol` (unless
    /// `allow_sub` is set, in which case any mass in (0, 1 + tol] passes).
    static SparseDistribution from_entries(std::vector<Entry> entries, double tol = kTolStochastic,
                                           bool allow_sub = false);

    static SparseDistribution from_dense(const std::vector<double>& dense, double tol = kTolStochastic,
                                         bool allow_sub = false);

    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t support_size() const { return entries_.size(); }
    double mass() const { return mass_; }
    bool subdistribution() const { return sub_; }

    /// Mass at index `s` (0 when absent).
    double at(state_t s) const;

    /// Largest index in the support, -1 when empty.
    state_t max_index() const { return entries_.empty() ? -1 : entries_.back().to; }

    std::vector<double> to_dense(std::size_t n) const;

    bool operator==(const SparseDistribution&) const = default;

private:
    std::vector<Entry> entries_;
    double mass_ = 0.0;
    bool sub_ = false;
};

/// L1 norm of the difference vector, Sum_i |a(i) - b(i)|.
double l1_distance(const SparseDistribution& a, const SparseDistribution& b);

/// True when |a(i) - b(i)| <= tol for every index.
bool approx_equal(const SparseDistribution& a, const SparseDistribution& b, double tol);

/// A partition of {0, .., n-1} into disjoint nonempty blocks. Canonical form:
/// block members ascending, blocks ordered by least member. Block indices
/// refer to this canonical order.
class Partition {
public:
    Partition() = default;

    /// Validates that `blocks` cover 0..n-1 exactly once, then canonicalises.
    static Partition from_blocks(std::vector<std::vector<state_t>> blocks, state_t n_states);

    /// Builds the partition whose block ids are the values of `block_of`
    /// (renumbered canonically).
    static Partition from_mapping(const std::vector<state_t>& block_of);

    static Partition singletons(state_t n);
    static Partition whole(state_t n);

    state_t n_states() const { return static_cast<state_t>(block_of_.size()); }
    int n_blocks() const { return static_cast<int>(blocks_.size()); }
    int block_of(state_t s) const { return block_of_[static_cast<std::size_t>(s)]; }
    const std::vector<state_t>& block(int b) const { return blocks_[static_cast<std::size_t>(b)]; }
    const std::vector<std::vector<state_t>>& blocks() const { return blocks_; }

    /// True when every block of this partition lies inside a block of
    /// `coarser`.
    bool refines(const Partition& coarser) const;

    bool operator==(const Partition&) const = default;

private:
    std::vector<std::vector<state_t>> blocks_;
    std::vector<int> block_of_;
};

/// A labelled Markov chain: one label per state, one row-stochastic sparse
/// successor distribution per state. Immutable after construction. The label
/// name table always covers ids 0..n_labels-1 (missing names are generated).
class LabelledMarkovChain {
public:
    LabelledMarkovChain() = default;

    /// Validates: at least one state, rows proper distributions within
    /// `tol`, every transition target within range, labels dense-ish
    /// (0 <= id, name table extended to the max id).
    LabelledMarkovChain(std::vector<label_t> labels, std::vector<SparseDistribution> rows,
                        std::vector<std::string> label_names = {}, double tol = kTolStochastic);

    state_t n_states() const { return static_cast<state_t>(labels_.size()); }
    label_t label(state_t s) const { return labels_[static_cast<std::size_t>(s)]; }
    const std::vector<label_t>& labels() const { return labels_; }
    const SparseDistribution& row(state_t s) const { return rows_[static_cast<std::size_t>(s)]; }
    const std::vector<SparseDistribution>& rows() const { return rows_; }
    int n_labels() const { return static_cast<int>(label_names_.size()); }
    const std::vector<std::string>& label_names() const { return label_names_; }
    const std::string& label_name(label_t l) const { return label_names_[static_cast<std::size_t>(l)]; }

    std::size_t n_transitions() const;

private:
    std::vector<label_t> labels_;
    std::vector<SparseDistribution> rows_;
    std::vector<std::string> label_names_;
};

/// Quotient chain together with the (total, surjective) map from original
/// states to quotient states.
struct QuotientResult {
    LabelledMarkovChain quotient;
    std::vector<state_t> mapping;
};

struct DirectSumResult {
    LabelledMarkovChain chain;
    state_t offset; // index of b's first state inside the sum
};

/// Successor mass of `state` aggregated over the partition's blocks,
/// (tau(s)(E))_{E in X}, as a distribution over block indices.
SparseDistribution lump(const LabelledMarkovChain& chain, state_t state, const Partition& partition);

/// Same aggregation applied to a free-standing row.
SparseDistribution lump_row(const SparseDistribution& row, const Partition& partition);

/// Exact probabilistic-bisimulation quotient via iterated signature
/// refinement: blocks split by (label, lumped row) until stable, rows
/// compared within `tol_exact` per coordinate. States are grouped iff
/// bisimilar; the quotient has no two bisimilar states. Quotient state k is
/// the block with the k-th smallest least member; its row and label are
/// taken from that least member.
QuotientResult exact_quotient(const LabelledMarkovChain& chain, double tol_exact = kTolExact);

/// The partition of states into bisimilarity classes (same computation as
/// exact_quotient, returned as a Partition).
Partition bisimulation_partition(const LabelledMarkovChain& chain, double tol_exact = kTolExact);

/// Disjoint union of two chains. Label universes are merged by name; b's
/// states are re-indexed by `offset`. Both chains must be nonempty (the
/// constructor enforces this).
DirectSumResult direct_sum(const LabelledMarkovChain& a, const LabelledMarkovChain& b);

/// Quotient of `chain` with respect to a given lumpable partition: all
/// states of a block must share a label and have equal lumped rows within
/// `tol_exact` (L1), otherwise NotLumpable is thrown. Rows are taken from
/// each block's least member.
QuotientResult quotient_wrt(const LabelledMarkovChain& chain, const Partition& partition,
                            double tol_exact = kTolExact);

} // namespace mcmin

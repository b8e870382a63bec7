#include "mcmin/lmc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

namespace mcmin {

SparseDistribution SparseDistribution::point(state_t s) {
    SparseDistribution d;
    d.entries_ = {{s, 1.0}};
    d.mass_ = 1.0;
    return d;
}

SparseDistribution SparseDistribution::from_entries(std::vector<Entry> entries, double tol, bool allow_sub) {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.to < b.to; });
    SparseDistribution d;
    d.entries_.reserve(entries.size());
    for (const Entry& e : entries) {
        if (e.p < 0.0) {
            throw NotADistribution("negative mass " + std::to_string(e.p) + " at index " + std::to_string(e.to));
        }
        if (e.to < 0) throw NotADistribution("negative state index");
        if (e.p == 0.0) continue;
        if (!d.entries_.empty() && d.entries_.back().to == e.to) {
            d.entries_.back().p += e.p;
        } else {
            d.entries_.push_back(e);
        }
    }
    double mass = 0.0;
    for (const Entry& e : d.entries_) mass += e.p;
    d.mass_ = mass;
    if (allow_sub) {
        if (mass <= 0.0 || mass > 1.0 + tol) {
            throw NotADistribution("subdistribution mass " + std::to_string(mass) + " outside (0, 1]");
        }
        d.sub_ = std::abs(mass - 1.0) > tol;
    } else if (std::abs(mass - 1.0) > tol) {
        throw NotADistribution("distribution mass " + std::to_string(mass) + " not 1 within tolerance " +
                               std::to_string(tol));
    }
    return d;
}

SparseDistribution SparseDistribution::from_dense(const std::vector<double>& dense, double tol, bool allow_sub) {
    std::vector<Entry> entries;
    entries.reserve(dense.size());
    for (std::size_t i = 0; i < dense.size(); ++i) {
        if (dense[i] != 0.0) entries.push_back({static_cast<state_t>(i), dense[i]});
    }
    return from_entries(std::move(entries), tol, allow_sub);
}

double SparseDistribution::at(state_t s) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), s,
                               [](const Entry& e, state_t v) { return e.to < v; });
    return (it != entries_.end() && it->to == s) ? it->p : 0.0;
}

std::vector<double> SparseDistribution::to_dense(std::size_t n) const {
    std::vector<double> dense(n, 0.0);
    for (const Entry& e : entries_) dense[static_cast<std::size_t>(e.to)] = e.p;
    return dense;
}

double l1_distance(const SparseDistribution& a, const SparseDistribution& b) {
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    std::size_t i = 0, j = 0;
    double sum = 0.0;
    while (i < ea.size() && j < eb.size()) {
        if (ea[i].to < eb[j].to) {
            sum += std::abs(ea[i].p);
            ++i;
        } else if (eb[j].to < ea[i].to) {
            sum += std::abs(eb[j].p);
            ++j;
        } else {
            sum += std::abs(ea[i].p - eb[j].p);
            ++i;
            ++j;
        }
    }
    for (; i < ea.size(); ++i) sum += std::abs(ea[i].p);
    for (; j < eb.size(); ++j) sum += std::abs(eb[j].p);
    return sum;
}

bool approx_equal(const SparseDistribution& a, const SparseDistribution& b, double tol) {
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    std::size_t i = 0, j = 0;
    while (i < ea.size() && j < eb.size()) {
        if (ea[i].to < eb[j].to) {
            if (std::abs(ea[i].p) > tol) return false;
            ++i;
        } else if (eb[j].to < ea[i].to) {
            if (std::abs(eb[j].p) > tol) return false;
            ++j;
        } else {
            if (std::abs(ea[i].p - eb[j].p) > tol) return false;
            ++i;
            ++j;
        }
    }
    for (; i < ea.size(); ++i)
        if (std::abs(ea[i].p) > tol) return false;
    for (; j < eb.size(); ++j)
        if (std::abs(eb[j].p) > tol) return false;
    return true;
}

Partition Partition::from_blocks(std::vector<std::vector<state_t>> blocks, state_t n_states) {
    std::vector<int> block_of(static_cast<std::size_t>(n_states), -1);
    for (auto& blk : blocks) {
        if (blk.empty()) throw ValidationError("partition contains an empty block");
        std::sort(blk.begin(), blk.end());
        for (state_t s : blk) {
            if (s < 0 || s >= n_states) throw ValidationError("partition member out of range");
            if (block_of[static_cast<std::size_t>(s)] != -1)
                throw ValidationError("state " + std::to_string(s) + " appears in two blocks");
            block_of[static_cast<std::size_t>(s)] = 0; // provisional
        }
    }
    for (state_t s = 0; s < n_states; ++s) {
        if (block_of[static_cast<std::size_t>(s)] == -1)
            throw ValidationError("state " + std::to_string(s) + " not covered by the partition");
    }
    std::sort(blocks.begin(), blocks.end(),
              [](const std::vector<state_t>& a, const std::vector<state_t>& b) { return a.front() < b.front(); });
    Partition p;
    p.blocks_ = std::move(blocks);
    p.block_of_.assign(static_cast<std::size_t>(n_states), -1);
    for (int b = 0; b < static_cast<int>(p.blocks_.size()); ++b) {
        for (state_t s : p.blocks_[static_cast<std::size_t>(b)]) p.block_of_[static_cast<std::size_t>(s)] = b;
    }
    return p;
}

Partition Partition::from_mapping(const std::vector<state_t>& block_of) {
    std::map<state_t, std::vector<state_t>> groups;
    for (std::size_t s = 0; s < block_of.size(); ++s) {
        groups[block_of[s]].push_back(static_cast<state_t>(s));
    }
    std::vector<std::vector<state_t>> blocks;
    blocks.reserve(groups.size());
    for (auto& [id, members] : groups) blocks.push_back(std::move(members));
    return from_blocks(std::move(blocks), static_cast<state_t>(block_of.size()));
}

Partition Partition::singletons(state_t n) {
    std::vector<std::vector<state_t>> blocks(static_cast<std::size_t>(n));
    for (state_t s = 0; s < n; ++s) blocks[static_cast<std::size_t>(s)] = {s};
    return from_blocks(std::move(blocks), n);
}

Partition Partition::whole(state_t n) {
    std::vector<state_t> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    return from_blocks({std::move(all)}, n);
}

bool Partition::refines(const Partition& coarser) const {
    if (n_states() != coarser.n_states()) return false;
    for (const auto& blk : blocks_) {
        const int target = coarser.block_of(blk.front());
        for (state_t s : blk) {
            if (coarser.block_of(s) != target) return false;
        }
    }
    return true;
}

LabelledMarkovChain::LabelledMarkovChain(std::vector<label_t> labels, std::vector<SparseDistribution> rows,
                                         std::vector<std::string> label_names, double tol)
    : labels_(std::move(labels)), rows_(std::move(rows)), label_names_(std::move(label_names)) {
    if (labels_.empty()) throw ValidationError("a labelled Markov chain needs at least one state");
    if (labels_.size() != rows_.size())
        throw ValidationError("label/row count mismatch: " + std::to_string(labels_.size()) + " vs " +
                              std::to_string(rows_.size()));
    const state_t n = n_states();
    label_t max_label = 0;
    for (std::size_t s = 0; s < labels_.size(); ++s) {
        if (labels_[s] < 0) throw ValidationError("negative label id at state " + std::to_string(s));
        max_label = std::max(max_label, labels_[s]);
        const SparseDistribution& row = rows_[s];
        if (row.subdistribution() || std::abs(row.mass() - 1.0) > tol) {
            throw NonStochasticRow(static_cast<state_t>(s), row.mass(),
                                   "row of state " + std::to_string(s) + " has mass " + std::to_string(row.mass()));
        }
        if (row.max_index() >= n) {
            throw ValidationError("row of state " + std::to_string(s) + " targets state " +
                                  std::to_string(row.max_index()) + " >= " + std::to_string(n));
        }
        if (row.entries().empty()) {
            throw NonStochasticRow(static_cast<state_t>(s), 0.0,
                                   "row of state " + std::to_string(s) + " is empty");
        }
    }
    for (std::size_t l = label_names_.size(); l <= static_cast<std::size_t>(max_label); ++l) {
        label_names_.push_back("L" + std::to_string(l));
    }
}

std::size_t LabelledMarkovChain::n_transitions() const {
    std::size_t total = 0;
    for (const auto& row : rows_) total += row.support_size();
    return total;
}

SparseDistribution lump_row(const SparseDistribution& row, const Partition& partition) {
    std::vector<std::pair<int, double>> acc; // small, usually near support size
    for (const auto& e : row.entries()) {
        acc.emplace_back(partition.block_of(e.to), e.p);
    }
    std::sort(acc.begin(), acc.end());
    std::vector<SparseDistribution::Entry> entries;
    entries.reserve(acc.size());
    for (const auto& [b, p] : acc) {
        if (!entries.empty() && entries.back().to == b) {
            entries.back().p += p;
        } else {
            entries.push_back({static_cast<state_t>(b), p});
        }
    }
    // Mass is conserved exactly up to fp addition order; re-validate loosely.
    return SparseDistribution::from_entries(std::move(entries), 1e-6, row.subdistribution());
}

SparseDistribution lump(const LabelledMarkovChain& chain, state_t state, const Partition& partition) {
    if (partition.n_states() != chain.n_states())
        throw ValidationError("partition is over a different state count than the chain");
    return lump_row(chain.row(state), partition);
}

namespace {

using SigVec = std::vector<SparseDistribution::Entry>;

// Signature of a state for refinement: lumped row with sub-tolerance dust
// dropped so that lexicographic sorting puts near-equal vectors next to each
// other.
SigVec signature(const SparseDistribution& lumped) {
    SigVec v;
    v.reserve(lumped.entries().size());
    for (const auto& e : lumped.entries()) {
        if (e.p > 1e-12) v.push_back(e);
    }
    return v;
}

bool sig_less(const SigVec& a, const SigVec& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].to != b[i].to) return a[i].to < b[i].to;
        if (a[i].p != b[i].p) return a[i].p < b[i].p;
    }
    return a.size() < b.size();
}

bool sig_close(const SigVec& a, const SigVec& b, double tol) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].to < b[j].to) {
            if (a[i].p > tol) return false;
            ++i;
        } else if (b[j].to < a[i].to) {
            if (b[j].p > tol) return false;
            ++j;
        } else {
            if (std::abs(a[i].p - b[j].p) > tol) return false;
            ++i;
            ++j;
        }
    }
    for (; i < a.size(); ++i)
        if (a[i].p > tol) return false;
    for (; j < b.size(); ++j)
        if (b[j].p > tol) return false;
    return true;
}

Partition label_partition(const LabelledMarkovChain& chain) {
    std::map<label_t, std::vector<state_t>> by_label;
    for (state_t s = 0; s < chain.n_states(); ++s) by_label[chain.label(s)].push_back(s);
    std::vector<std::vector<state_t>> blocks;
    blocks.reserve(by_label.size());
    for (auto& [l, members] : by_label) blocks.push_back(std::move(members));
    return Partition::from_blocks(std::move(blocks), chain.n_states());
}

} // namespace

Partition bisimulation_partition(const LabelledMarkovChain& chain, double tol_exact) {
    Partition current = label_partition(chain);
    while (true) {
        std::vector<std::vector<state_t>> next;
        next.reserve(static_cast<std::size_t>(current.n_blocks()));
        for (const auto& blk : current.blocks()) {
            if (blk.size() == 1) {
                next.push_back(blk);
                continue;
            }
            std::vector<std::pair<SigVec, state_t>> sigs;
            sigs.reserve(blk.size());
            for (state_t s : blk) {
                sigs.emplace_back(signature(lump(chain, s, current)), s);
            }
            // Deterministic: exact lexicographic order, ties by state index,
            // then anchor grouping within the per-coordinate tolerance.
            std::sort(sigs.begin(), sigs.end(), [](const auto& a, const auto& b) {
                if (sig_less(a.first, b.first)) return true;
                if (sig_less(b.first, a.first)) return false;
                return a.second < b.second;
            });
            std::size_t group_start = 0;
            for (std::size_t i = 0; i <= sigs.size(); ++i) {
                if (i == sigs.size() || !sig_close(sigs[group_start].first, sigs[i].first, tol_exact)) {
                    std::vector<state_t> members;
                    members.reserve(i - group_start);
                    for (std::size_t k = group_start; k < i; ++k) members.push_back(sigs[k].second);
                    next.push_back(std::move(members));
                    group_start = i;
                }
            }
        }
        Partition refined = Partition::from_blocks(std::move(next), chain.n_states());
        if (refined.n_blocks() == current.n_blocks()) return refined;
        current = std::move(refined);
    }
}

QuotientResult quotient_wrt(const LabelledMarkovChain& chain, const Partition& partition, double tol_exact) {
    if (partition.n_states() != chain.n_states())
        throw ValidationError("partition is over a different state count than the chain");
    const int k = partition.n_blocks();
    std::vector<label_t> labels(static_cast<std::size_t>(k));
    std::vector<SparseDistribution> rows(static_cast<std::size_t>(k));
    for (int b = 0; b < k; ++b) {
        const auto& blk = partition.block(b);
        const state_t anchor = blk.front();
        for (state_t s : blk) {
            if (chain.label(s) != chain.label(anchor)) {
                throw LabelMismatch("states " + std::to_string(anchor) + " and " + std::to_string(s) +
                                    " share block " + std::to_string(b) + " but carry different labels");
            }
        }
        SparseDistribution anchor_row = lump(chain, anchor, partition);
        for (std::size_t i = 1; i < blk.size(); ++i) {
            const SparseDistribution other = lump(chain, blk[i], partition);
            const double dev = l1_distance(anchor_row, other);
            if (!approx_equal(anchor_row, other, tol_exact)) {
                throw NotLumpable(b, anchor, blk[i], dev,
                                  "block " + std::to_string(b) + " not lumpable: lumped rows of " +
                                      std::to_string(anchor) + " and " + std::to_string(blk[i]) +
                                      " differ by " + std::to_string(dev));
            }
        }
        labels[static_cast<std::size_t>(b)] = chain.label(anchor);
        rows[static_cast<std::size_t>(b)] = std::move(anchor_row);
    }
    QuotientResult result{LabelledMarkovChain(std::move(labels), std::move(rows), chain.label_names()), {}};
    result.mapping.resize(static_cast<std::size_t>(chain.n_states()));
    for (state_t s = 0; s < chain.n_states(); ++s)
        result.mapping[static_cast<std::size_t>(s)] = static_cast<state_t>(partition.block_of(s));
    return result;
}

QuotientResult exact_quotient(const LabelledMarkovChain& chain, double tol_exact) {
    return quotient_wrt(chain, bisimulation_partition(chain, tol_exact), tol_exact);
}

DirectSumResult direct_sum(const LabelledMarkovChain& a, const LabelledMarkovChain& b) {
    // Merge label universes by display name.
    std::vector<std::string> names = a.label_names();
    std::unordered_map<std::string, label_t> by_name;
    for (std::size_t i = 0; i < names.size(); ++i) by_name[names[i]] = static_cast<label_t>(i);
    std::vector<label_t> remap(b.label_names().size());
    for (std::size_t i = 0; i < b.label_names().size(); ++i) {
        auto it = by_name.find(b.label_name(static_cast<label_t>(i)));
        if (it != by_name.end()) {
            remap[i] = it->second;
        } else {
            remap[i] = static_cast<label_t>(names.size());
            by_name[b.label_name(static_cast<label_t>(i))] = remap[i];
            names.push_back(b.label_name(static_cast<label_t>(i)));
        }
    }

    const state_t offset = a.n_states();
    std::vector<label_t> labels;
    labels.reserve(static_cast<std::size_t>(a.n_states() + b.n_states()));
    std::vector<SparseDistribution> rows;
    rows.reserve(labels.capacity());
    for (state_t s = 0; s < a.n_states(); ++s) {
        labels.push_back(a.label(s));
        rows.push_back(a.row(s));
    }
    for (state_t s = 0; s < b.n_states(); ++s) {
        labels.push_back(remap[static_cast<std::size_t>(b.label(s))]);
        std::vector<SparseDistribution::Entry> shifted;
        shifted.reserve(b.row(s).support_size());
        for (const auto& e : b.row(s).entries()) shifted.push_back({static_cast<state_t>(e.to + offset), e.p});
        rows.push_back(SparseDistribution::from_entries(std::move(shifted), 1e-6));
    }
    return {LabelledMarkovChain(std::move(labels), std::move(rows), std::move(names)), offset};
}

} // namespace mcmin

#pragma once

#include <cstdint>
#include <vector>

#include "mcmin/lmc.hpp"

namespace mcmin {

/// Two 2-cycles with self-loops: s1, s2 (probabilities exactly 1/2) and
/// t1, t2 (1/2 + eps self, 1/2 - eps across). Labels: s1, t1 "white";
/// s2, t2 "green". State order: s1, s2, t1, t2. Requires eps in [0, 1/2).
LabelledMarkovChain fig1(double eps);

/// Three a-labelled states over an absorbing b-state:
/// s1 -> {s1: 1/2, s2: 1/4, x: 1/4}, s2 -> {s2: 3/4 + 2eps, x: 1/4 - 2eps},
/// s3 -> {s3: 3/4 + eps, x: 1/4 - eps}. State order: s1, s2, s3, x.
LabelledMarkovChain fig4(double eps);

/// The 4-state order-sensitivity chain:
/// s1 -> {s3: .5, v: .5}, s2 -> {s1: .54, v: .46}, s3 -> {s3: .46, v: .54},
/// absorbing v. State order: s1, s2, s3, v.
LabelledMarkovChain fig8();

/// The 5-state chain with t1 ~eps s ~eps t ~eps s1 (equals family_m(even, 1)).
/// State order: s, t, s1, t1, x.
LabelledMarkovChain example5(double eps);

struct SubsetSumChain {
    LabelledMarkovChain chain; // s, s_1..s_n, s_a, s_b, t, t_1, t_2, t_a, t_b
    double eps;                // 1 / (2T)
    int k;                     // always 5
};

/// Reduction gadget: a size-5 (1/2T)-quotient exists iff some subset of P
/// sums to N. All probabilities are built in exact rational arithmetic.
SubsetSumChain subset_sum_chain(const std::vector<std::int64_t>& p, std::int64_t n);

enum class FamilyKind { odd, even };

/// The family M(2n-1) (kind odd, 2n+2 states) and M(2n) (kind even, 2n+3
/// states): chains of pairwise eps-bisimilar states whose merged class only
/// admits budgets of at least 2n*eps resp. (2n+1)*eps. eps must lie in
/// (0, 1/((n+1) 2^{n+1})]. State order: s, t, s_1..s_n, t_1..t_{n-1 or n}, x.
/// For the degenerate odd n = 1 the (empty) t-target mass stays on the
/// looping state itself.
LabelledMarkovChain family_m(FamilyKind kind, int n, double eps);

/// Decides by enumeration whether some label-homogeneous k-block partition is
/// lumpable within eps (block Chebyshev radii) and induces a minimal k-state
/// chain. Guarded to |S| <= 12 (TooLarge beyond).
bool brute_force_k_quotient(const LabelledMarkovChain& chain, double eps, int k);

} // namespace mcmin

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cvplan/errors.hpp"
#include "cvplan/rational.hpp"

namespace cvplan {

// Geometry of one train/test split: n = n1 + n2 with 1 <= n2 <= n1 < n.
struct SplitGeometry {
    int n;
    int n1;
    int n2;

    SplitGeometry(int n_, int n1_) : n(n_), n1(n1_), n2(n_ - n1_) {
        if (n < 2 || n1 < 1 || n1 >= n || n2 > n1)
            throw InvalidGeometry("SplitGeometry: need 1 <= n2 <= n1 < n, got n=" +
                                  std::to_string(n) + " n1=" + std::to_string(n1));
    }
};

// Closed-form moments of uniformly drawn index sets, one tag per formula.
// Tags a..e describe a single random training set S; f..k describe two
// independent sets S, S'. Multi-formula parts carry suffixed tags.
enum class MomentTag {
    a,       // P(i in S^c)
    b1,      // P(i, i' in S^c)
    b2,      // P(i in S^c, i' in S)
    c,       // P(i in S^c, i', i'' in S)
    d_mean,  // E 1{i in S^c}
    d_var,   // Var 1{i in S^c}
    e,       // E 1{i, i' in S^c}
    f,       // E 1{i in S^c and i in S'^c}
    g,       // E 1{i in S^c, i' in S'^c, i' in S}
    h,       // E 1{i in S^c, i' in S'^c, i' in S, i in S'}
    i1,      // E card(S ^ S') 1{i in S^c and S'^c}
    i2,      // E card^2(S ^ S') 1{i in S^c and S'^c}
    j,       // E card^2(S ^ S') 1{i in S^c, i' in S'^c}
    k,       // E card(S ^ S') 1{i in S^c, i' in S'^c, i in S'}
};

const std::array<MomentTag, 14>& all_moment_tags();
std::string tag_name(MomentTag tag);
MomentTag tag_from_name(const std::string& name);

// True for tags defined over an independent pair (S, S').
bool is_pair_tag(MomentTag tag);

// Closed form of the tagged moment, exact. Tags whose defining expression
// uses three distinct fixed indices (or an n-2 denominator) require n >= 3.
Rational lemma_moment(MomentTag tag, const SplitGeometry& geom);

// Brute-force oracle: averages the tag's defining expression over every
// subset (or ordered pair of subsets) of size n1, in lexicographic rank
// order. Rejects enumerations with C(n,n1)^2 > 10^7.
Rational enumerate_moment(MomentTag tag, const SplitGeometry& geom);

// Lexicographic unranking of k-subsets of {0,...,n-1}; the scheme used by
// enumerate_moment, exposed so a failing rank can be reproduced directly.
std::vector<int> unrank_combination(int n, int k, const BigInt& rank);

// Training-set overlap constants in k-fold CV (disjoint test folds):
// Y = card(S_j ^ S_j') = (k-2)n/k and Y* = card(S_j^c ^ S_j'^c) = 0.
struct KfoldOverlap {
    std::int64_t y;
    std::int64_t ystar;
};
KfoldOverlap kfold_overlap(std::int64_t n, std::int64_t k);

}  // namespace cvplan

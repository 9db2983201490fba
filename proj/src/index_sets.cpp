#include "cvplan/index_sets.hpp"

#include <algorithm>

namespace cvplan {

namespace {

constexpr double kEnumerationBudget = 1e7;  // bound on C(n,n1)^2

// Tags whose formula involves three distinct indices or an n-2 factor.
bool needs_three(MomentTag tag) {
    return tag == MomentTag::c || tag == MomentTag::i2 || tag == MomentTag::j;
}

// Advances a sorted k-subset of {0..n-1} to its lexicographic successor.
// Returns false after the last subset.
bool next_combination(std::vector<int>& comb, int n) {
    const int k = static_cast<int>(comb.size());
    int i = k - 1;
    while (i >= 0 && comb[i] == n - k + i) --i;
    if (i < 0) return false;
    ++comb[i];
    for (int t = i + 1; t < k; ++t) comb[t] = comb[t - 1] + 1;
    return true;
}

int intersection_size(const std::vector<int>& s, const std::vector<int>& t) {
    int count = 0;
    std::size_t i = 0, j = 0;
    while (i < s.size() && j < t.size()) {
        if (s[i] < t[j]) ++i;
        else if (s[i] > t[j]) ++j;
        else { ++count; ++i; ++j; }
    }
    return count;
}

bool contains(const std::vector<int>& sorted, int x) {
    return std::binary_search(sorted.begin(), sorted.end(), x);
}

}  // namespace

const std::array<MomentTag, 14>& all_moment_tags() {
    static const std::array<MomentTag, 14> tags = {
        MomentTag::a,  MomentTag::b1, MomentTag::b2, MomentTag::c,
        MomentTag::d_mean, MomentTag::d_var, MomentTag::e, MomentTag::f,
        MomentTag::g,  MomentTag::h,  MomentTag::i1, MomentTag::i2,
        MomentTag::j,  MomentTag::k};
    return tags;
}

std::string tag_name(MomentTag tag) {
    switch (tag) {
        case MomentTag::a: return "a";
        case MomentTag::b1: return "b1";
        case MomentTag::b2: return "b2";
        case MomentTag::c: return "c";
        case MomentTag::d_mean: return "d_mean";
        case MomentTag::d_var: return "d_var";
        case MomentTag::e: return "e";
        case MomentTag::f: return "f";
        case MomentTag::g: return "g";
        case MomentTag::h: return "h";
        case MomentTag::i1: return "i1";
        case MomentTag::i2: return "i2";
        case MomentTag::j: return "j";
        case MomentTag::k: return "k";
    }
    throw DomainError("unknown moment tag");
}

MomentTag tag_from_name(const std::string& name) {
    for (MomentTag tag : all_moment_tags())
        if (tag_name(tag) == name) return tag;
    throw DomainError("unknown moment tag: " + name);
}

bool is_pair_tag(MomentTag tag) {
    switch (tag) {
        case MomentTag::f:
        case MomentTag::g:
        case MomentTag::h:
        case MomentTag::i1:
        case MomentTag::i2:
        case MomentTag::j:
        case MomentTag::k:
            return true;
        default:
            return false;
    }
}

Rational lemma_moment(MomentTag tag, const SplitGeometry& geom) {
    if (needs_three(tag) && geom.n < 3)
        throw InvalidGeometry("tag " + tag_name(tag) + " needs n >= 3");
    const BigInt n = geom.n, n1 = geom.n1, n2 = geom.n2;
    switch (tag) {
        case MomentTag::a:
        case MomentTag::d_mean:
            return Rational(n2, n);
        case MomentTag::b1:
        case MomentTag::e:
            return Rational(n2 * (n2 - 1), n * (n - 1));
        case MomentTag::b2:
            return Rational(n1 * n2, n * (n - 1));
        case MomentTag::c:
            return Rational(n1 * n2 * (n1 - 1), n * (n - 1) * (n - 2));
        case MomentTag::d_var:
            return Rational(n1 * n2, n * n);
        case MomentTag::f:
            return Rational(n2 * n2, n * n);
        case MomentTag::g:
            return Rational(n1 * n2 * n2, n * n * (n - 1));
        case MomentTag::h:
            return Rational(n1 * n1 * n2 * n2, n * n * (n - 1) * (n - 1));
        case MomentTag::i1:
            return Rational(n1 * n1 * n2 * n2, n * n * (n - 1));
        case MomentTag::i2:
            return Rational(n1 * n1 * n2 * n2 * (n1 * (n1 - 1) + n2 - 1),
                            n * n * (n - 1) * (n - 2));
        case MomentTag::j:
            return Rational(
                n1 * n1 * n2 * n2 * ((n - 2) * (n - 2) + (n - 3) * (n1 - 1) * (n1 - 1)),
                n * n * (n - 1) * (n - 1) * (n - 2));
        case MomentTag::k:
            return Rational(n1 * n1 * n2 * n2 * (n1 - 1),
                            n * n * (n - 1) * (n - 1));
    }
    throw DomainError("unknown moment tag");
}

std::vector<int> unrank_combination(int n, int k, const BigInt& rank) {
    std::vector<int> comb;
    comb.reserve(static_cast<std::size_t>(k));
    BigInt r = rank;
    int x = 0;
    for (int slot = 0; slot < k; ++slot) {
        while (true) {
            BigInt below = binomial(static_cast<unsigned>(n - x - 1),
                                    static_cast<unsigned>(k - slot - 1));
            if (r < below) break;
            r -= below;
            ++x;
        }
        comb.push_back(x++);
    }
    return comb;
}

Rational enumerate_moment(MomentTag tag, const SplitGeometry& geom) {
    if (needs_three(tag) && geom.n < 3)
        throw InvalidGeometry("tag " + tag_name(tag) + " needs n >= 3");
    const BigInt count = binomial(static_cast<unsigned>(geom.n),
                                  static_cast<unsigned>(geom.n1));
    if (count.convert_to<double>() * count.convert_to<double>() > kEnumerationBudget)
        throw BudgetExceeded("enumeration over C(n,n1)^2 exceeds budget");

    const int n = geom.n, n1 = geom.n1;
    // Fixed distinct indices i = 0, i' = 1, i'' = 2.
    if (!is_pair_tag(tag)) {
        BigInt sum = 0;
        std::vector<int> s = unrank_combination(n, n1, 0);
        do {
            const bool i_out = !contains(s, 0);
            int value = 0;
            switch (tag) {
                case MomentTag::a:
                case MomentTag::d_mean:
                case MomentTag::d_var:
                    value = i_out ? 1 : 0;
                    break;
                case MomentTag::b1:
                case MomentTag::e:
                    value = (i_out && !contains(s, 1)) ? 1 : 0;
                    break;
                case MomentTag::b2:
                    value = (i_out && contains(s, 1)) ? 1 : 0;
                    break;
                case MomentTag::c:
                    value = (i_out && contains(s, 1) && contains(s, 2)) ? 1 : 0;
                    break;
                default:
                    throw DomainError("pair tag in single-set path");
            }
            sum += value;
        } while (next_combination(s, n));
        Rational mean(sum, count);
        if (tag == MomentTag::d_var) return mean - mean * mean;  // indicator^2 = indicator
        return mean;
    }

    BigInt sum = 0;
    std::vector<int> s = unrank_combination(n, n1, 0);
    do {
        const bool i_out_s = !contains(s, 0);
        const bool ip_in_s = contains(s, 1);
        std::vector<int> t = unrank_combination(n, n1, 0);
        do {
            const bool i_out_t = !contains(t, 0);
            const bool ip_out_t = !contains(t, 1);
            BigInt value = 0;
            switch (tag) {
                case MomentTag::f:
                    value = (i_out_s && i_out_t) ? 1 : 0;
                    break;
                case MomentTag::g:
                    value = (i_out_s && ip_out_t && ip_in_s) ? 1 : 0;
                    break;
                case MomentTag::h:
                    value = (i_out_s && ip_out_t && ip_in_s && !i_out_t) ? 1 : 0;
                    break;
                case MomentTag::i1:
                    if (i_out_s && i_out_t) value = intersection_size(s, t);
                    break;
                case MomentTag::i2:
                    if (i_out_s && i_out_t) {
                        BigInt y = intersection_size(s, t);
                        value = y * y;
                    }
                    break;
                case MomentTag::j:
                    if (i_out_s && ip_out_t) {
                        BigInt y = intersection_size(s, t);
                        value = y * y;
                    }
                    break;
                case MomentTag::k:
                    if (i_out_s && ip_out_t && !i_out_t)
                        value = intersection_size(s, t);
                    break;
                default:
                    throw DomainError("single-set tag in pair path");
            }
            sum += value;
        } while (next_combination(t, n));
    } while (next_combination(s, n));
    return Rational(sum, count * count);
}

KfoldOverlap kfold_overlap(std::int64_t n, std::int64_t k) {
    if (k < 2 || k > n) throw InvalidGeometry("kfold_overlap: need 2 <= k <= n");
    if (n % k != 0) throw NotDivisible("kfold_overlap: k must divide n");
    return KfoldOverlap{(k - 2) * n / k, 0};
}

}  // namespace cvplan

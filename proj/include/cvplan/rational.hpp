#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace cvplan {

// Exact big-integer rationals. Moment identities are proved by strict
// equality on these; conversion to double happens only at API boundaries.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

}  // namespace cvplan

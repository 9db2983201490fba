#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cvplan/errors.hpp"
#include "cvplan/rng.hpp"

namespace cvplan {

enum class DistFamily { Normal, Uniform, StudentT, Exponential, LogNormal, Pareto };

// A sampling distribution with analytic raw moments (up to order 8) where
// they exist. StudentT supports a location shift: X - shift ~ t_nu.
struct DistSpec {
    DistFamily family;
    double a = 0.0;  // Normal: mu; Uniform: lower; StudentT: nu; Exponential: rate; Pareto: shape
    double b = 1.0;  // Normal: sigma; Uniform: upper; StudentT: shift; Pareto: scale

    static DistSpec normal(double mu, double sigma);
    static DistSpec uniform(double lo, double hi);
    static DistSpec student_t(int nu, double shift = 0.0);
    static DistSpec exponential(double rate);
    static DistSpec log_normal();
    static DistSpec pareto(double shape, double scale = 1.0);

    std::string name() const;

    // Largest m with E|X|^m finite (capped at a large sentinel for light tails).
    int finite_moments() const;
    // Raw moment E X^k, k <= 8; NaN when it does not exist.
    double raw_moment(int k) const;
    double central_moment(int k) const;
    double mean() const { return raw_moment(1); }
    double variance() const { return central_moment(2); }
};

DistSpec dist_from_name(const std::string& name);

// Deterministic sampling given (spec, n, seed); inverse-CDF or standard
// transforms per family.
std::vector<double> sample(const DistSpec& dist, int n, std::uint64_t seed);
void sample_into(const DistSpec& dist, CounterRng& rng, std::span<double> out);
double sample_one(const DistSpec& dist, CounterRng& rng);

// E f(X) by adaptive quadrature (quantile space, or a tangent substitution
// for Student t); used for non-polynomial population loss functionals.
double expectation(const DistSpec& dist, const std::function<double(double)>& f,
                   double tol = 1e-10);

// Poisson by inversion (small lambda), one uniform per draw.
int sample_poisson(double lambda, CounterRng& rng);

}  // namespace cvplan

#include "cvplan/cv_variance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cvplan {

namespace {

constexpr double kBoundaryEps = 1e-12;

// re(J) >= pi, cross-multiplied: rho*J*(1-pi) >= pi*(1-rho).
bool effectiveness_met(double rho, int J, double pi) {
    return rho * J * (1.0 - pi) >= pi * (1.0 - rho) - kBoundaryEps;
}

// rr(J) <= r, cross-multiplied: (1-rho) <= r*((J-1) + (J-1)^2 rho).
bool reduction_met(double rho, int J, double r) {
    const double jm = static_cast<double>(J - 1);
    return (1.0 - rho) <= r * (jm + jm * jm * rho) + kBoundaryEps;
}

double achieved_rr_or_nan(double rho, int J) {
    return J >= 2 ? reduction_ratio(rho, J)
                  : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double var_cv(const CvVarianceModel& model, int J) {
    if (J < 1) throw InvalidJ("var_cv: J must be >= 1");
    return (model.v - model.c) / J + model.c;
}

std::pair<double, double> var_bounds(const CvVarianceModel& model, int J) {
    if (J < 1) throw InvalidJ("var_bounds: J must be >= 1");
    return {std::max(model.c, model.v / J), model.v};
}

double resampling_effectiveness(double rho, int J) {
    if (!(rho > 0.0) || rho > 1.0)
        throw InvalidRho("resampling_effectiveness: rho must be in (0,1]");
    if (J < 1) throw InvalidJ("resampling_effectiveness: J must be >= 1");
    if (rho == 1.0) return 1.0;
    return 1.0 / (1.0 + (1.0 - rho) / (rho * J));
}

double reduction_ratio(double rho, int J) {
    if (rho < 0.0 || rho > 1.0)
        throw InvalidRho("reduction_ratio: rho must be in [0,1]");
    if (J < 2) throw InvalidJ("reduction_ratio: backward difference needs J >= 2");
    const double jm = static_cast<double>(J - 1);
    return (1.0 - rho) / (jm + jm * jm * rho);
}

ResamplingPlan j_for_effectiveness(double rho, double pi) {
    if (!(rho > 0.0 && rho < 1.0))
        throw InvalidRho("j_for_effectiveness: rho must be in (0,1)");
    if (!(pi > 0.0 && pi < 1.0))
        throw InvalidPi("j_for_effectiveness: pi must be in (0,1)");
    int J = std::max(1, static_cast<int>(
                            std::ceil(pi * (1.0 - rho) / ((1.0 - pi) * rho))));
    while (J > 1 && effectiveness_met(rho, J - 1, pi)) --J;
    while (!effectiveness_met(rho, J, pi)) ++J;
    return ResamplingPlan{ResampleCriterion::Effectiveness, pi, J,
                          resampling_effectiveness(rho, J),
                          achieved_rr_or_nan(rho, J)};
}

ResamplingPlan j_for_reduction(double rho, double r) {
    if (!(rho > 0.0 && rho < 1.0))
        throw InvalidRho("j_for_reduction: rho must be in (0,1)");
    if (!(r > 0.0)) throw InvalidR("j_for_reduction: r must be > 0");
    const double root =
        1.0 - 1.0 / (2.0 * rho) +
        std::sqrt(1.0 / (4.0 * rho * rho) + (1.0 - rho) / (rho * r));
    int J = std::max(2, static_cast<int>(std::ceil(root)));
    while (J > 2 && reduction_met(rho, J - 1, r)) --J;
    while (!reduction_met(rho, J, r)) ++J;
    return ResamplingPlan{ResampleCriterion::Reduction, r, J,
                          resampling_effectiveness(rho, J),
                          reduction_ratio(rho, J)};
}

}  // namespace cvplan

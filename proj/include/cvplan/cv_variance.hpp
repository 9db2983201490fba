#pragma once

#include <utility>

#include "cvplan/errors.hpp"

namespace cvplan {

// Variance algebra of the random-CV estimator of the generalization error.
// v = Var(mu_hat_j), c = Cov(mu_hat_j, mu_hat_j'), rho = c/v; then
// Var(mu_hat_CV,J) = (v - c)/J + c.
struct CvVarianceModel {
    double v;
    double c;

    CvVarianceModel(double v_, double c_) : v(v_), c(c_) {
        if (!(v > 0.0)) throw InvalidParams("CvVarianceModel: v must be > 0");
        if (c < 0.0 || c > v)
            throw InvalidParams("CvVarianceModel: need 0 <= c <= v");
    }

    double rho() const { return c / v; }
};

enum class ResampleCriterion { Effectiveness, Reduction };

// Minimal J meeting a target effectiveness pi or reduction ratio r,
// with the achieved values at that J. achieved_rr is NaN at J = 1.
struct ResamplingPlan {
    ResampleCriterion criterion;
    double target;
    int J;
    double achieved_re;
    double achieved_rr;
};

double var_cv(const CvVarianceModel& model, int J);

// Theorem bound: max{c, v/J} <= Var(mu_hat_CV,J) <= v.
std::pair<double, double> var_bounds(const CvVarianceModel& model, int J);

// re(J) = (1 + (1-rho)/(rho J))^-1; rho = 1 gives 1 for every J.
double resampling_effectiveness(double rho, int J);

// rr(J) = (1-rho)/((J-1) + (J-1)^2 rho), defined for J >= 2.
double reduction_ratio(double rho, int J);

// Minimal J with re(J) >= pi (resp. rr(J) <= r). The closed-form ceiling
// is corrected by direct evaluation at J and J-1, so exact table boundaries
// are immune to floating-point rounding of the quotient forms.
ResamplingPlan j_for_effectiveness(double rho, double pi);
ResamplingPlan j_for_reduction(double rho, double r);

// Naive approximation rho_hat = n2/n (labeled convenience, never a default).
inline double naive_rho(int n, int n1) {
    return static_cast<double>(n - n1) / static_cast<double>(n);
}

}  // namespace cvplan

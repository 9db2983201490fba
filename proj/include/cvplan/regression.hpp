#pragma once

#include <string>

#include <Eigen/Dense>

#include "cvplan/cv_variance.hpp"
#include "cvplan/errors.hpp"

namespace cvplan {

// Summary of a fixed design: OLS fit, hat-matrix diagonal, and the moment
// inputs of the closed-form test-error formulas.
struct RegressionStats {
    int n = 0;
    int p = 0;
    Eigen::VectorXd leverages;  // h_ii, computed row-wise without forming H
    double theta = 0.0;         // sum of h_ii^2, in [0, p]
    Eigen::MatrixXd v_hat;      // n (X'X)^-1
    double sigma2_hat = 0.0;    // RSS / (n - p)
    double mu4_hat = 0.0;       // mean of residuals^4
    Eigen::VectorXd beta_hat;
    Eigen::VectorXd residuals;
};

struct RegressionCvMoments {
    double mean = 0.0;
    double variance = 0.0;
    double covariance = 0.0;
    std::string order_note;  // which O(1/n^2) / o(1/n^2) terms are retained
};

// OLS summary via the normal equations (partial-pivot LU); designs with
// cond(X'X) above 1e12 are rejected rather than regularized.
RegressionStats design_stats(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

// X-only geometry (leverages, theta, V) with the error moments supplied by
// the caller; for closed-form evaluation at a known error scale.
RegressionStats design_geometry(const Eigen::MatrixXd& x, double sigma2,
                                double mu4);

// Random-CV moments under normal errors: full four-term variance and the
// full covariance including the (p - theta) correction.
RegressionCvMoments random_cv_moments_normal(const RegressionStats& stats, int n1);

// Leading-order normal-error variance, exposed for order comparisons:
// sigma^4 {2/n2 + (4p + 3 theta)/(n1 n2)}.
double random_cv_var_normal_leading(const RegressionStats& stats, int n1);

// Variance under 4+eps-moment errors: (mu4 - sigma^4)/n2 + (4p+3theta)s^4/(n1 n2).
double random_cv_var_nonnormal(const RegressionStats& stats, int n1);

// k-fold moments under normal errors, plus the assembled Var(mu_hat_k-fold).
RegressionCvMoments kfold_cv_moments_normal(const RegressionStats& stats, int k);
double kfold_cv_variance_normal(const RegressionStats& stats, int k);

// n1_opt = ceil(n/2) and k_opt = n, verified against the closed-form grids.
struct RegressionSplit {
    int n1_opt;
    int k_opt;
};
RegressionSplit regression_optimal_split(const RegressionStats& stats);

// rho = 1/2 specializations: J_re(pi) = ceil(pi/(1-pi)), J_rr(r) = ceil(sqrt(1+1/r)).
ResamplingPlan regression_resampling_plan_effectiveness(double pi);
ResamplingPlan regression_resampling_plan_reduction(double r);

}  // namespace cvplan

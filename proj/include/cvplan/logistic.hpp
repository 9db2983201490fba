#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cvplan/errors.hpp"

namespace cvplan {

struct LogisticFit {
    Eigen::VectorXd beta_hat;
    double sigma2_hat;      // latent scale; 1 by default (see LogisticOptions)
    Eigen::MatrixXd v_hat;  // n (X'X)^-1, or inverse Fisher information scaled by n
    int iterations;
};

struct LogisticOptions {
    // The source algorithm estimates sigma^2 "via logistic regression"
    // without a formula; the logit latent scale fixes it at 1, and any
    // uniform rescale leaves the argmin over n1 unchanged. Override to
    // explore other conventions.
    double sigma2 = 1.0;
    // Use n * (X'W X)^-1 (inverse Fisher information) instead of n (X'X)^-1.
    // Documented variant, not the default reading.
    bool use_fisher_information = false;
    int max_iterations = 50;
    double score_tolerance = 1e-8;
};

// Per-observation quantities feeding the 0/1-loss error moments.
struct LogisticDesign {
    int n = 0;
    int p = 0;
    Eigen::VectorXd beta_hat;
    double sigma2_hat = 1.0;
    Eigen::MatrixXd v_hat;
    Eigen::VectorXd p_i;      // logistic(x_i' beta), in (0,1)
    Eigen::VectorXd zeta_i;   // x_i' beta / (sigma sqrt(x_i' V x_i))
    Eigen::MatrixXd rho_pair; // x_i' V x_i' / sqrt((x_i'Vx_i)(x_i''Vx_i'')), in [-1,1]
};

struct ErrorMoments {
    Eigen::VectorXd e_i;     // e_i = e_{i,i}
    Eigen::MatrixXd e_pair;  // e_{i,i'}, symmetric, diagonal = e_i
};

struct VarianceCurvePoint {
    int n1;
    Eigen::VectorXd e_i;
    double v;
};

struct VarianceCurve {
    std::vector<VarianceCurvePoint> entries;  // n1 = ceil(n/2) .. n-1
    int argmin_n1 = 0;
    double v_at(int n1) const;
};

// Maximum-likelihood logistic fit by IRLS with step halving; diverging
// coefficients (perfect separation) and constant labels are rejected.
LogisticFit fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const LogisticOptions& options = {});

LogisticDesign make_logistic_design(const Eigen::MatrixXd& x,
                                    const Eigen::VectorXd& y,
                                    const LogisticOptions& options = {});

// e_i and the four-term bivariate-normal combination e_{i,i'} at a given n1.
ErrorMoments classification_error_moments(const LogisticDesign& design, int n1);

// Var(mu_hat_j) for a general loss from constant conditional moments e_i,
// e_{i,i'}; exact in the index-sampling design.
double var_mu_j_general(const Eigen::VectorXd& e_i, const Eigen::MatrixXd& e_pair,
                        int n, int n1);
double mean_mu_j_general(const Eigen::VectorXd& e_i);

// Steps 1-4: fit, per-observation quantities, n1 sweep, argmin.
VarianceCurve algorithm1_optimal_n1(const Eigen::MatrixXd& x,
                                    const Eigen::VectorXd& y,
                                    const LogisticOptions& options = {});

}  // namespace cvplan

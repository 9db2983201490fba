#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cvplan/distributions.hpp"
#include "cvplan/loss.hpp"
#include "cvplan/regression.hpp"

namespace cvplan {

// Unbiased empirical v, c from paired splits within each dataset draw:
// within-rep spread estimates v - c, across-rep spread of the within-rep
// mean estimates (v + (m-1)c)/m. Standard errors come from batching reps.
struct CvMomentEstimate {
    double v_hat = 0.0;
    double c_hat = 0.0;
    double rho_hat = 0.0;
    double mean_hat = 0.0;
    double v_se = 0.0;
    double c_se = 0.0;
    int reps = 0;
    int splits_per_rep = 0;
};

CvMomentEstimate empirical_cv_moments(const DistSpec& dist, const LossSpec& loss,
                                      int n, int n1, int reps, int splits_per_rep,
                                      std::uint64_t seed, int threads = 1);

// Regression rule on a fixed design: y = X beta + eps per rep, OLS on the
// training rows, squared error on the held-out rows.
CvMomentEstimate empirical_cv_moments_regression(
    const Eigen::MatrixXd& x, const Eigen::VectorXd& beta, const DistSpec& errors,
    int n1, int reps, int splits_per_rep, std::uint64_t seed, int threads = 1);

// Population moment parameters of a (loss, distribution) pair: exact moment
// algebra for polynomial losses, adaptive quadrature otherwise. Entries are
// NaN when the required moments do not exist.
MomentParams population_moment_params(const LossSpec& loss, const DistSpec& dist,
                                      int n_for_d = 0);

// Moment order the loss requires of the data distribution (the theory's
// existence condition); shortfalls warn, never fail.
int required_moments(const LossSpec& loss);

// One (distribution, loss, n) cell of the sample-mean estimator tables:
// per-rep plug-in estimates of n1_opt/n, rho_opt and k_opt/n, averaged,
// with MSE against the population values where those exist.
struct MeanCell {
    double n1_ratio_hat = 0.0, n1_ratio_theory = 0.0, n1_ratio_mse = 0.0;
    double rho_opt_hat = 0.0, rho_opt_theory = 0.0, rho_opt_mse = 0.0;
    double k_ratio_hat = 0.0, k_ratio_theory = 0.0, k_ratio_mse = 0.0;
    int reps = 0;
    std::vector<std::string> warnings;
};

MeanCell simulate_mean_cell(const DistSpec& dist, const LossSpec& loss, int n,
                            int reps, std::uint64_t seed, int threads = 1);

// Fixed-design recipes of the simulation study.
Eigen::MatrixXd regression_recipe_design(int n, std::uint64_t seed);
Eigen::VectorXd regression_recipe_beta();
Eigen::MatrixXd logistic_recipe_design(int n, std::uint64_t seed);
Eigen::VectorXd logistic_recipe_beta();

// One (error distribution, n) cell of the classification table: per-rep
// Algorithm-1 argmin and the variance curve at n1 = {ceil(n/2), .75n, .80n,
// .85n, .90n}.
struct LogisticCell {
    int n = 0;
    int reps = 0;
    std::vector<int> argmins;
    std::vector<std::array<double, 5>> v_rows;
    int count_argmin_half() const;
    bool row_increasing(std::size_t r) const;  // strict, across the 4 fractions
    bool all_rows_increasing() const;
};

LogisticCell simulate_logistic_cell(const DistSpec& errors, int n, int reps,
                                    std::uint64_t seed, int threads = 1);

// Table reproduction at desk scale -----------------------------------------

enum class TableId { T4, T5, T6, T7, T8, T9, T11 };
TableId table_from_name(const std::string& name);
std::string table_name(TableId id);

struct SimReport {
    std::vector<std::pair<std::string, std::string>> config;  // resolved echo
    std::vector<std::pair<std::string, double>> estimates;
    std::vector<std::string> warnings;
};
using SimReportSet = std::vector<SimReport>;

// Regenerates the table's estimator columns at reps = scale * paper reps
// (minimum 50). n_filter, when nonempty, restricts the sample-size rows.
SimReportSet simulate_table(TableId id, double scale, std::uint64_t seed,
                            int threads = 1, const std::vector<int>& n_filter = {});

void write_reports_csv(std::ostream& os, const SimReportSet& reports);

}  // namespace cvplan

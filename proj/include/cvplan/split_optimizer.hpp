#pragma once

#include <cstdint>
#include <vector>

#include "cvplan/cv_variance.hpp"
#include "cvplan/loss.hpp"

namespace cvplan {

enum class SplitMethod { ClosedForm, GridArgmin };

// Optimal training size for the sample-mean rule, with the evaluated
// variance grid over n1 in {ceil(n/2), ..., n-1}.
struct SplitPlan {
    int n;
    int n1_opt;
    std::vector<double> v_grid;  // v at n1 = ceil(n/2) + index
    double v_opt;
    double c_approx;  // approx_c at n1_opt
    double rho_opt;   // c_approx / v_opt
    SplitMethod method;
    bool degenerate_b = false;  // B <= 0 fallback used (un-approximated v)

    int grid_start() const { return n - static_cast<int>(v_grid.size()); }
    double v_at(int n1) const;
};

// Fold-count plan; curve covers every divisor of n in [2, n].
struct FoldPlan {
    int n;
    int k_opt;
    std::vector<int> divisors;
    std::vector<double> variance;             // Var(mu_hat_k-fold) per divisor
    std::vector<double> relative_efficiency;  // vs the regime's optimal k
    double var_at(int k) const;
    double relative_efficiency_at(int k) const;
};

// v ~ A/n1 + B/(n - n1) with A = alpha + (gamma+delta)/n, B likewise.
double approx_v(int n, int n1, const MomentParams& params);

// c ~ (alpha+beta)/n + gamma/n^2 + delta/(n1 n); n1-flat unless delta != 0.
double approx_c(int n, int n1, const MomentParams& params);

// Full-range evaluation of the approximated v for plotting (1 <= t <= n-1);
// the optimizer itself is restricted to t >= ceil(n/2).
double approx_v_unrestricted(int n, int t, const MomentParams& params);

SplitPlan optimal_n1(int n, const MomentParams& params);

// k_opt = md(n) when gamma + delta <= 0, else n (LOOCV).
FoldPlan optimal_k(int n, const MomentParams& params);

// Var(mu_hat_k-fold) ~ (alpha+beta)/n + k/(k-1) * (gamma+delta)/n^2.
double kfold_variance(int n, int k, const MomentParams& params);

// kfold_variance(n,k)/kfold_variance(n,k_ref), k_ref the regime's optimum.
double relative_efficiency_kfold(int n, int k, const MomentParams& params);

// Smallest divisor of n greater than 1.
std::int64_t min_divisor(std::int64_t n);

}  // namespace cvplan

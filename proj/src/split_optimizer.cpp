#include "cvplan/split_optimizer.hpp"

#include <algorithm>
#include <cmath>

namespace cvplan {

namespace {

int ceil_half(int n) { return (n + 1) / 2; }

int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

void check_range(int n, int n1, const char* who) {
    if (n1 < ceil_half(n) || n1 > n - 1)
        throw OutOfRange(std::string(who) + ": need ceil(n/2) <= n1 <= n-1");
}

// Un-approximated variance alpha/n1 + beta/n2 + (gamma+delta)/(n1 n2);
// used as the B <= 0 fallback objective.
double raw_v(int n, int t, const MomentParams& p) {
    const double n1 = t, n2 = n - t;
    return p.alpha / n1 + p.beta / n2 + (p.gamma + p.delta) / (n1 * n2);
}

}  // namespace

double SplitPlan::v_at(int n1) const {
    const int i = n1 - grid_start();
    if (i < 0 || i >= static_cast<int>(v_grid.size()))
        throw OutOfRange("SplitPlan::v_at: n1 outside grid");
    return v_grid[static_cast<std::size_t>(i)];
}

double FoldPlan::var_at(int k) const {
    for (std::size_t i = 0; i < divisors.size(); ++i)
        if (divisors[i] == k) return variance[i];
    throw NotDivisible("FoldPlan::var_at: k is not a divisor of n");
}

double FoldPlan::relative_efficiency_at(int k) const {
    for (std::size_t i = 0; i < divisors.size(); ++i)
        if (divisors[i] == k) return relative_efficiency[i];
    throw NotDivisible("FoldPlan::relative_efficiency_at: k is not a divisor of n");
}

double approx_v(int n, int n1, const MomentParams& params) {
    check_range(n, n1, "approx_v");
    return approx_v_unrestricted(n, n1, params);
}

double approx_v_unrestricted(int n, int t, const MomentParams& params) {
    if (t < 1 || t > n - 1) throw OutOfRange("approx_v: need 1 <= n1 <= n-1");
    const double a = params.shifted_a(n);
    const double b = params.shifted_b(n);
    return a / t + b / (n - t);
}

double approx_c(int n, int n1, const MomentParams& params) {
    check_range(n, n1, "approx_c");
    const double nn = n;
    return (params.alpha + params.beta) / nn + params.gamma / (nn * nn) +
           params.delta / (static_cast<double>(n1) * nn);
}

SplitPlan optimal_n1(int n, const MomentParams& params) {
    if (n < 4) throw InvalidParams("optimal_n1: need n >= 4");
    const int lo = ceil_half(n), hi = n - 1;
    const double a = params.shifted_a(n);
    const double b = params.shifted_b(n);

    SplitPlan plan;
    plan.n = n;
    plan.v_grid.resize(static_cast<std::size_t>(hi - lo + 1));

    if (b <= 0.0) {
        // Degenerate regime at tiny n: the approximated B went nonpositive.
        // Fall back to the un-approximated v and pure grid search.
        if (params.beta <= 0.0)
            throw InvalidParams("optimal_n1: beta <= 0, variance curve ill-posed");
        plan.degenerate_b = true;
        plan.method = SplitMethod::GridArgmin;
        int best = lo;
        for (int t = lo; t <= hi; ++t) {
            const double v = raw_v(n, t, params);
            plan.v_grid[static_cast<std::size_t>(t - lo)] = v;
            if (v < plan.v_grid[static_cast<std::size_t>(best - lo)]) best = t;
        }
        plan.n1_opt = best;
    } else {
        int candidate;
        if (a <= b) {
            candidate = lo;
        } else {
            candidate = std::min(
                n - 1, round_half_up(std::sqrt(a) / (std::sqrt(a) + std::sqrt(b)) *
                                     static_cast<double>(n)));
            candidate = std::max(candidate, lo);
        }
        // Grid verification: the closed form is only exact up to its integer
        // neighbors, so always return a true grid argmin (ties toward small n1).
        int best = lo;
        for (int t = lo; t <= hi; ++t) {
            const double v = approx_v_unrestricted(n, t, params);
            plan.v_grid[static_cast<std::size_t>(t - lo)] = v;
            if (v < plan.v_grid[static_cast<std::size_t>(best - lo)]) best = t;
        }
        plan.method = (best == candidate) ? SplitMethod::ClosedForm
                                          : SplitMethod::GridArgmin;
        plan.n1_opt = best;
    }

    plan.v_opt = plan.v_grid[static_cast<std::size_t>(plan.n1_opt - lo)];
    plan.c_approx = approx_c(n, plan.n1_opt, params);
    plan.rho_opt = plan.c_approx / plan.v_opt;
    return plan;
}

std::int64_t min_divisor(std::int64_t n) {
    if (n < 2) throw InvalidParams("min_divisor: need n >= 2");
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return d;
    return n;
}

double kfold_variance(int n, int k, const MomentParams& params) {
    if (k < 2 || k > n) throw OutOfRange("kfold_variance: need 2 <= k <= n");
    if (n % k != 0) throw NotDivisible("kfold_variance: k must divide n");
    const double nn = n, kk = k;
    return (params.alpha + params.beta) / nn +
           kk / (kk - 1.0) * (params.gamma + params.delta) / (nn * nn);
}

FoldPlan optimal_k(int n, const MomentParams& params) {
    if (n < 4) throw InvalidParams("optimal_k: need n >= 4");
    const bool loocv = params.gamma + params.delta > 0.0;
    FoldPlan plan;
    plan.n = n;
    plan.k_opt = loocv ? n : static_cast<int>(min_divisor(n));
    for (int k = 2; k <= n; ++k)
        if (n % k == 0) {
            plan.divisors.push_back(k);
            plan.variance.push_back(kfold_variance(n, k, params));
        }
    const double ref = kfold_variance(n, plan.k_opt, params);
    plan.relative_efficiency.reserve(plan.variance.size());
    for (double v : plan.variance) plan.relative_efficiency.push_back(v / ref);
    return plan;
}

double relative_efficiency_kfold(int n, int k, const MomentParams& params) {
    const int k_ref = params.gamma + params.delta > 0.0
                          ? n
                          : static_cast<int>(min_divisor(n));
    return kfold_variance(n, k, params) / kfold_variance(n, k_ref, params);
}

}  // namespace cvplan

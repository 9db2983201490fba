#include "cvplan/regression.hpp"

#include <cmath>

namespace cvplan {

namespace {

int ceil_half(int n) { return (n + 1) / 2; }

void check_n1(const RegressionStats& stats, int n1, const char* who) {
    if (n1 < ceil_half(stats.n) || n1 > stats.n - 1)
        throw OutOfRange(std::string(who) + ": need ceil(n/2) <= n1 <= n-1");
}

}  // namespace

namespace {

// Leverages, theta and V from X alone; shared by the fitted and the
// known-scale entry points.
struct Geometry {
    RegressionStats stats;
    Eigen::MatrixXd xtx_inv;
};

Geometry compute_geometry(const Eigen::MatrixXd& x) {
    const int n = static_cast<int>(x.rows());
    const int p = static_cast<int>(x.cols());
    if (n <= p) throw SingularDesign("design_stats: need n > p");

    const Eigen::MatrixXd xtx = x.transpose() * x;
    {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(xtx);
        const double smin = svd.singularValues().minCoeff();
        const double smax = svd.singularValues().maxCoeff();
        if (!(smin > 0.0) || smax / smin > 1e12)
            throw SingularDesign("design_stats: X'X numerically singular");
    }

    Geometry geo;
    geo.xtx_inv = Eigen::PartialPivLU<Eigen::MatrixXd>(xtx).inverse();
    geo.stats.n = n;
    geo.stats.p = p;
    geo.stats.v_hat = static_cast<double>(n) * geo.xtx_inv;
    geo.stats.leverages.resize(n);
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd xi = x.row(i).transpose();
        geo.stats.leverages(i) = xi.dot(geo.xtx_inv * xi);
    }
    geo.stats.theta = geo.stats.leverages.array().square().sum();
    return geo;
}

}  // namespace

RegressionStats design_stats(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    if (y.size() != x.rows())
        throw ShapeMismatch("design_stats: y length != rows of X");
    Geometry geo = compute_geometry(x);
    RegressionStats& stats = geo.stats;
    stats.beta_hat = geo.xtx_inv * (x.transpose() * y);
    stats.residuals = y - x * stats.beta_hat;
    const double rss = stats.residuals.squaredNorm();
    stats.sigma2_hat = rss / static_cast<double>(stats.n - stats.p);
    stats.mu4_hat = stats.residuals.array().pow(4).mean();
    return stats;
}

RegressionStats design_geometry(const Eigen::MatrixXd& x, double sigma2,
                                double mu4) {
    RegressionStats stats = compute_geometry(x).stats;
    stats.sigma2_hat = sigma2;
    stats.mu4_hat = mu4;
    stats.beta_hat = Eigen::VectorXd::Zero(stats.p);
    stats.residuals = Eigen::VectorXd::Zero(stats.n);
    return stats;
}

RegressionCvMoments random_cv_moments_normal(const RegressionStats& stats, int n1) {
    check_n1(stats, n1, "random_cv_moments_normal");
    const double n = stats.n, p = stats.p, th = stats.theta;
    const double m1 = n1, m2 = n - n1;
    const double s4 = stats.sigma2_hat * stats.sigma2_hat;

    RegressionCvMoments m;
    m.mean = stats.sigma2_hat * (1.0 + p / m1);
    m.variance = s4 * (2.0 / m2 + 4.0 * p / (m1 * m2) +
                       (3.0 * n + 1.0) * th / ((n - 1.0) * m1 * m2) +
                       (2.0 * n * (m2 - 1.0) - m1 * p) * p /
                           ((n - 1.0) * m1 * m1 * m2));
    m.covariance =
        s4 * (2.0 / n + (n + 2.0 * m1) * p / (n * (n - 1.0) * m1) +
              2.0 * (n + m1 * (m1 - 2.0) - 1.0) * th /
                  ((n - 1.0) * (n - 2.0) * m1 * m1) +
              ((n - 2.0) * (n + m1 * m1 + 2.0 * m1 * m2 - 1.0) -
               (m1 - 1.0) * (m1 - 1.0)) *
                  (p - th) / ((n - 1.0) * (n - 1.0) * (n - 2.0) * m1 * m1 * m1 * m1));
    m.order_note = "full closed forms; O(1/n^2) terms retained";
    return m;
}

double random_cv_var_normal_leading(const RegressionStats& stats, int n1) {
    check_n1(stats, n1, "random_cv_var_normal_leading");
    const double m1 = n1, m2 = stats.n - n1;
    const double s4 = stats.sigma2_hat * stats.sigma2_hat;
    return s4 * (2.0 / m2 + (4.0 * stats.p + 3.0 * stats.theta) / (m1 * m2));
}

double random_cv_var_nonnormal(const RegressionStats& stats, int n1) {
    check_n1(stats, n1, "random_cv_var_nonnormal");
    const double m1 = n1, m2 = stats.n - n1;
    const double s4 = stats.sigma2_hat * stats.sigma2_hat;
    return (stats.mu4_hat - s4) / m2 +
           (4.0 * stats.p + 3.0 * stats.theta) * s4 / (m1 * m2);
}

RegressionCvMoments kfold_cv_moments_normal(const RegressionStats& stats, int k) {
    if (k < 2 || k > stats.n)
        throw OutOfRange("kfold_cv_moments_normal: need 2 <= k <= n");
    if (stats.n % k != 0)
        throw NotDivisible("kfold_cv_moments_normal: k must divide n");
    const double n = stats.n, p = stats.p, th = stats.theta, kk = k;
    const double s4 = stats.sigma2_hat * stats.sigma2_hat;
    const double km1 = kk - 1.0;

    RegressionCvMoments m;
    m.mean = stats.sigma2_hat * (1.0 + kk * p / (km1 * n));
    m.variance = s4 * (2.0 * kk / n + 4.0 * kk * kk * p / (km1 * n * n) +
                       3.0 * kk * kk * th / (km1 * n * n) +
                       p * kk * kk * kk / (km1 * km1 * n * n));
    m.covariance = s4 * (2.0 * std::pow(kk, 4) * (p - th) /
                             (std::pow(km1, 4) * n * (n - 1.0)) -
                         kk * kk * th / (km1 * km1 * n * (n - 1.0)));
    m.order_note = "o(1/n^2) terms dropped";
    return m;
}

double kfold_cv_variance_normal(const RegressionStats& stats, int k) {
    if (k < 2 || k > stats.n)
        throw OutOfRange("kfold_cv_variance_normal: need 2 <= k <= n");
    if (stats.n % k != 0)
        throw NotDivisible("kfold_cv_variance_normal: k must divide n");
    const double n = stats.n, p = stats.p, th = stats.theta, kk = k;
    const double s4 = stats.sigma2_hat * stats.sigma2_hat;
    const double km1 = kk - 1.0;
    return s4 * (2.0 / n +
                 kk * ((p - th) * n + (3.0 * n - 4.0) * p + 3.0 * th * (n - 1.0)) /
                     (km1 * n * n * (n - 1.0)) +
                 kk * kk * p / (km1 * km1 * n * n) +
                 2.0 * kk * kk * kk * (p - th) / (km1 * km1 * km1 * n * (n - 1.0)));
}

RegressionSplit regression_optimal_split(const RegressionStats& stats) {
    const int lo = ceil_half(stats.n);
    int best_normal = lo, best_nonnormal = lo;
    double vn = random_cv_moments_normal(stats, lo).variance;
    double vg = random_cv_var_nonnormal(stats, lo);
    for (int t = lo + 1; t <= stats.n - 1; ++t) {
        const double cn = random_cv_moments_normal(stats, t).variance;
        if (cn < vn) {
            vn = cn;
            best_normal = t;
        }
        const double cg = random_cv_var_nonnormal(stats, t);
        if (cg < vg) {
            vg = cg;
            best_nonnormal = t;
        }
    }
    int best_k = 0;
    double best_kv = 0.0;
    for (int k = 2; k <= stats.n; ++k) {
        if (stats.n % k != 0) continue;
        const double v = kfold_cv_variance_normal(stats, k);
        if (best_k == 0 || v < best_kv) {
            best_k = k;
            best_kv = v;
        }
    }
    if (best_normal != lo || best_nonnormal != lo)
        throw InvalidParams("regression_optimal_split: closed-form curve not "
                            "minimized at ceil(n/2)");
    if (best_k != stats.n)
        throw InvalidParams("regression_optimal_split: k-fold curve not "
                            "minimized at k = n");
    return RegressionSplit{lo, best_k};
}

ResamplingPlan regression_resampling_plan_effectiveness(double pi) {
    return j_for_effectiveness(0.5, pi);
}

ResamplingPlan regression_resampling_plan_reduction(double r) {
    return j_for_reduction(0.5, r);
}

}  // namespace cvplan

#include "cvplan/logistic.hpp"

#include <algorithm>
#include <cmath>

#include "cvplan/normal.hpp"

namespace cvplan {

namespace {

double logistic(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

double log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = x * beta;
    double ll = 0.0;
    for (int i = 0; i < eta.size(); ++i) {
        // log p = -log(1+e^-eta), log(1-p) = -eta - log(1+e^-eta)
        const double log1pe = eta(i) > 0.0
                                  ? eta(i) + std::log1p(std::exp(-eta(i)))
                                  : std::log1p(std::exp(eta(i)));
        ll += y(i) * eta(i) - log1pe;
    }
    return ll;
}

int ceil_half(int n) { return (n + 1) / 2; }

}  // namespace

double VarianceCurve::v_at(int n1) const {
    for (const auto& pt : entries)
        if (pt.n1 == n1) return pt.v;
    throw OutOfRange("VarianceCurve::v_at: n1 not in sweep");
}

LogisticFit fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const LogisticOptions& options) {
    const int n = static_cast<int>(x.rows());
    const int p = static_cast<int>(x.cols());
    if (y.size() != n) throw ShapeMismatch("fit_logistic: y length != rows of X");
    bool has0 = false, has1 = false;
    for (int i = 0; i < n; ++i) {
        if (y(i) == 0.0) has0 = true;
        else if (y(i) == 1.0) has1 = true;
        else throw DomainError("fit_logistic: y must be 0/1");
    }
    if (!has0 || !has1) throw NoVariation("fit_logistic: y is constant");

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    double ll = log_likelihood(x, y, beta);
    int iter = 0;
    double max_weight = 0.25;
    for (; iter < options.max_iterations; ++iter) {
        const Eigen::VectorXd eta = x * beta;
        Eigen::VectorXd mu(n), w(n);
        for (int i = 0; i < n; ++i) {
            mu(i) = logistic(eta(i));
            w(i) = std::max(mu(i) * (1.0 - mu(i)), 1e-10);
        }
        max_weight = w.maxCoeff();
        const Eigen::VectorXd score = x.transpose() * (y - mu);
        if (score.lpNorm<Eigen::Infinity>() < options.score_tolerance) break;

        const Eigen::MatrixXd xtwx = x.transpose() * w.asDiagonal() * x;
        Eigen::VectorXd step = xtwx.ldlt().solve(score);

        // step halving keeps the log-likelihood nondecreasing
        double scale = 1.0;
        Eigen::VectorXd candidate = beta + step;
        double cand_ll = log_likelihood(x, y, candidate);
        for (int h = 0; h < 30 && cand_ll < ll; ++h) {
            scale *= 0.5;
            candidate = beta + scale * step;
            cand_ll = log_likelihood(x, y, candidate);
        }
        beta = candidate;
        ll = cand_ll;
        if (beta.norm() > 1e4)
            throw Separation("fit_logistic: coefficients diverging (separation?)");
    }
    // saturated fit: every fitted probability at 0/1 means the ML estimate
    // sits at infinity (perfect separation), even though step halving kept
    // the iterates finite
    if (max_weight < 1e-7)
        throw Separation("fit_logistic: all fitted probabilities saturated");

    LogisticFit fit;
    fit.beta_hat = beta;
    fit.sigma2_hat = options.sigma2;
    fit.iterations = iter;
    if (options.use_fisher_information) {
        Eigen::VectorXd w(n);
        const Eigen::VectorXd eta = x * beta;
        for (int i = 0; i < n; ++i) {
            const double mu = logistic(eta(i));
            w(i) = std::max(mu * (1.0 - mu), 1e-10);
        }
        fit.v_hat = static_cast<double>(n) *
                    (x.transpose() * w.asDiagonal() * x).inverse();
    } else {
        fit.v_hat = static_cast<double>(n) * (x.transpose() * x).inverse();
    }
    return fit;
}

LogisticDesign make_logistic_design(const Eigen::MatrixXd& x,
                                    const Eigen::VectorXd& y,
                                    const LogisticOptions& options) {
    const LogisticFit fit = fit_logistic(x, y, options);
    const int n = static_cast<int>(x.rows());

    LogisticDesign d;
    d.n = n;
    d.p = static_cast<int>(x.cols());
    d.beta_hat = fit.beta_hat;
    d.sigma2_hat = fit.sigma2_hat;
    d.v_hat = fit.v_hat;

    const Eigen::VectorXd eta = x * fit.beta_hat;
    const Eigen::MatrixXd xv = x * fit.v_hat;  // n x p
    Eigen::VectorXd quad(n);
    for (int i = 0; i < n; ++i) quad(i) = xv.row(i).dot(x.row(i));
    if ((quad.array() <= 0.0).any())
        throw SingularDesign("make_logistic_design: nonpositive x' V x");

    d.p_i.resize(n);
    d.zeta_i.resize(n);
    const double sigma = std::sqrt(fit.sigma2_hat);
    for (int i = 0; i < n; ++i) {
        d.p_i(i) = logistic(eta(i));
        d.zeta_i(i) = eta(i) / (sigma * std::sqrt(quad(i)));
    }
    d.rho_pair.resize(n, n);
    for (int i = 0; i < n; ++i) {
        d.rho_pair(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) {
            const double r = xv.row(i).dot(x.row(j)) / std::sqrt(quad(i) * quad(j));
            const double clamped = std::clamp(r, -1.0, 1.0);
            d.rho_pair(i, j) = clamped;
            d.rho_pair(j, i) = clamped;
        }
    }
    return d;
}

ErrorMoments classification_error_moments(const LogisticDesign& design, int n1) {
    const int n = design.n;
    if (n1 < ceil_half(n) || n1 > n - 1)
        throw OutOfRange("classification_error_moments: need ceil(n/2) <= n1 <= n-1");
    const double root_n1 = std::sqrt(static_cast<double>(n1));

    ErrorMoments m;
    m.e_i.resize(n);
    Eigen::VectorXd a(n), phi_neg(n), phi_pos(n);
    for (int i = 0; i < n; ++i) {
        a(i) = -root_n1 * design.zeta_i(i);
        phi_neg(i) = std_normal_cdf(a(i));
        phi_pos(i) = 1.0 - phi_neg(i);
        m.e_i(i) = phi_neg(i) * design.p_i(i) + phi_pos(i) * (1.0 - design.p_i(i));
    }
    m.e_pair.resize(n, n);
    for (int i = 0; i < n; ++i) {
        m.e_pair(i, i) = m.e_i(i);
        const double pi_ = design.p_i(i);
        for (int j = i + 1; j < n; ++j) {
            const double pj = design.p_i(j);
            const double r = design.rho_pair(i, j);
            const double v =
                bivariate_normal_cdf(a(i), a(j), r) * pi_ * pj +
                bivariate_normal_cdf(a(i), -a(j), -r) * pi_ * (1.0 - pj) +
                bivariate_normal_cdf(-a(i), a(j), -r) * (1.0 - pi_) * pj +
                bivariate_normal_cdf(-a(i), -a(j), r) * (1.0 - pi_) * (1.0 - pj);
            m.e_pair(i, j) = v;
            m.e_pair(j, i) = v;
        }
    }
    return m;
}

double mean_mu_j_general(const Eigen::VectorXd& e_i) { return e_i.mean(); }

double var_mu_j_general(const Eigen::VectorXd& e_i, const Eigen::MatrixXd& e_pair,
                        int n, int n1) {
    if (e_pair.rows() != n || e_pair.cols() != n || e_i.size() != n)
        throw ShapeMismatch("var_mu_j_general: moment shapes disagree with n");
    if (!e_pair.isApprox(e_pair.transpose(), 1e-12))
        throw ShapeMismatch("var_mu_j_general: e_pair must be symmetric");
    for (int i = 0; i < n; ++i)
        if (std::abs(e_pair(i, i) - e_i(i)) > 1e-12)
            throw ShapeMismatch("var_mu_j_general: diagonal must equal e_i");
    if (n1 < 1 || n1 >= n) throw OutOfRange("var_mu_j_general: need 1 <= n1 < n");

    const double nn = n, n2 = n - n1;
    double diag_sum = 0.0;
    for (int i = 0; i < n; ++i)
        diag_sum += nn * e_pair(i, i) - n2 * e_i(i) * e_i(i);
    double cross_sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            cross_sum += nn * (n2 - 1.0) * e_pair(i, j) -
                         (nn - 1.0) * n2 * e_i(i) * e_i(j);
    return (diag_sum + 2.0 / (nn - 1.0) * cross_sum) / (nn * nn * n2);
}

VarianceCurve algorithm1_optimal_n1(const Eigen::MatrixXd& x,
                                    const Eigen::VectorXd& y,
                                    const LogisticOptions& options) {
    const LogisticDesign design = make_logistic_design(x, y, options);
    const int n = design.n;
    VarianceCurve curve;
    curve.entries.reserve(static_cast<std::size_t>(n - ceil_half(n)));
    for (int n1 = ceil_half(n); n1 <= n - 1; ++n1) {
        ErrorMoments m = classification_error_moments(design, n1);
        const double v = var_mu_j_general(m.e_i, m.e_pair, n, n1);
        curve.entries.push_back(VarianceCurvePoint{n1, std::move(m.e_i), v});
    }
    curve.argmin_n1 = curve.entries.front().n1;
    double best = curve.entries.front().v;
    for (const auto& pt : curve.entries)
        if (pt.v < best) {
            best = pt.v;
            curve.argmin_n1 = pt.n1;
        }
    return curve;
}

}  // namespace cvplan

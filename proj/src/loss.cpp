#include "cvplan/loss.hpp"

#include <cmath>

namespace cvplan {

namespace {

QGenerator squared_generator() {
    return QGenerator{
        [](double t) { return -t * t; },
        [](double t) { return -2.0 * t; },
        [](double) { return -2.0; },
        [](double) { return 0.0; },
    };
}

QGenerator sqrt_generator() {
    return QGenerator{
        [](double t) { return -std::sqrt(1.0 + t * t); },
        [](double t) { return -t / std::sqrt(1.0 + t * t); },
        [](double t) { return -1.0 / std::pow(1.0 + t * t, 1.5); },
        [](double t) { return 3.0 * t / std::pow(1.0 + t * t, 2.5); },
    };
}

struct SampleStats {
    double mean;
    double var;  // unbiased
};

SampleStats mean_var(std::span<const double> xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return SampleStats{mean, ss / (n - 1.0)};
}

double covariance(std::span<const double> xs, std::span<const double> ys,
                  double x_mean, double y_mean) {
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        s += (xs[i] - x_mean) * (ys[i] - y_mean);
    return s / (static_cast<double>(xs.size()) - 1.0);
}

}  // namespace

LossSpec LossSpec::squared() {
    LossSpec s(LossFamily::Squared);
    s.gen_ = squared_generator();
    return s;
}

LossSpec LossSpec::q_sqrt() {
    LossSpec s(LossFamily::QSqrt);
    s.gen_ = sqrt_generator();
    return s;
}

LossSpec LossSpec::approx_absolute(double d) {
    LossSpec s(LossFamily::ApproxAbsolute);
    s.d_ = d;
    return s;
}

LossSpec LossSpec::modified_squared() { return LossSpec(LossFamily::ModifiedSquared); }

LossSpec LossSpec::double_squared() { return LossSpec(LossFamily::DoubleSquared); }

LossSpec LossSpec::custom_q(QGenerator generator) {
    if (!generator.q || !generator.q1 || !generator.q2 || !generator.q3)
        throw DomainError("custom_q: q and q', q'', q''' are all required");
    LossSpec s(LossFamily::CustomQ);
    s.gen_ = std::move(generator);
    return s;
}

bool LossSpec::is_q_class() const {
    return family_ == LossFamily::Squared || family_ == LossFamily::QSqrt ||
           family_ == LossFamily::CustomQ;
}

double LossSpec::d() const {
    if (family_ != LossFamily::ApproxAbsolute)
        throw DomainError("d: only defined for the approximate absolute loss");
    if (!d_is_bound()) throw DomainError("d: unresolved (defaults to 1/n at estimation)");
    return d_;
}

LossSpec LossSpec::resolved(int n) const {
    if (family_ == LossFamily::ApproxAbsolute && !d_is_bound())
        return approx_absolute(1.0 / static_cast<double>(n));
    return *this;
}

double LossSpec::value(double mu_hat, double y) const {
    switch (family_) {
        case LossFamily::Squared:
            return (y - mu_hat) * (y - mu_hat);
        case LossFamily::QSqrt:
            return -std::sqrt(1.0 + mu_hat * mu_hat) -
                   mu_hat * (y - mu_hat) / std::sqrt(1.0 + mu_hat * mu_hat) +
                   std::sqrt(1.0 + y * y);
        case LossFamily::ApproxAbsolute:
            return std::sqrt((y - mu_hat) * (y - mu_hat) + d());
        case LossFamily::ModifiedSquared:
            return (y - mu_hat) * (y - mu_hat) + mu_hat * mu_hat;
        case LossFamily::DoubleSquared: {
            const double w = y * y - mu_hat * mu_hat;
            return w * w;
        }
        case LossFamily::CustomQ:
            return gen_.q(mu_hat) + gen_.q1(mu_hat) * (y - mu_hat) - gen_.q(y);
    }
    throw DomainError("unknown loss family");
}

double LossSpec::d1(double mu, double x) const {
    switch (family_) {
        case LossFamily::Squared:
            return -2.0 * (x - mu);
        case LossFamily::QSqrt:
            return (mu - x) / std::pow(mu * mu + 1.0, 1.5);
        case LossFamily::ApproxAbsolute:
            return (mu - x) / std::sqrt((x - mu) * (x - mu) + d());
        case LossFamily::ModifiedSquared:
            return 4.0 * mu - 2.0 * x;
        case LossFamily::DoubleSquared:
            return -4.0 * mu * (x * x - mu * mu);
        case LossFamily::CustomQ:
            return gen_.q2(mu) * (x - mu);
    }
    throw DomainError("unknown loss family");
}

double LossSpec::d2(double mu, double x) const {
    switch (family_) {
        case LossFamily::Squared:
            return 2.0;
        case LossFamily::QSqrt:
            return (-2.0 * mu * mu + 3.0 * x * mu + 1.0) /
                   std::pow(mu * mu + 1.0, 2.5);
        case LossFamily::ApproxAbsolute:
            return d() / std::pow((mu - x) * (mu - x) + d(), 1.5);
        case LossFamily::ModifiedSquared:
            return 4.0;
        case LossFamily::DoubleSquared:
            return -4.0 * (x * x - mu * mu) + 8.0 * mu * mu;
        case LossFamily::CustomQ:
            return gen_.q3(mu) * (x - mu) - gen_.q2(mu);
    }
    throw DomainError("unknown loss family");
}

const QGenerator& LossSpec::generator() const {
    if (!is_q_class()) throw DomainError("generator: not a q-class loss");
    return gen_;
}

std::string LossSpec::name() const {
    switch (family_) {
        case LossFamily::Squared: return "squared";
        case LossFamily::QSqrt: return "qsqrt";
        case LossFamily::ApproxAbsolute: return "absapprox";
        case LossFamily::ModifiedSquared: return "modsq";
        case LossFamily::DoubleSquared: return "doublesq";
        case LossFamily::CustomQ: return "customq";
    }
    return "unknown";
}

double loss_value(const LossSpec& spec, double mu_hat, double y) {
    return spec.value(mu_hat, y);
}

MomentParams qclass_population_params(const QGenerator& gen, double mu,
                                      double sigma2, double var_q,
                                      double cov_x_q) {
    const double q1 = gen.q1(mu);
    const double q2 = gen.q2(mu);
    const double q3 = gen.q3(mu);
    MomentParams p;
    p.alpha = 0.0;
    p.beta = q1 * q1 * sigma2 + var_q - 2.0 * q1 * cov_x_q;
    p.gamma = q2 * q2 * sigma2 * sigma2;
    p.delta = q1 * q3 * sigma2 * sigma2 - q3 * cov_x_q * sigma2;
    p.sigma2 = sigma2;
    p.mu = mu;
    return p;
}

MomentParams estimate_moment_params(const LossSpec& spec_in,
                                    std::span<const double> sample) {
    const int n = static_cast<int>(sample.size());
    if (n < 4) throw InvalidParams("estimate_moment_params: need n >= 4");
    const LossSpec spec = spec_in.resolved(n);

    const SampleStats xs = mean_var(sample);
    if (xs.var == 0.0)
        throw DegenerateSample("estimate_moment_params: constant sample");
    const double mu = xs.mean;
    const double sigma2 = xs.var;

    if (spec.is_q_class()) {
        const QGenerator& gen = spec.generator();
        std::vector<double> qx(sample.size());
        for (std::size_t i = 0; i < sample.size(); ++i) {
            if (gen.q2(sample[i]) > 0.0)
                throw DomainError("q generator not concave at a sample point");
            qx[i] = gen.q(sample[i]);
        }
        if (gen.q2(mu) > 0.0)
            throw DomainError("q generator not concave at the sample mean");
        const SampleStats qs = mean_var(qx);
        const double cov_x_q = covariance(sample, qx, mu, qs.mean);
        MomentParams p = qclass_population_params(gen, mu, sigma2, qs.var, cov_x_q);
        if (p.beta <= 0.0)
            throw DegenerateSample("estimate_moment_params: loss has no variation");
        return p.with_n(n);
    }

    std::vector<double> l0(sample.size()), l1(sample.size()), l2(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        l0[i] = spec.value(mu, sample[i]);
        l1[i] = spec.d1(mu, sample[i]);
        l2[i] = spec.d2(mu, sample[i]);
    }
    const SampleStats s0 = mean_var(l0);
    const SampleStats s1 = mean_var(l1);
    double l2_mean = 0.0;
    for (double v : l2) l2_mean += v;
    l2_mean /= static_cast<double>(n);

    MomentParams p;
    p.alpha = sigma2 * s1.mean * s1.mean;
    p.beta = s0.var;
    p.gamma = sigma2 * s1.var;
    p.delta = sigma2 * covariance(l0, l2, s0.mean, l2_mean);
    p.sigma2 = sigma2;
    p.mu = mu;
    if (p.beta <= 0.0)
        throw DegenerateSample("estimate_moment_params: loss has no variation");
    return p.with_n(n);
}

}  // namespace cvplan

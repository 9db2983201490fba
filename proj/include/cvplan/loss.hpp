#pragma once

#include <functional>
#include <span>
#include <string>

#include "cvplan/errors.hpp"

namespace cvplan {

// Generator of an Efron q-class loss: q concave, with three derivatives.
struct QGenerator {
    std::function<double(double)> q;
    std::function<double(double)> q1;
    std::function<double(double)> q2;
    std::function<double(double)> q3;
};

enum class LossFamily {
    Squared,          // (x-mu)^2                        q-class, q(t) = -t^2
    QSqrt,            // q-class with q(t) = -sqrt(1+t^2)
    ApproxAbsolute,   // sqrt((x-mu)^2 + d)
    ModifiedSquared,  // (x-mu)^2 + mu^2
    DoubleSquared,    // (x^2-mu^2)^2
    CustomQ,          // user generator (library only)
};

// A loss family with its value and first two derivatives in mu.
class LossSpec {
public:
    static LossSpec squared();
    static LossSpec q_sqrt();
    // d <= 0 means "bind d = 1/n at estimation time"; direct evaluation
    // requires a bound d.
    static LossSpec approx_absolute(double d = 0.0);
    static LossSpec modified_squared();
    static LossSpec double_squared();
    static LossSpec custom_q(QGenerator generator);

    LossFamily family() const { return family_; }
    bool is_q_class() const;
    bool d_is_bound() const { return d_ > 0.0; }
    double d() const;
    // Copy with an automatic d bound to 1/n; identity for other families.
    LossSpec resolved(int n) const;

    double value(double mu_hat, double y) const;  // L(mu_hat, y)
    double d1(double mu, double x) const;         // L'_mu(x)
    double d2(double mu, double x) const;         // L''_mu(x)

    const QGenerator& generator() const;  // q-class families only

    std::string name() const;

private:
    explicit LossSpec(LossFamily family) : family_(family) {}
    LossFamily family_;
    double d_ = 0.0;
    QGenerator gen_;
};

double loss_value(const LossSpec& spec, double mu_hat, double y);

// Moment parameters of the (loss, distribution) pair driving the variance
// approximations; A and B carry the (gamma+delta)/n shift.
struct MomentParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double sigma2 = 0.0;
    double mu = 0.0;
    int n = 0;  // sample size used for the A,B shift; 0 = unset

    double shifted_a(int n_total) const {
        return alpha + (gamma + delta) / n_total;
    }
    double shifted_b(int n_total) const {
        return beta + (gamma + delta) / n_total;
    }
    double A() const { return shifted_a(require_n()); }
    double B() const { return shifted_b(require_n()); }
    MomentParams with_n(int n_total) const {
        MomentParams p = *this;
        p.n = n_total;
        return p;
    }

private:
    int require_n() const {
        if (n <= 0) throw InvalidParams("MomentParams: n unset");
        return n;
    }
};

// Plug-in estimation of alpha, beta, gamma, delta from a sample. Q-class
// families use the closed forms (alpha = 0 structurally); the rest use the
// analytic L', L'' with unbiased sample variances/covariances.
MomentParams estimate_moment_params(const LossSpec& spec,
                                    std::span<const double> sample);

// Population parameters of a q-class loss from the distribution functionals
// Var[q(X)] and Cov[X, q(X)]; n is left unset.
MomentParams qclass_population_params(const QGenerator& gen, double mu,
                                      double sigma2, double var_q,
                                      double cov_x_q);

}  // namespace cvplan

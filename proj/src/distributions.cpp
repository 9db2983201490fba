#include "cvplan/distributions.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "cvplan/normal.hpp"

namespace cvplan {

namespace {

constexpr int kManyMoments = 1 << 20;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

double double_factorial_odd(int k) {  // (k-1)!! for even k
    double r = 1.0;
    for (int j = k - 1; j > 1; j -= 2) r *= j;
    return r;
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double student_t_pdf(double x, double nu) {
    const double c = std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) -
                     0.5 * std::log(nu * M_PI);
    return std::exp(c - (nu + 1.0) / 2.0 * std::log1p(x * x / nu));
}

// Adaptive Simpson with the usual 1/15 Richardson correction.
double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double fa, double fm, double fb, double whole, double tol,
             int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    return adapt(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 36);
}

}  // namespace

DistSpec DistSpec::normal(double mu, double sigma) {
    if (!(sigma > 0.0)) throw InvalidParams("normal: sigma must be > 0");
    return DistSpec{DistFamily::Normal, mu, sigma};
}

DistSpec DistSpec::uniform(double lo, double hi) {
    if (!(hi > lo)) throw InvalidParams("uniform: need lo < hi");
    return DistSpec{DistFamily::Uniform, lo, hi};
}

DistSpec DistSpec::student_t(int nu, double shift) {
    if (nu < 1) throw InvalidParams("student_t: nu must be >= 1");
    return DistSpec{DistFamily::StudentT, static_cast<double>(nu), shift};
}

DistSpec DistSpec::exponential(double rate) {
    if (!(rate > 0.0)) throw InvalidParams("exponential: rate must be > 0");
    return DistSpec{DistFamily::Exponential, rate, 0.0};
}

DistSpec DistSpec::log_normal() { return DistSpec{DistFamily::LogNormal, 0.0, 1.0}; }

DistSpec DistSpec::pareto(double shape, double scale) {
    if (!(shape > 1.0)) throw InvalidParams("pareto: shape must be > 1");
    if (!(scale > 0.0)) throw InvalidParams("pareto: scale must be > 0");
    return DistSpec{DistFamily::Pareto, shape, scale};
}

namespace {

std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

std::string DistSpec::name() const {
    switch (family) {
        case DistFamily::Normal:
            return "normal(" + fmt_num(a) + "," + fmt_num(b) + ")";
        case DistFamily::Uniform:
            return "uniform(" + fmt_num(a) + "," + fmt_num(b) + ")";
        case DistFamily::StudentT:
            return "t" + std::to_string(static_cast<int>(a)) +
                   (b != 0.0 ? "(" + fmt_num(b) + ")" : "");
        case DistFamily::Exponential:
            return "exp(" + fmt_num(a) + ")";
        case DistFamily::LogNormal:
            return "lognormal";
        case DistFamily::Pareto:
            return "pareto(" + fmt_num(a) + ")";
    }
    return "unknown";
}

int DistSpec::finite_moments() const {
    switch (family) {
        case DistFamily::StudentT:
            return static_cast<int>(a) - 1;  // E|X|^m finite iff m < nu
        case DistFamily::Pareto:
            return static_cast<int>(std::ceil(a)) - 1;  // finite iff m < shape
        default:
            return kManyMoments;
    }
}

double DistSpec::central_moment(int k) const {
    if (k < 0 || k > 8) throw InvalidParams("central_moment: k in 0..8");
    if (k == 0) return 1.0;
    if (k == 1) return 0.0;
    if (k > finite_moments()) return kNaN;
    switch (family) {
        case DistFamily::Normal:
            return k % 2 == 1 ? 0.0 : std::pow(b, k) * double_factorial_odd(k);
        case DistFamily::Uniform: {
            if (k % 2 == 1) return 0.0;
            const double w = b - a;
            return std::pow(w, k) / (std::pow(2.0, k) * (k + 1.0));
        }
        case DistFamily::StudentT: {
            if (k % 2 == 1) return 0.0;
            const double nu = a;
            double r = std::pow(nu, k / 2.0);
            for (int j = 1; j <= k / 2; ++j) r *= (2.0 * j - 1.0) / (nu - 2.0 * j);
            return r;
        }
        default: {
            // from raw moments
            const double m1 = raw_moment(1);
            double s = 0.0;
            for (int j = 0; j <= k; ++j)
                s += binom(k, j) * raw_moment(j) * std::pow(-m1, k - j);
            return s;
        }
    }
}

double DistSpec::raw_moment(int k) const {
    if (k < 0 || k > 8) throw InvalidParams("raw_moment: k in 0..8");
    if (k == 0) return 1.0;
    if (k > finite_moments()) return kNaN;
    switch (family) {
        case DistFamily::Normal:
        case DistFamily::Uniform: {
            const double m1 = family == DistFamily::Normal ? a : 0.5 * (a + b);
            double s = 0.0;
            for (int j = 0; j <= k; ++j)
                s += binom(k, j) * central_moment(j) * std::pow(m1, k - j);
            return s;
        }
        case DistFamily::StudentT: {
            double s = 0.0;
            for (int j = 0; j <= k; ++j)
                s += binom(k, j) * central_moment(j) * std::pow(b, k - j);
            return s;
        }
        case DistFamily::Exponential: {
            double fact = 1.0;
            for (int j = 2; j <= k; ++j) fact *= j;
            return fact / std::pow(a, k);
        }
        case DistFamily::LogNormal:
            return std::exp(0.5 * k * k);
        case DistFamily::Pareto:
            return a * std::pow(b, k) / (a - k);
    }
    return kNaN;
}

double sample_one(const DistSpec& dist, CounterRng& rng) {
    switch (dist.family) {
        case DistFamily::Normal:
            return dist.a + dist.b * std_normal_quantile(rng.uniform_open01());
        case DistFamily::Uniform:
            return dist.a + (dist.b - dist.a) * rng.uniform01();
        case DistFamily::StudentT: {
            const int nu = static_cast<int>(dist.a);
            const double z = std_normal_quantile(rng.uniform_open01());
            double chi2 = 0.0;
            for (int i = 0; i < nu; ++i) {
                const double w = std_normal_quantile(rng.uniform_open01());
                chi2 += w * w;
            }
            return dist.b + z / std::sqrt(chi2 / nu);
        }
        case DistFamily::Exponential:
            return -std::log(rng.uniform_open01()) / dist.a;
        case DistFamily::LogNormal:
            return std::exp(std_normal_quantile(rng.uniform_open01()));
        case DistFamily::Pareto:
            return dist.b * std::pow(rng.uniform_open01(), -1.0 / dist.a);
    }
    throw InvalidParams("sample_one: unknown family");
}

void sample_into(const DistSpec& dist, CounterRng& rng, std::span<double> out) {
    for (auto& x : out) x = sample_one(dist, rng);
}

std::vector<double> sample(const DistSpec& dist, int n, std::uint64_t seed) {
    if (n < 1) throw InvalidParams("sample: n must be >= 1");
    std::vector<double> xs(static_cast<std::size_t>(n));
    CounterRng rng = CounterRng::stream(seed, 0, 0);
    sample_into(dist, rng, xs);
    return xs;
}

int sample_poisson(double lambda, CounterRng& rng) {
    if (!(lambda > 0.0)) throw InvalidParams("sample_poisson: lambda must be > 0");
    const double u = rng.uniform01();
    double p = std::exp(-lambda), cdf = p;
    int k = 0;
    while (u > cdf && k < 4096) {
        ++k;
        p *= lambda / k;
        cdf += p;
    }
    return k;
}

double expectation(const DistSpec& dist, const std::function<double(double)>& f,
                   double tol) {
    switch (dist.family) {
        case DistFamily::Uniform: {
            auto g = [&](double x) { return f(x) / (dist.b - dist.a); };
            return integrate(g, dist.a, dist.b, tol);
        }
        case DistFamily::StudentT: {
            // x = shift + sqrt(nu) tan(theta): compact smooth integrand
            const double nu = dist.a, shift = dist.b, root = std::sqrt(nu);
            auto h = [&](double th) {
                const double t = std::tan(th);
                const double x = shift + root * t;
                const double jac = root * (1.0 + t * t);
                return f(x) * student_t_pdf(x - shift, nu) * jac;
            };
            const double eps = 1e-9;
            return integrate(h, -M_PI / 2 + eps, M_PI / 2 - eps, tol);
        }
        default: {
            // quantile space: E f(X) = int_0^1 f(Q(u)) du
            auto quantile = [&](double u) -> double {
                switch (dist.family) {
                    case DistFamily::Normal:
                        return dist.a + dist.b * std_normal_quantile(u);
                    case DistFamily::Exponential:
                        return -std::log1p(-u) / dist.a;
                    case DistFamily::LogNormal:
                        return std::exp(std_normal_quantile(u));
                    case DistFamily::Pareto:
                        return dist.b * std::pow(1.0 - u, -1.0 / dist.a);
                    default:
                        throw InvalidParams("expectation: unhandled family");
                }
            };
            auto g = [&](double u) { return f(quantile(u)); };
            const double eps = 1e-11;
            return integrate(g, eps, 1.0 - eps, tol);
        }
    }
}

DistSpec dist_from_name(const std::string& name) {
    // forms: normal:mu,sigma | uniform:a,b | t:nu[,shift] | exp:rate |
    //        lognormal | pareto:shape[,scale]
    const auto colon = name.find(':');
    const std::string head = name.substr(0, colon);
    std::vector<double> args;
    if (colon != std::string::npos) {
        std::string rest = name.substr(colon + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            std::size_t next = rest.find(',', pos);
            if (next == std::string::npos) next = rest.size();
            args.push_back(std::stod(rest.substr(pos, next - pos)));
            pos = next + 1;
        }
    }
    auto arg = [&](std::size_t i, double fallback) {
        return i < args.size() ? args[i] : fallback;
    };
    if (head == "normal") return DistSpec::normal(arg(0, 0.0), arg(1, 1.0));
    if (head == "uniform") return DistSpec::uniform(arg(0, 0.0), arg(1, 1.0));
    if (head == "t")
        return DistSpec::student_t(static_cast<int>(arg(0, 6.0)), arg(1, 0.0));
    if (head == "exp") return DistSpec::exponential(arg(0, 1.0));
    if (head == "lognormal") return DistSpec::log_normal();
    if (head == "pareto") return DistSpec::pareto(arg(0, 15.0), arg(1, 1.0));
    throw InvalidConfig("unknown distribution: " + name);
}

}  // namespace cvplan

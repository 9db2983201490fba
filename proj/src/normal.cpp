#include "cvplan/normal.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "cvplan/errors.hpp"

namespace cvplan {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;
constexpr double kTwoPi = 6.283185307179586;

// 24-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 12> kGlNodes = {
    0.0640568928626056260850430826247450385909,
    0.1911188674736163091586398207570696318404,
    0.3150426796961633743867932913198102407864,
    0.4337935076260451384870842319133497124524,
    0.5454214713888395356583756172183723700107,
    0.6480936519369755692524957869107476266696,
    0.7401241915785543642438281030999784255232,
    0.8200019859739029219539498726697452080761,
    0.8864155270044010342131543419821967550873,
    0.9382745520027327585236490017087214496548,
    0.9747285559713094981983919930081690617411,
    0.9951872199970213601799974097007368118745};
constexpr std::array<double, 12> kGlWeights = {
    0.1279381953467521569740561652246953718517,
    0.1258374563468282961213753825111836887264,
    0.1216704729278033912044631534762624256070,
    0.1155056680537256013533444839067835598622,
    0.1074442701159656347825773424466062227946,
    0.0976186521041138882698806644642471544279,
    0.0861901615319532759171852029837426671850,
    0.0733464814110803057340336152531165181193,
    0.0592985849154367807463677585001085845412,
    0.0442774388174198061686027482113382288593,
    0.0285313886289336631813078159518782864491,
    0.0123412297999871995468056670700372915759};

// Integrates the Drezner-Wesolowsky integrand over theta in [lo, hi].
double gl_panel(double a, double b, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
        for (double sign : {-1.0, 1.0}) {
            const double theta = mid + sign * half * kGlNodes[i];
            const double s = std::sin(theta);
            const double c = std::cos(theta);
            sum += kGlWeights[i] *
                   std::exp(-(a * a - 2.0 * a * b * s + b * b) / (2.0 * c * c));
        }
    }
    return half * sum;
}

}  // namespace

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("std_normal_quantile: p must be in (0,1)");
    // Acklam's rational approximation.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // One Halley step against the exact CDF.
    const double e = std_normal_cdf(x) - p;
    const double u = e / std_normal_pdf(x);
    return x - u / (1.0 + 0.5 * x * u);
}

double bivariate_normal_cdf(double a, double b, double rho) {
    if (std::isnan(a) || std::isnan(b) || std::isnan(rho))
        throw DomainError("bivariate_normal_cdf: NaN argument");
    if (rho < -1.0 || rho > 1.0)
        throw InvalidRho("bivariate_normal_cdf: |rho| must be <= 1");
    if (rho == 1.0) return std_normal_cdf(std::min(a, b));
    if (rho == -1.0)
        return std::max(0.0, std_normal_cdf(a) + std_normal_cdf(b) - 1.0);
    const double base = std_normal_cdf(a) * std_normal_cdf(b);
    if (rho == 0.0) return base;

    // Phi2 = Phi(a)Phi(b) + (1/2pi) Int_0^asin(rho) exp(-(a^2 - 2ab sin t
    // + b^2) / (2 cos^2 t)) dt. The arcsin substitution removes the
    // endpoint singularity of the correlation-path form; panels tighten
    // resolution toward |rho| -> 1.
    const double alpha = std::asin(rho);
    double integral = 0.0;
    const double mag = std::abs(rho);
    const int panels = mag <= 0.5 ? 1 : (mag <= 0.95 ? 2 : 3);
    double prev = 0.0;
    for (int k = 1; k <= panels; ++k) {
        const double frac = static_cast<double>(k) / panels;
        const double edge = alpha * frac;
        integral += gl_panel(a, b, prev, edge);
        prev = edge;
    }
    const double value = base + integral / kTwoPi;
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace cvplan

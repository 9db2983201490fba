#pragma once

namespace cvplan {

// Standard normal CDF via the complementary error function.
double std_normal_cdf(double x);

double std_normal_pdf(double x);

// Inverse standard normal CDF: Acklam's rational approximation polished by
// one Halley step against the erfc-based CDF (absolute error ~1e-15).
double std_normal_quantile(double p);

// CDF of the bivariate standard normal with correlation rho, computed by
// Gauss-Legendre panels along the arcsin-transformed correlation path.
// |rho| = 1 is handled exactly by min/max reduction. Absolute error well
// inside 1e-7 for |rho| <= 0.999.
double bivariate_normal_cdf(double a, double b, double rho);

}  // namespace cvplan

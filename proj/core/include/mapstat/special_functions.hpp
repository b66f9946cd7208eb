#pragma once
// Standard normal CDF, the chi-squared(1) CDF, and the exponential integral
// E1, to the accuracy the limit-law layer needs (abs error < 1e-12 for Phi,
// rel error < 1e-12 for E1).

namespace mapstat::limitlaw {

/// Euler-Mascheroni constant, 20 digits.
inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Phi(x), absolute error below 1e-12.
double std_normal_cdf(double x);

/// CDF of chi-squared with one degree of freedom: 2*Phi(sqrt(x)) - 1 for
/// x > 0, 0 elsewhere.
double chi2_cdf_1dof(double x);

/// E1(s) = int_s^inf e^{-t}/t dt for s > 0, relative error below 1e-12.
/// Power series up to s = 1, continued fraction beyond.  Throws
/// std::domain_error for s <= 0.
double exp_integral_e1(double s);

/// Gamma(theta); exact at the two values the density layer uses
/// (theta = 1/2, 1), standard library elsewhere.
double gamma_function(double theta);

}  // namespace mapstat::limitlaw

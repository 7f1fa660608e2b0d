#pragma once

#include <cmath>

namespace ncc::stats {

// Distribution functions used by the Wald/t tests. Error targets: normal
// functions 1e-12 absolute, Student t 1e-10 absolute.

double normal_pdf(double x);

/// Phi(x), computed through erfc for accuracy in both tails.
double normal_cdf(double x);

/// 1 - Phi(x) without cancellation.
double normal_sf(double x);

/// Phi^{-1}(p) for p in (0, 1): Acklam's rational approximation refined by
/// two Halley steps against erfc.
double normal_quantile(double p);

/// log Gamma(x) for x > 0 (Lanczos, g = 7, n = 9). Reentrant, unlike lgamma.
double log_gamma(double x);

/// Regularized incomplete beta I_x(a, b) via Lentz's continued fraction.
double incomplete_beta(double x, double a, double b);

double t_pdf(double t, double df);
double t_cdf(double t, double df);

/// P(T > t) for T ~ t_df.
double t_sf(double t, double df);

/// Inverse of t_cdf; Newton iterations from a normal start with bisection
/// fallback.
double t_quantile(double p, double df);

inline double logit(double p) { return std::log(p / (1.0 - p)); }

/// Numerically stable 1 / (1 + exp(-x)).
double inv_logit(double x);

/// log(1 + exp(x)) without overflow.
double log1p_exp(double x);

}  // namespace ncc::stats

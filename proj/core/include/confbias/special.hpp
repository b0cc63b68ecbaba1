#pragma once

#include <functional>

#include "confbias/types.hpp"

namespace confbias {

/// Standard normal density.
double norm_pdf(double x);

/// Standard normal distribution function, absolute error below 1e-15 on
/// [-8, 8]; saturates to 0/1 in the far tails.
double norm_cdf(double x);

/// Inverse of norm_cdf on (0, 1).  Rational initial guess refined by one
/// Halley step against erfc, good to full double precision.
double norm_ppf(double p);

/// Scaled complementary error function exp(x^2) * erfc(x), stable for
/// arbitrarily large x.
double erfcx(double x);

/// Mills-ratio style scaled tail: Phi(-t) * exp(t^2 / 2), computed without
/// forming the underflowing and overflowing factors separately.
double scaled_normal_tail(double t);

/// Controls for the adaptive quadrature oracle.
struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double half_width = 12.0;  // truncation of the infinite domain, >= 8
};

void validate(const QuadratureSpec& spec);

/// Adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b].
/// Throws ConvergenceFailure if the subdivision budget is exhausted.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

/// E{f(X)} for X ~ N[0, sigma^2], by quadrature over +-half_width sigmas.
double expect_normal(const std::function<double(double)>& f, double sigma,
                     const QuadratureSpec& spec = {});

/// Closed form of the appendix integral
///   I_1(beta) = sqrt(2*pi/beta) * Phi(-1/sqrt(beta)) * exp(1/(2*beta)),
/// evaluated through scaled_normal_tail.  I_1 -> 1 as beta -> 0.
double I1(double beta);

/// Closed form of
///   I_2(beta) = 1/(2*beta)
///             - sqrt(pi/2) * (1-beta)/beta^{3/2} * exp(1/(2*beta)) * Phi(-1/sqrt(beta)).
/// I_2(1) = 1/2 exactly; I_2 -> 1 as beta -> 0.
double I2(double beta);

/// Independent oracle: (2*pi)^{-1/2} Int exp(-x^2/2) dx / (1 + beta x^2)^n
/// by adaptive quadrature of the definition.  n must be 1 or 2.
double In_quadrature(int n, double beta, const QuadratureSpec& spec = {});

/// ln Gamma(x) for x > 0 (thin wrapper, kept for the beta-function ratios).
double log_gamma_fn(double x);

/// ln B(a, b) via log-gamma differences.
double log_beta_fn(double a, double b);

}  // namespace confbias

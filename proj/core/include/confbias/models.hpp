#pragma once

#include <span>
#include <vector>

#include "confbias/types.hpp"

namespace confbias {

/// Per-observation expected score and curvature at a trial location, with the
/// expectation taken under the true distribution X ~ N[0, sigma^2].
struct ScoreValue {
  double score = 0.0;
  double curvature = 0.0;
};

ScoreValue expected_score(const BiasModel& model, double lambda, double sigma);

/// Per-observation expected log-likelihood (additive constants dropped).
/// Used for divergence diagnostics and global-maximum checks.
double expected_loglik(const BiasModel& model, double lambda, double sigma);

/// Asymptotic bias of the posterior mean relative to the true mean (taken as
/// 0 for the normal-observation models, as the beta mean for the beta model).
/// Throws DivergentModel for the relative-exponential model.
double asymptotic_bias(const BiasModel& model, double sigma);

/// Subjective posterior-variance coefficient v*n/sigma^2 (v*n for the beta
/// model, which has no free sigma).
double subjective_variance_coeff(const BiasModel& model, double sigma);

/// True sampling-variance coefficient var(lambda_hat)*n/sigma^2.
double true_variance_coeff(const BiasModel& model, double sigma);

/// Asymptotic influence n*d(lambda_hat) of one extra observation at x.
/// Unsupported for the sweet-spot and beta models.
double influence(const BiasModel& model, double x, double sigma);

struct NewtonResult {
  double lambda = 0.0;
  int iterations = 0;
};

/// Newton-Raphson on the expected score from lambda = 0, with a bisection
/// safeguard when iterates leave [-20 sigma, 20 sigma].  A converged
/// stationary point is accepted only if it is a maximum that dominates the
/// boundary of the search interval; otherwise the model is reported as
/// divergent (the relative-exponential class).
NewtonResult newton_solve(const BiasModel& model, double sigma);

/// Sample log-likelihood at a trial location (constants dropped).
double log_likelihood(const BiasModel& model, double lambda,
                      std::span<const double> sample, double sigma);

/// One refined root of the expected score, with its local diagnostics.
struct ScoreRoot {
  double lambda = 0.0;
  double curvature = 0.0;
  double loglik = 0.0;
};

/// Divergence diagnostic: scans the expected score on [lo, hi], refines every
/// sign change, and reports whether some root is an interior global maximum
/// of the expected log-likelihood over the scanned range.
struct ScoreScan {
  std::vector<ScoreRoot> roots;
  bool interior_global_max = false;
};

ScoreScan scan_expected_score(const BiasModel& model, double sigma, double lo,
                              double hi, int points = 2001);

/// Bias plus both variance coefficients; divergent or undefined entries come
/// back as NaN with the diverges flag set for the divergent class.
AsymptoticSummary summarize(const BiasModel& model, double sigma);

}  // namespace confbias

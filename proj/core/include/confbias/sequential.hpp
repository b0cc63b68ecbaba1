#pragma once

#include <vector>

#include "confbias/types.hpp"

namespace confbias {

/// Primacy weighting: perceived observation variance sigma^2 (sigma^2/v)^xi.
struct PrimacyParams {
  double xi = 0.0;     // >= 0
  double sigma = 1.0;  // > 0
};

void validate(const PrimacyParams& params);

struct PolarizationQuery {
  double threshold = 0.0;     // L
  double lambda_hat = 0.0;    // current posterior mean
  double sigma_lambda = 1.0;  // sd of lambda_hat, > 0
};

/// Variance the agent assigns to an observation at x given its current
/// opinion.  Supported for the exponential, relative-exponential and
/// constant-variance models; the remaining models discount through the
/// likelihood, not a per-observation variance.
double perceived_variance(const BiasModel& model, double x, double belief_mean,
                          double sigma);

/// Conjugate normal update: precisions add, means pool by precision.
BeliefState update(const BeliefState& belief, double x, double perceived_var);

/// Seed-deterministic sequential run: observations drawn from the true
/// N[mu, sigma^2], discounting applied through perceived_variance.
std::vector<TrajectoryRecord> run_trajectory(const ScenarioConfig& config,
                                             const BiasModel& model);

/// One primacy step: 1/v' = 1/v + 1/(sigma^2 (sigma^2/v)^xi).
BeliefState primacy_update(const BeliefState& belief, double x,
                           const PrimacyParams& params);

/// p = Phi{(lambda_hat - L) / sigma_lambda}, as printed in the source model.
double polarization_probability(const PolarizationQuery& query);

}  // namespace confbias

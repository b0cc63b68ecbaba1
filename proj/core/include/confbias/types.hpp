#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace confbias {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// A model or scenario parameter violates its constraint.
class ConstraintViolation : public std::invalid_argument {
 public:
  ConstraintViolation(std::string field, const std::string& reason)
      : std::invalid_argument(field + ": " + reason), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested quantity has no finite asymptotic value for this model.
class DivergentModel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The model does not define the requested quantity.
class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative solver ran out of iterations.
class NoConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature exceeded its subdivision cap.
class ConvergenceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The likelihood has no interior maximum on the search interval.
class NoInteriorMaximum : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Bias models
// ---------------------------------------------------------------------------

/// Perceived observation variance sigma^2 * exp(beta*X/sigma).
struct Exponential {
  double beta = 0.0;
};

/// Odds-ratio discounting of probabilities p ~ Beta(a, b), weight ((1-p)/p)^g.
/// Shape parameters are named a, b and the discount exponent g so that the
/// bias coefficient beta of the other models keeps its name.
struct BetaOdds {
  double a = 1.0;
  double b = 1.0;
  double g = 0.0;
};

/// Perceived variance sigma^2 * exp(beta*(X-theta)/sigma), relative to the
/// current opinion theta.  Has no stable asymptotic bias for beta != 0.
struct RelativeExponential {
  double beta = 0.0;
};

/// Symmetric heavy-tailed subjective distribution: Student t with
/// nu = 1/beta degrees of freedom.  Unbiased, distorted variances.
struct SweetSpot {
  double beta = 1.0;
};

/// Variance scaled by gamma for X above the opinion, by beta below it.
struct ConstantVariance {
  double beta = 1.0;
  double gamma = 1.0;
};

/// Skewed log-gamma subjective observation distribution.
struct LogGamma {
  double beta = 1.0;
};

using BiasModel = std::variant<Exponential, BetaOdds, RelativeExponential,
                               SweetSpot, ConstantVariance, LogGamma>;

/// Variant name as used in JSON files and on the command line.
std::string variant_name(const BiasModel& model);

/// Throws ConstraintViolation unless every parameter constraint holds.
/// Divergent models (relative-exponential) are valid; divergence is reported
/// by the asymptotics layer, not here.
void validate(const BiasModel& model);

// ---------------------------------------------------------------------------
// Scenario and belief state
// ---------------------------------------------------------------------------

/// True observation process plus the agent's prior.
struct ScenarioConfig {
  double mu = 0.0;          // true observation mean
  double sigma = 1.0;       // true observation sd, > 0
  double prior_mean = 0.0;  // mu_0
  double prior_var = 1.0;   // sigma_0^2, > 0
  std::uint64_t n_obs = 1;  // >= 1
  std::uint64_t seed = 0;
};

void validate(const ScenarioConfig& config);

/// Current normal posterior of one agent.
struct BeliefState {
  double mean = 0.0;
  double var = 1.0;  // > 0
};

/// One row of a sequential-update time series.
struct TrajectoryRecord {
  std::uint64_t step = 0;  // 1-based, contiguous
  double observation = 0.0;
  double perceived_var = 0.0;
  double post_mean = 0.0;
  double post_sd = 0.0;
};

/// Large-sample summary of a model: bias and the two variance coefficients,
/// both scaled by n/sigma^2 (absolute v*n for the beta model, which has no
/// free sigma).  Divergent models carry NaNs and diverges = true.
struct AsymptoticSummary {
  double lambda = 0.0;
  double subj_var_coeff = 0.0;
  double true_var_coeff = 0.0;
  bool diverges = false;
};

// ---------------------------------------------------------------------------
// JSON (nlohmann) serialization of scenario files
// ---------------------------------------------------------------------------

std::string to_json(const BiasModel& model);
std::string to_json(const ScenarioConfig& config, const BiasModel& model);

BiasModel model_from_json(const std::string& text);

struct Scenario {
  ScenarioConfig config;
  BiasModel model;
};

/// Parses {"model": {...}, "mu": ..., ...}; validates both parts.
Scenario scenario_from_json(const std::string& text);

}  // namespace confbias

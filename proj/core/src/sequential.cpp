#include "confbias/sequential.hpp"

#include <cmath>

#include "confbias/rng.hpp"
#include "confbias/special.hpp"

namespace confbias {

void validate(const PrimacyParams& params) {
  if (!(params.xi >= 0)) throw ConstraintViolation("xi", "xi >= 0 required");
  if (!(params.sigma > 0)) throw ConstraintViolation("sigma", "sigma > 0 required");
}

double perceived_variance(const BiasModel& model, double x, double belief_mean,
                          double sigma) {
  if (!(sigma > 0)) throw DomainError("perceived_variance: sigma must be > 0");
  validate(model);
  const double s2 = sigma * sigma;
  struct Visitor {
    double x, belief_mean, sigma, s2;
    double operator()(const Exponential& m) const {
      return s2 * std::exp(m.beta * x / sigma);
    }
    double operator()(const RelativeExponential& m) const {
      return s2 * std::exp(m.beta * (x - belief_mean) / sigma);
    }
    double operator()(const ConstantVariance& m) const {
      return s2 * (x > belief_mean ? m.gamma : m.beta);
    }
    double operator()(const SweetSpot&) const {
      throw Unsupported("sweet-spot discounting is not a per-observation variance");
    }
    double operator()(const LogGamma&) const {
      throw Unsupported("log-gamma discounting is not a per-observation variance");
    }
    double operator()(const BetaOdds&) const {
      throw Unsupported("beta-odds discounting is not a per-observation variance");
    }
  };
  return std::visit(Visitor{x, belief_mean, sigma, s2}, model);
}

BeliefState update(const BeliefState& belief, double x, double perceived_var) {
  if (!(perceived_var > 0)) throw DomainError("update: perceived_var must be > 0");
  const double prior_prec = 1.0 / belief.var;
  const double obs_prec = 1.0 / perceived_var;  // 0 for an infinite variance
  const double prec = prior_prec + obs_prec;
  BeliefState next;
  next.var = 1.0 / prec;
  next.mean = (belief.mean * prior_prec + x * obs_prec) / prec;
  return next;
}

std::vector<TrajectoryRecord> run_trajectory(const ScenarioConfig& config,
                                             const BiasModel& model) {
  validate(config);
  validate(model);
  SplitMix64 rng = substream(config.seed, 0);
  BeliefState belief{config.prior_mean, config.prior_var};
  std::vector<TrajectoryRecord> out;
  out.reserve(config.n_obs);
  for (std::uint64_t t = 1; t <= config.n_obs; ++t) {
    const double x = rng.normal(config.mu, config.sigma);
    const double pv = perceived_variance(model, x, belief.mean, config.sigma);
    belief = update(belief, x, pv);
    out.push_back({t, x, pv, belief.mean, std::sqrt(belief.var)});
  }
  return out;
}

BeliefState primacy_update(const BeliefState& belief, double x,
                           const PrimacyParams& params) {
  validate(params);
  if (!(belief.var > 0)) throw DomainError("primacy_update: belief.var must be > 0");
  const double s2 = params.sigma * params.sigma;
  const double pv = s2 * std::pow(s2 / belief.var, params.xi);
  return update(belief, x, pv);
}

double polarization_probability(const PolarizationQuery& query) {
  if (!(query.sigma_lambda > 0))
    throw ConstraintViolation("sigma_lambda", "sigma_lambda > 0 required");
  return norm_cdf((query.lambda_hat - query.threshold) / query.sigma_lambda);
}

}  // namespace confbias

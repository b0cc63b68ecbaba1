#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "confbias/types.hpp"

namespace confbias {

struct McPlan {
  std::uint64_t replications = 2;  // R >= 2
  std::uint64_t n = 1;             // sample size per replication
  std::uint64_t seed = 0;
  BiasModel model;
  double sigma = 1.0;
};

void validate(const McPlan& plan);

struct McResult {
  double mean = 0.0;
  double var = 0.0;  // across replications, denominator R - 1
  double se = 0.0;   // sqrt(var / R)
  double skewness = 0.0;
  std::uint64_t replications = 0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::vector<double> replicates;  // per-replication estimates, in order
};

std::string to_json(const McResult& result);

/// One replication's observations: N[0, sigma^2] draws, or Beta(a, b) draws
/// for the beta-odds model, from the given substream index.
std::vector<double> draw_sample(const BiasModel& model, double sigma,
                                std::uint64_t n, std::uint64_t seed,
                                std::uint64_t stream);

/// Precision-weighted mean with the model's discounting weights.  Defined for
/// the exponential (weights exp(-beta x / sigma)) and beta-odds
/// (weights ((1-p)/p)^g) models.
double weighted_mean_estimate(std::span<const double> sample,
                              const BiasModel& model, double sigma);

/// Location MLE of the model's (misspecified) likelihood on the sample,
/// searched over [min - 10 sigma, max + 10 sigma].  Throws NoInteriorMaximum
/// when the boundary dominates every interior stationary point, which is the
/// expected outcome for the relative-exponential model.
double mle_estimate(std::span<const double> sample, const BiasModel& model,
                    double sigma);

/// The estimator run_mc applies: the weighted mean where one exists,
/// otherwise the MLE.
double point_estimate(std::span<const double> sample, const BiasModel& model,
                      double sigma);

/// Replicated estimation.  Replication i draws from substream(seed, i), so the
/// result is bit-identical for any thread count.
McResult run_mc(const McPlan& plan, int threads = 1);

/// Standard error of the replicate variance (for z-scoring variance claims):
/// sqrt((m4 - m2^2 (R-3)/(R-1)) / R) on central moments of the replicates.
double variance_se(std::span<const double> replicates);

struct InfluenceEstimate {
  double value = 0.0;  // mean over replications of n * (new - old estimate)
  double se = 0.0;
};

InfluenceEstimate influence_empirical(const BiasModel& model, double x,
                                      double sigma, std::uint64_t n,
                                      std::uint64_t replications,
                                      std::uint64_t seed);

struct NormalityResult {
  double statistic = 0.0;  // sup |empirical cdf - fitted normal cdf|
  double critical = 0.0;   // 1% level, Lilliefors asymptotic 1.035/sqrt(n)
  bool pass = false;
};

/// Lilliefors-style composite normality check; needs at least 100 values.
NormalityResult normality_check(std::span<const double> values);

}  // namespace confbias

#include <doctest.h>

#include <cmath>
#include <vector>

#include "confbias/models.hpp"
#include "confbias/montecarlo.hpp"
#include "confbias/rng.hpp"
#include "oracles.hpp"

using namespace confbias;

TEST_CASE("substreams are reproducible and decorrelated") {
  SplitMix64 a = substream(42, 3);
  SplitMix64 b = substream(42, 3);
  SplitMix64 c = substream(42, 4);
  CHECK(a.next() == b.next());
  CHECK(a.next() != c.next());

  // Uniforms live strictly inside (0, 1).
  SplitMix64 g(9);
  for (int i = 0; i < 10000; ++i) {
    const double u = g.uniform01();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("generator moments") {
  SplitMix64 g(1234);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = g.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(s / n == doctest::Approx(0.0).epsilon(0.02));
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));

  SplitMix64 gb(99);
  double sb = 0;
  for (int i = 0; i < 50000; ++i) sb += gb.beta(3.0, 3.0);
  CHECK(sb / 50000 == doctest::Approx(0.5).epsilon(0.01));
  CHECK_THROWS_AS(g.gamma(0.0), DomainError);
}

TEST_CASE("weighted mean estimates") {
  const std::vector<double> sample = {-1.0, 1.0};
  CHECK(weighted_mean_estimate(sample, Exponential{1.0}, 1.0) ==
        doctest::Approx(-std::tanh(1.0)).epsilon(1e-14));
  CHECK(weighted_mean_estimate(sample, Exponential{0.0}, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-15));

  const std::vector<double> big = {-1.0, 0.5, 2.0, 1e3};
  // Extreme observations must not overflow the weights.
  CHECK(std::isfinite(weighted_mean_estimate(big, Exponential{2.0}, 1.0)));

  // The weighted mean is the exact zero of the weighted score.
  SplitMix64 g(5);
  std::vector<double> xs(1000);
  for (double& x : xs) x = g.normal();
  const BiasModel m = Exponential{0.7};
  const double lam = weighted_mean_estimate(xs, m, 1.0);
  double score = 0.0;
  for (double x : xs) score += (x - lam) * std::exp(-0.7 * x);
  CHECK(std::abs(score / xs.size()) <= 1e-10);

  const std::vector<double> probs = {0.2, 0.4, 0.7};
  CHECK(weighted_mean_estimate(probs, BetaOdds{3.0, 3.0, 0.0}, 1.0) ==
        doctest::Approx((0.2 + 0.4 + 0.7) / 3.0).epsilon(1e-14));
  const std::vector<double> out_of_range = {0.2, 1.0};
  CHECK_THROWS_AS(
      weighted_mean_estimate(out_of_range, BetaOdds{3.0, 3.0, 1.0}, 1.0),
      DomainError);
}

TEST_CASE("mle_estimate against a golden-section oracle") {
  SplitMix64 g(77);
  std::vector<double> xs(400);
  for (double& x : xs) x = g.normal();

  for (const BiasModel& m :
       {BiasModel{SweetSpot{1.0}}, BiasModel{ConstantVariance{1.0, 2.0}},
        BiasModel{LogGamma{1.0}}}) {
    CAPTURE(variant_name(m));
    const double fast = mle_estimate(xs, m, 1.0);
    const double slow = oracles::golden_max(
        [&](double l) { return log_likelihood(m, l, xs, 1.0); }, -4.0, 4.0,
        1e-13);
    CHECK(fast == doctest::Approx(slow).epsilon(1e-7));
  }

  // A symmetric two-point sample has the symmetric maximizer.
  const std::vector<double> pair = {-0.8, 0.8};
  CHECK(mle_estimate(pair, SweetSpot{1.0}, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("relative-exponential MLE runs to the boundary") {
  SplitMix64 g(3);
  std::vector<double> xs(200);
  for (double& x : xs) x = g.normal();
  CHECK_THROWS_AS(mle_estimate(xs, RelativeExponential{0.8}, 1.0),
                  NoInteriorMaximum);
}

TEST_CASE("run_mc matches the asymptotic predictions") {
  McPlan plan;
  plan.replications = 200;
  plan.n = 10000;
  plan.seed = 11;
  plan.model = Exponential{0.5};
  plan.sigma = 1.0;
  const McResult r = run_mc(plan, 2);
  REQUIRE(r.replicates.size() == 200);
  CHECK(std::abs(r.mean - (-0.5)) <= 3.0 * r.se);

  const double nvar = static_cast<double>(plan.n) * r.var;
  const double pred = true_variance_coeff(plan.model, 1.0);
  const double nvar_se = static_cast<double>(plan.n) * variance_se(r.replicates);
  CHECK(std::abs(nvar - pred) <= 3.0 * nvar_se);

  // Unbiased control: n*var within 10% of 1.
  plan.model = Exponential{0.0};
  const McResult fair = run_mc(plan, 2);
  CHECK(static_cast<double>(plan.n) * fair.var ==
        doctest::Approx(1.0).epsilon(0.10));
  CHECK(std::abs(fair.mean) <= 3.0 * fair.se);

  plan.replications = 1;
  CHECK_THROWS_AS(validate(plan), ConstraintViolation);
}

TEST_CASE("run_mc is bit-identical across thread counts") {
  McPlan plan;
  plan.replications = 64;
  plan.n = 500;
  plan.seed = 2024;
  plan.model = LogGamma{1.0};
  const McResult one = run_mc(plan, 1);
  const McResult four = run_mc(plan, 4);
  REQUIRE(one.replicates.size() == four.replicates.size());
  for (std::size_t i = 0; i < one.replicates.size(); ++i)
    CHECK(one.replicates[i] == four.replicates[i]);
  CHECK(one.mean == four.mean);
  CHECK(one.var == four.var);
  CHECK(one.skewness == four.skewness);
}

TEST_CASE("beta model Monte Carlo") {
  McPlan plan;
  plan.replications = 100;
  plan.n = 20000;
  plan.seed = 31;
  plan.model = BetaOdds{3.0, 3.0, 1.0};
  const McResult r = run_mc(plan, 2);
  // Posterior mean a/(a+b) shifted by the bias -g/(a+b).
  CHECK(std::abs(r.mean - 1.0 / 3.0) <= 3.0 * r.se);
  const double nvar = static_cast<double>(plan.n) * r.var;
  const double nvar_se = static_cast<double>(plan.n) * variance_se(r.replicates);
  CHECK(std::abs(nvar - 8.0 / 63.0) <= 3.0 * nvar_se);
}

TEST_CASE("empirical influence") {
  const BiasModel m = Exponential{1.0};
  // Zero at the asymptotic mean.
  const InfluenceEstimate at_mean =
      influence_empirical(m, -1.0, 1.0, 10000, 100, 5);
  CHECK(std::abs(at_mean.value) <= 3.0 * at_mean.se);

  // High observations are effectively ignored.
  const InfluenceEstimate at0 = influence_empirical(m, 0.0, 1.0, 10000, 100, 5);
  const InfluenceEstimate at3 = influence_empirical(m, 3.0, 1.0, 10000, 100, 5);
  CHECK(std::abs(at3.value) < std::abs(at0.value));
  CHECK(std::abs(at0.value - influence(m, 0.0, 1.0)) <= 3.0 * at0.se);
}

TEST_CASE("normality check") {
  SplitMix64 g(8);
  std::vector<double> normal(10000);
  for (double& x : normal) x = g.normal(3.0, 2.0);
  CHECK(normality_check(normal).pass);

  std::vector<double> skewed(10000);
  for (double& x : skewed) x = -std::log(g.uniform01());
  const NormalityResult bad = normality_check(skewed);
  CHECK_FALSE(bad.pass);
  CHECK(bad.statistic > bad.critical);

  std::vector<double> tiny(50, 0.0);
  CHECK_THROWS_AS(normality_check(tiny), DomainError);
}

TEST_CASE("variance_se calibration") {
  // For normal replicates, sd(sample var) ~ var * sqrt(2/(R-1)).
  SplitMix64 g(17);
  std::vector<double> reps(4000);
  for (double& x : reps) x = g.normal(0.0, 1.5);
  const double se = variance_se(reps);
  const double expect = 1.5 * 1.5 * std::sqrt(2.0 / 4000.0);
  CHECK(se == doctest::Approx(expect).epsilon(0.1));
}

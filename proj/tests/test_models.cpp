#include <doctest.h>

#include <cmath>
#include <vector>

#include "confbias/models.hpp"
#include "confbias/special.hpp"
#include "oracles.hpp"

using namespace confbias;

namespace {

// Models with a finite root, used for the generic property loops.
const std::vector<BiasModel> kConvergent = {
    Exponential{0.5},           SweetSpot{1.0},
    ConstantVariance{1.0, 2.0}, ConstantVariance{0.5, 4.0},
    LogGamma{1.0},              LogGamma{-0.7},
};

}  // namespace

TEST_CASE("asymptotic bias closed forms") {
  CHECK(asymptotic_bias(Exponential{0.2}, 10.0) ==
        doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(asymptotic_bias(Exponential{0.0}, 3.0) == 0.0);
  CHECK(asymptotic_bias(LogGamma{1.0}, 1.0) ==
        doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(asymptotic_bias(SweetSpot{1.0}, 1.0) == 0.0);
  CHECK(asymptotic_bias(BetaOdds{3.0, 3.0, 1.0}, 1.0) ==
        doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
  CHECK(asymptotic_bias(ConstantVariance{1.5, 1.5}, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(asymptotic_bias(RelativeExponential{0.5}, 1.0),
                  DivergentModel);
}

TEST_CASE("constant-variance root against bisection oracle") {
  for (double beta : {0.5, 1.0}) {
    for (double gamma : {1.0, 2.0, 4.0}) {
      const BiasModel m = ConstantVariance{beta, gamma};
      const double lam = asymptotic_bias(m, 1.0);
      const double ref = oracles::bisect(
          [&](double l) { return expected_score(m, l, 1.0).score; }, -5.0, 1.0);
      CAPTURE(beta);
      CAPTURE(gamma);
      CHECK(std::abs(lam - ref) <= 1e-10);
      if (gamma > beta) CHECK(lam < 0.0);
    }
  }
  // Frozen reference points for the gamma/beta ratios 2, 4, 8.
  CHECK(asymptotic_bias(ConstantVariance{1.0, 2.0}, 1.0) ==
        doctest::Approx(-0.27602980479814330).epsilon(1e-12));
  CHECK(asymptotic_bias(ConstantVariance{1.0, 4.0}, 1.0) ==
        doctest::Approx(-0.54915582109930390).epsilon(1e-12));
  CHECK(asymptotic_bias(ConstantVariance{1.0, 8.0}, 1.0) ==
        doctest::Approx(-0.81680870790111467).epsilon(1e-12));
}

TEST_CASE("newton_solve converges quickly and flags divergence") {
  const NewtonResult r = newton_solve(ConstantVariance{1.0, 2.0}, 1.0);
  CHECK(r.lambda == doctest::Approx(-0.27602980479814330).epsilon(1e-11));
  CHECK(r.iterations <= 8);

  const NewtonResult sym = newton_solve(ConstantVariance{2.0, 2.0}, 1.0);
  CHECK(std::abs(sym.lambda) <= 1e-12);

  CHECK_THROWS_AS(newton_solve(RelativeExponential{0.5}, 1.0), DivergentModel);
  CHECK_THROWS_AS(newton_solve(RelativeExponential{1.5}, 1.0), DivergentModel);
}

TEST_CASE("variance coefficients: closed forms and frozen references") {
  CHECK(subjective_variance_coeff(Exponential{1.0}, 1.0) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
  CHECK(true_variance_coeff(Exponential{1.0}, 1.0) ==
        doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-14));
  CHECK(subjective_variance_coeff(LogGamma{1.0}, 1.0) == 1.0);
  CHECK(true_variance_coeff(LogGamma{1.0}, 1.0) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));

  CHECK(subjective_variance_coeff(ConstantVariance{1.0, 2.0}, 1.0) ==
        doctest::Approx(1.4375431485720368).epsilon(1e-11));
  CHECK(true_variance_coeff(ConstantVariance{1.0, 2.0}, 1.0) ==
        doctest::Approx(1.0443225641828557).epsilon(1e-10));
  CHECK(true_variance_coeff(ConstantVariance{1.5, 1.5}, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-12));

  CHECK(subjective_variance_coeff(SweetSpot{0.5}, 1.0) ==
        doctest::Approx(1.37668319356065).epsilon(1e-10));
  CHECK(true_variance_coeff(SweetSpot{0.5}, 1.0) ==
        doctest::Approx(1.16679019921133).epsilon(1e-10));
  CHECK(subjective_variance_coeff(SweetSpot{1.0}, 1.0) ==
        doctest::Approx(1.45213561666485).epsilon(1e-10));
  CHECK(true_variance_coeff(SweetSpot{1.0}, 1.0) ==
        doctest::Approx(1.31312446504349).epsilon(1e-10));
  CHECK(true_variance_coeff(SweetSpot{2.0}, 1.0) ==
        doctest::Approx(1.54262403604910).epsilon(1e-10));

  // Beta model: absolute n*var; a=3, b=3, g=1 gives 8/63.
  CHECK(true_variance_coeff(BetaOdds{3.0, 3.0, 1.0}, 1.0) ==
        doctest::Approx(8.0 / 63.0).epsilon(1e-13));
  CHECK(subjective_variance_coeff(BetaOdds{3.0, 3.0, 1.0}, 1.0) ==
        doctest::Approx(3.0 / 56.0).epsilon(1e-13));
  // The sandwich moments need a > 2g.
  CHECK_THROWS_AS(true_variance_coeff(BetaOdds{1.5, 3.0, 1.0}, 1.0),
                  Unsupported);
}

TEST_CASE("unbiased limit: every coefficient tends to 1") {
  for (const BiasModel& m : {BiasModel{Exponential{1e-7}},
                             BiasModel{SweetSpot{1e-7}},
                             BiasModel{ConstantVariance{1.0, 1.0 + 1e-7}},
                             BiasModel{LogGamma{1e-7}}}) {
    CAPTURE(variant_name(m));
    CHECK(std::abs(asymptotic_bias(m, 1.0)) <= 1e-6);
    CHECK(subjective_variance_coeff(m, 1.0) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(true_variance_coeff(m, 1.0) == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("root consistency: expected score vanishes at the reported bias") {
  for (const BiasModel& m : kConvergent) {
    CAPTURE(variant_name(m));
    const double lam = asymptotic_bias(m, 1.0);
    const ScoreValue sv = expected_score(m, lam, 1.0);
    CHECK(std::abs(sv.score) <= 1e-10);
    CHECK(sv.curvature < 0.0);
  }
}

TEST_CASE("scale equivariance in sigma") {
  for (const BiasModel& m :
       {BiasModel{Exponential{0.7}}, BiasModel{LogGamma{1.0}},
        BiasModel{ConstantVariance{1.0, 2.0}}}) {
    const double base = asymptotic_bias(m, 1.0);
    for (double c : {0.1, 10.0}) {
      CAPTURE(variant_name(m));
      CHECK(asymptotic_bias(m, c) == doctest::Approx(c * base).epsilon(1e-10));
      CHECK(subjective_variance_coeff(m, c) ==
            doctest::Approx(subjective_variance_coeff(m, 1.0)).epsilon(1e-10));
      CHECK(true_variance_coeff(m, c) ==
            doctest::Approx(true_variance_coeff(m, 1.0)).epsilon(1e-10));
    }
  }
}

TEST_CASE("curvature agrees with a finite difference of the score") {
  const double h = 1e-5;
  for (const BiasModel& m :
       {BiasModel{Exponential{0.7}}, BiasModel{RelativeExponential{0.5}},
        BiasModel{SweetSpot{1.0}}, BiasModel{ConstantVariance{1.0, 2.0}},
        BiasModel{LogGamma{1.0}}}) {
    for (double lambda : {-1.0, -0.3, 0.4}) {
      CAPTURE(variant_name(m));
      CAPTURE(lambda);
      const double fd = (expected_score(m, lambda + h, 1.0).score -
                         expected_score(m, lambda - h, 1.0).score) /
                        (2.0 * h);
      const double cv = expected_score(m, lambda, 1.0).curvature;
      CHECK(cv == doctest::Approx(fd).epsilon(2e-5));
    }
  }
}

TEST_CASE("score and curvature sanity points") {
  // Symmetric constant-variance model is unbiased.
  CHECK(expected_score(ConstantVariance{2.0, 2.0}, 0.0, 1.0).score ==
        doctest::Approx(0.0).epsilon(1e-14));
  // Frozen: score at 0 for beta=1, gamma=2 is -phi(0)/2.
  CHECK(expected_score(ConstantVariance{1.0, 2.0}, 0.0, 1.0).score ==
        doctest::Approx(-0.19947114020071634).epsilon(1e-13));
  CHECK(expected_score(Exponential{0.5}, -0.5, 1.0).score ==
        doctest::Approx(0.0).epsilon(1e-13));
  CHECK_THROWS_AS(expected_score(BetaOdds{3.0, 3.0, 1.0}, 0.0, 1.0),
                  Unsupported);
}

TEST_CASE("influence functions") {
  // Zero at the asymptotic mean, for every model that has one.
  CHECK(influence(Exponential{1.0}, -1.0, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(influence(LogGamma{1.0}, -0.5, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(influence(ConstantVariance{1.0, 2.0},
                  asymptotic_bias(ConstantVariance{1.0, 2.0}, 1.0), 1.0) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // Exponential: interior maximum at x = lambda + sigma/beta = 0.
  double best_x = 0.0, best_v = -1e300;
  for (int i = 0; i <= 4000; ++i) {
    const double x = -4.0 + 8.0 * i / 4000.0;
    const double v = influence(Exponential{1.0}, x, 1.0);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  CHECK(std::abs(best_x - 0.0) <= 8.0 / 4000.0 + 1e-12);

  // Log-gamma: monotone, saturating at sigma/beta from above observations.
  CHECK(influence(LogGamma{1.0}, 4.0, 1.0) ==
        doctest::Approx(0.98889100346175576).epsilon(1e-12));
  CHECK(influence(LogGamma{1.0}, 50.0, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-9));

  // Constant variance: linear on each side of the opinion, with the slopes
  // in the ratio gamma/beta, and monotone overall.
  const BiasModel cv = ConstantVariance{1.0, 2.0};
  const double lam_cv = asymptotic_bias(cv, 1.0);
  const double up = influence(cv, lam_cv + 2.0, 1.0) -
                    influence(cv, lam_cv + 1.0, 1.0);
  const double up2 = influence(cv, lam_cv + 4.0, 1.0) -
                     influence(cv, lam_cv + 3.0, 1.0);
  const double down = influence(cv, lam_cv - 1.0, 1.0) -
                      influence(cv, lam_cv - 2.0, 1.0);
  CHECK(up == doctest::Approx(up2).epsilon(1e-12));
  CHECK(down == doctest::Approx(2.0 * up).epsilon(1e-12));
  // The symmetric model has no kink.
  const BiasModel sym = ConstantVariance{1.5, 1.5};
  CHECK(influence(sym, 1.0, 1.0) - influence(sym, 0.0, 1.0) ==
        doctest::Approx(influence(sym, 0.0, 1.0) - influence(sym, -1.0, 1.0))
            .epsilon(1e-12));

  CHECK_THROWS_AS(influence(SweetSpot{1.0}, 0.0, 1.0), Unsupported);
  CHECK_THROWS_AS(influence(BetaOdds{3.0, 3.0, 1.0}, 0.5, 1.0), Unsupported);
  CHECK_THROWS_AS(influence(RelativeExponential{0.5}, 0.0, 1.0),
                  DivergentModel);

  // beta = 0 reduces to the unbiased linear influence x - lambda.
  CHECK(influence(Exponential{0.0}, 1.7, 1.0) ==
        doctest::Approx(1.7).epsilon(1e-12));
}

TEST_CASE("relative-exponential diagnostics") {
  // Strong bias: the expected score has no root at all on [-20, 0].
  const ScoreScan strong = scan_expected_score(RelativeExponential{1.5}, 1.0,
                                               -20.0, 0.0);
  CHECK(strong.roots.empty());
  CHECK_FALSE(strong.interior_global_max);

  // Mild bias: stationary points exist, but none is a global maximum of the
  // expected log-likelihood -- the likelihood keeps improving toward -inf.
  const ScoreScan mild = scan_expected_score(RelativeExponential{0.5}, 1.0,
                                             -20.0, 0.0);
  CHECK(mild.roots.size() >= 2);
  CHECK_FALSE(mild.interior_global_max);

  // A convergent model's root is an interior global maximum.
  const ScoreScan exp_scan = scan_expected_score(Exponential{0.5}, 1.0,
                                                 -20.0, 0.0);
  REQUIRE(exp_scan.roots.size() == 1);
  CHECK(exp_scan.roots[0].lambda == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(exp_scan.interior_global_max);

  const AsymptoticSummary s = summarize(RelativeExponential{0.5}, 1.0);
  CHECK(s.diverges);
  CHECK(std::isnan(s.lambda));
  CHECK(std::isnan(s.true_var_coeff));

  // beta = 0 degenerates to the unbiased model.
  CHECK(asymptotic_bias(RelativeExponential{0.0}, 1.0) == 0.0);
}

TEST_CASE("sample log-likelihood") {
  const std::vector<double> sample = {-1.3, -0.2, 0.4, 0.9, 2.1};

  // Sweet-spot tends to the Gaussian log-likelihood as beta -> 0.
  const double almost_gauss =
      log_likelihood(SweetSpot{1e-8}, 0.3, sample, 1.0);
  double gauss = 0.0;
  for (double x : sample) gauss -= 0.5 * (x - 0.3) * (x - 0.3);
  CHECK(almost_gauss == doctest::Approx(gauss).epsilon(1e-6));

  // Log-gamma likelihood is maximized where its score vanishes.
  const BiasModel lg = LogGamma{1.0};
  const double mle = oracles::golden_max(
      [&](double l) { return log_likelihood(lg, l, sample, 1.0); }, -5.0, 5.0);
  const double h = 1e-6;
  const double score_at_mle =
      (log_likelihood(lg, mle + h, sample, 1.0) -
       log_likelihood(lg, mle - h, sample, 1.0)) /
      (2.0 * h);
  CHECK(std::abs(score_at_mle) <= 1e-5);
}

TEST_CASE("summarize matches the individual accessors") {
  for (const BiasModel& m : kConvergent) {
    const AsymptoticSummary s = summarize(m, 1.0);
    CAPTURE(variant_name(m));
    CHECK_FALSE(s.diverges);
    CHECK(s.lambda == asymptotic_bias(m, 1.0));
    CHECK(s.subj_var_coeff == subjective_variance_coeff(m, 1.0));
    CHECK(s.true_var_coeff == true_variance_coeff(m, 1.0));
  }
}

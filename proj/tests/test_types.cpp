#include <doctest.h>

#include "confbias/types.hpp"

using namespace confbias;

TEST_CASE("model parameter constraints") {
  CHECK_NOTHROW(validate(BiasModel{Exponential{0.0}}));
  CHECK_NOTHROW(validate(BiasModel{Exponential{-3.0}}));
  CHECK_NOTHROW(validate(BiasModel{BetaOdds{3.0, 3.0, 1.0}}));
  CHECK_NOTHROW(validate(BiasModel{BetaOdds{2.0, 5.0, -1.5}}));  // g > -b
  CHECK_NOTHROW(validate(BiasModel{RelativeExponential{0.5}}));

  // g must leave both beta-function arguments positive.
  CHECK_THROWS_AS(validate(BiasModel{BetaOdds{1.0, 1.0, 1.5}}),
                  ConstraintViolation);
  CHECK_THROWS_AS(validate(BiasModel{BetaOdds{1.0, 1.0, -1.0}}),
                  ConstraintViolation);
  CHECK_THROWS_AS(validate(BiasModel{BetaOdds{0.0, 1.0, 0.0}}),
                  ConstraintViolation);
  CHECK_THROWS_AS(validate(BiasModel{SweetSpot{0.0}}), ConstraintViolation);
  CHECK_THROWS_AS(validate(BiasModel{SweetSpot{-1.0}}), ConstraintViolation);
  CHECK_THROWS_AS(validate(BiasModel{ConstantVariance{0.0, 1.0}}),
                  ConstraintViolation);
  CHECK_THROWS_AS(validate(BiasModel{ConstantVariance{1.0, -2.0}}),
                  ConstraintViolation);
  CHECK_THROWS_AS(validate(BiasModel{LogGamma{0.0}}), ConstraintViolation);

  try {
    validate(BiasModel{BetaOdds{1.0, 1.0, 1.5}});
    FAIL("expected ConstraintViolation");
  } catch (const ConstraintViolation& e) {
    CHECK(e.field() == "g");
  }
}

TEST_CASE("scenario constraints") {
  ScenarioConfig cfg;
  cfg.sigma = 10.0;
  cfg.prior_mean = 120.0;
  cfg.prior_var = 25.0;
  cfg.mu = 140.0;
  cfg.n_obs = 2000;
  CHECK_NOTHROW(validate(cfg));

  ScenarioConfig bad = cfg;
  bad.sigma = 0.0;
  CHECK_THROWS_AS(validate(bad), ConstraintViolation);
  bad = cfg;
  bad.prior_var = -1.0;
  CHECK_THROWS_AS(validate(bad), ConstraintViolation);
  bad = cfg;
  bad.n_obs = 0;
  CHECK_THROWS_AS(validate(bad), ConstraintViolation);
}

TEST_CASE("variant names") {
  CHECK(variant_name(Exponential{}) == "exponential");
  CHECK(variant_name(BetaOdds{}) == "beta-odds");
  CHECK(variant_name(RelativeExponential{}) == "relative-exponential");
  CHECK(variant_name(SweetSpot{}) == "sweet-spot");
  CHECK(variant_name(ConstantVariance{}) == "constant-variance");
  CHECK(variant_name(LogGamma{}) == "log-gamma");
}

TEST_CASE("model JSON round trip preserves 17-digit parameters") {
  const std::vector<BiasModel> models = {
      Exponential{0.1234567890123456},
      BetaOdds{3.0, 3.0, 1.0},
      RelativeExponential{-0.5},
      SweetSpot{2.718281828459045},
      ConstantVariance{0.5, 4.0},
      LogGamma{-1.25},
  };
  for (const BiasModel& m : models) {
    const BiasModel back = model_from_json(to_json(m));
    CHECK(variant_name(back) == variant_name(m));
    CHECK(to_json(back) == to_json(m));
  }
}

TEST_CASE("scenario JSON round trip") {
  ScenarioConfig cfg;
  cfg.mu = 140.0;
  cfg.sigma = 10.0;
  cfg.prior_mean = 120.0;
  cfg.prior_var = 25.0;
  cfg.n_obs = 2000;
  cfg.seed = 123456789012345ULL;
  const BiasModel model = Exponential{0.2};

  const Scenario back = scenario_from_json(to_json(cfg, model));
  CHECK(back.config.mu == cfg.mu);
  CHECK(back.config.sigma == cfg.sigma);
  CHECK(back.config.prior_mean == cfg.prior_mean);
  CHECK(back.config.prior_var == cfg.prior_var);
  CHECK(back.config.n_obs == cfg.n_obs);
  CHECK(back.config.seed == cfg.seed);
  CHECK(variant_name(back.model) == "exponential");
  CHECK(std::get<Exponential>(back.model).beta == 0.2);
}

TEST_CASE("scenario JSON validates on parse") {
  ScenarioConfig bad;
  bad.sigma = 10.0;
  const std::string text = to_json(bad, BiasModel{SweetSpot{1.0}});
  const std::string broken = [&] {
    std::string t = text;
    const auto pos = t.find("\"sigma\":10");
    REQUIRE(pos != std::string::npos);
    return t.replace(pos, 10, "\"sigma\":-1");
  }();
  CHECK_THROWS_AS(scenario_from_json(broken), ConstraintViolation);
}

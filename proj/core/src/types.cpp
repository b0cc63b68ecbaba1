#include "confbias/types.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace confbias {

namespace {

using nlohmann::json;

void require(bool ok, const char* field, const char* reason) {
  if (!ok) throw ConstraintViolation(field, reason);
}

void require_finite(double x, const char* field) {
  require(std::isfinite(x), field, "must be finite");
}

}  // namespace

std::string variant_name(const BiasModel& model) {
  struct Visitor {
    std::string operator()(const Exponential&) const { return "exponential"; }
    std::string operator()(const BetaOdds&) const { return "beta-odds"; }
    std::string operator()(const RelativeExponential&) const {
      return "relative-exponential";
    }
    std::string operator()(const SweetSpot&) const { return "sweet-spot"; }
    std::string operator()(const ConstantVariance&) const {
      return "constant-variance";
    }
    std::string operator()(const LogGamma&) const { return "log-gamma"; }
  };
  return std::visit(Visitor{}, model);
}

void validate(const BiasModel& model) {
  struct Visitor {
    void operator()(const Exponential& m) const {
      require_finite(m.beta, "beta");
    }
    void operator()(const BetaOdds& m) const {
      require_finite(m.a, "a");
      require_finite(m.b, "b");
      require_finite(m.g, "g");
      require(m.a > 0, "a", "a > 0 required");
      require(m.b > 0, "b", "b > 0 required");
      require(m.g < m.a, "g", "g < a required");
      require(m.g > -m.b, "g", "g > -b required");
    }
    void operator()(const RelativeExponential& m) const {
      require_finite(m.beta, "beta");
    }
    void operator()(const SweetSpot& m) const {
      require_finite(m.beta, "beta");
      require(m.beta > 0, "beta", "beta > 0 required");
    }
    void operator()(const ConstantVariance& m) const {
      require_finite(m.beta, "beta");
      require_finite(m.gamma, "gamma");
      require(m.beta > 0, "beta", "beta > 0 required");
      require(m.gamma > 0, "gamma", "gamma > 0 required");
    }
    void operator()(const LogGamma& m) const {
      require_finite(m.beta, "beta");
      require(m.beta != 0, "beta", "beta != 0 required");
    }
  };
  std::visit(Visitor{}, model);
}

void validate(const ScenarioConfig& config) {
  require_finite(config.mu, "mu");
  require_finite(config.sigma, "sigma");
  require_finite(config.prior_mean, "prior_mean");
  require_finite(config.prior_var, "prior_var");
  require(config.sigma > 0, "sigma", "sigma > 0 required");
  require(config.prior_var > 0, "prior_var", "prior_var > 0 required");
  require(config.n_obs >= 1, "n_obs", "n_obs >= 1 required");
}

namespace {

json model_to_json_obj(const BiasModel& model) {
  json j;
  j["variant"] = variant_name(model);
  struct Visitor {
    json& j;
    void operator()(const Exponential& m) const { j["beta"] = m.beta; }
    void operator()(const BetaOdds& m) const {
      j["a"] = m.a;
      j["b"] = m.b;
      j["g"] = m.g;
    }
    void operator()(const RelativeExponential& m) const { j["beta"] = m.beta; }
    void operator()(const SweetSpot& m) const { j["beta"] = m.beta; }
    void operator()(const ConstantVariance& m) const {
      j["beta"] = m.beta;
      j["gamma"] = m.gamma;
    }
    void operator()(const LogGamma& m) const { j["beta"] = m.beta; }
  };
  std::visit(Visitor{j}, model);
  return j;
}

BiasModel model_from_json_obj(const json& j) {
  const std::string variant = j.at("variant").get<std::string>();
  BiasModel model;
  if (variant == "exponential") {
    model = Exponential{j.at("beta").get<double>()};
  } else if (variant == "beta-odds") {
    model = BetaOdds{j.at("a").get<double>(), j.at("b").get<double>(),
                     j.at("g").get<double>()};
  } else if (variant == "relative-exponential") {
    model = RelativeExponential{j.at("beta").get<double>()};
  } else if (variant == "sweet-spot") {
    model = SweetSpot{j.at("beta").get<double>()};
  } else if (variant == "constant-variance") {
    model = ConstantVariance{j.at("beta").get<double>(),
                             j.at("gamma").get<double>()};
  } else if (variant == "log-gamma") {
    model = LogGamma{j.at("beta").get<double>()};
  } else {
    throw ConstraintViolation("variant", "unknown model variant '" + variant + "'");
  }
  validate(model);
  return model;
}

}  // namespace

std::string to_json(const BiasModel& model) {
  return model_to_json_obj(model).dump();
}

std::string to_json(const ScenarioConfig& config, const BiasModel& model) {
  json j;
  j["model"] = model_to_json_obj(model);
  j["mu"] = config.mu;
  j["sigma"] = config.sigma;
  j["prior_mean"] = config.prior_mean;
  j["prior_var"] = config.prior_var;
  j["n_obs"] = config.n_obs;
  j["seed"] = config.seed;
  return j.dump();
}

BiasModel model_from_json(const std::string& text) {
  return model_from_json_obj(json::parse(text));
}

Scenario scenario_from_json(const std::string& text) {
  const json j = json::parse(text);
  Scenario s;
  s.model = model_from_json_obj(j.at("model"));
  s.config.mu = j.at("mu").get<double>();
  s.config.sigma = j.at("sigma").get<double>();
  s.config.prior_mean = j.at("prior_mean").get<double>();
  s.config.prior_var = j.at("prior_var").get<double>();
  s.config.n_obs = j.at("n_obs").get<std::uint64_t>();
  s.config.seed = j.at("seed").get<std::uint64_t>();
  validate(s.config);
  return s;
}

}  // namespace confbias

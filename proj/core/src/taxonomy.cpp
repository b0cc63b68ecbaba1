#include "confbias/taxonomy.hpp"

#include <algorithm>

#include <json.hpp>

#include "confbias/models.hpp"

namespace confbias {

namespace {

int severity_rank_of(const BiasModel& model) {
  struct Visitor {
    int operator()(const SweetSpot&) const { return 0; }
    int operator()(const ConstantVariance&) const { return 0; }
    int operator()(const LogGamma&) const { return 1; }
    int operator()(const BetaOdds&) const { return 2; }
    int operator()(const Exponential&) const { return 2; }
    int operator()(const RelativeExponential&) const { return 3; }
  };
  return std::visit(Visitor{}, model);
}

}  // namespace

ClassificationReport classify(const BiasModel& model, double sigma) {
  validate(model);
  ClassificationReport r;
  try {
    (void)asymptotic_bias(model, sigma);
    r.has_asymptotic_limit = true;
  } catch (const DivergentModel&) {
    r.has_asymptotic_limit = false;
  }
  struct Visitor {
    ClassificationReport& r;
    void operator()(const Exponential& m) const {
      r.prizes_confirming_side = m.beta != 0;
      r.has_subjective_distribution = false;
      r.influence_monotone = m.beta == 0;
    }
    void operator()(const BetaOdds& m) const {
      r.prizes_confirming_side = m.g != 0;
      r.has_subjective_distribution = false;
      r.influence_monotone = m.g == 0;
    }
    void operator()(const RelativeExponential& m) const {
      r.prizes_confirming_side = m.beta != 0;
      r.has_subjective_distribution = false;
      r.influence_monotone = false;
    }
    void operator()(const SweetSpot&) const {
      r.prizes_confirming_side = false;  // symmetric discounting
      r.has_subjective_distribution = true;
      r.influence_monotone = false;  // redescending score
    }
    void operator()(const ConstantVariance& m) const {
      r.prizes_confirming_side = m.beta < 1;
      r.has_subjective_distribution = true;
      r.influence_monotone = true;  // influence is a straight line
    }
    void operator()(const LogGamma&) const {
      r.prizes_confirming_side = true;
      r.has_subjective_distribution = true;
      r.influence_monotone = true;  // saturating but strictly increasing
    }
  };
  std::visit(Visitor{r}, model);
  r.severity_rank = severity_rank_of(model);
  return r;
}

std::vector<BiasModel> severity_order(std::vector<BiasModel> models) {
  std::stable_sort(models.begin(), models.end(),
                   [](const BiasModel& a, const BiasModel& b) {
                     const int ra = severity_rank_of(a);
                     const int rb = severity_rank_of(b);
                     if (ra != rb) return ra < rb;
                     return variant_name(a) < variant_name(b);
                   });
  return models;
}

std::string to_json(const ClassificationReport& report, const BiasModel& model) {
  nlohmann::json j;
  j["model"] = variant_name(model);
  j["has_asymptotic_limit"] = report.has_asymptotic_limit;
  j["prizes_confirming_side"] = report.prizes_confirming_side;
  j["has_subjective_distribution"] = report.has_subjective_distribution;
  j["influence_monotone"] = report.influence_monotone;
  j["severity_rank"] = report.severity_rank;
  return j.dump();
}

}  // namespace confbias

#pragma once

#include <string>
#include <vector>

#include "confbias/types.hpp"

namespace confbias {

/// Four-property classification of a bias model plus a severity rank.
struct ClassificationReport {
  bool has_asymptotic_limit = true;
  bool prizes_confirming_side = false;  // perceived variance below the true one
                                        // on the agreeing side
  bool has_subjective_distribution = false;
  bool influence_monotone = true;
  int severity_rank = 0;
};

ClassificationReport classify(const BiasModel& model, double sigma);

/// Stable sort by increasing severity of bias:
/// constant-variance (0) < log-gamma (1) < exponential (2) < models without an
/// asymptotic limit (3).  Sweet-spot ties with rank 0 and beta-odds with
/// rank 2; ties break on variant name.
std::vector<BiasModel> severity_order(std::vector<BiasModel> models);

std::string to_json(const ClassificationReport& report, const BiasModel& model);

}  // namespace confbias

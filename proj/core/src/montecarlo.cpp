#include "confbias/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <json.hpp>

#include "confbias/models.hpp"
#include "confbias/rng.hpp"
#include "confbias/special.hpp"

namespace confbias {

void validate(const McPlan& plan) {
  validate(plan.model);
  if (plan.replications < 2)
    throw ConstraintViolation("replications", "R >= 2 required");
  if (plan.n < 1) throw ConstraintViolation("n", "n >= 1 required");
  if (!(plan.sigma > 0)) throw ConstraintViolation("sigma", "sigma > 0 required");
}

std::string to_json(const McResult& r) {
  nlohmann::json j;
  j["mean"] = r.mean;
  j["var"] = r.var;
  j["se"] = r.se;
  j["skewness"] = r.skewness;
  j["R"] = r.replications;
  j["n"] = r.n;
  j["seed"] = r.seed;
  return j.dump();
}

std::vector<double> draw_sample(const BiasModel& model, double sigma,
                                std::uint64_t n, std::uint64_t seed,
                                std::uint64_t stream) {
  SplitMix64 rng = substream(seed, stream);
  std::vector<double> sample(n);
  if (const auto* bo = std::get_if<BetaOdds>(&model)) {
    for (double& x : sample) x = rng.beta(bo->a, bo->b);
  } else {
    for (double& x : sample) x = sigma * rng.normal();
  }
  return sample;
}

double weighted_mean_estimate(std::span<const double> sample,
                              const BiasModel& model, double sigma) {
  if (sample.empty()) throw DomainError("weighted_mean_estimate: empty sample");
  if (const auto* e = std::get_if<Exponential>(&model)) {
    // Shift the exponents so the weights cannot overflow.
    double max_log = -std::numeric_limits<double>::infinity();
    for (double x : sample) max_log = std::max(max_log, -e->beta * x / sigma);
    double num = 0.0, den = 0.0;
    for (double x : sample) {
      const double w = std::exp(-e->beta * x / sigma - max_log);
      num += x * w;
      den += w;
    }
    return num / den;
  }
  if (const auto* bo = std::get_if<BetaOdds>(&model)) {
    double max_log = -std::numeric_limits<double>::infinity();
    for (double p : sample) {
      if (!(p > 0.0 && p < 1.0))
        throw DomainError("weighted_mean_estimate: beta-odds sample values must lie in (0,1)");
      max_log = std::max(max_log, bo->g * (std::log1p(-p) - std::log(p)));
    }
    double num = 0.0, den = 0.0;
    for (double p : sample) {
      const double w =
          std::exp(bo->g * (std::log1p(-p) - std::log(p)) - max_log);
      num += p * w;
      den += w;
    }
    return num / den;
  }
  throw Unsupported("weighted_mean_estimate: model has no weighted-mean form");
}

namespace {

// d(log L)/d(lambda) on a sample; closed per-model forms.
double sample_score(const BiasModel& model, double lambda,
                    std::span<const double> sample, double sigma) {
  struct Visitor {
    double lambda, sigma;
    std::span<const double> sample;
    double operator()(const Exponential& m) const {
      double sum = 0.0;
      for (double x : sample)
        sum += (x - lambda) * std::exp(-m.beta * x / sigma);
      return sum / (sigma * sigma);
    }
    double operator()(const RelativeExponential& m) const {
      double sum = 0.0;
      for (double x : sample) {
        const double d = x - lambda;
        sum += std::exp(-m.beta * d / sigma) * d * (2.0 - m.beta * d / sigma);
      }
      return sum / (2.0 * sigma * sigma);
    }
    double operator()(const SweetSpot& m) const {
      double sum = 0.0;
      for (double x : sample) {
        const double u = (x - lambda) / sigma;
        sum += u / (1.0 + m.beta * u * u);
      }
      return (1.0 + m.beta) * sum / sigma;
    }
    double operator()(const ConstantVariance& m) const {
      double sum = 0.0;
      for (double x : sample)
        sum += (x - lambda) / (x > lambda ? m.gamma : m.beta);
      return sum / (sigma * sigma);
    }
    double operator()(const LogGamma& m) const {
      double sum = 0.0;
      for (double x : sample)
        sum += -std::expm1(-m.beta * (x - lambda) / sigma);
      return sum / (m.beta * sigma);
    }
    double operator()(const BetaOdds&) const {
      throw Unsupported("sample_score: beta-odds model has no location score");
    }
  };
  return std::visit(Visitor{lambda, sigma, sample}, model);
}

double bisect_sample_score(const BiasModel& model,
                           std::span<const double> sample, double sigma,
                           double lo, double hi, double flo) {
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = sample_score(model, mid, sample, sigma);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Scan-based maximizer used where the score may have several roots.
double mle_by_scan(const BiasModel& model, std::span<const double> sample,
                   double sigma, double lo, double hi, int points) {
  double prev_x = lo;
  double prev_f = sample_score(model, prev_x, sample, sigma);
  double best_lambda = 0.0;
  double best_ll = -std::numeric_limits<double>::infinity();
  bool found = false;
  for (int i = 1; i <= points; ++i) {
    const double x = lo + (hi - lo) * i / points;
    const double f = sample_score(model, x, sample, sigma);
    if (prev_f == 0.0 || (prev_f > 0) != (f > 0)) {
      const double root =
          bisect_sample_score(model, sample, sigma, prev_x, x, prev_f);
      const double ll = log_likelihood(model, root, sample, sigma);
      if (ll > best_ll) {
        best_ll = ll;
        best_lambda = root;
        found = true;
      }
    }
    prev_x = x;
    prev_f = f;
  }
  const double edge = std::max(log_likelihood(model, lo, sample, sigma),
                               log_likelihood(model, hi, sample, sigma));
  if (!found || edge > best_ll)
    throw NoInteriorMaximum("mle_estimate: boundary dominates every interior root");
  return best_lambda;
}

}  // namespace

double mle_estimate(std::span<const double> sample, const BiasModel& model,
                    double sigma) {
  if (sample.empty()) throw DomainError("mle_estimate: empty sample");
  if (!(sigma > 0)) throw DomainError("mle_estimate: sigma must be > 0");
  validate(model);
  const auto [min_it, max_it] = std::minmax_element(sample.begin(), sample.end());
  const double lo = *min_it - 10.0 * sigma;
  const double hi = *max_it + 10.0 * sigma;

  if (std::holds_alternative<Exponential>(model))
    return weighted_mean_estimate(sample, model, sigma);
  if (const auto* lg = std::get_if<LogGamma>(&model)) {
    // Root of the sample score in closed form via log-sum-exp.
    double max_log = -std::numeric_limits<double>::infinity();
    for (double x : sample) max_log = std::max(max_log, -lg->beta * x / sigma);
    double sum = 0.0;
    for (double x : sample) sum += std::exp(-lg->beta * x / sigma - max_log);
    // Score vanishes where exp(beta*lambda/sigma) * sum exp(-beta*x/sigma)
    // equals n.
    const double lse = max_log + std::log(sum);
    return (sigma / lg->beta) *
           (std::log(static_cast<double>(sample.size())) - lse);
  }
  if (std::holds_alternative<ConstantVariance>(model)) {
    // Score is continuous and strictly decreasing: plain bisection.
    const double flo = sample_score(model, lo, sample, sigma);
    return bisect_sample_score(model, sample, sigma, lo, hi, flo);
  }
  if (const auto* ss = std::get_if<SweetSpot>(&model)) {
    // Redescending score: a coarse root scan can alias past the central
    // crossing and land on a spurious tail root.  The t-location reweighting
    // iteration ascends the likelihood monotonically from the median, so it
    // settles on the central maximum; a final bisection sharpens the root.
    std::vector<double> sorted(sample.begin(), sample.end());
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                     sorted.end());
    double lam = sorted[sorted.size() / 2];
    for (int it = 0; it < 200; ++it) {
      double sw = 0.0, swx = 0.0;
      for (double x : sample) {
        const double u = (x - lam) / sigma;
        const double w = 1.0 / (1.0 + ss->beta * u * u);
        sw += w;
        swx += w * x;
      }
      const double next = swx / sw;
      const double step = next - lam;
      lam = next;
      if (std::abs(step) < 1e-9 * sigma) break;
    }
    double delta = 1e-3 * sigma;
    for (; delta <= 2.0 * sigma; delta *= 2.0) {
      const double fl = sample_score(model, lam - delta, sample, sigma);
      const double fr = sample_score(model, lam + delta, sample, sigma);
      if (fl > 0.0 && fr < 0.0)
        return bisect_sample_score(model, sample, sigma, lam - delta,
                                   lam + delta, fl);
    }
    return lam;  // score already flat to rounding at the fixed point
  }
  return mle_by_scan(model, sample, sigma, lo, hi, 256);
}

double point_estimate(std::span<const double> sample, const BiasModel& model,
                      double sigma) {
  if (std::holds_alternative<Exponential>(model) ||
      std::holds_alternative<BetaOdds>(model))
    return weighted_mean_estimate(sample, model, sigma);
  return mle_estimate(sample, model, sigma);
}

McResult run_mc(const McPlan& plan, int threads) {
  validate(plan);
  if (std::holds_alternative<RelativeExponential>(plan.model) &&
      std::get<RelativeExponential>(plan.model).beta != 0)
    throw DivergentModel("run_mc: relative-exponential has no stable estimator");
  const std::uint64_t R = plan.replications;
  std::vector<double> estimates(R);
  auto worker = [&](std::uint64_t first, std::uint64_t last) {
    for (std::uint64_t i = first; i < last; ++i) {
      const std::vector<double> sample =
          draw_sample(plan.model, plan.sigma, plan.n, plan.seed, i);
      estimates[i] = point_estimate(sample, plan.model, plan.sigma);
    }
  };
  if (threads <= 1) {
    worker(0, R);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (R + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::uint64_t first = std::min<std::uint64_t>(t * chunk, R);
      const std::uint64_t last = std::min<std::uint64_t>(first + chunk, R);
      if (first < last) pool.emplace_back(worker, first, last);
    }
    for (auto& th : pool) th.join();
  }

  // Aggregates are always reduced in replication order.
  McResult r;
  r.replications = R;
  r.n = plan.n;
  r.seed = plan.seed;
  r.replicates = std::move(estimates);
  double mean = 0.0;
  for (double v : r.replicates) mean += v;
  mean /= static_cast<double>(R);
  double m2 = 0.0, m3 = 0.0;
  for (double v : r.replicates) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  r.mean = mean;
  r.var = m2 / static_cast<double>(R - 1);
  r.se = std::sqrt(r.var / static_cast<double>(R));
  const double m2n = m2 / static_cast<double>(R);
  r.skewness = m2n > 0 ? (m3 / static_cast<double>(R)) / std::pow(m2n, 1.5) : 0.0;
  return r;
}

double variance_se(std::span<const double> replicates) {
  const std::size_t R = replicates.size();
  if (R < 4) throw DomainError("variance_se: need at least 4 replicates");
  double mean = 0.0;
  for (double v : replicates) mean += v;
  mean /= static_cast<double>(R);
  double m2 = 0.0, m4 = 0.0;
  for (double v : replicates) {
    const double d = v - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= static_cast<double>(R);
  m4 /= static_cast<double>(R);
  const double var_of_var =
      (m4 - m2 * m2 * (static_cast<double>(R) - 3.0) /
                (static_cast<double>(R) - 1.0)) /
      static_cast<double>(R);
  return std::sqrt(std::max(var_of_var, 0.0));
}

InfluenceEstimate influence_empirical(const BiasModel& model, double x,
                                      double sigma, std::uint64_t n,
                                      std::uint64_t replications,
                                      std::uint64_t seed) {
  if (replications < 2)
    throw ConstraintViolation("replications", "R >= 2 required");
  std::vector<double> deltas(replications);
  for (std::uint64_t i = 0; i < replications; ++i) {
    std::vector<double> sample = draw_sample(model, sigma, n, seed, i);
    const double base = point_estimate(sample, model, sigma);
    sample.push_back(x);
    const double extended = point_estimate(sample, model, sigma);
    deltas[i] = static_cast<double>(n) * (extended - base);
  }
  double mean = 0.0;
  for (double d : deltas) mean += d;
  mean /= static_cast<double>(replications);
  double m2 = 0.0;
  for (double d : deltas) m2 += (d - mean) * (d - mean);
  const double var = m2 / static_cast<double>(replications - 1);
  return {mean, std::sqrt(var / static_cast<double>(replications))};
}

NormalityResult normality_check(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 100) throw DomainError("normality_check: need at least 100 values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double mean = 0.0;
  for (double v : sorted) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : sorted) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = norm_cdf((sorted[i] - mean) / sd);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n) - f;
    const double lo = f - static_cast<double>(i) / static_cast<double>(n);
    d = std::max({d, hi, lo});
  }
  NormalityResult r;
  r.statistic = d;
  // Dallal-Wilkinson large-sample 1% point of the Lilliefors statistic.
  r.critical = 1.035 / std::sqrt(static_cast<double>(n));
  r.pass = d < r.critical;
  return r;
}

}  // namespace confbias

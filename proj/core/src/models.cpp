#include "confbias/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "confbias/special.hpp"

namespace confbias {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_sigma(double sigma) {
  if (!(sigma > 0)) throw DomainError("sigma must be > 0");
}

// E{exp(-b*(X - lambda)/sigma)} for X ~ N[0, sigma^2].
double tilt_mean(double b, double lambda, double sigma) {
  return std::exp(b * lambda / sigma + 0.5 * b * b);
}

}  // namespace

ScoreValue expected_score(const BiasModel& model, double lambda, double sigma) {
  check_sigma(sigma);
  validate(model);
  const double s2 = sigma * sigma;
  struct Visitor {
    double lambda, sigma, s2;
    ScoreValue operator()(const Exponential& m) const {
      const double c0 = std::exp(0.5 * m.beta * m.beta);
      return {c0 * (-m.beta * sigma - lambda) / s2, -c0 / s2};
    }
    ScoreValue operator()(const RelativeExponential& m) const {
      const double b = m.beta;
      const double u = lambda + b * sigma;
      const double c0 = tilt_mean(b, lambda, sigma);
      const double g = 2.0 * u + (b / sigma) * (s2 + u * u);
      const double gp = 2.0 + 2.0 * b * u / sigma;
      return {-c0 * g / (2.0 * s2),
              -c0 * ((b / sigma) * g + gp) / (2.0 * s2)};
    }
    ScoreValue operator()(const SweetSpot& m) const {
      const double b = m.beta;
      // Tight tolerances: Newton iterations sit right on top of this noise
      // floor at the symmetric root.
      const QuadratureSpec tight{1e-13, 1e-13, 12.0};
      auto u_of = [&](double x) { return (x - lambda) / sigma; };
      const double score =
          (1.0 + b) / sigma *
          expect_normal(
              [&](double x) {
                const double u = u_of(x);
                return u / (1.0 + b * u * u);
              },
              sigma, tight);
      const double curv =
          -(1.0 + b) / s2 *
          expect_normal(
              [&](double x) {
                const double u = u_of(x);
                const double d = 1.0 + b * u * u;
                return (1.0 - b * u * u) / (d * d);
              },
              sigma, tight);
      return {score, curv};
    }
    ScoreValue operator()(const ConstantVariance& m) const {
      const double t = lambda / sigma;
      const double score =
          (1.0 / m.gamma - 1.0 / m.beta) * norm_pdf(t) / sigma -
          (lambda / s2) * (norm_cdf(-t) / m.gamma + norm_cdf(t) / m.beta);
      const double curv =
          -(norm_cdf(t) / m.beta + norm_cdf(-t) / m.gamma) / s2;
      return {score, curv};
    }
    ScoreValue operator()(const LogGamma& m) const {
      const double c0 = tilt_mean(m.beta, lambda, sigma);
      return {(1.0 - c0) / (m.beta * sigma), -c0 / s2};
    }
    ScoreValue operator()(const BetaOdds&) const {
      throw Unsupported("expected_score: beta-odds model has no location score");
    }
  };
  return std::visit(Visitor{lambda, sigma, s2}, model);
}

double expected_loglik(const BiasModel& model, double lambda, double sigma) {
  check_sigma(sigma);
  if (std::holds_alternative<BetaOdds>(model))
    throw Unsupported("expected_loglik: beta-odds model has no location likelihood");
  return expect_normal(
      [&](double x) {
        const double sample[1] = {x};
        return log_likelihood(model, lambda, sample, sigma);
      },
      sigma);
}

double asymptotic_bias(const BiasModel& model, double sigma) {
  check_sigma(sigma);
  validate(model);
  struct Visitor {
    const BiasModel& model;
    double sigma;
    double operator()(const Exponential& m) const { return -m.beta * sigma; }
    double operator()(const BetaOdds& m) const { return -m.g / (m.a + m.b); }
    double operator()(const RelativeExponential& m) const {
      if (m.beta == 0) return 0.0;
      throw DivergentModel("relative-exponential bias has no finite limit");
    }
    double operator()(const SweetSpot&) const { return 0.0; }
    double operator()(const ConstantVariance& m) const {
      if (m.beta == m.gamma) return 0.0;
      return newton_solve(model, sigma).lambda;
    }
    double operator()(const LogGamma& m) const { return -0.5 * m.beta * sigma; }
  };
  return std::visit(Visitor{model, sigma}, model);
}

double subjective_variance_coeff(const BiasModel& model, double sigma) {
  check_sigma(sigma);
  validate(model);
  struct Visitor {
    const BiasModel& model;
    double sigma;
    double operator()(const Exponential& m) const {
      return std::exp(-0.5 * m.beta * m.beta);
    }
    double operator()(const BetaOdds& m) const {
      // Implemented as printed; the direction of the B-ratio is flagged in
      // the project notes as ambiguous in the source derivation.
      const double base =
          m.a * m.b / ((m.a + m.b) * (m.a + m.b) * (m.a + m.b + 1.0));
      return base * std::exp(log_beta_fn(m.a - m.g, m.b + m.g) -
                             log_beta_fn(m.a, m.b));
    }
    double operator()(const RelativeExponential& m) const {
      if (m.beta == 0) return 1.0;
      throw DivergentModel("relative-exponential has no asymptotic variance");
    }
    double operator()(const SweetSpot& m) const {
      const double i1 = I1(m.beta);
      const double i2 = I2(m.beta);
      return 1.0 / ((1.0 + m.beta) * (2.0 * i2 - i1));
    }
    double operator()(const ConstantVariance& m) const {
      const double t = asymptotic_bias(model, sigma) / sigma;
      return 1.0 / (norm_cdf(t) / m.beta + norm_cdf(-t) / m.gamma);
    }
    double operator()(const LogGamma&) const { return 1.0; }
  };
  return std::visit(Visitor{model, sigma}, model);
}

double true_variance_coeff(const BiasModel& model, double sigma) {
  check_sigma(sigma);
  validate(model);
  struct Visitor {
    const BiasModel& model;
    double sigma;
    double operator()(const Exponential& m) const {
      const double b2 = m.beta * m.beta;
      return (1.0 + b2) * std::exp(b2);
    }
    double operator()(const BetaOdds& m) const {
      // Sandwich variance of the weighted mean with weights ((1-p)/p)^g:
      // moments E{p^j w^k} = B(a+j-k*g, b+k*g) / B(a, b).
      if (!(m.a - 2.0 * m.g > 0) || !(m.b + 2.0 * m.g > 0))
        throw Unsupported(
            "beta-odds true variance needs a > 2g and b > -2g for the "
            "squared-weight moments to exist");
      const double lb = log_beta_fn(m.a, m.b);
      auto mom = [&](double j, double k) {
        return std::exp(log_beta_fn(m.a + j - k * m.g, m.b + k * m.g) - lb);
      };
      const double ew = mom(0, 1);
      const double mean = mom(1, 1) / ew;
      const double num =
          mom(2, 2) - 2.0 * mean * mom(1, 2) + mean * mean * mom(0, 2);
      return num / (ew * ew);
    }
    double operator()(const RelativeExponential& m) const {
      if (m.beta == 0) return 1.0;
      throw DivergentModel("relative-exponential has no asymptotic variance");
    }
    double operator()(const SweetSpot& m) const {
      const double i1 = I1(m.beta);
      const double i2 = I2(m.beta);
      const double d = 2.0 * i2 - i1;
      return (i1 - i2) / (m.beta * d * d);
    }
    double operator()(const ConstantVariance& m) const {
      const double t = asymptotic_bias(model, sigma) / sigma;
      const double pb = norm_cdf(t);
      const double pg = norm_cdf(-t);
      const double denom = pb / m.beta + pg / m.gamma;
      const double num = pb / (m.beta * m.beta) + pg / (m.gamma * m.gamma) -
                         t * t / (m.beta * m.gamma);
      return num / (denom * denom);
    }
    double operator()(const LogGamma& m) const {
      const double b2 = m.beta * m.beta;
      return std::expm1(b2) / b2;
    }
  };
  return std::visit(Visitor{model, sigma}, model);
}

double influence(const BiasModel& model, double x, double sigma) {
  check_sigma(sigma);
  validate(model);
  struct Visitor {
    const BiasModel& model;
    double x, sigma;
    double operator()(const Exponential& m) const {
      const double lambda = -m.beta * sigma;
      return std::exp(-m.beta * (x / sigma + 0.5 * m.beta)) * (x - lambda);
    }
    double operator()(const LogGamma& m) const {
      const double lambda = -0.5 * m.beta * sigma;
      return (sigma / m.beta) *
             (-std::expm1(-m.beta * (x - lambda) / sigma));
    }
    double operator()(const ConstantVariance& m) const {
      // Piecewise linear: the estimating function weights an observation by
      // 1/gamma above the opinion and 1/beta below it, so the two branches
      // have slopes in the ratio gamma/beta (kinked at lambda unless
      // beta == gamma).
      const double lambda = asymptotic_bias(model, sigma);
      const double t = lambda / sigma;
      const double side = x > lambda ? m.gamma : m.beta;
      return (x - lambda) /
             (side * (norm_cdf(t) / m.beta + norm_cdf(-t) / m.gamma));
    }
    double operator()(const RelativeExponential& m) const {
      if (m.beta == 0) return (*this)(ConstantVariance{1.0, 1.0});
      throw DivergentModel("relative-exponential has no influence function");
    }
    double operator()(const SweetSpot&) const {
      throw Unsupported("no influence function for the sweet-spot model");
    }
    double operator()(const BetaOdds&) const {
      throw Unsupported("no influence function for the beta model");
    }
  };
  return std::visit(Visitor{model, x, sigma}, model);
}

namespace {

// Refines a bracketed score root by bisection.
double bisect_score(const BiasModel& model, double sigma, double lo, double hi,
                    double flo) {
  for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = expected_score(model, mid, sigma).score;
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

// Accept a stationary point only if it is a local maximum whose expected
// log-likelihood dominates the edges of the search box; the divergent class
// fails this because E(l) climbs back toward 0 far below any root.
bool is_global_max(const BiasModel& model, double sigma, double lambda) {
  if (expected_score(model, lambda, sigma).curvature >= 0) return false;
  const double at_root = expected_loglik(model, lambda, sigma);
  return at_root >= expected_loglik(model, -20.0 * sigma, sigma) &&
         at_root >= expected_loglik(model, 20.0 * sigma, sigma);
}

}  // namespace

NewtonResult newton_solve(const BiasModel& model, double sigma) {
  check_sigma(sigma);
  validate(model);
  const double bound = 20.0 * sigma;
  const double tol = 1e-12 / (sigma * sigma);
  double lambda = 0.0;
  for (int iter = 0; iter <= 50; ++iter) {
    const ScoreValue sv = expected_score(model, lambda, sigma);
    if (std::abs(sv.score) < tol) {
      if (!is_global_max(model, sigma, lambda))
        throw DivergentModel("newton_solve: no stable interior maximum");
      return {lambda, iter};
    }
    double next = lambda - sv.score / sv.curvature;
    if (!std::isfinite(next) || std::abs(next) > bound) {
      // Fall back to a bracket scan over the admissible range.
      const int kScan = 400;
      double prev_x = -bound;
      double prev_f = expected_score(model, prev_x, sigma).score;
      for (int i = 1; i <= kScan; ++i) {
        const double x = -bound + 2.0 * bound * i / kScan;
        const double f = expected_score(model, x, sigma).score;
        if (prev_f == 0.0 || (prev_f > 0) != (f > 0)) {
          const double root = bisect_score(model, sigma, prev_x, x, prev_f);
          if (is_global_max(model, sigma, root)) return {root, iter};
        }
        prev_x = x;
        prev_f = f;
      }
      throw DivergentModel("newton_solve: iterates diverge and no stable root exists");
    }
    lambda = next;
  }
  throw NoConvergence("newton_solve: no convergence in 50 iterations");
}

double log_likelihood(const BiasModel& model, double lambda,
                      std::span<const double> sample, double sigma) {
  check_sigma(sigma);
  if (sample.empty()) throw DomainError("log_likelihood: empty sample");
  struct Visitor {
    double lambda, sigma;
    std::span<const double> sample;
    double operator()(const Exponential& m) const {
      double sum = 0.0;
      for (double x : sample) {
        const double d = x - lambda;
        sum += d * d * std::exp(-m.beta * x / sigma);
      }
      return -sum / (2.0 * sigma * sigma);
    }
    double operator()(const RelativeExponential& m) const {
      double sum = 0.0;
      for (double x : sample) {
        const double d = x - lambda;
        sum += d * d * std::exp(-m.beta * d / sigma);
      }
      return -sum / (2.0 * sigma * sigma);
    }
    double operator()(const SweetSpot& m) const {
      double sum = 0.0;
      for (double x : sample) {
        const double u = (x - lambda) / sigma;
        sum += std::log1p(m.beta * u * u);
      }
      return -(1.0 + m.beta) * sum / (2.0 * m.beta);
    }
    double operator()(const ConstantVariance& m) const {
      double sum = 0.0;
      for (double x : sample) {
        const double d = x - lambda;
        sum += d * d / (x > lambda ? m.gamma : m.beta);
      }
      return -sum / (2.0 * sigma * sigma);
    }
    double operator()(const LogGamma& m) const {
      // Normalized by 1/beta^2 so the beta -> 0 limit is Gaussian.
      double sum = 0.0;
      for (double x : sample) {
        const double u = m.beta * (x - lambda) / sigma;
        sum += -std::expm1(-u) - u;
      }
      return sum / (m.beta * m.beta);
    }
    double operator()(const BetaOdds&) const {
      throw Unsupported("log_likelihood: beta-odds model has no location likelihood");
    }
  };
  return std::visit(Visitor{lambda, sigma, sample}, model);
}

ScoreScan scan_expected_score(const BiasModel& model, double sigma, double lo,
                              double hi, int points) {
  check_sigma(sigma);
  if (!(hi > lo) || points < 2) throw DomainError("scan_expected_score: bad grid");
  ScoreScan out;
  double prev_x = lo;
  double prev_f = expected_score(model, prev_x, sigma).score;
  double best_ll = std::max(expected_loglik(model, lo, sigma),
                            expected_loglik(model, hi, sigma));
  for (int i = 1; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    const double f = expected_score(model, x, sigma).score;
    // A zero landing exactly on a grid point is taken as-is (bisection has
    // nothing to refine there and would drift to a panel edge); zeros at the
    // right edge are picked up as the next panel's left edge.
    if (prev_f == 0.0 || (f != 0.0 && (prev_f > 0) != (f > 0))) {
      ScoreRoot root;
      root.lambda = prev_f == 0.0
                        ? prev_x
                        : bisect_score(model, sigma, prev_x, x, prev_f);
      root.curvature = expected_score(model, root.lambda, sigma).curvature;
      root.loglik = expected_loglik(model, root.lambda, sigma);
      out.roots.push_back(root);
    }
    prev_x = x;
    prev_f = f;
  }
  for (const ScoreRoot& r : out.roots) {
    if (r.curvature < 0 && r.loglik >= best_ll) out.interior_global_max = true;
  }
  return out;
}

AsymptoticSummary summarize(const BiasModel& model, double sigma) {
  AsymptoticSummary s;
  try {
    s.lambda = asymptotic_bias(model, sigma);
  } catch (const DivergentModel&) {
    s.lambda = kNaN;
    s.subj_var_coeff = kNaN;
    s.true_var_coeff = kNaN;
    s.diverges = true;
    return s;
  }
  s.subj_var_coeff = subjective_variance_coeff(model, sigma);
  try {
    s.true_var_coeff = true_variance_coeff(model, sigma);
  } catch (const Unsupported&) {
    s.true_var_coeff = kNaN;
  }
  return s;
}

}  // namespace confbias

// confbias: command-line front end for the confirmation-bias model library.
//
// Subcommands: asymptotics | simulate | mc-verify | influence | figure {1|2|3}
//            | classify | primacy | polarize
// All stochastic subcommands require an explicit --seed and are deterministic
// given it.  Exit codes: 0 success / all checks pass, 1 verification failure,
// 2 usage or validation error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "confbias/csv.hpp"
#include "confbias/models.hpp"
#include "confbias/montecarlo.hpp"
#include "confbias/rng.hpp"
#include "confbias/sequential.hpp"
#include "confbias/special.hpp"
#include "confbias/taxonomy.hpp"
#include "confbias/types.hpp"

namespace {

using namespace confbias;

struct ModelFlags {
  std::string variant = "exponential";
  double beta = 0.0;
  double gamma = 1.0;
  double a = 1.0;
  double b = 1.0;
  double g = 0.0;

  BiasModel build() const {
    BiasModel m;
    if (variant == "exponential") m = Exponential{beta};
    else if (variant == "beta-odds") m = BetaOdds{a, b, g};
    else if (variant == "relative-exponential") m = RelativeExponential{beta};
    else if (variant == "sweet-spot") m = SweetSpot{beta};
    else if (variant == "constant-variance") m = ConstantVariance{beta, gamma};
    else if (variant == "log-gamma") m = LogGamma{beta};
    else throw ConstraintViolation("model", "unknown model '" + variant + "'");
    validate(m);
    return m;
  }
};

void add_model_flags(CLI::App* cmd, ModelFlags& mf) {
  cmd->add_option("--model", mf.variant,
                  "exponential|beta-odds|relative-exponential|sweet-spot|"
                  "constant-variance|log-gamma");
  cmd->add_option("--beta", mf.beta, "bias coefficient");
  cmd->add_option("--gamma", mf.gamma, "constant-variance upper-side scale");
  cmd->add_option("--a", mf.a, "beta-odds shape a");
  cmd->add_option("--b", mf.b, "beta-odds shape b");
  cmd->add_option("--g", mf.g, "beta-odds discount exponent");
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read scenario file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_trajectory(std::ostream& os, const std::vector<TrajectoryRecord>& traj) {
  os << "step,observation,perceived_var,post_mean,post_sd\n";
  for (const auto& r : traj) {
    os << r.step << ',' << csv_num(r.observation) << ','
       << csv_num(r.perceived_var) << ',' << csv_num(r.post_mean) << ','
       << csv_num(r.post_sd) << '\n';
  }
}

int cmd_asymptotics(const BiasModel& model, double sigma, bool as_json,
                    std::ostream& os) {
  const AsymptoticSummary s = summarize(model, sigma);
  if (as_json) {
    os << "{\"model\":\"" << variant_name(model) << "\",\"lambda\":"
       << (s.diverges ? "null" : csv_num(s.lambda))
       << ",\"subj_var_coeff\":" << (s.diverges ? "null" : csv_num(s.subj_var_coeff))
       << ",\"true_var_coeff\":"
       << (s.diverges || std::isnan(s.true_var_coeff) ? "null" : csv_num(s.true_var_coeff))
       << ",\"diverges\":" << (s.diverges ? "true" : "false") << "}\n";
  } else {
    os << "model,lambda,subj_var_coeff,true_var_coeff,diverges\n";
    os << variant_name(model) << ',' << csv_num(s.lambda) << ','
       << csv_num(s.subj_var_coeff) << ',' << csv_num(s.true_var_coeff) << ','
       << (s.diverges ? "true" : "false") << '\n';
  }
  return 0;
}

int cmd_figure2(double beta, double sigma, std::ostream& os) {
  const BiasModel exp_model = Exponential{beta};
  const BiasModel lg_model = LogGamma{beta};
  const double lambda = -beta * sigma;  // exponential-model bias anchors the grid
  const int points = 601;
  const double lo = lambda - 3.0 * sigma;
  const double hi = lambda + 6.0 * sigma;
  os << "x,influence_exponential,influence_loggamma\n";
  for (int i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    os << csv_num(x) << ',' << csv_num(influence(exp_model, x, sigma)) << ','
       << csv_num(influence(lg_model, x, sigma)) << '\n';
  }
  return 0;
}

int cmd_figure3(std::ostream& os) {
  const int points = 100;
  const double lo = 0.05, hi = 5.0;
  os << "beta,subjective_var_coeff,true_var_coeff\n";
  for (int i = 0; i < points; ++i) {
    const double beta =
        lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    const BiasModel m = SweetSpot{beta};
    os << csv_num(beta) << ',' << csv_num(subjective_variance_coeff(m, 1.0))
       << ',' << csv_num(true_variance_coeff(m, 1.0)) << '\n';
  }
  return 0;
}

int cmd_mc_verify(const BiasModel& base_model, const std::vector<double>& beta_grid,
                  double sigma, std::uint64_t n, std::uint64_t reps,
                  std::uint64_t seed, int threads, std::ostream& os) {
  std::vector<BiasModel> models;
  if (!beta_grid.empty() && std::holds_alternative<Exponential>(base_model)) {
    for (double b : beta_grid) models.push_back(Exponential{b});
  } else {
    models.push_back(base_model);
  }
  os << "model,lambda_pred,mc_mean,mc_se,z_mean,nvar_pred,nvar_mc,nvar_se,z_var,pass\n";
  bool all_pass = true;
  for (const BiasModel& m : models) {
    const double bias = asymptotic_bias(m, sigma);
    // The weighted mean of the beta model estimates the shifted posterior
    // mean, not a deviation from zero.
    double mean_pred = bias;
    if (const auto* bo = std::get_if<BetaOdds>(&m))
      mean_pred = bo->a / (bo->a + bo->b) + bias;
    const double scale2 =
        std::holds_alternative<BetaOdds>(m) ? 1.0 : sigma * sigma;
    const double nvar_pred = true_variance_coeff(m, sigma) * scale2;
    McPlan plan{reps, n, seed, m, sigma};
    const McResult r = run_mc(plan, threads);
    const double z_mean = (r.mean - mean_pred) / r.se;
    const double nvar_mc = static_cast<double>(n) * r.var;
    const double nvar_se = static_cast<double>(n) * variance_se(r.replicates);
    const double z_var = (nvar_mc - nvar_pred) / nvar_se;
    const bool pass = std::abs(z_mean) <= 3.0 && std::abs(z_var) <= 3.0;
    all_pass = all_pass && pass;
    os << variant_name(m) << ',' << csv_num(mean_pred) << ',' << csv_num(r.mean)
       << ',' << csv_num(r.se) << ',' << csv_num(z_mean) << ','
       << csv_num(nvar_pred) << ',' << csv_num(nvar_mc) << ','
       << csv_num(nvar_se) << ',' << csv_num(z_var) << ','
       << (pass ? "true" : "false") << '\n';
  }
  return all_pass ? 0 : 1;
}

int cmd_influence(const BiasModel& model, double sigma, double x_lo, double x_hi,
                  int points, bool empirical, std::uint64_t n, std::uint64_t reps,
                  std::uint64_t seed, std::ostream& os) {
  os << (empirical ? "x,influence,empirical,empirical_se\n" : "x,influence\n");
  for (int i = 0; i < points; ++i) {
    const double x = x_lo + (x_hi - x_lo) * i / (points - 1);
    os << csv_num(x) << ',' << csv_num(influence(model, x, sigma));
    if (empirical) {
      const InfluenceEstimate e = influence_empirical(model, x, sigma, n, reps, seed);
      os << ',' << csv_num(e.value) << ',' << csv_num(e.se);
    }
    os << '\n';
  }
  return 0;
}

int cmd_classify(const std::vector<BiasModel>& models, double sigma,
                 std::ostream& os) {
  const std::vector<BiasModel> ordered = severity_order(models);
  os << "[";
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (i) os << ",";
    os << to_json(classify(ordered[i], sigma), ordered[i]);
  }
  os << "]\n";
  return 0;
}

int cmd_primacy(double xi, double sigma, std::uint64_t n, std::uint64_t seed,
                std::ostream& os) {
  const PrimacyParams params{xi, sigma};
  validate(params);
  SplitMix64 rng = substream(seed, 0);
  // Unit-information start: the v ~ n^{-1/(xi+1)} power law is anchored at
  // v_0 = sigma^2; a very diffuse start would make the recursion overshoot
  // to a tiny variance on the first step and then stall.
  BeliefState belief{0.0, sigma * sigma};
  os << "n,v\n";
  std::uint64_t next_emit = 1;
  std::vector<std::pair<double, double>> fit_points;  // (log n, log v)
  for (std::uint64_t t = 1; t <= n; ++t) {
    belief = primacy_update(belief, rng.normal(0.0, sigma), params);
    if (t == next_emit || t == n) {
      os << t << ',' << csv_num(belief.var) << '\n';
      next_emit = std::max(next_emit + 1,
                           static_cast<std::uint64_t>(next_emit * 1.1));
    }
    if (t * 100 >= n) {
      fit_points.emplace_back(std::log(static_cast<double>(t)),
                              std::log(belief.var));
    }
  }
  // Least-squares slope of log v against log n over the last two decades.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [lx, ly] : fit_points) {
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double k = static_cast<double>(fit_points.size());
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  os << "# fitted_exponent," << csv_num(slope) << '\n';
  return 0;
}

int cmd_polarize(const BiasModel& m1, const BiasModel& m2, double threshold,
                 double mu, double sigma, std::uint64_t n, int points,
                 std::uint64_t seed, std::ostream& os) {
  const double tv1 = true_variance_coeff(m1, sigma) * sigma * sigma;
  const double tv2 = true_variance_coeff(m2, sigma) * sigma * sigma;
  SplitMix64 rng = substream(seed, 0);
  BeliefState b1{mu, 1e6 * sigma * sigma};
  BeliefState b2 = b1;
  // Log-spaced checkpoints.
  std::vector<std::uint64_t> checkpoints;
  for (int i = 0; i < points; ++i) {
    const auto t = static_cast<std::uint64_t>(std::llround(
        std::pow(static_cast<double>(n), static_cast<double>(i + 1) / points)));
    if (checkpoints.empty() || t > checkpoints.back()) checkpoints.push_back(t);
  }
  os << "n,p_agent1,p_agent2\n";
  std::size_t next = 0;
  for (std::uint64_t t = 1; t <= n && next < checkpoints.size(); ++t) {
    const double x = rng.normal(mu, sigma);  // shared evidence stream
    b1 = update(b1, x, perceived_variance(m1, x, b1.mean, sigma));
    b2 = update(b2, x, perceived_variance(m2, x, b2.mean, sigma));
    if (t == checkpoints[next]) {
      ++next;
      const double tn = static_cast<double>(t);
      const double p1 = polarization_probability(
          {threshold, b1.mean, std::sqrt(tv1 / tn)});
      const double p2 = polarization_probability(
          {threshold, b2.mean, std::sqrt(tv2 / tn)});
      os << t << ',' << csv_num(p1) << ',' << csv_num(p2) << '\n';
    }
  }
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Directionally-discounted Bayesian belief updating: asymptotics, "
               "sequential simulation and Monte Carlo verification"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --out appear after the subcommand name

  std::string out_path;
  app.add_option("--out", out_path, "write output to a file instead of stdout");

  // --- asymptotics ---
  auto* sc_asym = app.add_subcommand("asymptotics", "bias and variance coefficients");
  ModelFlags mf_asym;
  add_model_flags(sc_asym, mf_asym);
  double asym_sigma = 1.0;
  bool asym_json = false;
  std::string asym_scenario;
  sc_asym->add_option("--sigma", asym_sigma);
  sc_asym->add_option("--scenario", asym_scenario, "scenario JSON file");
  sc_asym->add_flag("--json", asym_json, "emit JSON instead of CSV");

  // --- simulate ---
  auto* sc_sim = app.add_subcommand("simulate", "sequential belief trajectory");
  ModelFlags mf_sim;
  add_model_flags(sc_sim, mf_sim);
  ScenarioConfig sim_cfg;
  std::string sim_scenario;
  sc_sim->add_option("--scenario", sim_scenario, "scenario JSON file");
  sc_sim->add_option("--mu", sim_cfg.mu);
  sc_sim->add_option("--sigma", sim_cfg.sigma);
  sc_sim->add_option("--prior-mean", sim_cfg.prior_mean);
  sc_sim->add_option("--prior-var", sim_cfg.prior_var);
  sc_sim->add_option("--n", sim_cfg.n_obs);
  auto* sim_seed = sc_sim->add_option("--seed", sim_cfg.seed);

  // --- figure ---
  auto* sc_fig = app.add_subcommand("figure", "figure datasets (1, 2 or 3)");
  int fig_no = 0;
  sc_fig->add_option("number", fig_no, "figure number")->required();
  double fig_beta = -1.0, fig_sigma = -1.0;
  std::uint64_t fig_n = 2000, fig_seed = 0;
  sc_fig->add_option("--beta", fig_beta);
  sc_fig->add_option("--sigma", fig_sigma);
  sc_fig->add_option("--n", fig_n);
  auto* fig_seed_opt = sc_fig->add_option("--seed", fig_seed);

  // --- mc-verify ---
  auto* sc_mc = app.add_subcommand("mc-verify", "Monte Carlo vs closed forms");
  ModelFlags mf_mc;
  add_model_flags(sc_mc, mf_mc);
  std::vector<double> mc_grid;
  double mc_sigma = 1.0;
  std::uint64_t mc_n = 100000, mc_reps = 200, mc_seed = 0;
  int mc_threads = 1;
  sc_mc->add_option("--beta-grid", mc_grid,
                    "beta values (exponential model only)")
      ->delimiter(',');
  sc_mc->add_option("--sigma", mc_sigma);
  sc_mc->add_option("--n", mc_n);
  sc_mc->add_option("--R", mc_reps);
  sc_mc->add_option("--threads", mc_threads);
  sc_mc->add_option("--seed", mc_seed)->required();

  // --- influence ---
  auto* sc_inf = app.add_subcommand("influence", "influence function data");
  ModelFlags mf_inf;
  add_model_flags(sc_inf, mf_inf);
  double inf_sigma = 1.0;
  std::optional<double> inf_lo, inf_hi;
  int inf_points = 601;
  bool inf_emp = false;
  std::uint64_t inf_n = 10000, inf_reps = 100, inf_seed = 0;
  sc_inf->add_option("--sigma", inf_sigma);
  sc_inf->add_option("--x-min", inf_lo);
  sc_inf->add_option("--x-max", inf_hi);
  sc_inf->add_option("--points", inf_points);
  sc_inf->add_flag("--empirical", inf_emp, "add Monte Carlo influence columns");
  sc_inf->add_option("--n", inf_n);
  sc_inf->add_option("--R", inf_reps);
  auto* inf_seed_opt = sc_inf->add_option("--seed", inf_seed);

  // --- classify ---
  auto* sc_cls = app.add_subcommand("classify", "four-property taxonomy report");
  ModelFlags mf_cls;
  add_model_flags(sc_cls, mf_cls);
  double cls_sigma = 1.0;
  bool cls_canonical = false;
  sc_cls->add_option("--sigma", cls_sigma);
  sc_cls->add_flag("--canonical", cls_canonical,
                   "report all six model variants in severity order");

  // --- primacy ---
  auto* sc_pri = app.add_subcommand("primacy", "primacy-weighted variance decay");
  double pri_xi = 0.0, pri_sigma = 1.0;
  std::uint64_t pri_n = 100000, pri_seed = 0;
  sc_pri->add_option("--xi", pri_xi);
  sc_pri->add_option("--sigma", pri_sigma);
  sc_pri->add_option("--n", pri_n);
  sc_pri->add_option("--seed", pri_seed)->required();

  // --- polarize ---
  auto* sc_pol = app.add_subcommand("polarize", "two agents, shared evidence");
  double pol_beta1 = 0.5, pol_beta2 = -0.5;
  std::string pol_model1, pol_model2;
  double pol_L = 0.0, pol_mu = 0.0, pol_sigma = 1.0;
  std::uint64_t pol_n = 100000, pol_seed = 0;
  int pol_points = 50;
  sc_pol->add_option("--beta1", pol_beta1, "exponential bias of agent 1");
  sc_pol->add_option("--beta2", pol_beta2, "exponential bias of agent 2");
  sc_pol->add_option("--model1", pol_model1, "agent 1 model as inline JSON");
  sc_pol->add_option("--model2", pol_model2, "agent 2 model as inline JSON");
  sc_pol->add_option("--L", pol_L, "polarization threshold");
  sc_pol->add_option("--mu", pol_mu);
  sc_pol->add_option("--sigma", pol_sigma);
  sc_pol->add_option("--n", pol_n);
  sc_pol->add_option("--points", pol_points);
  sc_pol->add_option("--seed", pol_seed)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  Output out(out_path);
  std::ostream& os = out.stream();

  if (sc_asym->parsed()) {
    BiasModel model = asym_scenario.empty()
                          ? mf_asym.build()
                          : scenario_from_json(read_file(asym_scenario)).model;
    if (!asym_scenario.empty() && sc_asym->count("--sigma") == 0)
      asym_sigma = scenario_from_json(read_file(asym_scenario)).config.sigma;
    return cmd_asymptotics(model, asym_sigma, asym_json, os);
  }
  if (sc_sim->parsed()) {
    Scenario sc;
    if (!sim_scenario.empty()) {
      sc = scenario_from_json(read_file(sim_scenario));
    } else {
      if (!*sim_seed)
        throw ConstraintViolation("seed", "--seed is required for simulate");
      sc = {sim_cfg, mf_sim.build()};
    }
    write_trajectory(os, run_trajectory(sc.config, sc.model));
    return 0;
  }
  if (sc_fig->parsed()) {
    switch (fig_no) {
      case 1: {
        if (!*fig_seed_opt)
          throw ConstraintViolation("seed", "--seed is required for figure 1");
        ScenarioConfig cfg;
        cfg.mu = 140.0;
        cfg.sigma = fig_sigma > 0 ? fig_sigma : 10.0;
        cfg.prior_mean = 120.0;
        cfg.prior_var = 25.0;
        cfg.n_obs = fig_n;
        cfg.seed = fig_seed;
        const BiasModel model = Exponential{fig_beta >= 0 ? fig_beta : 0.2};
        write_trajectory(os, run_trajectory(cfg, model));
        return 0;
      }
      case 2:
        return cmd_figure2(fig_beta > 0 ? fig_beta : 1.0,
                           fig_sigma > 0 ? fig_sigma : 1.0, os);
      case 3:
        return cmd_figure3(os);
      default:
        throw ConstraintViolation("figure", "figure number must be 1, 2 or 3");
    }
  }
  if (sc_mc->parsed()) {
    return cmd_mc_verify(mf_mc.build(), mc_grid, mc_sigma, mc_n, mc_reps,
                         mc_seed, mc_threads, os);
  }
  if (sc_inf->parsed()) {
    const BiasModel model = mf_inf.build();
    const double lam = asymptotic_bias(model, inf_sigma);
    const double lo = inf_lo.value_or(lam - 3.0 * inf_sigma);
    const double hi = inf_hi.value_or(lam + 6.0 * inf_sigma);
    if (inf_emp && !*inf_seed_opt)
      throw ConstraintViolation("seed", "--seed is required for --empirical");
    return cmd_influence(model, inf_sigma, lo, hi, inf_points, inf_emp, inf_n,
                         inf_reps, inf_seed, os);
  }
  if (sc_cls->parsed()) {
    std::vector<BiasModel> models;
    if (cls_canonical) {
      models = {Exponential{1.0},          BetaOdds{3.0, 3.0, 1.0},
                RelativeExponential{1.0},  SweetSpot{1.0},
                ConstantVariance{1.0, 2.0}, LogGamma{1.0}};
    } else {
      models = {mf_cls.build()};
    }
    return cmd_classify(models, cls_sigma, os);
  }
  if (sc_pri->parsed())
    return cmd_primacy(pri_xi, pri_sigma, pri_n, pri_seed, os);
  if (sc_pol->parsed()) {
    const BiasModel m1 = pol_model1.empty() ? BiasModel(Exponential{pol_beta1})
                                            : model_from_json(pol_model1);
    const BiasModel m2 = pol_model2.empty() ? BiasModel(Exponential{pol_beta2})
                                            : model_from_json(pol_model2);
    return cmd_polarize(m1, m2, pol_L, pol_mu, pol_sigma, pol_n, pol_points,
                        pol_seed, os);
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConstraintViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

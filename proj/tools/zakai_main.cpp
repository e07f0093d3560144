// Command-line front end: data simulation, filter runs, unbiased estimators,
// the exact linear-Gaussian oracle and the cost/MSE benchmark.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "zakai/csv.hpp"
#include "zakai/harness.hpp"

namespace {

using namespace zakai;

ObservationPath load_path(const std::string& file) { return ObservationPath::load_csv(file); }

void write_pf_csv(const std::string& file, const FilterOutput& out) {
  std::ofstream os(file);
  if (!os) throw config_error("cannot open for writing: " + file);
  os << "t,eta_phi,log_gamma_phi,log_gamma_1,ess_min,resampled\n";
  for (const auto& r : out.records) {
    // gamma_phi = exp(log_gamma_1) eta_phi; its log is undefined for
    // non-positive eta_phi and written as nan (sign recoverable from eta_phi).
    const double log_gamma_phi =
        r.eta_phi > 0.0 ? r.log_gamma_1 + std::log(r.eta_phi)
                        : std::numeric_limits<double>::quiet_NaN();
    os << r.t << "," << fmt_g17(r.eta_phi) << "," << fmt_g17(log_gamma_phi) << ","
       << fmt_g17(r.log_gamma_1) << "," << fmt_g17(r.ess) << "," << (r.resampled ? 1 : 0)
       << "\n";
  }
}

void write_unbiased_csv(const std::string& file, const ReplicateSummary& summary,
                        UnbiasedKind kind, const LevelDistribution& dist, int n_particles) {
  std::ofstream os(file);
  if (!os) throw config_error("cannot open for writing: " + file);
  os << "replicate,t,value,value_one,level_drawn,cost\n";
  const int t_max = static_cast<int>(summary.mean_phi.size());
  for (int r = 0; r < summary.m; ++r) {
    const auto& d = summary.draws[r];
    for (int t = 1; t <= t_max; ++t) {
      const double cost = static_cast<double>(t) / t_max * d.cost_units;
      os << r << "," << t << "," << fmt_g17(d.value_phi[t - 1]) << ","
         << fmt_g17(d.value_one[t - 1]) << "," << d.level_drawn << "," << fmt_g17(cost) << "\n";
    }
  }
  os << "summary\n";
  os << "t,mean,variance,mean_one,variance_one,total_cost,expected_cost\n";
  for (int t = 1; t <= t_max; ++t) {
    const double scale = static_cast<double>(t) / t_max;
    os << t << "," << fmt_g17(summary.mean_phi[t - 1]) << "," << fmt_g17(summary.var_phi[t - 1])
       << "," << fmt_g17(summary.mean_one[t - 1]) << "," << fmt_g17(summary.var_one[t - 1]) << ","
       << fmt_g17(scale * summary.total_cost) << ","
       << fmt_g17(expected_cost(kind, dist, t, n_particles, summary.m)) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unbiased estimation of the Zakai normalizing constant for "
               "partially observed diffusions"};
  app.require_subcommand(1);

  // simulate-data
  auto* sim = app.add_subcommand("simulate-data", "Simulate an observation path (reference "
                                                  "measure: standard Brownian motion)");
  std::uint64_t sim_seed = 1;
  int sim_horizon = 50, sim_level = 8;
  std::string sim_out = "data.csv";
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--horizon", sim_horizon, "time horizon T (units)")->check(CLI::PositiveNumber);
  sim->add_option("--level", sim_level, "finest resolution level")->check(CLI::NonNegativeNumber);
  sim->add_option("--out", sim_out, "output CSV")->required();

  // run-pf
  auto* pf = app.add_subcommand("run-pf", "Run a particle filter at one level");
  std::string pf_model = "OU", pf_data, pf_policy = "ess:0.25", pf_phi = "identity",
              pf_out = "pf.csv";
  int pf_level = 0, pf_n = 100, pf_t = 0;
  std::uint64_t pf_seed = 1;
  pf->add_option("--model", pf_model, "model name");
  pf->add_option("--data", pf_data, "observation CSV")->required();
  pf->add_option("--level", pf_level, "discretization level")->check(CLI::NonNegativeNumber);
  pf->add_option("--particles", pf_n, "number of particles")->check(CLI::PositiveNumber);
  pf->add_option("--t", pf_t, "final time (default: data horizon)");
  pf->add_option("--policy", pf_policy, "resampling policy: every | ess:F");
  pf->add_option("--seed", pf_seed, "RNG seed");
  pf->add_option("--phi", pf_phi, "test function: identity | one");
  pf->add_option("--out", pf_out, "output CSV")->required();

  // run-mlpf
  auto* ml = app.add_subcommand("run-mlpf", "Run the multilevel particle filter");
  std::string ml_model = "OU", ml_data, ml_policy = "ess:0.25", ml_phi = "identity",
              ml_out = "mlpf.csv", ml_nl;
  int ml_levels = -1, ml_t = 0;
  double ml_eps = 0.0;
  std::uint64_t ml_seed = 1;
  ml->add_option("--model", ml_model, "model name");
  ml->add_option("--data", ml_data, "observation CSV")->required();
  ml->add_option("--levels", ml_levels, "maximum level L");
  ml->add_option("--epsilon", ml_eps, "target accuracy (allocates L and N_l)");
  ml->add_option("--nl", ml_nl, "comma-separated sample sizes N_0,...,N_L");
  ml->add_option("--t", ml_t, "final time (default: data horizon)");
  ml->add_option("--policy", ml_policy, "resampling policy");
  ml->add_option("--seed", ml_seed, "RNG seed");
  ml->add_option("--phi", ml_phi, "test function");
  ml->add_option("--out", ml_out, "output CSV")->required();

  // run-st / run-cs
  std::string un_model = "OU", un_data, un_policy = "ess:0.25", un_phi = "identity",
              un_dist = "const", un_out = "unbiased.csv";
  int un_lmax = 7, un_n = 0, un_m = 100, un_t = 0, un_workers = 1;
  double un_alpha = 0.25;
  std::uint64_t un_seed = 1;
  auto add_unbiased_options = [&](CLI::App* cmd) {
    cmd->add_option("--model", un_model, "model name");
    cmd->add_option("--data", un_data, "observation CSV")->required();
    cmd->add_option("--dist", un_dist, "level distribution: const | nonconst");
    cmd->add_option("--alpha", un_alpha, "tail exponent for nonconst");
    cmd->add_option("--lmax", un_lmax, "support {0..lmax}")->check(CLI::PositiveNumber);
    cmd->add_option("--particles", un_n, "N per filter (default 100 const / 200 nonconst)");
    cmd->add_option("--replicates", un_m, "number of independent draws M")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--t", un_t, "final time (default: data horizon)");
    cmd->add_option("--policy", un_policy, "resampling policy");
    cmd->add_option("--seed", un_seed, "RNG seed");
    cmd->add_option("--phi", un_phi, "test function");
    cmd->add_option("--workers", un_workers, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--out", un_out, "output CSV")->required();
  };
  auto* st = app.add_subcommand("run-st", "Single-term randomized unbiased estimator");
  add_unbiased_options(st);
  auto* cs = app.add_subcommand("run-cs", "Coupled-sum randomized unbiased estimator");
  add_unbiased_options(cs);

  // oracle
  auto* orc = app.add_subcommand("oracle", "Exact discretized gamma for linear-Gaussian models");
  std::string orc_data, orc_model = "ou";
  int orc_level = 0, orc_t = 1;
  orc->add_option("--data", orc_data, "observation CSV")->required();
  orc->add_option("--level", orc_level, "discretization level")->check(CLI::NonNegativeNumber);
  orc->add_option("--t", orc_t, "time")->check(CLI::PositiveNumber);
  orc->add_option("--model", orc_model, "model name (a linear-Gaussian one)");

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "Cost versus MSE sweep across methods");
  std::string bench_config;
  int bench_workers = 1;
  bench->add_option("--config", bench_config, "JSON config file")->required();
  bench->add_option("--workers", bench_workers, "worker threads")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      ObservationPath::simulate(sim_seed, sim_horizon, sim_level).save_csv(sim_out);
      std::cout << "wrote " << sim_out << "\n";
    } else if (pf->parsed()) {
      const SdeModel model = builtin_model(pf_model);
      const ObservationPath path = load_path(pf_data);
      const int t = pf_t > 0 ? pf_t : path.horizon();
      const FilterOutput out = pf_run(model, path, pf_level, pf_n, t,
                                      ResamplingPolicy::parse(pf_policy), pf_seed,
                                      parse_phi(pf_phi));
      write_pf_csv(pf_out, out);
      std::cout << "wrote " << pf_out << "\n";
    } else if (ml->parsed()) {
      const SdeModel model = builtin_model(ml_model);
      const ObservationPath path = load_path(ml_data);
      const int t = ml_t > 0 ? ml_t : path.horizon();
      int levels = ml_levels;
      std::vector<int> nl;
      if (!ml_nl.empty()) {
        for (const auto& f : split_csv_line(ml_nl)) nl.push_back(std::stoi(f));
        if (levels < 0) levels = static_cast<int>(nl.size()) - 1;
        if (static_cast<int>(nl.size()) != levels + 1)
          throw config_error("--nl must list exactly L+1 sample sizes");
      } else if (ml_eps > 0.0) {
        const LevelAllocation alloc = allocate_levels(ml_eps, model.sigma_constant);
        levels = alloc.max_level;
        nl = alloc.n_particles;
      } else {
        throw config_error("run-mlpf needs --epsilon or --nl");
      }
      const MlpfOutput out = mlpf_run(model, path, levels, nl, t,
                                      ResamplingPolicy::parse(ml_policy), ml_seed,
                                      parse_phi(ml_phi));
      std::ofstream os(ml_out);
      os << "t,eta_phi,gamma_phi,gamma_1,cost\n";
      for (const auto& r : out.records) {
        const double cost = out.cost_units * r.t / t;
        os << r.t << "," << fmt_g17(r.eta_phi) << "," << fmt_g17(r.gamma_phi) << ","
           << fmt_g17(r.gamma_1) << "," << fmt_g17(cost) << "\n";
      }
      std::cout << "wrote " << ml_out << "\n";
    } else if (st->parsed() || cs->parsed()) {
      const SdeModel model = builtin_model(un_model);
      const ObservationPath path = load_path(un_data);
      const int t = un_t > 0 ? un_t : path.horizon();
      LevelDistribution::Kind kind;
      if (un_dist == "const") {
        kind = LevelDistribution::Kind::sigma_constant;
      } else if (un_dist == "nonconst") {
        kind = LevelDistribution::Kind::sigma_nonconstant;
      } else {
        throw config_error("--dist must be const or nonconst");
      }
      const LevelDistribution dist = make_level_distribution(kind, un_lmax, un_alpha);
      const int n = un_n > 0 ? un_n
                             : (kind == LevelDistribution::Kind::sigma_constant ? 100 : 200);
      const auto ukind = st->parsed() ? UnbiasedKind::single_term : UnbiasedKind::coupled_sum;
      const ReplicateSummary summary =
          replicate_average(ukind, model, path, dist, n, t, ResamplingPolicy::parse(un_policy),
                            un_m, un_seed, parse_phi(un_phi), un_workers);
      write_unbiased_csv(un_out, summary, ukind, dist, n);
      std::cout << "wrote " << un_out << " (mean at t=" << t << ": "
                << fmt_g17(summary.mean_phi[t - 1]) << ")\n";
    } else if (orc->parsed()) {
      std::string name = orc_model;
      if (name == "ou") name = "OU";
      const SdeModel model = builtin_model(name);
      const ObservationPath path = load_path(orc_data);
      const auto spec = LinearGaussianSpec::for_model(model, orc_level);
      const auto res = kalman_log_gamma(spec, path, orc_t);
      std::cout << "log_gamma_1 " << fmt_g17(res.log_gamma_1) << "\n";
      std::cout << "posterior_mean " << fmt_g17(res.posterior_mean) << "\n";
    } else if (bench->parsed()) {
      const ExperimentConfig cfg = ExperimentConfig::from_json_file(bench_config);
      return run_benchmark(cfg, bench_workers);
    }
  } catch (const degeneracy_error& e) {
    std::cerr << "degeneracy error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

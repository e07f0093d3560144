#include "zakai/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "zakai/csv.hpp"
#include "zakai/parallel.hpp"

namespace zakai {

using nlohmann::json;

ExperimentConfig ExperimentConfig::from_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw config_error("cannot open config file: " + file);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw config_error("bad JSON in " + file + ": " + e.what());
  }

  ExperimentConfig cfg;
  cfg.model = j.value("model", cfg.model);
  if (j.contains("data")) {
    const auto& d = j.at("data");
    if (d.contains("file")) cfg.data_file = d.at("file").get<std::string>();
    cfg.data_seed = d.value("seed", cfg.data_seed);
    cfg.data_finest_level = d.value("finest_level", cfg.data_finest_level);
    cfg.data_horizon = d.value("horizon", cfg.data_horizon);
  }
  cfg.t = j.value("t", cfg.t);
  cfg.phi = j.value("phi", cfg.phi);
  cfg.policy = j.value("policy", cfg.policy);
  if (j.contains("methods")) cfg.methods = j.at("methods").get<std::vector<std::string>>();
  if (j.contains("sweep_levels"))
    cfg.sweep_levels = j.at("sweep_levels").get<std::vector<int>>();
  cfg.runs = j.value("runs", cfg.runs);
  cfg.seed = j.value("seed", cfg.seed);
  if (j.contains("st_cs")) {
    const auto& s = j.at("st_cs");
    cfg.st_cs_particles = s.value("particles", cfg.st_cs_particles);
    cfg.alpha = s.value("alpha", cfg.alpha);
    cfg.pilot_draws = s.value("pilot_draws", cfg.pilot_draws);
    cfg.max_m = s.value("max_m", cfg.max_m);
  }
  if (j.contains("ground_truth")) {
    const auto& g = j.at("ground_truth");
    cfg.gt_mode = g.value("mode", cfg.gt_mode);
    cfg.gt_level = g.value("level", cfg.gt_level);
    cfg.gt_particles = g.value("particles", cfg.gt_particles);
    cfg.gt_seed = g.value("seed", cfg.gt_seed);
  }
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  if (cfg.runs < 2) throw config_error("runs must be >= 2 for MSE estimation");
  return cfg;
}

double ground_truth(const SdeModel& model, const ObservationPath& path, const TestFunction& phi,
                    const std::string& phi_name, int t, const std::string& mode, int level,
                    int n_particles, std::uint64_t seed) {
  if (level > path.finest_level())
    throw resolution_error("ground truth level exceeds data resolution");

  bool use_oracle = false;
  if (mode == "oracle") {
    use_oracle = true;
  } else if (mode == "auto") {
    try {
      (void)LinearGaussianSpec::for_model(model, level);
      use_oracle = true;
    } catch (const unsupported_model_error&) {
      use_oracle = false;
    }
  } else if (mode != "pf") {
    throw config_error("unknown ground truth mode: " + mode);
  }

  if (use_oracle) {
    const auto res = kalman_log_gamma(LinearGaussianSpec::for_model(model, level), path, t);
    if (phi_name == "one") return std::exp(res.log_gamma_1);
    if (phi_name == "identity") return res.gamma_id;
    throw config_error("oracle ground truth supports phi in {identity, one}");
  }

  const FilterOutput out =
      pf_run(model, path, level, n_particles, t, ResamplingPolicy::ess(0.25),
             derive_seed(seed, {seed_tags::ground_truth}), phi);
  return out.records[t - 1].gamma_phi;
}

namespace {

struct PointRow {
  std::string method;
  int sweep_level = 0;
  double epsilon = 0.0;
  int run = 0;
  std::uint64_t run_seed = 0;
  double value = 0.0;
  double cost = 0.0;
};

struct PointSummary {
  std::string method;
  int sweep_level = 0;
  double epsilon = 0.0;
  int runs = 0;
  int m_replicates = 0;     // ST/CS only
  double calibration = 0.0; // ST/CS only: single-draw variance from the pilot
  double mse = 0.0;
  double cost = 0.0;           // deterministic or expected cost formula value
  double realized_cost = 0.0;  // mean realized cost per run
};

std::uint64_t method_tag(const std::string& method) {
  std::uint64_t tag = 0;
  for (char c : method) tag = tag * 131 + static_cast<unsigned char>(c);
  return tag;
}

double mse_against(const std::vector<double>& values, double truth) {
  double acc = 0.0;
  for (double v : values) acc += (v - truth) * (v - truth);
  return acc / static_cast<double>(values.size());
}

}  // namespace

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  if (n < 2 || y.size() != x.size()) throw shape_error("fitted_slope: need >= 2 paired points");
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

int run_benchmark(const ExperimentConfig& cfg, int workers) {
  const SdeModel model = builtin_model(cfg.model);
  const ObservationPath path =
      cfg.data_file ? ObservationPath::load_csv(*cfg.data_file)
                    : ObservationPath::simulate(cfg.data_seed, cfg.data_horizon,
                                                cfg.data_finest_level);
  if (cfg.t > path.horizon()) throw config_error("t exceeds the data horizon");
  const TestFunction phi = parse_phi(cfg.phi);
  const ResamplingPolicy policy = ResamplingPolicy::parse(cfg.policy);
  const int t = cfg.t;
  const int n_stcs = cfg.st_cs_particles > 0 ? cfg.st_cs_particles
                                             : (model.sigma_constant ? 100 : 200);

  const double truth = ground_truth(model, path, phi, cfg.phi, t, cfg.gt_mode, cfg.gt_level,
                                    cfg.gt_particles, cfg.seed);

  std::vector<PointRow> rows;
  std::vector<PointSummary> summaries;
  bool degenerate = false;

  // Pilot calibration of the replicate count for the unbiased estimators:
  // M(eps) = ceil(c / eps^2) where c is the single-draw variance estimated at
  // the first sweep point.
  double calib_st = 0.0, calib_cs = 0.0;
  const bool want_st = std::count(cfg.methods.begin(), cfg.methods.end(), "st") > 0;
  const bool want_cs = std::count(cfg.methods.begin(), cfg.methods.end(), "cs") > 0;
  if ((want_st || want_cs) && !cfg.sweep_levels.empty()) {
    const auto kind = model.sigma_constant ? LevelDistribution::Kind::sigma_constant
                                           : LevelDistribution::Kind::sigma_nonconstant;
    const LevelDistribution dist =
        make_level_distribution(kind, cfg.sweep_levels.front(), cfg.alpha);
    if (want_st) {
      const auto pilot = replicate_average(
          UnbiasedKind::single_term, model, path, dist, n_stcs, t, policy, cfg.pilot_draws,
          derive_seed(cfg.seed, {method_tag("pilot-st")}), phi, workers);
      calib_st = pilot.var_phi[t - 1];
    }
    if (want_cs) {
      const auto pilot = replicate_average(
          UnbiasedKind::coupled_sum, model, path, dist, n_stcs, t, policy, cfg.pilot_draws,
          derive_seed(cfg.seed, {method_tag("pilot-cs")}), phi, workers);
      calib_cs = pilot.var_phi[t - 1];
    }
  }

  for (std::size_t point = 0; point < cfg.sweep_levels.size(); ++point) {
    const int sweep_level = cfg.sweep_levels[point];
    const double epsilon = std::pow(2.0, -0.5 * sweep_level);

    for (const std::string& method : cfg.methods) {
      PointSummary sum;
      sum.method = method;
      sum.sweep_level = sweep_level;
      sum.epsilon = epsilon;
      sum.runs = cfg.runs;

      std::vector<double> values(cfg.runs);
      std::vector<double> costs(cfg.runs);
      std::vector<std::uint64_t> seeds(cfg.runs);
      for (int run = 0; run < cfg.runs; ++run)
        seeds[run] = derive_seed(cfg.seed, {seed_tags::benchmark, method_tag(method),
                                            static_cast<std::uint64_t>(point),
                                            static_cast<std::uint64_t>(run)});

      try {
        if (method == "pf") {
          const int n = std::max(1, static_cast<int>(std::ceil(1.0 / (epsilon * epsilon))));
          sum.cost = static_cast<double>(t) * n * steps_per_unit(sweep_level);
          parallel_for(cfg.runs, workers, [&](int run) {
            const FilterOutput out =
                pf_run(model, path, sweep_level, n, t, policy, seeds[run], phi);
            values[run] = out.records[t - 1].gamma_phi;
            costs[run] = out.cost_units;
          });
        } else if (method == "mlpf") {
          const LevelAllocation alloc = allocate_levels(epsilon, model.sigma_constant);
          double cost = 0.0;
          for (int l = 0; l <= alloc.max_level; ++l)
            cost += static_cast<double>(t) * alloc.n_particles[l] * steps_per_unit(l);
          sum.cost = cost;
          parallel_for(cfg.runs, workers, [&](int run) {
            const MlpfOutput out = mlpf_run(model, path, alloc.max_level, alloc.n_particles, t,
                                            policy, seeds[run], phi);
            values[run] = out.records[t - 1].gamma_phi;
            costs[run] = out.cost_units;
          });
        } else if (method == "st" || method == "cs") {
          const auto kind = model.sigma_constant ? LevelDistribution::Kind::sigma_constant
                                                 : LevelDistribution::Kind::sigma_nonconstant;
          const LevelDistribution dist =
              make_level_distribution(kind, sweep_level, cfg.alpha);
          const auto ukind =
              method == "st" ? UnbiasedKind::single_term : UnbiasedKind::coupled_sum;
          const double calib = method == "st" ? calib_st : calib_cs;
          const int m = std::min(
              cfg.max_m,
              std::max(1, static_cast<int>(std::ceil(calib / (epsilon * epsilon)))));
          sum.m_replicates = m;
          sum.calibration = calib;
          sum.cost = expected_cost(ukind, dist, t, n_stcs, m);
          parallel_for(cfg.runs, workers, [&](int run) {
            const ReplicateSummary rs = replicate_average(ukind, model, path, dist, n_stcs, t,
                                                          policy, m, seeds[run], phi, 1);
            values[run] = rs.mean_phi[t - 1];
            costs[run] = rs.total_cost;
          });
        } else {
          throw config_error("unknown method in config: " + method);
        }
      } catch (const degeneracy_error& e) {
        std::cerr << "degeneracy at method=" << method << " L=" << sweep_level << ": "
                  << e.what() << "\n";
        degenerate = true;
        continue;
      }

      sum.mse = mse_against(values, truth);
      double mean_cost = 0.0;
      for (double c : costs) mean_cost += c;
      sum.realized_cost = mean_cost / cfg.runs;
      summaries.push_back(sum);
      for (int run = 0; run < cfg.runs; ++run)
        rows.push_back({method, sweep_level, epsilon, run, seeds[run], values[run], costs[run]});
    }
  }

  std::filesystem::create_directories(cfg.out_dir);
  {
    std::ofstream out(cfg.out_dir + "/results.csv");
    out << "method,L,epsilon,run,run_seed,data_seed,t,value,cost\n";
    for (const auto& r : rows)
      out << r.method << "," << r.sweep_level << "," << fmt_g17(r.epsilon) << "," << r.run << ","
          << r.run_seed << "," << path.seed() << "," << t << "," << fmt_g17(r.value) << ","
          << fmt_g17(r.cost) << "\n";
  }
  {
    std::ofstream out(cfg.out_dir + "/summary.csv");
    out << "method,L,epsilon,runs,M,calibration,mse,cost,realized_cost,ground_truth,t\n";
    for (const auto& s : summaries)
      out << s.method << "," << s.sweep_level << "," << fmt_g17(s.epsilon) << "," << s.runs << ","
          << s.m_replicates << "," << fmt_g17(s.calibration) << "," << fmt_g17(s.mse) << ","
          << fmt_g17(s.cost) << "," << fmt_g17(s.realized_cost) << "," << fmt_g17(truth) << ","
          << t << "\n";
  }
  return degenerate ? 2 : 0;
}

}  // namespace zakai

#ifndef ZAKAI_HARNESS_HPP
#define ZAKAI_HARNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "zakai/estimators.hpp"
#include "zakai/oracle.hpp"

namespace zakai {

/// Benchmark configuration, loadable from JSON (see README for the schema).
struct ExperimentConfig {
  std::string model = "OU";

  // Data: either a CSV file or simulation parameters.
  std::optional<std::string> data_file;
  std::uint64_t data_seed = 7;
  int data_finest_level = 8;
  int data_horizon = 50;

  int t = 50;
  std::string phi = "identity";
  std::string policy = "ess:0.25";
  std::vector<std::string> methods{"pf", "mlpf", "st", "cs"};
  std::vector<int> sweep_levels{1, 2, 3, 4, 5, 6, 7};
  int runs = 100;  // outer repetitions per sweep point, for the empirical MSE
  std::uint64_t seed = 1;

  // ST/CS settings. particles = 0 selects the default by model class
  // (100 when sigma is constant, 200 otherwise).
  int st_cs_particles = 0;
  double alpha = 0.25;
  int pilot_draws = 50;
  int max_m = 100000;  // safety cap on the calibrated replicate count

  // Ground truth: "oracle" (exact, linear-Gaussian models), "pf" (reference
  // particle filter at `gt_level` with `gt_particles`), or "auto" (oracle
  // when available, otherwise pf).
  std::string gt_mode = "auto";
  int gt_level = 8;
  int gt_particles = 10000;
  std::uint64_t gt_seed = 990;

  std::string out_dir = ".";

  static ExperimentConfig from_json_file(const std::string& file);
};

/// Reference value of gamma_t(phi) at the configured resolution: the exact
/// Kalman value when the model admits it, otherwise a single high-resolution
/// particle filter run under the configured protocol.
double ground_truth(const SdeModel& model, const ObservationPath& path, const TestFunction& phi,
                    const std::string& phi_name, int t, const std::string& mode, int level,
                    int n_particles, std::uint64_t seed);

/// Full cost-versus-MSE sweep. Writes results.csv (one row per run) and
/// summary.csv (one row per method/sweep point) under cfg.out_dir. Returns a
/// process exit code: 0 on success, 2 if any run degenerated.
int run_benchmark(const ExperimentConfig& cfg, int workers);

/// Least-squares slope of y against x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace zakai

#endif

#ifndef ZAKAI_FILTERS_HPP
#define ZAKAI_FILTERS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "zakai/euler.hpp"
#include "zakai/observations.hpp"
#include "zakai/resampling.hpp"

namespace zakai {

/// When to resample. every_unit reproduces the textbook algorithms; the
/// ess_threshold mode resamples only when the effective sample size of the
/// accumulated weights drops below threshold_fraction * N (for a coupled
/// filter the minimum ESS of the two levels is compared).
struct ResamplingPolicy {
  enum class Mode { every_unit, ess_threshold };
  Mode mode = Mode::ess_threshold;
  double threshold_fraction = 0.25;

  static ResamplingPolicy every_unit() { return {Mode::every_unit, 1.0}; }
  static ResamplingPolicy ess(double fraction = 0.25) {
    return {Mode::ess_threshold, fraction};
  }
  /// Parse "every" or "ess:F" (e.g. "ess:0.25").
  static ResamplingPolicy parse(const std::string& text);
  std::string to_string() const;

  bool fires(double ess_value, int n_particles) const {
    return mode == Mode::every_unit || ess_value < threshold_fraction * n_particles;
  }
};

using TestFunction = std::function<double(const Vector&)>;

inline TestFunction phi_identity() {
  return [](const Vector& x) { return x(0); };
}
inline TestFunction phi_one() {
  return [](const Vector&) { return 1.0; };
}
/// Parse "identity" or "one".
TestFunction parse_phi(const std::string& name);

/// N particles on the current unit interval together with the log-domain
/// bookkeeping of the running normalizing-constant estimate. All weight
/// handling is in log space; exponentiation happens only under max
/// subtraction inside normalization.
struct Ensemble {
  int level = 0;
  std::vector<PathBlock> blocks;
  Vector cumulative_log_weights;   // per particle, since the last resampling
  double log_gamma_running = 0.0;  // log of the product of folded mean weights
  int time = 0;                    // blocks cover [time-1, time]

  int size() const { return static_cast<int>(blocks.size()); }
};

struct FilterRecord {
  int t = 0;
  double eta_phi = 0.0;     // filter estimate of phi
  double log_gamma_1 = 0.0; // log of the normalizing-constant estimate
  double gamma_phi = 0.0;   // exp(log_gamma_1) * eta_phi
  double ess = 0.0;         // ESS of the cumulative weights at this time
  bool resampled = false;   // whether resampling fired entering this block
};

struct FilterOutput {
  std::vector<FilterRecord> records;  // t = 1..t_max
  double cost_units = 0.0;            // t_max * N * 2^level
};

/// Particle filter at a single level. Construction runs the initialization
/// step (N Euler blocks from x_*, weighted); each advance() performs one
/// selection/mutation step. Estimates are available at every integer time.
///
/// RNG streams, derived from the run seed: particle i consumes
/// derive_seed(seed, {pf_particle, i}) with exactly 2^level Gaussian
/// d_x-vectors per unit step in time order, and the resampling draws come
/// from derive_seed(seed, {pf_resample}), N uniforms per firing.
class ParticleFilter {
 public:
  ParticleFilter(const SdeModel& model, const ObservationPath& path, int level, int n_particles,
                 ResamplingPolicy policy, std::uint64_t seed);

  /// Resampling decision followed by propagation and weighting of the next
  /// unit block.
  void advance();

  int time() const { return ensemble_.time; }
  const Ensemble& ensemble() const { return ensemble_; }
  FilterRecord record(const TestFunction& phi) const;

 private:
  const SdeModel* model_;
  const ObservationPath* path_;
  ResamplingPolicy policy_;
  Ensemble ensemble_;
  std::vector<RngStream> particle_rng_;
  RngStream resample_rng_;
  bool last_resampled_ = false;

  void weight_current_blocks();
};

FilterOutput pf_run(const SdeModel& model, const ObservationPath& path, int level,
                    int n_particles, int t_max, ResamplingPolicy policy, std::uint64_t seed,
                    const TestFunction& phi);

struct CoupledFilterRecord {
  int t = 0;
  double d_eta_phi = 0.0;    // [eta^l - eta^{l-1}](phi)
  double d_gamma_phi = 0.0;  // [gamma^l - gamma^{l-1}](phi)
  double d_gamma_1 = 0.0;
  double eta_phi_fine = 0.0;
  double eta_phi_coarse = 0.0;
  double log_gamma_1_fine = 0.0;
  double log_gamma_1_coarse = 0.0;
  double ess_min = 0.0;
  bool resampled = false;
};

struct CoupledFilterOutput {
  std::vector<CoupledFilterRecord> records;
  double cost_units = 0.0;  // t_max * N * 2^level (fine grid)
};

/// Coupled particle filter at levels (level, level-1): pairs share Brownian
/// increments through the coupled Euler kernel and resampling indices through
/// the maximal coupling of the two weight PMFs. Both levels always resample
/// together; in ess_threshold mode the minimum of the two ESS values drives
/// the decision.
///
/// Streams: pair i consumes derive_seed(seed, {cpf_particle, i}); coupled
/// index draws come from derive_seed(seed, {cpf_resample}).
class CoupledParticleFilter {
 public:
  CoupledParticleFilter(const SdeModel& model, const ObservationPath& path, int level,
                        int n_particles, ResamplingPolicy policy, std::uint64_t seed);

  void advance();

  int time() const { return fine_.time; }
  const Ensemble& fine() const { return fine_; }
  const Ensemble& coarse() const { return coarse_; }
  CoupledFilterRecord record(const TestFunction& phi) const;
  /// Fraction of pairs whose resampling indices met at the latest firing.
  double last_meet_fraction() const { return last_meet_fraction_; }

 private:
  const SdeModel* model_;
  const ObservationPath* path_;
  ResamplingPolicy policy_;
  Ensemble fine_;
  Ensemble coarse_;
  std::vector<RngStream> pair_rng_;
  RngStream resample_rng_;
  bool last_resampled_ = false;
  double last_meet_fraction_ = 1.0;

  void weight_current_blocks();
};

CoupledFilterOutput cpf_run(const SdeModel& model, const ObservationPath& path, int level,
                            int n_particles, int t_max, ResamplingPolicy policy,
                            std::uint64_t seed, const TestFunction& phi);

}  // namespace zakai

#endif

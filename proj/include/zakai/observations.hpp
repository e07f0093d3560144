#ifndef ZAKAI_OBSERVATIONS_HPP
#define ZAKAI_OBSERVATIONS_HPP

#include <cstdint>
#include <string>

#include "zakai/euler.hpp"
#include "zakai/model.hpp"
#include "zakai/types.hpp"

namespace zakai {

/// The observation record {Y_t} held as increments at the finest available
/// resolution. Coarser-level increments are served by summing fine increments
/// left to right, on demand; levels beyond the stored resolution are an error,
/// never an interpolation. Immutable after construction.
class ObservationPath {
 public:
  /// Under the reference measure the observation process is a standard
  /// Brownian motion, so increments at level l are i.i.d. N(0, 2^{-l} I).
  static ObservationPath simulate(std::uint64_t seed, int horizon, int finest_level, int d_y = 1);

  static ObservationPath load_csv(const std::string& file);
  void save_csv(const std::string& file) const;

  int finest_level() const { return finest_level_; }
  int horizon() const { return horizon_; }
  int d_y() const { return d_y_; }
  std::uint64_t seed() const { return seed_; }

  /// Y_{(k+1)*2^{-level}} - Y_{k*2^{-level}} for level <= finest_level.
  Vector increment(int level, std::int64_t k) const;

  /// All 2^level increments covering the unit interval [p, p+1], one column
  /// per sub-step.
  Matrix unit_increments(int level, int p) const;

  const Matrix& finest_increments() const { return increments_; }

 private:
  ObservationPath() = default;
  void check_level(int level) const;

  int finest_level_ = 0;
  int horizon_ = 0;
  int d_y_ = 1;
  std::uint64_t seed_ = 0;
  Matrix increments_;  // d_y x (horizon * 2^finest_level)
};

/// log G_k^l(x) = h(x).(y_{(k+1)d} - y_{kd}) - (d/2) h(x).h(x), d = 2^{-l}.
/// Equivalently the log density ratio psi(dy; h(x)d, d I) / psi(dy; 0, d I).
double log_weight_g(const SdeModel& model, const ObservationPath& path, int level,
                    std::int64_t k, const Vector& x);

/// Log block weight log G_p^l over one unit interval: the sum of log G over
/// the block's first 2^l states. The terminal state seeds the next block and
/// carries no weight here.
double log_block_weight(const SdeModel& model, const ObservationPath& path, int level, int p,
                        const PathBlock& block);

/// Same weight given increments already gathered for the block's interval
/// (one column per sub-step).
double log_block_weight_with(const SdeModel& model, const Matrix& unit_incs, int level,
                             const PathBlock& block);

/// log Z_T^l of a full discretized trajectory on [0, T], stored as columns
/// x_0, x_{delta}, ..., x_T (T * 2^l + 1 states).
double log_z_discretized(const SdeModel& model, const ObservationPath& path, int level,
                         const Matrix& trajectory);

}  // namespace zakai

#endif

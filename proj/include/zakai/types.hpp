#ifndef ZAKAI_TYPES_HPP
#define ZAKAI_TYPES_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace zakai {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Error categories surfaced by the library. All derive from std::runtime_error
// so callers that do not care about the category can catch one type.

/// Bad configuration input (unknown model name, invalid parameter range).
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// A level finer than the stored data resolution was requested.
struct resolution_error : std::runtime_error {
  explicit resolution_error(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched sizes between coupled objects (blocks, PMFs, trajectories).
struct shape_error : std::runtime_error {
  explicit shape_error(const std::string& what) : std::runtime_error(what) {}
};

/// Total weight collapse: every particle carries zero weight.
struct degeneracy_error : std::runtime_error {
  explicit degeneracy_error(const std::string& what) : std::runtime_error(what) {}
};

/// A model outside the class supported by an exact method.
struct unsupported_model_error : std::runtime_error {
  explicit unsupported_model_error(const std::string& what) : std::runtime_error(what) {}
};

inline double delta_at(int level) { return std::ldexp(1.0, -level); }
inline std::int64_t steps_per_unit(int level) { return std::int64_t{1} << level; }

}  // namespace zakai

#endif

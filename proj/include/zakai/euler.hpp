#ifndef ZAKAI_EULER_HPP
#define ZAKAI_EULER_HPP

#include <utility>

#include "zakai/model.hpp"
#include "zakai/rng.hpp"
#include "zakai/types.hpp"

namespace zakai {

/// One particle's discretized trajectory over a unit time interval at a given
/// level: states x_p, x_{p+delta}, ..., x_{p+1} stored as columns.
struct PathBlock {
  int level = 0;
  int start_time = 0;  // p
  Matrix states;       // d_x x (2^level + 1)

  Eigen::Index substeps() const { return states.cols() - 1; }
  auto state(Eigen::Index k) const { return states.col(k); }
  Vector terminal() const { return states.col(states.cols() - 1); }
};

/// Euler step over one unit of time at step size 2^{-level}, seeded at x:
///   x_{k} = x_{k-1} + b(x_{k-1}) delta + sigma(x_{k-1}) V_k,  V_k ~ N(0, delta I).
///
/// RNG contract: exactly 2^level Gaussian d_x-vectors are drawn from `rng`, one
/// per sub-step in time order. Coupled simulation consumes the identical
/// sequence, so a fine path and a single-level path from equal stream states
/// are bitwise equal.
PathBlock euler_block(const SdeModel& model, int level, const Vector& x, RngStream& rng);

/// Coupled Euler discretizations over one unit interval: the fine path at
/// `level` uses increments V_1, ..., V_{2^level}; the coarse path at level-1
/// uses the pairwise sums V_1+V_2, V_3+V_4, ... of the same draws. Marginally
/// each path is distributed as its single-level kernel.
std::pair<PathBlock, PathBlock> coupled_euler_block(const SdeModel& model, int level,
                                                    const Vector& x_fine, const Vector& x_coarse,
                                                    RngStream& rng);

}  // namespace zakai

#endif

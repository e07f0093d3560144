#include "zakai/euler.hpp"

#include <cmath>

namespace zakai {

PathBlock euler_block(const SdeModel& model, int level, const Vector& x, RngStream& rng) {
  if (level < 0) throw config_error("euler_block: level must be >= 0");
  const std::int64_t n = steps_per_unit(level);
  const double delta = delta_at(level);
  const double sd = std::sqrt(delta);

  PathBlock block;
  block.level = level;
  block.states.resize(model.d_x, n + 1);
  block.states.col(0) = x;

  Vector v(model.d_x);
  for (std::int64_t k = 1; k <= n; ++k) {
    rng.fill_normal(v, sd);
    const Vector prev = block.states.col(k - 1);
    block.states.col(k) = prev + model.drift(prev) * delta + model.diffusion(prev) * v;
  }
  return block;
}

std::pair<PathBlock, PathBlock> coupled_euler_block(const SdeModel& model, int level,
                                                    const Vector& x_fine, const Vector& x_coarse,
                                                    RngStream& rng) {
  if (level < 1) throw config_error("coupled_euler_block: level must be >= 1");
  const std::int64_t n = steps_per_unit(level);
  const double delta = delta_at(level);
  const double sd = std::sqrt(delta);

  // All fine increments are drawn up front, in time order, so the stream
  // consumption matches euler_block at the fine level.
  Matrix v(model.d_x, n);
  for (std::int64_t k = 0; k < n; ++k) rng.fill_normal(v.col(k), sd);

  PathBlock fine;
  fine.level = level;
  fine.states.resize(model.d_x, n + 1);
  fine.states.col(0) = x_fine;
  for (std::int64_t k = 1; k <= n; ++k) {
    const Vector prev = fine.states.col(k - 1);
    fine.states.col(k) = prev + model.drift(prev) * delta + model.diffusion(prev) * v.col(k - 1);
  }

  const double delta_c = delta_at(level - 1);
  PathBlock coarse;
  coarse.level = level - 1;
  coarse.states.resize(model.d_x, n / 2 + 1);
  coarse.states.col(0) = x_coarse;
  for (std::int64_t k = 1; k <= n / 2; ++k) {
    const Vector prev = coarse.states.col(k - 1);
    const Vector w = v.col(2 * k - 2) + v.col(2 * k - 1);
    coarse.states.col(k) = prev + model.drift(prev) * delta_c + model.diffusion(prev) * w;
  }
  return {std::move(fine), std::move(coarse)};
}

}  // namespace zakai

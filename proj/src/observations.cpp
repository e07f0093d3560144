#include "zakai/observations.hpp"

#include <cmath>
#include <fstream>

#include "zakai/csv.hpp"
#include "zakai/rng.hpp"

namespace zakai {

ObservationPath ObservationPath::simulate(std::uint64_t seed, int horizon, int finest_level,
                                          int d_y) {
  if (horizon < 1) throw config_error("simulate: horizon must be >= 1");
  if (finest_level < 0) throw config_error("simulate: finest_level must be >= 0");
  if (d_y < 1) throw config_error("simulate: d_y must be >= 1");

  ObservationPath p;
  p.finest_level_ = finest_level;
  p.horizon_ = horizon;
  p.d_y_ = d_y;
  p.seed_ = seed;

  const std::int64_t n = horizon * steps_per_unit(finest_level);
  const double sd = std::sqrt(delta_at(finest_level));
  p.increments_.resize(d_y, n);
  RngStream rng(derive_seed(seed, {seed_tags::data}));
  for (std::int64_t k = 0; k < n; ++k) rng.fill_normal(p.increments_.col(k), sd);
  return p;
}

void ObservationPath::check_level(int level) const {
  if (level < 0) throw resolution_error("level must be >= 0");
  if (level > finest_level_)
    throw resolution_error("level " + std::to_string(level) + " exceeds stored data resolution " +
                           std::to_string(finest_level_));
}

Vector ObservationPath::increment(int level, std::int64_t k) const {
  check_level(level);
  const std::int64_t n_level = std::int64_t{horizon_} * steps_per_unit(level);
  if (k < 0 || k >= n_level) throw shape_error("increment index out of range");
  const std::int64_t span = steps_per_unit(finest_level_ - level);
  const std::int64_t start = k * span;
  Vector out = Vector::Zero(d_y_);
  for (std::int64_t j = 0; j < span; ++j) out += increments_.col(start + j);
  return out;
}

Matrix ObservationPath::unit_increments(int level, int p) const {
  check_level(level);
  if (p < 0 || p >= horizon_) throw shape_error("unit interval index out of range");
  const std::int64_t n = steps_per_unit(level);
  Matrix out(d_y_, n);
  for (std::int64_t k = 0; k < n; ++k) out.col(k) = increment(level, p * n + k);
  return out;
}

void ObservationPath::save_csv(const std::string& file) const {
  std::ofstream out(file);
  if (!out) throw config_error("cannot open for writing: " + file);
  out << "level,horizon,d_y\n";
  out << finest_level_ << "," << horizon_ << "," << d_y_ << "\n";
  out << "k";
  for (int j = 1; j <= d_y_; ++j) out << ",dy_" << j;
  out << "\n";
  for (Eigen::Index k = 0; k < increments_.cols(); ++k) {
    out << k;
    for (int j = 0; j < d_y_; ++j) out << "," << fmt_g17(increments_(j, k));
    out << "\n";
  }
}

ObservationPath ObservationPath::load_csv(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw config_error("cannot open observation file: " + file);
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"level", "horizon", "d_y"})
    throw config_error("bad observation file header in " + file);
  if (!std::getline(in, line)) throw config_error("missing dimensions row in " + file);
  const auto dims = split_csv_line(line);
  if (dims.size() != 3) throw config_error("bad dimensions row in " + file);

  ObservationPath p;
  p.finest_level_ = std::stoi(dims[0]);
  p.horizon_ = std::stoi(dims[1]);
  p.d_y_ = std::stoi(dims[2]);
  if (!std::getline(in, line)) throw config_error("missing column header in " + file);

  const std::int64_t n = std::int64_t{p.horizon_} * steps_per_unit(p.finest_level_);
  p.increments_.resize(p.d_y_, n);
  std::int64_t k = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != p.d_y_ + 1)
      throw config_error("bad increment row in " + file);
    if (k >= n) throw config_error("too many increment rows in " + file);
    for (int j = 0; j < p.d_y_; ++j) p.increments_(j, k) = std::stod(fields[j + 1]);
    ++k;
  }
  if (k != n) throw config_error("wrong number of increment rows in " + file);
  return p;
}

double log_weight_g(const SdeModel& model, const ObservationPath& path, int level,
                    std::int64_t k, const Vector& x) {
  const Vector dy = path.increment(level, k);
  const Vector hx = model.obs_fn(x);
  const double delta = delta_at(level);
  return hx.dot(dy) - 0.5 * delta * hx.squaredNorm();
}

namespace {

double log_g_with_increment(const SdeModel& model, const Vector& dy, double delta,
                            const Eigen::Ref<const Vector>& x) {
  const Vector hx = model.obs_fn(x);
  return hx.dot(dy) - 0.5 * delta * hx.squaredNorm();
}

}  // namespace

double log_block_weight_with(const SdeModel& model, const Matrix& unit_incs, int level,
                             const PathBlock& block) {
  const std::int64_t n = steps_per_unit(level);
  if (block.level != level) throw shape_error("block level does not match requested level");
  if (block.states.cols() != n + 1) throw shape_error("block has wrong number of states");
  if (unit_incs.cols() != n) throw shape_error("wrong number of increments for block");
  const double delta = delta_at(level);
  double lw = 0.0;
  for (std::int64_t k = 0; k < n; ++k)
    lw += log_g_with_increment(model, unit_incs.col(k), delta, block.states.col(k));
  return lw;
}

double log_block_weight(const SdeModel& model, const ObservationPath& path, int level, int p,
                        const PathBlock& block) {
  if (block.start_time != p) throw shape_error("block start time does not match unit index");
  return log_block_weight_with(model, path.unit_increments(level, p), level, block);
}

double log_z_discretized(const SdeModel& model, const ObservationPath& path, int level,
                         const Matrix& trajectory) {
  const int T = path.horizon();
  const std::int64_t n = steps_per_unit(level);
  if (trajectory.cols() != T * n + 1)
    throw shape_error("trajectory must hold T * 2^l + 1 states");
  double lz = 0.0;
  for (int p = 0; p < T; ++p) {
    PathBlock block;
    block.level = level;
    block.start_time = p;
    block.states = trajectory.middleCols(p * n, n + 1);
    lz += log_block_weight(model, path, level, p, block);
  }
  return lz;
}

}  // namespace zakai

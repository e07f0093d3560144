#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/stats.hpp"
#include "zakai/euler.hpp"

using namespace zakai;
namespace zt = zakai::testing;

namespace {

Vector v1(double x) { return Vector::Constant(1, x); }

SdeModel degenerate_model() {
  SdeModel m;
  m.drift = [](const Vector& x) { return Vector::Zero(x.size()); };
  m.diffusion = [](const Vector&) { return Matrix::Zero(1, 1); };
  m.obs_fn = [](const Vector& x) { return x; };
  m.initial_state = v1(0.0);
  m.name = "degenerate";
  return m;
}

SdeModel unit_noise_model() {
  SdeModel m = degenerate_model();
  m.diffusion = [](const Vector&) { return Matrix::Identity(1, 1); };
  m.name = "unit-noise";
  return m;
}

}  // namespace

TEST_CASE("block shape and seeding state") {
  const SdeModel ou = builtin_model("OU");
  RngStream rng(1);
  const PathBlock block = euler_block(ou, 4, v1(0.3), rng);
  CHECK(block.level == 4);
  CHECK(block.states.cols() == 17);
  CHECK(block.states(0, 0) == 0.3);
}

TEST_CASE("zero drift and diffusion give a constant block") {
  RngStream rng(2);
  const PathBlock block = euler_block(degenerate_model(), 3, v1(1.5), rng);
  CHECK((block.states.array() == 1.5).all());
}

TEST_CASE("OU single step from zero is half the Gaussian draw") {
  // level 0, x = 0: x_1 = 0 + (-0)*1 + 0.5 * V, V the stream's first N(0,1)
  RngStream rng(77);
  const PathBlock block = euler_block(builtin_model("OU"), 0, v1(0.0), rng);
  RngStream replay(77);
  CHECK(block.states(0, 1) == 0.5 * replay.normal());
}

TEST_CASE("terminal mean matches the linear recursion closed form") {
  // OU from x = 1 at level 6: E[x_1] = (1 - delta)^{64}
  const SdeModel ou = builtin_model("OU");
  const int level = 6;
  const int n = 1000000;
  RngStream rng(5);
  std::vector<double> terminal(n);
  for (int i = 0; i < n; ++i) terminal[i] = euler_block(ou, level, v1(1.0), rng).terminal()(0);
  const double expect = std::pow(1.0 - delta_at(level), 64.0);
  const double err = std::abs(zt::mean(terminal) - expect);
  CHECK(err < 3.0 * zt::standard_error(terminal));
}

TEST_CASE("coupled blocks telescope identically for additive noise") {
  // b = 0, sigma = I: both terminal displacements equal the sum of all draws
  const SdeModel m = unit_noise_model();
  RngStream rng(8);
  for (int level : {1, 3, 5}) {
    const auto [fine, coarse] = coupled_euler_block(m, level, v1(0.4), v1(-2.0), rng);
    const double d_fine = fine.terminal()(0) - 0.4;
    const double d_coarse = coarse.terminal()(0) - (-2.0);
    CHECK(d_fine == doctest::Approx(d_coarse).epsilon(1e-14));
  }
}

TEST_CASE("coupled fine path replays the single-level kernel bitwise") {
  const SdeModel m = builtin_model("NonlinearDiffusion");
  for (int level : {1, 2, 5}) {
    RngStream coupled_rng(31 + level);
    RngStream single_rng(31 + level);
    const auto [fine, coarse] = coupled_euler_block(m, level, v1(0.9), v1(0.9), coupled_rng);
    const PathBlock single = euler_block(m, level, v1(0.9), single_rng);
    CHECK((fine.states - single.states).cwiseAbs().maxCoeff() == 0.0);
    CHECK(coarse.level == level - 1);
  }
}

TEST_CASE("coupled level 0 is rejected") {
  RngStream rng(3);
  CHECK_THROWS_AS((void)coupled_euler_block(builtin_model("OU"), 0, v1(0.0), v1(0.0), rng),
                  config_error);
}

TEST_CASE("gaussian consumption is exactly 2^l draws per block") {
  const SdeModel ou = builtin_model("OU");
  RngStream rng(12);
  (void)euler_block(ou, 3, v1(0.0), rng);
  RngStream replay(12);
  Vector sink(1);
  for (int k = 0; k < 8; ++k) replay.fill_normal(sink, 1.0);
  // both streams must now produce the same next value
  CHECK(rng.normal() == replay.normal());
}

TEST_CASE("marginal law preservation of the coupling (two-sample KS)") {
  const SdeModel m = builtin_model("GBM");
  const int level = 3;
  const int n = 100000;
  std::vector<double> coupled_fine(n), coupled_coarse(n), single_fine(n), single_coarse(n);
  RngStream rng_c(41), rng_f(42), rng_g(43);
  for (int i = 0; i < n; ++i) {
    const auto [f, c] = coupled_euler_block(m, level, v1(1.0), v1(1.0), rng_c);
    coupled_fine[i] = f.terminal()(0);
    coupled_coarse[i] = c.terminal()(0);
    single_fine[i] = euler_block(m, level, v1(1.0), rng_f).terminal()(0);
    single_coarse[i] = euler_block(m, level - 1, v1(1.0), rng_g).terminal()(0);
  }
  const double crit = zt::ks_critical_two_sample(1e-3, n, n);
  CHECK(zt::ks_statistic_two_sample(coupled_fine, single_fine) < crit);
  CHECK(zt::ks_statistic_two_sample(coupled_coarse, single_coarse) < crit);
}

TEST_CASE("coupling strong rate on GBM (smoke-scale)") {
  const SdeModel m = builtin_model("GBM");
  const int n = 20000;
  std::vector<double> second_moment;
  RngStream rng(55);
  for (int level = 4; level <= 7; ++level) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto [f, c] = coupled_euler_block(m, level, v1(1.0), v1(1.0), rng);
      const double d = f.terminal()(0) - c.terminal()(0);
      acc += d * d;
    }
    second_moment.push_back(acc / n);
  }
  for (std::size_t i = 0; i + 1 < second_moment.size(); ++i) {
    const double factor = second_moment[i] / second_moment[i + 1];
    CHECK(factor > 1.6);
    CHECK(factor < 2.5);
  }
}

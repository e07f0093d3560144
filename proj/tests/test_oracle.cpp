#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/quadrature.hpp"
#include "support/stats.hpp"
#include "zakai/harness.hpp"
#include "zakai/oracle.hpp"

using namespace zakai;
namespace zt = zakai::testing;

namespace {

double log_normal_pdf(double x, double mu, double var) {
  const double d = x - mu;
  return -0.5 * (std::log(2.0 * M_PI * var) + d * d / var);
}

}  // namespace

TEST_CASE("OU spec coefficients") {
  const auto spec = LinearGaussianSpec::ou(2);
  CHECK(spec.a == doctest::Approx(0.75));
  CHECK(spec.q == doctest::Approx(0.0625));
  CHECK(spec.h == doctest::Approx(0.25));
  CHECK(spec.r == doctest::Approx(0.25));
  CHECK(spec.x0 == 0.0);

  const auto derived = LinearGaussianSpec::for_model(builtin_model("OU"), 2);
  CHECK(derived.a == doctest::Approx(spec.a));
  CHECK(derived.q == doctest::Approx(spec.q));
  CHECK(derived.h == doctest::Approx(spec.h));
  CHECK(derived.r == doctest::Approx(spec.r));
}

TEST_CASE("nonlinear models are rejected") {
  CHECK_THROWS_AS((void)LinearGaussianSpec::for_model(builtin_model("GBM"), 1),
                  unsupported_model_error);
  CHECK_THROWS_AS((void)LinearGaussianSpec::for_model(builtin_model("NonlinearDiffusion"), 1),
                  unsupported_model_error);
  CHECK_THROWS_AS((void)LinearGaussianSpec::for_model(builtin_model("Langevin"), 1),
                  unsupported_model_error);
}

TEST_CASE("zero observation multiplier gives log gamma exactly zero") {
  auto spec = LinearGaussianSpec::ou(3);
  spec.h = 0.0;
  spec.r = delta_at(3);
  const auto path = ObservationPath::simulate(21, 4, 5);
  const auto res = kalman_log_gamma(spec, path, 4);
  CHECK(res.log_gamma_1 == 0.0);
}

TEST_CASE("one-step closed form") {
  // t = 1 at level 1 from x0 = 0: the first increment weights the known state
  // (ratio one), the second weights x_1 ~ N(0, q), so
  // gamma = psi(z_1; 0, h^2 q + r) / psi(z_1; 0, delta).
  const auto path = ObservationPath::simulate(22, 1, 1);
  const auto spec = LinearGaussianSpec::ou(1);
  const auto res = kalman_log_gamma(spec, path, 1);
  const double z1 = path.increment(1, 1)(0);
  const double expect = log_normal_pdf(z1, 0.0, spec.h * spec.h * spec.q + spec.r) -
                        log_normal_pdf(z1, 0.0, delta_at(1));
  CHECK(res.log_gamma_1 == doctest::Approx(expect).epsilon(1e-12));
  CHECK(res.posterior_mean != 0.0);  // data-informed mean of x_1
}

TEST_CASE("kalman agrees with grid quadrature") {
  const auto path = ObservationPath::simulate(7, 2, 4);
  for (int level : {0, 1}) {
    for (int t : {1, 2}) {
      const auto spec = LinearGaussianSpec::ou(level);
      const auto kal = kalman_log_gamma(spec, path, t);
      const auto quad = zt::quadrature_log_gamma(spec, path, t);
      CHECK(kal.log_gamma_1 ==
            doctest::Approx(quad.log_gamma_1).epsilon(1e-10));
      CHECK(kal.posterior_mean == doctest::Approx(quad.posterior_mean).epsilon(1e-8));
    }
  }
}

TEST_CASE("level consistency: successive-level gaps shrink at least like sqrt(delta)") {
  const auto path = ObservationPath::simulate(7, 5, 8);
  std::vector<double> log2_gap, levels;
  double prev = kalman_log_gamma(LinearGaussianSpec::ou(0), path, 5).log_gamma_1;
  for (int level = 1; level <= 7; ++level) {
    const double cur = kalman_log_gamma(LinearGaussianSpec::ou(level), path, 5).log_gamma_1;
    const double gap = std::abs(std::exp(cur) - std::exp(prev));
    if (gap > 0.0) {
      log2_gap.push_back(std::log2(gap));
      levels.push_back(level);
    }
    prev = cur;
  }
  REQUIRE(log2_gap.size() >= 5);
  CHECK(fitted_slope(levels, log2_gap) <= -0.5);
}

TEST_CASE("parameter validation") {
  const auto path = ObservationPath::simulate(1, 2, 2);
  auto spec = LinearGaussianSpec::ou(1);
  CHECK_THROWS_AS((void)kalman_log_gamma(LinearGaussianSpec::ou(3), path, 1), resolution_error);
  CHECK_THROWS_AS((void)kalman_log_gamma(spec, path, 0), config_error);
  CHECK_THROWS_AS((void)kalman_log_gamma(spec, path, 3), config_error);
  spec.q = 0.0;
  CHECK_THROWS_AS((void)kalman_log_gamma(spec, path, 1), config_error);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "support/stats.hpp"
#include "zakai/resampling.hpp"

using namespace zakai;
namespace zt = zakai::testing;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Vector random_pmf(RngStream& rng, int n) {
  Vector p(n);
  for (int i = 0; i < n; ++i) p(i) = -std::log(rng.uniform());
  return p / p.sum();
}

}  // namespace

TEST_CASE("normalize: uniform, frozen arithmetic and shift invariance") {
  CHECK((normalize_log_weights(vec({0, 0, 0, 0})) - vec({0.25, 0.25, 0.25, 0.25}))
            .cwiseAbs()
            .maxCoeff() <= 1e-16);

  const Vector p = normalize_log_weights(vec({std::log(2.0), 0.0, 0.0}));
  CHECK(p(0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(p(1) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(p(2) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(std::abs(p.sum() - 1.0) <= 1e-12);

  const Vector q = normalize_log_weights(vec({std::log(2.0) + 1000, 1000, 1000}));
  CHECK((p - q).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("normalize: probabilities sum to one for random log weights") {
  RngStream rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    Vector lw(32);
    for (int i = 0; i < 32; ++i) lw(i) = 50.0 * (rng.uniform() - 0.5);
    const Vector p = normalize_log_weights(lw);
    CHECK(p.minCoeff() >= 0.0);
    CHECK(std::abs(p.sum() - 1.0) <= 1e-12);
  }
}

TEST_CASE("normalize: total collapse is a degeneracy error") {
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS((void)normalize_log_weights(vec({ninf, ninf, ninf})), degeneracy_error);
  // a single surviving particle is fine
  const Vector p = normalize_log_weights(vec({ninf, 0.0, ninf}));
  CHECK(p(1) == 1.0);
}

TEST_CASE("ess: uniform, degenerate, frozen value and bounds") {
  CHECK(effective_sample_size(vec({0.25, 0.25, 0.25, 0.25})) == doctest::Approx(4.0));
  CHECK(effective_sample_size(vec({1.0, 0.0, 0.0})) == doctest::Approx(1.0));
  CHECK(effective_sample_size(vec({0.5, 0.25, 0.25})) == doctest::Approx(1.0 / 0.375));

  RngStream rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector p = random_pmf(rng, 16);
    const double ess = effective_sample_size(p);
    CHECK(ess >= 1.0 - 1e-12);
    CHECK(ess <= 16.0 + 1e-12);
  }
}

TEST_CASE("multinomial: degenerate pmf and seeded determinism") {
  RngStream rng(3);
  const auto idx = multinomial_indices(rng, vec({0.0, 1.0, 0.0}), 50);
  for (int i : idx) CHECK(i == 1);

  RngStream a(9), b(9);
  const Vector p = vec({0.1, 0.2, 0.3, 0.4});
  CHECK(multinomial_indices(a, p, 100) == multinomial_indices(b, p, 100));
}

TEST_CASE("multinomial: frequencies within 3 SE of the pmf") {
  const Vector p = vec({0.25, 0.25, 0.25, 0.25});
  const int n = 1000000;
  RngStream rng(31);
  std::vector<int> counts(4, 0);
  for (int i : multinomial_indices(rng, p, n)) counts[i]++;
  for (int c = 0; c < 4; ++c) {
    const double se = std::sqrt(p(c) * (1 - p(c)) * n);
    CHECK(std::abs(counts[c] - p(c) * n) < 3.0 * se);
  }
}

TEST_CASE("maximal coupling: identical pmfs always meet") {
  const Vector p = vec({0.3, 0.2, 0.5});
  RngStream rng(7);
  std::vector<int> counts(3, 0);
  for (int trial = 0; trial < 30000; ++trial) {
    const auto [i, j] = maximal_coupling_indices(rng, p, p);
    CHECK(i == j);
    counts[i]++;
  }
  for (int c = 0; c < 3; ++c) {
    const double se = std::sqrt(p(c) * (1 - p(c)) * 30000);
    CHECK(std::abs(counts[c] - p(c) * 30000) < 3.5 * se);
  }
}

TEST_CASE("maximal coupling: disjoint supports never meet") {
  RngStream rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto [i, j] = maximal_coupling_indices(rng, vec({1.0, 0.0}), vec({0.0, 1.0}));
    CHECK(i == 0);
    CHECK(j == 1);
  }
}

TEST_CASE("maximal coupling: exact law of the pinned pair") {
  // r1 = (0.7, 0.3), r2 = (0.4, 0.6): atoms (1,1) w.p. 0.4, (2,2) w.p. 0.3,
  // (1,2) w.p. 0.3
  const Vector r1 = vec({0.7, 0.3});
  const Vector r2 = vec({0.4, 0.6});
  RngStream rng(13);
  const int n = 200000;
  std::map<std::pair<int, int>, int> counts;
  for (int trial = 0; trial < n; ++trial) counts[maximal_coupling_indices(rng, r1, r2)]++;
  CHECK(counts.size() == 3);
  const std::map<std::pair<int, int>, double> expect{
      {{0, 0}, 0.4}, {{1, 1}, 0.3}, {{0, 1}, 0.3}};
  for (const auto& [atom, prob] : expect) {
    const double se = std::sqrt(prob * (1 - prob) * n);
    CHECK(std::abs(counts[atom] - prob * n) < 3.0 * se);
  }
}

TEST_CASE("maximal coupling: marginals and meeting probability for random pmfs") {
  RngStream pmf_rng(101);
  RngStream rng(102);
  for (int size : {2, 8, 64}) {
    for (int pair = 0; pair < 7; ++pair) {
      const Vector r1 = random_pmf(pmf_rng, size);
      const Vector r2 = random_pmf(pmf_rng, size);
      const int n = 100000;
      std::vector<double> counts1(size, 0.0), counts2(size, 0.0);
      int meets = 0;
      for (int trial = 0; trial < n; ++trial) {
        const auto [i, j] = maximal_coupling_indices(rng, r1, r2);
        counts1[i] += 1.0;
        counts2[j] += 1.0;
        meets += (i == j);
      }
      std::vector<double> expect1(size), expect2(size);
      for (int c = 0; c < size; ++c) {
        expect1[c] = r1(c) * n;
        expect2[c] = r2(c) * n;
      }
      const double crit = zt::chi_square_critical(size - 1, 1e-3);
      CHECK(zt::chi_square_statistic(counts1, expect1) < crit);
      CHECK(zt::chi_square_statistic(counts2, expect2) < crit);

      const double rbar = r1.cwiseMin(r2).sum();
      const double se = std::sqrt(rbar * (1 - rbar) * n);
      CHECK(meets >= rbar * n - 3.0 * se);
    }
  }
}

TEST_CASE("maximal coupling: size mismatch is a shape error") {
  RngStream rng(1);
  CHECK_THROWS_AS((void)maximal_coupling_indices(rng, vec({1.0}), vec({0.5, 0.5})), shape_error);
}

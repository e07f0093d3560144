#include "zakai/resampling.hpp"

#include <cmath>
#include <limits>

namespace zakai {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double log_sum_exp(const Eigen::Ref<const Vector>& lw) {
  if (lw.size() == 0) throw shape_error("log_sum_exp: empty input");
  const double m = lw.maxCoeff();
  if (m == kNegInf) return kNegInf;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < lw.size(); ++i) acc += std::exp(lw(i) - m);
  return m + std::log(acc);
}

Vector normalize_log_weights(const Eigen::Ref<const Vector>& lw) {
  const double lse = log_sum_exp(lw);
  if (lse == kNegInf)
    throw degeneracy_error("all particle weights are zero: total weight collapse");
  Vector p(lw.size());
  for (Eigen::Index i = 0; i < lw.size(); ++i) p(i) = std::exp(lw(i) - lse);
  return p;
}

double effective_sample_size(const Eigen::Ref<const Vector>& pmf) {
  return 1.0 / pmf.squaredNorm();
}

namespace {

// Inverse CDF on a cumulative scan. The final interval absorbs any rounding
// shortfall so a uniform close to 1 still maps to a valid index.
int inverse_cdf(double u, const Eigen::Ref<const Vector>& pmf) {
  double acc = 0.0;
  const Eigen::Index n = pmf.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    acc += pmf(i);
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(n - 1);
}

}  // namespace

int categorical_index(RngStream& rng, const Eigen::Ref<const Vector>& pmf) {
  return inverse_cdf(rng.uniform(), pmf);
}

std::vector<int> multinomial_indices(RngStream& rng, const Eigen::Ref<const Vector>& pmf, int n) {
  if (pmf.size() == 0) throw shape_error("multinomial_indices: empty PMF");
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = inverse_cdf(rng.uniform(), pmf);
  return idx;
}

std::pair<int, int> maximal_coupling_indices(RngStream& rng, const Eigen::Ref<const Vector>& r1,
                                             const Eigen::Ref<const Vector>& r2) {
  if (r1.size() != r2.size()) throw shape_error("maximal_coupling_indices: PMF size mismatch");
  if (r1.size() == 0) throw shape_error("maximal_coupling_indices: empty PMFs");

  const Vector overlap = r1.cwiseMin(r2);
  const double rbar = overlap.sum();

  const double u = rng.uniform();
  if (u < rbar) {
    const int i = inverse_cdf(rng.uniform() * rbar, overlap);  // PMF overlap / rbar
    return {i, i};
  }

  // Residual branch; unreachable when rbar >= 1 because u < 1 always. Negative
  // residual entries are floating-point noise from the min subtraction and are
  // clamped to zero before renormalizing.
  Vector res1 = (r1 - overlap).cwiseMax(0.0);
  Vector res2 = (r2 - overlap).cwiseMax(0.0);
  const double s1 = res1.sum();
  const double s2 = res2.sum();
  if (s1 <= 0.0 || s2 <= 0.0) {
    // rbar is 1 up to rounding, so the residual holds no mass; meet instead.
    const int i = inverse_cdf(rng.uniform() * rbar, overlap);
    return {i, i};
  }
  res1 /= s1;
  res2 /= s2;
  const int i = inverse_cdf(rng.uniform(), res1);
  const int j = inverse_cdf(rng.uniform(), res2);
  return {i, j};
}

}  // namespace zakai

#ifndef ZAKAI_ESTIMATORS_HPP
#define ZAKAI_ESTIMATORS_HPP

#include <cstdint>
#include <vector>

#include "zakai/filters.hpp"

namespace zakai {

/// Positive level-randomization PMF P on {0..l_max} with tail sums
/// Q(l) = sum_{q >= l} P(q). Two families:
///   sigma_constant      P(l) prop. 2^{-l} (l+1) (log2(l+2))^2
///   sigma_nonconstant   P(l) prop. 2^{-l(1/2+alpha)} (l+1) (log2(l+2))^2,
///                       alpha in (0, 1/2)
/// both restricted to the truncated support and renormalized.
struct LevelDistribution {
  enum class Kind { sigma_constant, sigma_nonconstant };

  Kind kind = Kind::sigma_constant;
  double alpha = 0.25;
  int l_max = 0;
  Vector pmf;    // P(0..l_max)
  Vector tails;  // Q(0..l_max)

  double p(int l) const { return pmf(l); }
  double q(int l) const { return tails(l); }
  int sample(RngStream& rng) const;
};

LevelDistribution make_level_distribution(LevelDistribution::Kind kind, int l_max,
                                          double alpha = 0.25);

/// MLPF sample sizes for a target accuracy: L = ceil(2 log2(1/eps)) and
///   sigma non-constant  N_l = ceil(eps^{-2} Delta_L^{-1/4} Delta_l^{3/4})
///   sigma constant      N_l = ceil(eps^{-2} (L+1) Delta_l)
/// with unit proportionality constants.
struct LevelAllocation {
  int max_level = 0;
  std::vector<int> n_particles;  // per level 0..max_level
};
LevelAllocation allocate_levels(double epsilon, bool sigma_constant);

struct MlpfRecord {
  int t = 0;
  double eta_phi = 0.0;
  double gamma_phi = 0.0;
  double gamma_1 = 0.0;
};

struct MlpfOutput {
  std::vector<MlpfRecord> records;  // t = 1..t_max
  double cost_units = 0.0;          // t_max * sum_l N_l 2^l
};

/// Multilevel particle filter: one level-0 PF plus independent CPFs at levels
/// 1..L, combined by the telescoping sum. Component l draws its streams from
/// derive_seed(seed, {mlpf_component, l}).
MlpfOutput mlpf_run(const SdeModel& model, const ObservationPath& path, int max_level,
                    const std::vector<int>& n_per_level, int t_max, ResamplingPolicy policy,
                    std::uint64_t seed, const TestFunction& phi);

/// One draw of a randomized unbiased estimator, reported for every integer
/// time up to t_max.
struct UnbiasedEstimate {
  std::vector<double> value_phi;  // index t-1
  std::vector<double> value_one;
  int level_drawn = 0;
  double cost_units = 0.0;  // realized work at t_max
  std::uint64_t seed = 0;
  double elapsed_seconds = 0.0;
};

/// Single-term estimator: draw L ~ P; return Psi^L(phi) / P(L) where Psi^0 is
/// the level-0 PF normalizing-constant estimate and Psi^l (l >= 1) the CPF
/// difference estimate. Realized cost t N 2^L.
UnbiasedEstimate st_estimate(const SdeModel& model, const ObservationPath& path,
                             const LevelDistribution& dist, int n_particles, int t_max,
                             ResamplingPolicy policy, std::uint64_t seed,
                             const TestFunction& phi);

/// Coupled-sum estimator: draw L ~ P; always run the level-0 PF and,
/// independently for l in 1..L, a CPF; return Psi^0 + sum_l Psi^l / Q(l).
/// Realized cost t N (2^{L+1} - 1).
UnbiasedEstimate cs_estimate(const SdeModel& model, const ObservationPath& path,
                             const LevelDistribution& dist, int n_particles, int t_max,
                             ResamplingPolicy policy, std::uint64_t seed,
                             const TestFunction& phi);

enum class UnbiasedKind { single_term, coupled_sum };

/// Expected cost of an M-replicate average at time t:
///   single term   t M N sum_l P(l) 2^l
///   coupled sum   t M N sum_l P(l) (2^{l+1} - 1)
double expected_cost(UnbiasedKind kind, const LevelDistribution& dist, int t, int n_particles,
                     int m_replicates);

struct ReplicateSummary {
  int m = 0;
  std::vector<double> mean_phi;  // per t
  std::vector<double> var_phi;   // sample variance of single draws, per t
  std::vector<double> mean_one;
  std::vector<double> var_one;
  double total_cost = 0.0;     // realized, summed over replicates, at t_max
  double expected_cost = 0.0;  // formula value at t_max
  std::vector<UnbiasedEstimate> draws;
};

/// M independent draws (replicate r seeded from derive_seed(base_seed,
/// {replicate, r})), averaged in replicate order. Draws run in parallel across
/// `workers` threads; results are identical for any worker count.
ReplicateSummary replicate_average(UnbiasedKind kind, const SdeModel& model,
                                   const ObservationPath& path, const LevelDistribution& dist,
                                   int n_particles, int t_max, ResamplingPolicy policy,
                                   int m_replicates, std::uint64_t base_seed,
                                   const TestFunction& phi, int workers = 1);

}  // namespace zakai

#endif

#include "zakai/estimators.hpp"

#include <chrono>
#include <cmath>

#include "zakai/parallel.hpp"

namespace zakai {

int LevelDistribution::sample(RngStream& rng) const {
  const double u = rng.uniform();
  double acc = 0.0;
  for (int l = 0; l <= l_max; ++l) {
    acc += pmf(l);
    if (u < acc) return l;
  }
  return l_max;
}

LevelDistribution make_level_distribution(LevelDistribution::Kind kind, int l_max, double alpha) {
  if (l_max < 1) throw config_error("level distribution requires l_max >= 1");
  if (kind == LevelDistribution::Kind::sigma_nonconstant && !(alpha > 0.0 && alpha < 0.5))
    throw config_error("alpha must lie in (0, 1/2)");

  LevelDistribution dist;
  dist.kind = kind;
  dist.alpha = alpha;
  dist.l_max = l_max;
  dist.pmf.resize(l_max + 1);
  for (int l = 0; l <= l_max; ++l) {
    const double lg = std::log2(static_cast<double>(l + 2));
    const double poly = (l + 1) * lg * lg;
    const double decay = kind == LevelDistribution::Kind::sigma_constant
                             ? delta_at(l)
                             : std::pow(delta_at(l), 0.5 + alpha);
    dist.pmf(l) = decay * poly;
  }
  dist.pmf /= dist.pmf.sum();

  dist.tails.resize(l_max + 1);
  double tail = 0.0;
  for (int l = l_max; l >= 0; --l) {
    tail += dist.pmf(l);
    dist.tails(l) = tail;
  }
  dist.tails(0) = 1.0;
  return dist;
}

LevelAllocation allocate_levels(double epsilon, bool sigma_constant) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw config_error("epsilon must lie in (0, 1)");
  LevelAllocation alloc;
  alloc.max_level = static_cast<int>(std::ceil(2.0 * std::log2(1.0 / epsilon)));
  const double eps2 = 1.0 / (epsilon * epsilon);
  alloc.n_particles.resize(alloc.max_level + 1);
  for (int l = 0; l <= alloc.max_level; ++l) {
    double n;
    if (sigma_constant) {
      n = eps2 * (alloc.max_level + 1) * delta_at(l);
    } else {
      // Delta_L^{-1/4} Delta_l^{3/4} = 2^{(L - 3l)/4}
      n = eps2 * std::exp2((alloc.max_level - 3.0 * l) / 4.0);
    }
    // guard against rounding noise pushing an exact integer over the ceiling
    alloc.n_particles[l] = std::max(1, static_cast<int>(std::ceil(n - 1e-9)));
  }
  return alloc;
}

MlpfOutput mlpf_run(const SdeModel& model, const ObservationPath& path, int max_level,
                    const std::vector<int>& n_per_level, int t_max, ResamplingPolicy policy,
                    std::uint64_t seed, const TestFunction& phi) {
  if (max_level < 0) throw config_error("mlpf_run: max_level must be >= 0");
  if (static_cast<int>(n_per_level.size()) != max_level + 1)
    throw config_error("mlpf_run: need one sample size per level 0..L");

  MlpfOutput out;
  out.records.resize(t_max);
  for (int t = 1; t <= t_max; ++t) out.records[t - 1].t = t;

  const FilterOutput base = pf_run(model, path, 0, n_per_level[0], t_max, policy,
                                   derive_seed(seed, {seed_tags::mlpf_component, 0}), phi);
  for (int t = 1; t <= t_max; ++t) {
    auto& rec = out.records[t - 1];
    const auto& b = base.records[t - 1];
    rec.eta_phi = b.eta_phi;
    rec.gamma_phi = b.gamma_phi;
    rec.gamma_1 = std::exp(b.log_gamma_1);
  }
  out.cost_units = base.cost_units;

  for (int l = 1; l <= max_level; ++l) {
    const CoupledFilterOutput diff =
        cpf_run(model, path, l, n_per_level[l], t_max, policy,
                derive_seed(seed, {seed_tags::mlpf_component, static_cast<std::uint64_t>(l)}),
                phi);
    for (int t = 1; t <= t_max; ++t) {
      auto& rec = out.records[t - 1];
      const auto& d = diff.records[t - 1];
      rec.eta_phi += d.d_eta_phi;
      rec.gamma_phi += d.d_gamma_phi;
      rec.gamma_1 += d.d_gamma_1;
    }
    out.cost_units += diff.cost_units;
  }
  return out;
}

namespace {

void check_support(const LevelDistribution& dist, const ObservationPath& path) {
  if (dist.l_max > path.finest_level())
    throw resolution_error("level distribution support exceeds data resolution");
}

}  // namespace

UnbiasedEstimate st_estimate(const SdeModel& model, const ObservationPath& path,
                             const LevelDistribution& dist, int n_particles, int t_max,
                             ResamplingPolicy policy, std::uint64_t seed,
                             const TestFunction& phi) {
  check_support(dist, path);
  const auto t0 = std::chrono::steady_clock::now();

  RngStream level_rng(derive_seed(seed, {seed_tags::st_level}));
  const int level = dist.sample(level_rng);
  const double inv_p = 1.0 / dist.p(level);

  UnbiasedEstimate est;
  est.seed = seed;
  est.level_drawn = level;
  est.value_phi.resize(t_max);
  est.value_one.resize(t_max);

  const std::uint64_t run_seed = derive_seed(seed, {seed_tags::st_run});
  if (level == 0) {
    const FilterOutput pf = pf_run(model, path, 0, n_particles, t_max, policy, run_seed, phi);
    for (int t = 1; t <= t_max; ++t) {
      est.value_phi[t - 1] = pf.records[t - 1].gamma_phi * inv_p;
      est.value_one[t - 1] = std::exp(pf.records[t - 1].log_gamma_1) * inv_p;
    }
  } else {
    const CoupledFilterOutput cpf =
        cpf_run(model, path, level, n_particles, t_max, policy, run_seed, phi);
    for (int t = 1; t <= t_max; ++t) {
      est.value_phi[t - 1] = cpf.records[t - 1].d_gamma_phi * inv_p;
      est.value_one[t - 1] = cpf.records[t - 1].d_gamma_1 * inv_p;
    }
  }
  est.cost_units = static_cast<double>(t_max) * n_particles * steps_per_unit(level);
  est.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return est;
}

UnbiasedEstimate cs_estimate(const SdeModel& model, const ObservationPath& path,
                             const LevelDistribution& dist, int n_particles, int t_max,
                             ResamplingPolicy policy, std::uint64_t seed,
                             const TestFunction& phi) {
  check_support(dist, path);
  const auto t0 = std::chrono::steady_clock::now();

  RngStream level_rng(derive_seed(seed, {seed_tags::cs_level}));
  const int level = dist.sample(level_rng);

  UnbiasedEstimate est;
  est.seed = seed;
  est.level_drawn = level;
  est.value_phi.assign(t_max, 0.0);
  est.value_one.assign(t_max, 0.0);

  const FilterOutput pf = pf_run(model, path, 0, n_particles, t_max, policy,
                                 derive_seed(seed, {seed_tags::cs_run, 0}), phi);
  for (int t = 1; t <= t_max; ++t) {
    est.value_phi[t - 1] = pf.records[t - 1].gamma_phi;
    est.value_one[t - 1] = std::exp(pf.records[t - 1].log_gamma_1);
  }

  double cost = static_cast<double>(t_max) * n_particles;
  for (int l = 1; l <= level; ++l) {
    const CoupledFilterOutput cpf =
        cpf_run(model, path, l, n_particles, t_max, policy,
                derive_seed(seed, {seed_tags::cs_run, static_cast<std::uint64_t>(l)}), phi);
    const double inv_q = 1.0 / dist.q(l);
    for (int t = 1; t <= t_max; ++t) {
      est.value_phi[t - 1] += cpf.records[t - 1].d_gamma_phi * inv_q;
      est.value_one[t - 1] += cpf.records[t - 1].d_gamma_1 * inv_q;
    }
    cost += static_cast<double>(t_max) * n_particles * steps_per_unit(l);
  }
  est.cost_units = cost;
  est.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return est;
}

double expected_cost(UnbiasedKind kind, const LevelDistribution& dist, int t, int n_particles,
                     int m_replicates) {
  double per_draw = 0.0;
  for (int l = 0; l <= dist.l_max; ++l) {
    const double work = kind == UnbiasedKind::single_term
                            ? static_cast<double>(steps_per_unit(l))
                            : static_cast<double>(2 * steps_per_unit(l) - 1);
    per_draw += dist.p(l) * work;
  }
  return static_cast<double>(t) * m_replicates * n_particles * per_draw;
}

ReplicateSummary replicate_average(UnbiasedKind kind, const SdeModel& model,
                                   const ObservationPath& path, const LevelDistribution& dist,
                                   int n_particles, int t_max, ResamplingPolicy policy,
                                   int m_replicates, std::uint64_t base_seed,
                                   const TestFunction& phi, int workers) {
  if (m_replicates < 1) throw config_error("replicate_average: M must be >= 1");

  ReplicateSummary summary;
  summary.m = m_replicates;
  summary.draws.resize(m_replicates);
  parallel_for(m_replicates, workers, [&](int r) {
    const std::uint64_t seed =
        derive_seed(base_seed, {seed_tags::replicate, static_cast<std::uint64_t>(r)});
    summary.draws[r] = kind == UnbiasedKind::single_term
                           ? st_estimate(model, path, dist, n_particles, t_max, policy, seed, phi)
                           : cs_estimate(model, path, dist, n_particles, t_max, policy, seed, phi);
  });

  summary.mean_phi.assign(t_max, 0.0);
  summary.var_phi.assign(t_max, 0.0);
  summary.mean_one.assign(t_max, 0.0);
  summary.var_one.assign(t_max, 0.0);
  for (const auto& d : summary.draws) {
    summary.total_cost += d.cost_units;
    for (int t = 0; t < t_max; ++t) {
      summary.mean_phi[t] += d.value_phi[t];
      summary.mean_one[t] += d.value_one[t];
    }
  }
  for (int t = 0; t < t_max; ++t) {
    summary.mean_phi[t] /= m_replicates;
    summary.mean_one[t] /= m_replicates;
  }
  if (m_replicates > 1) {
    for (const auto& d : summary.draws) {
      for (int t = 0; t < t_max; ++t) {
        const double dp = d.value_phi[t] - summary.mean_phi[t];
        const double d1 = d.value_one[t] - summary.mean_one[t];
        summary.var_phi[t] += dp * dp;
        summary.var_one[t] += d1 * d1;
      }
    }
    for (int t = 0; t < t_max; ++t) {
      summary.var_phi[t] /= (m_replicates - 1);
      summary.var_one[t] /= (m_replicates - 1);
    }
  }
  summary.expected_cost = expected_cost(kind, dist, t_max, n_particles, m_replicates);
  return summary;
}

}  // namespace zakai

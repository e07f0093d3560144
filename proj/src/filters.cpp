#include "zakai/filters.hpp"

#include <cmath>

namespace zakai {

ResamplingPolicy ResamplingPolicy::parse(const std::string& text) {
  if (text == "every" || text == "every_unit") return every_unit();
  if (text.rfind("ess:", 0) == 0) {
    const double f = std::stod(text.substr(4));
    if (!(f > 0.0 && f <= 1.0))
      throw config_error("resampling threshold fraction must be in (0, 1]: " + text);
    return ess(f);
  }
  if (text == "ess") return ess();
  throw config_error("unknown resampling policy: " + text + " (expected 'every' or 'ess:F')");
}

std::string ResamplingPolicy::to_string() const {
  if (mode == Mode::every_unit) return "every";
  return "ess:" + std::to_string(threshold_fraction);
}

TestFunction parse_phi(const std::string& name) {
  if (name == "identity") return phi_identity();
  if (name == "one") return phi_one();
  throw config_error("unknown test function: " + name + " (expected 'identity' or 'one')");
}

// ---------------------------------------------------------------------------
// Single-level particle filter
// ---------------------------------------------------------------------------

ParticleFilter::ParticleFilter(const SdeModel& model, const ObservationPath& path, int level,
                               int n_particles, ResamplingPolicy policy, std::uint64_t seed)
    : model_(&model), path_(&path), policy_(policy), resample_rng_(derive_seed(seed, {seed_tags::pf_resample})) {
  if (n_particles < 1) throw config_error("n_particles must be >= 1");
  if (level > path.finest_level())
    throw resolution_error("filter level exceeds data resolution");

  ensemble_.level = level;
  ensemble_.blocks.resize(n_particles);
  ensemble_.cumulative_log_weights = Vector::Zero(n_particles);

  particle_rng_.reserve(n_particles);
  for (int i = 0; i < n_particles; ++i)
    particle_rng_.emplace_back(derive_seed(seed, {seed_tags::pf_particle, static_cast<std::uint64_t>(i)}));

  for (int i = 0; i < n_particles; ++i) {
    ensemble_.blocks[i] = euler_block(model, level, model.initial_state, particle_rng_[i]);
    ensemble_.blocks[i].start_time = 0;
  }
  ensemble_.time = 1;
  weight_current_blocks();
}

void ParticleFilter::weight_current_blocks() {
  const int p = ensemble_.time - 1;
  const Matrix incs = path_->unit_increments(ensemble_.level, p);
  for (int i = 0; i < ensemble_.size(); ++i)
    ensemble_.cumulative_log_weights(i) +=
        log_block_weight_with(*model_, incs, ensemble_.level, ensemble_.blocks[i]);
}

void ParticleFilter::advance() {
  const int n = ensemble_.size();
  if (ensemble_.time >= path_->horizon())
    throw config_error("advance would exceed the data horizon");

  const Vector pmf = normalize_log_weights(ensemble_.cumulative_log_weights);
  last_resampled_ = policy_.fires(effective_sample_size(pmf), n);

  std::vector<Vector> seeds(n);
  if (last_resampled_) {
    ensemble_.log_gamma_running +=
        log_sum_exp(ensemble_.cumulative_log_weights) - std::log(static_cast<double>(n));
    const std::vector<int> idx = multinomial_indices(resample_rng_, pmf, n);
    for (int i = 0; i < n; ++i) seeds[i] = ensemble_.blocks[idx[i]].terminal();
    ensemble_.cumulative_log_weights.setZero();
  } else {
    for (int i = 0; i < n; ++i) seeds[i] = ensemble_.blocks[i].terminal();
  }

  for (int i = 0; i < n; ++i) {
    ensemble_.blocks[i] = euler_block(*model_, ensemble_.level, seeds[i], particle_rng_[i]);
    ensemble_.blocks[i].start_time = ensemble_.time;
  }
  ensemble_.time += 1;
  weight_current_blocks();
}

FilterRecord ParticleFilter::record(const TestFunction& phi) const {
  const int n = ensemble_.size();
  const Vector pmf = normalize_log_weights(ensemble_.cumulative_log_weights);

  FilterRecord rec;
  rec.t = ensemble_.time;
  rec.ess = effective_sample_size(pmf);
  rec.resampled = last_resampled_;
  double eta = 0.0;
  for (int i = 0; i < n; ++i) eta += pmf(i) * phi(ensemble_.blocks[i].terminal());
  rec.eta_phi = eta;
  rec.log_gamma_1 = ensemble_.log_gamma_running +
                    log_sum_exp(ensemble_.cumulative_log_weights) -
                    std::log(static_cast<double>(n));
  rec.gamma_phi = std::exp(rec.log_gamma_1) * eta;
  return rec;
}

FilterOutput pf_run(const SdeModel& model, const ObservationPath& path, int level,
                    int n_particles, int t_max, ResamplingPolicy policy, std::uint64_t seed,
                    const TestFunction& phi) {
  if (t_max < 1) throw config_error("t_max must be >= 1");
  if (t_max > path.horizon()) throw config_error("t_max exceeds the data horizon");

  ParticleFilter pf(model, path, level, n_particles, policy, seed);
  FilterOutput out;
  out.records.reserve(t_max);
  out.records.push_back(pf.record(phi));
  for (int t = 2; t <= t_max; ++t) {
    pf.advance();
    out.records.push_back(pf.record(phi));
  }
  out.cost_units = static_cast<double>(t_max) * n_particles * steps_per_unit(level);
  return out;
}

// ---------------------------------------------------------------------------
// Coupled particle filter
// ---------------------------------------------------------------------------

CoupledParticleFilter::CoupledParticleFilter(const SdeModel& model, const ObservationPath& path,
                                             int level, int n_particles, ResamplingPolicy policy,
                                             std::uint64_t seed)
    : model_(&model), path_(&path), policy_(policy), resample_rng_(derive_seed(seed, {seed_tags::cpf_resample})) {
  if (level < 1) throw config_error("coupled filter requires level >= 1");
  if (n_particles < 1) throw config_error("n_particles must be >= 1");
  if (level > path.finest_level())
    throw resolution_error("filter level exceeds data resolution");

  fine_.level = level;
  coarse_.level = level - 1;
  fine_.blocks.resize(n_particles);
  coarse_.blocks.resize(n_particles);
  fine_.cumulative_log_weights = Vector::Zero(n_particles);
  coarse_.cumulative_log_weights = Vector::Zero(n_particles);

  pair_rng_.reserve(n_particles);
  for (int i = 0; i < n_particles; ++i)
    pair_rng_.emplace_back(derive_seed(seed, {seed_tags::cpf_particle, static_cast<std::uint64_t>(i)}));

  for (int i = 0; i < n_particles; ++i) {
    auto [f, c] =
        coupled_euler_block(model, level, model.initial_state, model.initial_state, pair_rng_[i]);
    f.start_time = 0;
    c.start_time = 0;
    fine_.blocks[i] = std::move(f);
    coarse_.blocks[i] = std::move(c);
  }
  fine_.time = coarse_.time = 1;
  weight_current_blocks();
}

void CoupledParticleFilter::weight_current_blocks() {
  const int p = fine_.time - 1;
  const Matrix incs_f = path_->unit_increments(fine_.level, p);
  const Matrix incs_c = path_->unit_increments(coarse_.level, p);
  for (int i = 0; i < fine_.size(); ++i) {
    fine_.cumulative_log_weights(i) +=
        log_block_weight_with(*model_, incs_f, fine_.level, fine_.blocks[i]);
    coarse_.cumulative_log_weights(i) +=
        log_block_weight_with(*model_, incs_c, coarse_.level, coarse_.blocks[i]);
  }
}

void CoupledParticleFilter::advance() {
  const int n = fine_.size();
  if (fine_.time >= path_->horizon())
    throw config_error("advance would exceed the data horizon");

  const Vector pmf_f = normalize_log_weights(fine_.cumulative_log_weights);
  const Vector pmf_c = normalize_log_weights(coarse_.cumulative_log_weights);
  const double ess_min =
      std::min(effective_sample_size(pmf_f), effective_sample_size(pmf_c));
  last_resampled_ = policy_.fires(ess_min, n);

  std::vector<Vector> seeds_f(n);
  std::vector<Vector> seeds_c(n);
  if (last_resampled_) {
    const double log_n = std::log(static_cast<double>(n));
    fine_.log_gamma_running += log_sum_exp(fine_.cumulative_log_weights) - log_n;
    coarse_.log_gamma_running += log_sum_exp(coarse_.cumulative_log_weights) - log_n;
    int meets = 0;
    for (int i = 0; i < n; ++i) {
      const auto [a, b] = maximal_coupling_indices(resample_rng_, pmf_f, pmf_c);
      meets += (a == b);
      seeds_f[i] = fine_.blocks[a].terminal();
      seeds_c[i] = coarse_.blocks[b].terminal();
    }
    last_meet_fraction_ = static_cast<double>(meets) / n;
    fine_.cumulative_log_weights.setZero();
    coarse_.cumulative_log_weights.setZero();
  } else {
    for (int i = 0; i < n; ++i) {
      seeds_f[i] = fine_.blocks[i].terminal();
      seeds_c[i] = coarse_.blocks[i].terminal();
    }
  }

  for (int i = 0; i < n; ++i) {
    auto [f, c] = coupled_euler_block(*model_, fine_.level, seeds_f[i], seeds_c[i], pair_rng_[i]);
    f.start_time = fine_.time;
    c.start_time = fine_.time;
    fine_.blocks[i] = std::move(f);
    coarse_.blocks[i] = std::move(c);
  }
  fine_.time += 1;
  coarse_.time += 1;
  weight_current_blocks();
}

CoupledFilterRecord CoupledParticleFilter::record(const TestFunction& phi) const {
  const int n = fine_.size();
  const double log_n = std::log(static_cast<double>(n));
  const Vector pmf_f = normalize_log_weights(fine_.cumulative_log_weights);
  const Vector pmf_c = normalize_log_weights(coarse_.cumulative_log_weights);

  CoupledFilterRecord rec;
  rec.t = fine_.time;
  rec.resampled = last_resampled_;
  rec.ess_min = std::min(effective_sample_size(pmf_f), effective_sample_size(pmf_c));

  double eta_f = 0.0;
  double eta_c = 0.0;
  for (int i = 0; i < n; ++i) {
    eta_f += pmf_f(i) * phi(fine_.blocks[i].terminal());
    eta_c += pmf_c(i) * phi(coarse_.blocks[i].terminal());
  }
  rec.eta_phi_fine = eta_f;
  rec.eta_phi_coarse = eta_c;
  rec.log_gamma_1_fine = fine_.log_gamma_running +
                         log_sum_exp(fine_.cumulative_log_weights) - log_n;
  rec.log_gamma_1_coarse = coarse_.log_gamma_running +
                           log_sum_exp(coarse_.cumulative_log_weights) - log_n;
  rec.d_eta_phi = eta_f - eta_c;
  const double g_f = std::exp(rec.log_gamma_1_fine);
  const double g_c = std::exp(rec.log_gamma_1_coarse);
  rec.d_gamma_1 = g_f - g_c;
  rec.d_gamma_phi = g_f * eta_f - g_c * eta_c;
  return rec;
}

CoupledFilterOutput cpf_run(const SdeModel& model, const ObservationPath& path, int level,
                            int n_particles, int t_max, ResamplingPolicy policy,
                            std::uint64_t seed, const TestFunction& phi) {
  if (t_max < 1) throw config_error("t_max must be >= 1");
  if (t_max > path.horizon()) throw config_error("t_max exceeds the data horizon");

  CoupledParticleFilter cpf(model, path, level, n_particles, policy, seed);
  CoupledFilterOutput out;
  out.records.reserve(t_max);
  out.records.push_back(cpf.record(phi));
  for (int t = 2; t <= t_max; ++t) {
    cpf.advance();
    out.records.push_back(cpf.record(phi));
  }
  out.cost_units = static_cast<double>(t_max) * n_particles * steps_per_unit(level);
  return out;
}

}  // namespace zakai

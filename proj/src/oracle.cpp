#include "zakai/oracle.hpp"

#include <cmath>

namespace zakai {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double log_normal_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * (kLog2Pi + std::log(var) + d * d / var);
}

}  // namespace

LinearGaussianSpec LinearGaussianSpec::ou(int level) {
  const double delta = delta_at(level);
  LinearGaussianSpec s;
  s.a = 1.0 - delta;
  s.q = 0.25 * delta;
  s.h = delta;
  s.r = delta;
  s.x0 = 0.0;
  s.level = level;
  return s;
}

LinearGaussianSpec LinearGaussianSpec::for_model(const SdeModel& model, int level) {
  if (model.d_x != 1 || model.d_y != 1)
    throw unsupported_model_error("oracle supports scalar models only");

  auto scalar = [](const Vector& v) { return v(0); };
  Vector x(1);

  x(0) = 0.0;
  if (std::abs(scalar(model.drift(x))) > 1e-12)
    throw unsupported_model_error("oracle requires drift with b(0) = 0");
  x(0) = 1.0;
  const double slope = scalar(model.drift(x));
  const double sigma0 = model.diffusion(x)(0, 0);
  for (double probe : {-2.0, -0.5, 0.5, 2.0}) {
    x(0) = probe;
    if (std::abs(scalar(model.drift(x)) - slope * probe) > 1e-12 * (1.0 + std::abs(probe)))
      throw unsupported_model_error("oracle requires linear drift");
    if (std::abs(model.diffusion(x)(0, 0) - sigma0) > 1e-12)
      throw unsupported_model_error("oracle requires constant diffusion");
    if (std::abs(scalar(model.obs_fn(x)) - probe) > 1e-12)
      throw unsupported_model_error("oracle requires identity observation function");
  }

  const double delta = delta_at(level);
  LinearGaussianSpec s;
  s.a = 1.0 + slope * delta;
  s.q = sigma0 * sigma0 * delta;
  s.h = delta;
  s.r = delta;
  s.x0 = model.initial_state(0);
  s.level = level;
  return s;
}

KalmanGammaResult kalman_log_gamma(const LinearGaussianSpec& spec, const ObservationPath& path,
                                   int t) {
  if (spec.q <= 0.0 || spec.r <= 0.0)
    throw config_error("kalman_log_gamma: noise variances must be positive");
  if (spec.level > path.finest_level())
    throw resolution_error("oracle level exceeds data resolution");
  if (t < 1 || t > path.horizon()) throw config_error("kalman_log_gamma: t out of range");

  const double delta = delta_at(spec.level);
  const std::int64_t n_steps = t * steps_per_unit(spec.level);

  double mean = spec.x0;
  double var = 0.0;
  double log_gamma = 0.0;
  for (std::int64_t k = 0; k < n_steps; ++k) {
    const double z = path.increment(spec.level, k)(0);
    // Update with the increment measuring x_k, against the reference density.
    const double s = spec.h * spec.h * var + spec.r;
    log_gamma += log_normal_pdf(z, spec.h * mean, s) - log_normal_pdf(z, 0.0, delta);
    const double gain = var * spec.h / s;
    mean += gain * (z - spec.h * mean);
    var -= gain * spec.h * var;
    // Predict x_{k+1}.
    mean = spec.a * mean;
    var = spec.a * spec.a * var + spec.q;
  }

  KalmanGammaResult res;
  res.log_gamma_1 = log_gamma;
  res.posterior_mean = mean;
  res.gamma_id = std::exp(log_gamma) * mean;
  return res;
}

}  // namespace zakai

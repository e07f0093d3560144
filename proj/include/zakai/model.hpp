#ifndef ZAKAI_MODEL_HPP
#define ZAKAI_MODEL_HPP

#include <functional>
#include <string>
#include <vector>

#include "zakai/types.hpp"

namespace zakai {

/// A partially observed diffusion: signal dX = b(X)dt + sigma(X)dW observed
/// through dY = h(X)dt + dB. Immutable after construction; safe to share
/// across threads.
///
/// Models are not validated against boundedness/Lipschitz assumptions at
/// runtime: the builtin GBM model already has unbounded coefficients and is
/// used regardless. Ellipticity of sigma*sigma' can be probed on a grid with
/// min_diffusion_eigenvalue().
struct SdeModel {
  int d_x = 1;
  int d_y = 1;
  std::function<Vector(const Vector&)> drift;           // b
  std::function<Matrix(const Vector&)> diffusion;       // sigma, d_x x d_x
  std::function<Vector(const Vector&)> obs_fn;          // h
  Vector initial_state;                                 // x_*
  bool sigma_constant = false;                          // drives allocation / P(l) choice
  std::string name;
};

enum class BuiltinModel { OU, Langevin, GBM, NonlinearDiffusion };

/// The four benchmark diffusions, all scalar with h(x) = x:
///   OU                  b(x) = -x,           sigma = 0.5,              x_* = 0
///   Langevin            b(x) = (log f)'(x)/2 for f the student-t(10) pdf,
///                                            sigma = 0.5,              x_* = 0
///   GBM                 b(x) = 0.05 x,       sigma(x) = 0.2 x,         x_* = 1
///   NonlinearDiffusion  b(x) = -x,           sigma(x) = 1/sqrt(1+x^2), x_* = 0
SdeModel builtin_model(BuiltinModel which);

/// Lookup by name ("OU", "Langevin", "GBM", "NonlinearDiffusion").
/// Throws config_error for unknown names.
SdeModel builtin_model(const std::string& name);

/// Smallest eigenvalue of a(x) = sigma(x) sigma(x)' over the given states.
/// A positive lower bound over a representative grid is the practical check
/// of uniform ellipticity.
double min_diffusion_eigenvalue(const SdeModel& model, const std::vector<Vector>& grid);

}  // namespace zakai

#endif

#include "zakai/model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace zakai {

namespace {

SdeModel scalar_model(std::string name, std::function<double(double)> b,
                      std::function<double(double)> s, double x0, bool sigma_constant) {
  SdeModel m;
  m.d_x = 1;
  m.d_y = 1;
  m.name = std::move(name);
  m.sigma_constant = sigma_constant;
  m.drift = [b = std::move(b)](const Vector& x) {
    Vector out(1);
    out(0) = b(x(0));
    return out;
  };
  m.diffusion = [s = std::move(s)](const Vector& x) {
    Matrix out(1, 1);
    out(0, 0) = s(x(0));
    return out;
  };
  m.obs_fn = [](const Vector& x) { return x; };
  m.initial_state = Vector::Constant(1, x0);
  return m;
}

}  // namespace

SdeModel builtin_model(BuiltinModel which) {
  switch (which) {
    case BuiltinModel::OU:
      return scalar_model(
          "OU", [](double x) { return -x; }, [](double) { return 0.5; }, 0.0, true);
    case BuiltinModel::Langevin: {
      // b(x) = (1/2) d/dx log f(x) for f the student-t density with nu = 10:
      // log f(x) = const - ((nu+1)/2) log(1 + x^2/nu), so b(x) = -(nu+1)x / (2(nu+x^2)).
      constexpr double nu = 10.0;
      return scalar_model(
          "Langevin", [](double x) { return -(nu + 1.0) * x / (2.0 * (nu + x * x)); },
          [](double) { return 0.5; }, 0.0, true);
    }
    case BuiltinModel::GBM:
      return scalar_model(
          "GBM", [](double x) { return 0.05 * x; }, [](double x) { return 0.2 * x; }, 1.0, false);
    case BuiltinModel::NonlinearDiffusion:
      return scalar_model(
          "NonlinearDiffusion", [](double x) { return -x; },
          [](double x) { return 1.0 / std::sqrt(1.0 + x * x); }, 0.0, false);
  }
  throw config_error("unknown builtin model enum value");
}

SdeModel builtin_model(const std::string& name) {
  if (name == "OU") return builtin_model(BuiltinModel::OU);
  if (name == "Langevin") return builtin_model(BuiltinModel::Langevin);
  if (name == "GBM") return builtin_model(BuiltinModel::GBM);
  if (name == "NonlinearDiffusion") return builtin_model(BuiltinModel::NonlinearDiffusion);
  throw config_error("unknown model name: " + name +
                     " (expected OU, Langevin, GBM or NonlinearDiffusion)");
}

double min_diffusion_eigenvalue(const SdeModel& model, const std::vector<Vector>& grid) {
  double min_ev = std::numeric_limits<double>::infinity();
  for (const Vector& x : grid) {
    const Matrix sigma = model.diffusion(x);
    if (sigma.rows() != model.d_x || sigma.cols() != model.d_x)
      throw shape_error("diffusion(x) must be d_x x d_x");
    const Matrix a = sigma * sigma.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    min_ev = std::min(min_ev, es.eigenvalues().minCoeff());
  }
  return min_ev;
}

}  // namespace zakai

#include "relaxcat/models.hpp"

#include <cmath>
#include <sstream>

#include "relaxcat/errors.hpp"

namespace relaxcat {

namespace {

Matrix identity(int dim) {
  Matrix m{};
  for (int i = 0; i < dim; ++i) m[i][i] = 1.0;
  return m;
}

double residual_norm(const State& r, int dim) {
  double n = 0.0;
  for (int k = 0; k < dim; ++k) n = std::fmax(n, std::fabs(r[k]));
  return n;
}

}  // namespace

// ---------------------------------------------------------------------------
// Generic pieces

State solve_dense(const Matrix& a, const State& rhs, int dim) {
  // Gaussian elimination with partial pivoting; dim <= 3.
  Matrix m = a;
  State r = rhs;
  double det = 1.0;
  for (int col = 0; col < dim; ++col) {
    int piv = col;
    for (int row = col + 1; row < dim; ++row)
      if (std::fabs(m[row][col]) > std::fabs(m[piv][col])) piv = row;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      std::swap(r[piv], r[col]);
      det = -det;
    }
    det *= m[col][col];
    if (m[col][col] == 0.0) break;
    for (int row = col + 1; row < dim; ++row) {
      const double f = m[row][col] / m[col][col];
      for (int k = col; k < dim; ++k) m[row][k] -= f * m[col][k];
      r[row] -= f * r[col];
    }
  }
  if (!(std::fabs(det) >= 1e-300)) throw StepError("singular local matrix", -1);
  State x;
  for (int row = dim - 1; row >= 0; --row) {
    double s = r[row];
    for (int k = row + 1; k < dim; ++k) s -= m[row][k] * x[k];
    x[row] = s / m[row][row];
  }
  return x;
}

State newton_implicit_solve(const Model& model, const State& b, const Matrix& scale,
                            double eps) {
  const int dim = model.dim();
  const double tol = 1e-13 * (1.0 + max_abs(b));
  auto residual = [&](const State& u) { return u - scale * model.source(u, eps) - b; };

  State u = b;
  State g = residual(u);
  double gnorm = residual_norm(g, dim);
  for (int it = 0; it < 50 && gnorm > tol; ++it) {
    const Matrix js = model.source_jacobian(u, eps);
    Matrix jac = identity(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) jac[i][j] -= scale[i][k] * js[k][j];
    const State step = solve_dense(jac, g, dim);
    double damping = 1.0;
    State trial = u - step;
    State gt = residual(trial);
    double tnorm = residual_norm(gt, dim);
    while (!(tnorm < gnorm) && damping > 1e-4) {
      damping *= 0.5;
      trial = u - damping * step;
      gt = residual(trial);
      tnorm = residual_norm(gt, dim);
    }
    if (!std::isfinite(tnorm)) break;
    u = trial;
    g = gt;
    gnorm = tnorm;
  }
  if (!(gnorm <= tol)) {
    std::ostringstream msg;
    msg << "implicit source solve did not converge (residual " << gnorm << ")";
    throw StiffSolveError(msg.str(), gnorm);
  }
  return u;
}

State Model::solve_implicit_source(const State& b, double dt, double eps) const {
  if (dt == 0.0) return b;
  Matrix scale{};
  for (int i = 0; i < dim(); ++i) scale[i][i] = dt;
  return newton_implicit_solve(*this, b, scale, eps);
}

bool Model::admissible(const State& u) const {
  if (!all_finite(u)) return false;
  if (auto k = positivity_component()) return u[*k] > 0.0;
  return true;
}

std::vector<double> Model::relaxed_limit_flux(const std::vector<double>&) const {
  throw ConfigError("relaxed limit flux is not available for model " + name());
}

// ---------------------------------------------------------------------------
// Xin-Jin

XinJinModel::XinJinModel(double a)
    : g_([a](double u) { return a * u; }),
      dg_([a](double) { return a; }),
      slope_(a),
      label_("linear") {}

XinJinModel::XinJinModel(std::function<double(double)> g, std::function<double(double)> dg,
                         std::string label)
    : g_(std::move(g)), dg_(std::move(dg)), label_(std::move(label)) {}

State XinJinModel::source(const State& u, double eps) const {
  return {0.0, -(u[1] - g_(u[0])) / eps};
}

Matrix XinJinModel::source_jacobian(const State& u, double eps) const {
  Matrix j{};
  j[1][0] = dg_(u[0]) / eps;
  j[1][1] = -1.0 / eps;
  return j;
}

State XinJinModel::solve_implicit_source(const State& b, double dt, double eps) const {
  // u carries no source, so v solves a linear equation for any g.
  if (dt == 0.0) return b;
  const double h = dt / eps;
  if (std::isinf(h)) return {b[0], g_(b[0])};
  return {b[0], (b[1] + h * g_(b[0])) / (1.0 + h)};
}

std::vector<double> XinJinModel::relaxed_limit_flux(const std::vector<double>& reduced) const {
  if (reduced.size() != 1) throw ConfigError("xinjin limit system is scalar");
  return {g_(reduced[0])};
}

// ---------------------------------------------------------------------------
// Broadwell

State BroadwellModel::source(const State& u, double eps) const {
  const double rho = u[0], m = u[1], z = u[2];
  return {0.0, 0.0, (rho * rho + m * m - 2.0 * rho * z) / (2.0 * eps)};
}

Matrix BroadwellModel::source_jacobian(const State& u, double eps) const {
  Matrix j{};
  j[2][0] = (u[0] - u[2]) / eps;
  j[2][1] = u[1] / eps;
  j[2][2] = -u[0] / eps;
  return j;
}

State BroadwellModel::solve_implicit_source(const State& b, double dt, double eps) const {
  if (dt == 0.0) return b;
  const double rho = b[0], m = b[1];
  const double h = dt / eps;
  if (std::isinf(h)) return {rho, m, (rho * rho + m * m) / (2.0 * rho)};
  const double denom = 1.0 + h * rho;
  if (denom == 0.0) throw StiffSolveError("broadwell implicit solve hit a pole", INFINITY);
  return {rho, m, (b[2] + 0.5 * h * (rho * rho + m * m)) / denom};
}

State BroadwellModel::equilibrium(const State& u) const {
  const double rho = u[0], m = u[1];
  return {rho, m, (rho * rho + m * m) / (2.0 * rho)};
}

std::vector<double> BroadwellModel::relaxed_limit_flux(
    const std::vector<double>& reduced) const {
  if (reduced.size() != 2) throw ConfigError("broadwell limit system has two components");
  const double rho = reduced[0], m = reduced[1];
  return {m, 0.5 * (rho + m * m / rho)};
}

// ---------------------------------------------------------------------------
// Euler with heat transfer

EulerHeatModel::EulerHeatModel(EulerHeatParams params) : params_(params) {
  if (!(params_.gamma > 1.0) || !(params_.r_gas > 0.0) || !(params_.t_bath > 0.0))
    throw ConfigError("euler parameters must satisfy gamma > 1, R > 0, T0 > 0");
}

double EulerHeatModel::pressure(const State& u) const {
  return (params_.gamma - 1.0) * (u[2] - 0.5 * u[1] * u[1] / u[0]);
}

double EulerHeatModel::temperature(const State& u) const {
  const double e = u[2] / u[0] - 0.5 * u[1] * u[1] / (u[0] * u[0]);
  return (params_.gamma - 1.0) * e / params_.r_gas;
}

State EulerHeatModel::from_primitive(double rho, double vel, double p) const {
  return {rho, rho * vel, p / (params_.gamma - 1.0) + 0.5 * rho * vel * vel};
}

bool EulerHeatModel::admissible(const State& u) const {
  return all_finite(u) && u[0] > 0.0 && pressure(u) > 0.0;
}

State EulerHeatModel::flux(const State& u) const {
  if (!admissible(u)) throw AdmissibilityError("euler state with non-positive rho or p");
  const double vel = u[1] / u[0];
  const double p = pressure(u);
  return {u[1], u[1] * vel + p, vel * (u[2] + p)};
}

double EulerHeatModel::max_wavespeed(const State& u) const {
  if (!admissible(u)) throw AdmissibilityError("euler state with non-positive rho or p");
  return std::fabs(u[1] / u[0]) + std::sqrt(params_.gamma * pressure(u) / u[0]);
}

State EulerHeatModel::source(const State& u, double eps) const {
  return {0.0, 0.0, -coupling(eps) * u[0] * (temperature(u) - params_.t_bath)};
}

Matrix EulerHeatModel::source_jacobian(const State& u, double eps) const {
  // S3 = -K (c E - c m^2 / (2 rho) - rho T0), c = (gamma - 1) / R.
  const double k = coupling(eps);
  const double c = (params_.gamma - 1.0) / params_.r_gas;
  const double rho = u[0], m = u[1];
  Matrix j{};
  j[2][0] = -k * (c * m * m / (2.0 * rho * rho) - params_.t_bath);
  j[2][1] = k * c * m / rho;
  j[2][2] = -k * c;
  return j;
}

State EulerHeatModel::solve_implicit_source(const State& b, double dt, double eps) const {
  if (dt == 0.0) return b;
  const double rho = b[0], m = b[1];
  if (!(rho > 0.0)) throw AdmissibilityError("euler implicit solve with non-positive rho");
  const double k = coupling(eps);
  const double c = (params_.gamma - 1.0) / params_.r_gas;
  const double kinetic = 0.5 * m * m / rho;
  const double h = dt * k;
  if (std::isinf(h)) return equilibrium(b);
  const double energy = (b[2] + h * (c * kinetic + rho * params_.t_bath)) / (1.0 + h * c);
  return {rho, m, energy};
}

State EulerHeatModel::equilibrium(const State& u) const {
  const double rho = u[0], m = u[1];
  const double e = params_.r_gas * params_.t_bath / (params_.gamma - 1.0);
  return {rho, m, rho * e + 0.5 * m * m / rho};
}

// ---------------------------------------------------------------------------
// Linear scalar

Matrix LinearScalarModel::source_jacobian(const State&, double) const {
  Matrix j{};
  j[0][0] = lambda_;
  return j;
}

double LinearScalarModel::max_wavespeed(const State&) const { return std::fabs(speed_); }

State LinearScalarModel::solve_implicit_source(const State& b, double dt, double) const {
  const double denom = 1.0 - dt * lambda_;
  if (denom == 0.0) throw StiffSolveError("linear implicit solve hit the pole dt*lambda = 1", INFINITY);
  return {b[0] / denom};
}

State LinearScalarModel::equilibrium(const State& u) const {
  return lambda_ == 0.0 ? u : State{0.0};
}

std::optional<int> LinearScalarModel::sourced_component() const {
  if (lambda_ == 0.0) return std::nullopt;
  return 0;
}

}  // namespace relaxcat

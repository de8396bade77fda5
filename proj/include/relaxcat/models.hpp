#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "relaxcat/state.hpp"

namespace relaxcat {

/// A 1D balance law U_t + F(U)_x = S(U, eps).
///
/// Every model in this library has at most one component carrying a source
/// (`sourced_component`), and the source row depends only on the state, so the
/// implicit relation U = b + dt S(U) is cell local. Models without a closed form
/// inherit the damped Newton solve of the base class.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::string name() const = 0;
  virtual int dim() const = 0;
  virtual std::vector<std::string> component_names() const = 0;

  virtual State flux(const State& u) const = 0;
  virtual State source(const State& u, double eps) const = 0;
  virtual Matrix source_jacobian(const State& u, double eps) const = 0;
  virtual double max_wavespeed(const State& u) const = 0;

  /// Returns U with U - dt S(U, eps) = b.
  virtual State solve_implicit_source(const State& b, double dt, double eps) const;

  /// Projects onto the equilibrium manifold, keeping source-free components.
  virtual State equilibrium(const State& u) const = 0;

  /// Index of the only component with a non-zero source, if the model has one.
  virtual std::optional<int> sourced_component() const = 0;

  /// Component whose positivity is physically required.
  virtual std::optional<int> positivity_component() const { return std::nullopt; }

  /// Full physical admissibility (positivity plus model specific checks).
  virtual bool admissible(const State& u) const;

  /// Flux of the eps -> 0 limit system, acting on the reduced state.
  virtual std::vector<double> relaxed_limit_flux(const std::vector<double>& reduced) const;
};

using ModelPtr = std::shared_ptr<const Model>;

/// Xin-Jin relaxation system: u_t + v_x = 0, v_t + u_x = -(v - g(u)) / eps.
class XinJinModel final : public Model {
 public:
  /// Linear equilibrium g(u) = a u.
  explicit XinJinModel(double a);
  /// General equilibrium map g with derivative dg.
  XinJinModel(std::function<double(double)> g, std::function<double(double)> dg,
              std::string label);

  std::string name() const override { return "xinjin"; }
  int dim() const override { return 2; }
  std::vector<std::string> component_names() const override { return {"u", "v"}; }

  State flux(const State& u) const override { return {u[1], u[0]}; }
  State source(const State& u, double eps) const override;
  Matrix source_jacobian(const State& u, double eps) const override;
  double max_wavespeed(const State&) const override { return 1.0; }
  State solve_implicit_source(const State& b, double dt, double eps) const override;
  State equilibrium(const State& u) const override { return {u[0], g_(u[0])}; }
  std::optional<int> sourced_component() const override { return 1; }
  std::vector<double> relaxed_limit_flux(const std::vector<double>& reduced) const override;

  double g(double u) const { return g_(u); }
  double dg(double u) const { return dg_(u); }
  /// Slope a of a linear equilibrium map, empty for a general g.
  std::optional<double> slope() const { return slope_; }

 private:
  std::function<double(double)> g_;
  std::function<double(double)> dg_;
  std::optional<double> slope_;
  std::string label_;
};

/// Broadwell discrete-velocity model in (rho, m = rho v, z).
class BroadwellModel final : public Model {
 public:
  std::string name() const override { return "broadwell"; }
  int dim() const override { return 3; }
  std::vector<std::string> component_names() const override { return {"rho", "m", "z"}; }

  State flux(const State& u) const override { return {u[1], u[2], u[1]}; }
  State source(const State& u, double eps) const override;
  Matrix source_jacobian(const State& u, double eps) const override;
  double max_wavespeed(const State&) const override { return 1.0; }
  State solve_implicit_source(const State& b, double dt, double eps) const override;
  State equilibrium(const State& u) const override;
  std::optional<int> sourced_component() const override { return 2; }
  std::optional<int> positivity_component() const override { return 0; }
  std::vector<double> relaxed_limit_flux(const std::vector<double>& reduced) const override;
};

struct EulerHeatParams {
  double gamma = 1.4;
  double r_gas = 1.0;
  double t_bath = 1.0;
  /// Heat-exchange coefficient; when empty K = 1 / eps.
  std::optional<double> k_override;
};

/// Euler equations in (rho, m = rho u, rho E) with Newtonian cooling
/// -K rho (T - T0) in the energy equation, gamma-law gas, T = (gamma-1) e / R.
class EulerHeatModel final : public Model {
 public:
  explicit EulerHeatModel(EulerHeatParams params = {});

  std::string name() const override { return "euler_heat"; }
  int dim() const override { return 3; }
  std::vector<std::string> component_names() const override { return {"rho", "m", "E"}; }

  State flux(const State& u) const override;
  State source(const State& u, double eps) const override;
  Matrix source_jacobian(const State& u, double eps) const override;
  double max_wavespeed(const State& u) const override;
  State solve_implicit_source(const State& b, double dt, double eps) const override;
  State equilibrium(const State& u) const override;
  std::optional<int> sourced_component() const override { return 2; }
  std::optional<int> positivity_component() const override { return 0; }
  bool admissible(const State& u) const override;

  double pressure(const State& u) const;
  double temperature(const State& u) const;
  /// Conserved state from primitive (rho, velocity, pressure).
  State from_primitive(double rho, double vel, double p) const;
  const EulerHeatParams& params() const { return params_; }
  double coupling(double eps) const { return params_.k_override.value_or(1.0 / eps); }

 private:
  EulerHeatParams params_;
};

/// Scalar balance law u_t + c u_x = lambda u. With lambda = 0 this is linear
/// advection; with c = 0 it is the test ODE u' = lambda u.
class LinearScalarModel final : public Model {
 public:
  LinearScalarModel(double speed, double lambda) : speed_(speed), lambda_(lambda) {}

  std::string name() const override { return "linear_scalar"; }
  int dim() const override { return 1; }
  std::vector<std::string> component_names() const override { return {"u"}; }

  State flux(const State& u) const override { return {speed_ * u[0]}; }
  State source(const State& u, double) const override { return {lambda_ * u[0]}; }
  Matrix source_jacobian(const State&, double) const override;
  double max_wavespeed(const State&) const override;
  State solve_implicit_source(const State& b, double dt, double eps) const override;
  State equilibrium(const State& u) const override;
  std::optional<int> sourced_component() const override;

  double speed() const { return speed_; }
  double lambda() const { return lambda_; }

 private:
  double speed_;
  double lambda_;
};

/// The wrapped model with S == 0 (explicit conservation law).
class ZeroSourceModel final : public Model {
 public:
  explicit ZeroSourceModel(ModelPtr inner) : inner_(std::move(inner)) {}

  std::string name() const override { return inner_->name() + "+no_source"; }
  int dim() const override { return inner_->dim(); }
  std::vector<std::string> component_names() const override {
    return inner_->component_names();
  }
  State flux(const State& u) const override { return inner_->flux(u); }
  State source(const State&, double) const override { return {}; }
  Matrix source_jacobian(const State&, double) const override { return {}; }
  double max_wavespeed(const State& u) const override { return inner_->max_wavespeed(u); }
  State solve_implicit_source(const State& b, double, double) const override { return b; }
  State equilibrium(const State& u) const override { return u; }
  std::optional<int> sourced_component() const override { return std::nullopt; }
  std::optional<int> positivity_component() const override {
    return inner_->positivity_component();
  }
  bool admissible(const State& u) const override { return inner_->admissible(u); }

 private:
  ModelPtr inner_;
};

/// The wrapped model with F == 0: every stepper degenerates to its source ODE
/// integrator, which makes amplification factors directly observable.
class NoTransportModel final : public Model {
 public:
  explicit NoTransportModel(ModelPtr inner) : inner_(std::move(inner)) {}

  std::string name() const override { return inner_->name() + "+pure_ode"; }
  int dim() const override { return inner_->dim(); }
  std::vector<std::string> component_names() const override {
    return inner_->component_names();
  }
  State flux(const State&) const override { return {}; }
  State source(const State& u, double eps) const override { return inner_->source(u, eps); }
  Matrix source_jacobian(const State& u, double eps) const override {
    return inner_->source_jacobian(u, eps);
  }
  double max_wavespeed(const State&) const override { return 0.0; }
  State solve_implicit_source(const State& b, double dt, double eps) const override {
    return inner_->solve_implicit_source(b, dt, eps);
  }
  State equilibrium(const State& u) const override { return inner_->equilibrium(u); }
  std::optional<int> sourced_component() const override {
    return inner_->sourced_component();
  }
  std::optional<int> positivity_component() const override {
    return inner_->positivity_component();
  }
  bool admissible(const State& u) const override { return inner_->admissible(u); }

 private:
  ModelPtr inner_;
};

/// Damped Newton for U - dt * scale * S(U) = b on the first `dim` components,
/// with `scale` applied row-wise (the full matrix form used by the Taylor
/// source treatment). Throws StiffSolveError after 50 iterations.
State newton_implicit_solve(const Model& model, const State& b, const Matrix& scale,
                            double eps);

/// Solves the dim x dim system a x = rhs; throws StepError if |det| < 1e-300.
State solve_dense(const Matrix& a, const State& rhs, int dim);

}  // namespace relaxcat

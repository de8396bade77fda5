#include "relaxcat/cat2.hpp"

#include <cmath>
#include <string>

#include "relaxcat/errors.hpp"

namespace relaxcat {

namespace {

std::vector<State> cell_fluxes(const CellField& field, const Model& model, int first,
                               int last) {
  std::vector<State> f(static_cast<std::size_t>(last - first + 1));
  for (int i = first; i <= last; ++i) f[static_cast<std::size_t>(i - first)] = model.flux(field[i]);
  return f;
}

// Solves U - dt (I - dt/2 J) S(U) = b for the Taylor source treatment.
State taylor_solve(const Model& model, const State& b, const Matrix& jac, double dt,
                   double eps) {
  if (auto k = model.sourced_component()) {
    // Only row k of J is non-zero, so the matrix acts as a scalar on S_k.
    const double dt_eff = dt * (1.0 - 0.5 * dt * jac[*k][*k]);
    return model.solve_implicit_source(b, dt_eff, eps);
  }
  const int dim = model.dim();
  Matrix scale{};
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) scale[i][j] = (i == j ? dt : 0.0) - 0.5 * dt * dt * jac[i][j];
  return newton_implicit_solve(model, b, scale, eps);
}

PredictorStates predictors_from(const CellField& field, const Model& model,
                                const std::vector<State>& f, double dt, double eps) {
  const int n = field.size();
  const double dx = field.grid().dx;
  PredictorStates p;
  p.left.resize(static_cast<std::size_t>(n + 1));
  p.right.resize(static_cast<std::size_t>(n + 1));
  for (int j = 0; j <= n; ++j) {
    const State du = -1.0 / dx * (f[static_cast<std::size_t>(j + 1)] - f[static_cast<std::size_t>(j)]);
    try {
      p.left[static_cast<std::size_t>(j)] = model.solve_implicit_source(field[j - 1] + dt * du, dt, eps);
      p.right[static_cast<std::size_t>(j)] = model.solve_implicit_source(field[j] + dt * du, dt, eps);
    } catch (const Error& e) {
      throw StepError("predictor at interface " + std::to_string(j) + ": " + e.what(), j);
    }
  }
  return p;
}

InterfaceFluxSet cat2_flux_from(const PredictorStates& predictors, const Model& model,
                                const std::vector<State>& f) {
  const std::size_t m = predictors.left.size();
  InterfaceFluxSet out;
  out.flux.resize(m);
  for (std::size_t j = 0; j < m; ++j)
    out.flux[j] = 0.25 * (f[j] + f[j + 1] + model.flux(predictors.left[j]) +
                          model.flux(predictors.right[j]));
  return out;
}

CellField step_cat2_fused(const CellField& field, const Model& model, double dt, double eps,
                          SourceTreatment treatment) {
  const int n = field.size();
  const double dx = field.grid().dx;
  const std::vector<State> f = cell_fluxes(field, model, -1, n);
  const InterfaceFluxSet fluxes = cat2_flux_from(predictors_from(field, model, f, dt, eps), model, f);
  CellField next = field;
  for (int i = 0; i < n; ++i) {
    const auto si = static_cast<std::size_t>(i);
    const State& u = field[i];
    const State rest = u - dt / dx * (fluxes[i + 1] - fluxes[i]);
    try {
      next[i] = source_update(model, u, rest, f[si], f[si + 2], dx, dt, eps, treatment);
    } catch (const Error& e) {
      throw StepError("cell " + std::to_string(i) + ": " + e.what(), i);
    }
  }
  next.time = field.time + dt;
  apply_boundary(next);
  return next;
}

}  // namespace

State first_time_derivative(const Model& model, const State& u_i, const State& u_ip1,
                            double dx) {
  return -1.0 / dx * (model.flux(u_ip1) - model.flux(u_i));
}

PredictorStates predictor_states(const CellField& field, const Model& model, double dt,
                                 double eps) {
  return predictors_from(field, model, cell_fluxes(field, model, -1, field.size()), dt, eps);
}

PredictorStates explicit_predictor_states(const CellField& field, const Model& model,
                                          double dt) {
  const int n = field.size();
  const double dx = field.grid().dx;
  const std::vector<State> f = cell_fluxes(field, model, -1, n);
  PredictorStates p;
  p.left.resize(static_cast<std::size_t>(n + 1));
  p.right.resize(static_cast<std::size_t>(n + 1));
  for (int j = 0; j <= n; ++j) {
    const State du = -1.0 / dx * (f[static_cast<std::size_t>(j + 1)] - f[static_cast<std::size_t>(j)]);
    p.left[static_cast<std::size_t>(j)] = field[j - 1] + dt * du;
    p.right[static_cast<std::size_t>(j)] = field[j] + dt * du;
  }
  return p;
}

InterfaceFluxSet cat2_flux(const CellField& field, const PredictorStates& predictors,
                           const Model& model) {
  return cat2_flux_from(predictors, model, cell_fluxes(field, model, -1, field.size()));
}

State rusanov_flux(const State& ul, const State& ur, const Model& model) {
  const double alpha = std::fmax(model.max_wavespeed(ul), model.max_wavespeed(ur));
  return 0.5 * (model.flux(ul) + model.flux(ur) - alpha * (ur - ul));
}

InterfaceFluxSet rusanov_fluxes(const CellField& field, const Model& model) {
  const int n = field.size();
  InterfaceFluxSet out;
  out.flux.resize(static_cast<std::size_t>(n + 1));
  for (int j = 0; j <= n; ++j) out[j] = rusanov_flux(field[j - 1], field[j], model);
  return out;
}

State source_update(const Model& model, const State& u, const State& rest, const State& f_left,
                    const State& f_right, double dx, double dt, double eps,
                    SourceTreatment treatment) {
  switch (treatment) {
    case SourceTreatment::None:
      return rest;
    case SourceTreatment::Trapezoidal:
      return model.solve_implicit_source(rest + 0.5 * dt * model.source(u, eps), 0.5 * dt, eps);
    case SourceTreatment::Taylor: {
      const Matrix jac = model.source_jacobian(u, eps);
      const State dflux = 1.0 / (2.0 * dx) * (f_right - f_left);
      const State b = rest + 0.5 * dt * dt * (jac * dflux);
      return taylor_solve(model, b, jac, dt, eps);
    }
    case SourceTreatment::ImplicitEuler:
      return model.solve_implicit_source(rest, dt, eps);
  }
  return rest;
}

State update_cell(const CellField& field, const Model& model, int i, const State& flux_left,
                  const State& flux_right, double dt, double eps, SourceTreatment treatment) {
  const double dx = field.grid().dx;
  const State& u = field[i];
  const State rest = u - dt / dx * (flux_right - flux_left);
  if (treatment != SourceTreatment::Taylor)
    return source_update(model, u, rest, u, u, dx, dt, eps, treatment);
  return source_update(model, u, rest, model.flux(field[i - 1]), model.flux(field[i + 1]), dx, dt,
                       eps, treatment);
}

CellField apply_fluxes(const CellField& field, const Model& model,
                       const InterfaceFluxSet& fluxes, double dt, double eps,
                       SourceTreatment treatment) {
  CellField next = field;
  for (int i = 0; i < field.size(); ++i) {
    try {
      next[i] = update_cell(field, model, i, fluxes[i], fluxes[i + 1], dt, eps, treatment);
    } catch (const StepError&) {
      throw;
    } catch (const Error& e) {
      throw StepError("cell " + std::to_string(i) + ": " + e.what(), i);
    }
  }
  next.time = field.time + dt;
  apply_boundary(next);
  return next;
}

CellField step_cat2_explicit(const CellField& field, const Model& model, double dt) {
  const InterfaceFluxSet fluxes =
      cat2_flux(field, explicit_predictor_states(field, model, dt), model);
  return apply_fluxes(field, model, fluxes, dt, 1.0, SourceTreatment::None);
}

CellField step_cat2_trap(const CellField& field, const Model& model, double dt, double eps) {
  return step_cat2_fused(field, model, dt, eps, SourceTreatment::Trapezoidal);
}

CellField step_cat2_tay(const CellField& field, const Model& model, double dt, double eps) {
  return step_cat2_fused(field, model, dt, eps, SourceTreatment::Taylor);
}

CellField step_first_order(const CellField& field, const Model& model, double dt, double eps) {
  return apply_fluxes(field, model, rusanov_fluxes(field, model), dt, eps,
                      SourceTreatment::ImplicitEuler);
}

}  // namespace relaxcat

#pragma once

#include <vector>

#include "relaxcat/grid.hpp"
#include "relaxcat/models.hpp"

namespace relaxcat {

/// Numerical fluxes at the n_cells + 1 interfaces of a field.
/// Entry j sits at x_{j-1/2}, between cells j-1 and j (j = 0 .. n_cells).
struct InterfaceFluxSet {
  std::vector<State> flux;

  State& operator[](int j) { return flux[static_cast<std::size_t>(j)]; }
  const State& operator[](int j) const { return flux[static_cast<std::size_t>(j)]; }
  int size() const { return static_cast<int>(flux.size()); }
};

/// Local predictors at every interface. left[j] is built from cell j-1
/// (position s = 0), right[j] from cell j (position s = 1).
struct PredictorStates {
  std::vector<State> left;
  std::vector<State> right;
};

/// How the source enters the cell update.
enum class SourceTreatment {
  None,           // explicit CAT2 for conservation laws
  Trapezoidal,    // (dt/2)(S^{n+1} + S^n)
  Taylor,         // S^n replaced by S^{n+1} - dt J^n (S^{n+1} - D_x F^n)
  ImplicitEuler,  // dt S^{n+1}, used by the first-order fallback
};

/// Divided-difference estimate -(F(U_{i+1}) - F(U_i)) / dx of U_t at an interface.
State first_time_derivative(const Model& model, const State& u_i, const State& u_ip1,
                            double dx);

/// Semi-implicit predictors: U~ = U_{i+s} + dt U^(1) + dt S(U~).
/// Requires filled ghosts. Solve failures surface as StepError naming the interface.
PredictorStates predictor_states(const CellField& field, const Model& model, double dt,
                                 double eps);

/// Explicit predictors U_{i+s} + dt U^(1) (no source).
PredictorStates explicit_predictor_states(const CellField& field, const Model& model,
                                          double dt);

/// Four-point CAT2 flux average.
InterfaceFluxSet cat2_flux(const CellField& field, const PredictorStates& predictors,
                           const Model& model);

/// Local Lax-Friedrichs flux with alpha = max(lambda(UL), lambda(UR)).
State rusanov_flux(const State& ul, const State& ur, const Model& model);

/// First-order Rusanov fluxes on cell averages at every interface.
InterfaceFluxSet rusanov_fluxes(const CellField& field, const Model& model);

/// New value of interior cell i given the fluxes at its two interfaces.
/// Reads U_{i-1}, U_i, U_{i+1} from the pre-step field.
State update_cell(const CellField& field, const Model& model, int i, const State& flux_left,
                  const State& flux_right, double dt, double eps, SourceTreatment treatment);

/// Source step of cell i from its flux-updated state `rest`. f_left and f_right
/// are F(U_{i-1}) and F(U_{i+1}); only the Taylor treatment reads them.
State source_update(const Model& model, const State& u, const State& rest, const State& f_left,
                    const State& f_right, double dx, double dt, double eps,
                    SourceTreatment treatment);

/// Conservative update of every interior cell from a flux set; ghosts refilled.
CellField apply_fluxes(const CellField& field, const Model& model,
                       const InterfaceFluxSet& fluxes, double dt, double eps,
                       SourceTreatment treatment);

/// Explicit CAT2 for U_t + F(U)_x = 0 (the source of `model` is ignored).
CellField step_cat2_explicit(const CellField& field, const Model& model, double dt);

/// Semi-implicit CAT2 with trapezoidal source.
CellField step_cat2_trap(const CellField& field, const Model& model, double dt, double eps);

/// Semi-implicit CAT2 with the Taylor-replaced, stiffly decaying source.
CellField step_cat2_tay(const CellField& field, const Model& model, double dt, double eps);

/// Rusanov flux with implicit-Euler source; the MOOD fallback.
CellField step_first_order(const CellField& field, const Model& model, double dt, double eps);

}  // namespace relaxcat

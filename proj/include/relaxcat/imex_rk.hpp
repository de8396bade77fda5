#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "relaxcat/grid.hpp"
#include "relaxcat/models.hpp"

namespace relaxcat {

/// Two-stage IMEX pair: explicit (A~, b, c~) and stiffly accurate implicit
/// (A, b, c) with gamma = 1 - 1/sqrt(2) and c = 1/(2 gamma).
struct ButcherPair {
  using Tableau = std::array<std::array<double, 2>, 2>;

  static constexpr double gamma = 1.0 - 0.70710678118654752440;
  static constexpr double c = 1.0 / (2.0 * gamma);

  Tableau explicit_a{{{0.0, 0.0}, {c, 0.0}}};
  std::array<double, 2> explicit_c{0.0, c};
  Tableau implicit_a{{{gamma, 0.0}, {1.0 - gamma, gamma}}};
  std::array<double, 2> implicit_c{gamma, 1.0};
  std::array<double, 2> b{1.0 - gamma, gamma};
};

/// 0 when the signs differ, otherwise the argument of smaller magnitude.
inline double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::fabs(a) < std::fabs(b) ? a : b;
}

/// Reconstructed states at each interface: minus[j] is the left trace at
/// x_{j-1/2} (from cell j-1), plus[j] the right trace (from cell j).
struct InterfaceStates {
  std::vector<State> minus;
  std::vector<State> plus;
};

/// Piecewise-linear MinMod reconstruction. Needs both ghost layers.
InterfaceStates muscl_interface_states(const CellField& field);

/// -D_x F per interior cell from Rusanov fluxes on MUSCL states. An interface
/// whose reconstructed traces are inadmissible falls back to the cell averages.
std::vector<State> spatial_operator(const CellField& field, const Model& model);

/// One step of the semi-implicit IMEX-RK2 scheme.
CellField step_imex_rk2(const CellField& field, const Model& model, double dt, double eps);

/// The same step using the rewritten stage forms
/// U_E2 = (1 - c/gamma) U^n + (c/gamma) U_I1, U_I2 = ... + (1-gamma)/gamma U_I1 + ...
CellField step_imex_rk2_rewritten(const CellField& field, const Model& model, double dt,
                                  double eps);

/// Scalar stability function 1 + z b^T (I - z A)^{-1} 1 of the implicit tableau.
double imex_implicit_stability(double z);

}  // namespace relaxcat

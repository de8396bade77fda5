#include "relaxcat/grid.hpp"

#include <cmath>
#include <string>

#include "relaxcat/errors.hpp"
#include "relaxcat/models.hpp"

namespace relaxcat {

Grid build_uniform_grid(double x_left, double x_right, int n_cells) {
  if (!(x_right > x_left)) throw ConfigError("grid needs x_right > x_left");
  if (n_cells < 4) throw ConfigError("grid needs at least 4 cells");
  Grid g;
  g.x_left = x_left;
  g.x_right = x_right;
  g.n_cells = n_cells;
  g.dx = (x_right - x_left) / n_cells;
  return g;
}

std::string_view to_string(BoundaryKind kind) {
  return kind == BoundaryKind::Periodic ? "periodic" : "neumann";
}

BoundaryKind boundary_from_string(std::string_view name) {
  if (name == "periodic") return BoundaryKind::Periodic;
  if (name == "neumann") return BoundaryKind::NeumannZero;
  throw ConfigError("unknown boundary kind: " + std::string(name));
}

CellField::CellField(const Grid& grid, BoundaryKind boundary, int dim)
    : grid_(grid),
      boundary_(boundary),
      dim_(dim),
      data_(static_cast<std::size_t>(grid.n_cells + 2 * Grid::n_ghost)) {}

void apply_boundary(CellField& field, BoundaryKind kind) {
  const int n = field.size();
  for (int g = 1; g <= Grid::n_ghost; ++g) {
    if (kind == BoundaryKind::Periodic) {
      field[-g] = field[n - g];
      field[n - 1 + g] = field[g - 1];
    } else {
      field[-g] = field[0];
      field[n - 1 + g] = field[n - 1];
    }
  }
}

double max_wavespeed(const CellField& field, const Model& model) {
  double lam = 0.0;
  for (const State& u : field.interior()) lam = std::fmax(lam, model.max_wavespeed(u));
  return lam;
}

double compute_dt(const CellField& field, const Model& model, double cfl) {
  if (!(cfl > 0.0)) throw ConfigError("cfl must be positive");
  const double lam = max_wavespeed(field, model);
  if (!(lam > 0.0)) throw Error("no characteristic speed in the field, dt undefined");
  return cfl * field.grid().dx / lam;
}

double integral(const CellField& field, int component) {
  double s = 0.0;
  for (const State& u : field.interior()) s += u[component];
  return s * field.grid().dx;
}

}  // namespace relaxcat

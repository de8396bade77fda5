#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "relaxcat/state.hpp"

namespace relaxcat {

class Model;

/// Uniform 1D mesh. Cell i (0 <= i < n_cells) is centred at x_left + (i + 1/2) dx.
struct Grid {
  static constexpr int n_ghost = 2;

  double x_left = 0.0;
  double x_right = 1.0;
  int n_cells = 0;
  double dx = 0.0;

  double center(int i) const { return x_left + (i + 0.5) * dx; }
  double length() const { return x_right - x_left; }
};

/// Throws ConfigError unless x_right > x_left and n_cells >= 4.
Grid build_uniform_grid(double x_left, double x_right, int n_cells);

enum class BoundaryKind { Periodic, NeumannZero };

std::string_view to_string(BoundaryKind kind);
BoundaryKind boundary_from_string(std::string_view name);

/// Cell averages at one time level, with two ghost layers on each side.
/// Index i in [-2, n_cells + 1]; negative and >= n_cells are ghosts.
class CellField {
 public:
  CellField() = default;
  CellField(const Grid& grid, BoundaryKind boundary, int dim);

  const Grid& grid() const { return grid_; }
  BoundaryKind boundary() const { return boundary_; }
  int dim() const { return dim_; }
  int size() const { return grid_.n_cells; }

  State& operator[](int i) { return data_[static_cast<std::size_t>(i + Grid::n_ghost)]; }
  const State& operator[](int i) const {
    return data_[static_cast<std::size_t>(i + Grid::n_ghost)];
  }

  std::span<State> interior() {
    return {data_.data() + Grid::n_ghost, static_cast<std::size_t>(grid_.n_cells)};
  }
  std::span<const State> interior() const {
    return {data_.data() + Grid::n_ghost, static_cast<std::size_t>(grid_.n_cells)};
  }

  double time = 0.0;

 private:
  Grid grid_;
  BoundaryKind boundary_ = BoundaryKind::Periodic;
  int dim_ = 1;
  std::vector<State> data_;
};

/// Fills ghost cells from the interior; the interior is untouched.
void apply_boundary(CellField& field, BoundaryKind kind);
inline void apply_boundary(CellField& field) { apply_boundary(field, field.boundary()); }

/// Largest characteristic speed over the interior cells.
double max_wavespeed(const CellField& field, const Model& model);

/// dt = cfl * dx / max_i lambda_max(U_i). Throws Error when no cell carries a wave.
double compute_dt(const CellField& field, const Model& model, double cfl);

/// Sum over the interior of component k times dx.
double integral(const CellField& field, int component);

}  // namespace relaxcat

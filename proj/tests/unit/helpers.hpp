#pragma once

#include <cmath>
#include <functional>

#include "relaxcat/grid.hpp"
#include "relaxcat/models.hpp"

namespace testing_helpers {

using relaxcat::BoundaryKind;
using relaxcat::CellField;
using relaxcat::State;

inline CellField make_field(int n, BoundaryKind bc, int dim,
                            const std::function<State(double)>& init, double x_left = 0.0,
                            double x_right = 1.0) {
  CellField f(relaxcat::build_uniform_grid(x_left, x_right, n), bc, dim);
  for (int i = 0; i < n; ++i) f[i] = init(f.grid().center(i));
  relaxcat::apply_boundary(f);
  return f;
}

inline double max_field_diff(const CellField& a, const CellField& b) {
  double worst = 0.0;
  for (int i = 0; i < a.size(); ++i) worst = std::max(worst, relaxcat::max_abs(a[i] - b[i]));
  return worst;
}

inline double max_field_abs(const CellField& a) {
  double worst = 0.0;
  for (int i = 0; i < a.size(); ++i) worst = std::max(worst, relaxcat::max_abs(a[i]));
  return worst;
}

inline bool bitwise_equal(const CellField& a, const CellField& b) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

inline double sum_component(const CellField& f, int k) {
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i) s += f[i][k];
  return s;
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace testing_helpers

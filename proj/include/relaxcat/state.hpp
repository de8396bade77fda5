#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace relaxcat {

/// Largest number of conserved components carried by any model.
inline constexpr int kMaxDim = 3;

/// Conserved state of one cell. Components beyond the model dimension stay 0.
struct State {
  std::array<double, kMaxDim> c{};

  constexpr State() = default;
  constexpr State(double a, double b = 0.0, double d = 0.0) : c{a, b, d} {}

  constexpr double& operator[](std::size_t k) { return c[k]; }
  constexpr double operator[](std::size_t k) const { return c[k]; }

  friend constexpr State operator+(State a, const State& b) {
    for (int k = 0; k < kMaxDim; ++k) a.c[k] += b.c[k];
    return a;
  }
  friend constexpr State operator-(State a, const State& b) {
    for (int k = 0; k < kMaxDim; ++k) a.c[k] -= b.c[k];
    return a;
  }
  friend constexpr State operator*(double s, State a) {
    for (int k = 0; k < kMaxDim; ++k) a.c[k] *= s;
    return a;
  }
  friend constexpr State operator*(State a, double s) { return s * a; }
  constexpr State& operator+=(const State& b) {
    for (int k = 0; k < kMaxDim; ++k) c[k] += b.c[k];
    return *this;
  }
  constexpr State& operator-=(const State& b) {
    for (int k = 0; k < kMaxDim; ++k) c[k] -= b.c[k];
    return *this;
  }
  friend constexpr bool operator==(const State&, const State&) = default;
};

/// Dense d x d matrix, row major; unused rows and columns are zero.
using Matrix = std::array<std::array<double, kMaxDim>, kMaxDim>;

inline State operator*(const Matrix& m, const State& u) {
  State r;
  for (int i = 0; i < kMaxDim; ++i)
    for (int j = 0; j < kMaxDim; ++j) r[i] += m[i][j] * u[j];
  return r;
}

inline bool all_finite(const State& u) {
  return std::isfinite(u[0]) && std::isfinite(u[1]) && std::isfinite(u[2]);
}

inline double max_abs(const State& u) {
  return std::fmax(std::fabs(u[0]), std::fmax(std::fabs(u[1]), std::fabs(u[2])));
}

}  // namespace relaxcat

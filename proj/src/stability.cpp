#include "relaxcat/stability.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <ostream>

#include "relaxcat/cat2.hpp"
#include "relaxcat/csv.hpp"
#include "relaxcat/errors.hpp"
#include "relaxcat/grid.hpp"
#include "relaxcat/imex_rk.hpp"
#include "relaxcat/models.hpp"

namespace relaxcat {

namespace {

constexpr int kRing = 16;
constexpr int kProbeFirst = 6;
constexpr int kProbeLast = 9;

CellField step_with(AnalysisScheme scheme, const CellField& field, const Model& model, double dt,
                    double eps) {
  switch (scheme) {
    case AnalysisScheme::Cat2Trap: return step_cat2_trap(field, model, dt, eps);
    case AnalysisScheme::Cat2Tay: return step_cat2_tay(field, model, dt, eps);
    case AnalysisScheme::ImexRk2: return step_imex_rk2(field, model, dt, eps);
  }
  throw Error("unhandled scheme");
}

void check_query(const AmplificationQuery& q, double dx) {
  if (!(q.mu >= 0.0)) throw ConfigError("mu must be non-negative");
  if (!(q.a > 0.0 && q.a < 1.0)) throw ConfigError("relaxation slope a must lie in (0, 1)");
  if (!(q.eps > 0.0)) throw ConfigError("eps must be positive");
  if (!(q.k_dx >= 0.0 && q.k_dx <= std::numbers::pi)) throw ConfigError("k dx must lie in [0, pi]");
  if (!(dx > 0.0)) throw ConfigError("dx must be positive");
}

}  // namespace

std::string_view to_string(AnalysisScheme scheme) {
  switch (scheme) {
    case AnalysisScheme::Cat2Trap: return "cat2_trap";
    case AnalysisScheme::Cat2Tay: return "cat2_tay";
    case AnalysisScheme::ImexRk2: return "imex_rk2";
  }
  return "?";
}

AnalysisScheme analysis_scheme_from_string(std::string_view name) {
  for (auto s : {AnalysisScheme::Cat2Trap, AnalysisScheme::Cat2Tay, AnalysisScheme::ImexRk2})
    if (to_string(s) == name) return s;
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

double ode_amplification(AnalysisScheme scheme, double z) {
  switch (scheme) {
    case AnalysisScheme::Cat2Trap: {
      const double d = 1.0 - 0.5 * z;
      if (d == 0.0) throw Error("trapezoidal amplification pole at z = 2");
      return (1.0 + 0.5 * z) / d;
    }
    case AnalysisScheme::Cat2Tay: {
      const double d = 1.0 - z + 0.5 * z * z;
      if (d == 0.0) throw Error("taylor amplification pole");
      return 1.0 / d;
    }
    case AnalysisScheme::ImexRk2: return imex_implicit_stability(z);
  }
  throw Error("unhandled scheme");
}

Symbol fourier_symbol(const AmplificationQuery& q, double dx) {
  check_query(q, dx);
  const XinJinModel model(q.a);
  const Grid grid = build_uniform_grid(0.0, kRing * dx, kRing);
  const double dt = q.mu * dx;
  const double theta = q.k_dx;

  // out[m][part] = one step applied to cos (part 0) / sin (part 1) of unit mode m.
  std::array<std::array<CellField, 2>, 2> out;
  for (int m = 0; m < 2; ++m) {
    for (int part = 0; part < 2; ++part) {
      CellField f(grid, BoundaryKind::Periodic, 2);
      for (int j = 0; j < kRing; ++j)
        f[j][m] = part == 0 ? std::cos(j * theta) : std::sin(j * theta);
      apply_boundary(f);
      out[static_cast<std::size_t>(m)][static_cast<std::size_t>(part)] =
          step_with(q.scheme, f, model, dt, q.eps);
    }
  }

  Symbol g{};
  double residual = 0.0;
  for (int j = kProbeFirst; j <= kProbeLast; ++j) {
    const std::complex<double> phase = std::polar(1.0, j * theta);
    for (int m = 0; m < 2; ++m) {
      const auto& pair = out[static_cast<std::size_t>(m)];
      for (int r = 0; r < 2; ++r) {
        const std::complex<double> w(pair[0][j][r], pair[1][j][r]);
        const std::complex<double> entry = w / phase;
        auto& slot = g[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)];
        if (j == kProbeFirst)
          slot = entry;
        else
          residual = std::max(residual, std::abs(entry - slot));
      }
    }
  }
  if (!(residual <= 1e-10))
    throw Error("fourier symbol projection residual " + format_number(residual) +
                " exceeds 1e-10 (step is not linear)");
  return g;
}

double spectral_radius(const Symbol& g) {
  const std::complex<double> tr = g[0][0] + g[1][1];
  const std::complex<double> det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  const std::complex<double> disc = std::sqrt(tr * tr - 4.0 * det);
  return std::max(std::abs(0.5 * (tr + disc)), std::abs(0.5 * (tr - disc)));
}

double max_spectral_radius(AnalysisScheme scheme, double mu, double a, double eps, double dx,
                           int k_samples) {
  if (k_samples < 1) throw ConfigError("k_samples must be positive");
  double rho = 0.0;
  for (int j = 1; j <= k_samples; ++j) {
    const AmplificationQuery q{scheme, mu, a, eps, std::numbers::pi * j / k_samples};
    rho = std::max(rho, spectral_radius(fourier_symbol(q, dx)));
  }
  return rho;
}

StabilityRegion stability_region(AnalysisScheme scheme, const std::vector<double>& a_values,
                                 double eps, const RegionOptions& opt) {
  if (!(opt.mu_tol > 0.0) || !(opt.mu_ceiling > 0.0))
    throw ConfigError("mu tolerance and ceiling must be positive");
  for (double a : a_values)
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("a values must lie in (0, 1)");

  auto stable = [&](double mu, double a) {
    return max_spectral_radius(scheme, mu, a, eps, opt.dx, opt.k_samples) <= 1.0 + opt.growth_tol;
  };
  auto mu_max = [&](double a) {
    if (stable(opt.mu_ceiling, a)) return opt.mu_ceiling;
    double lo = 0.0, hi = opt.mu_ceiling;
    while (hi - lo > opt.mu_tol) {
      const double mid = 0.5 * (lo + hi);
      (stable(mid, a) ? lo : hi) = mid;
    }
    return lo;
  };

  std::vector<std::future<double>> jobs;
  jobs.reserve(a_values.size());
  for (double a : a_values) jobs.push_back(std::async(std::launch::async, mu_max, a));

  StabilityRegion region;
  for (std::size_t i = 0; i < a_values.size(); ++i)
    region.points.push_back({a_values[i], eps, jobs[i].get(), scheme});
  return region;
}

void write_region_csv(std::ostream& out, const StabilityRegion& region) {
  out << "a,eps,mu_max,scheme\n";
  for (const auto& p : region.points)
    out << format_number(p.a) << ',' << format_number(p.eps) << ',' << format_number(p.mu_max)
        << ',' << to_string(p.scheme) << '\n';
}

}  // namespace relaxcat

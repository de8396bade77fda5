#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace relaxcat {

enum class AnalysisScheme { Cat2Trap, Cat2Tay, ImexRk2 };

std::string_view to_string(AnalysisScheme scheme);
AnalysisScheme analysis_scheme_from_string(std::string_view name);

/// One Fourier mode of the linear Xin-Jin model g(u) = a u, mu = dt / dx.
struct AmplificationQuery {
  AnalysisScheme scheme = AnalysisScheme::Cat2Tay;
  double mu = 0.5;
  double a = 0.5;
  double eps = 1.0;
  double k_dx = 0.0;
};

using Symbol = std::array<std::array<std::complex<double>, 2>, 2>;

/// Amplification factor R(z) of the source treatment for u' = lambda u, z = lambda dt.
/// Throws Error at a pole.
double ode_amplification(AnalysisScheme scheme, double z);

/// The 2x2 matrix G with step((u, v) e^{i j k dx}) = G (u, v) e^{i j k dx},
/// measured by stepping the two unit modes on a 16-cell ring (dt = mu dx).
/// Throws Error when the projection residual exceeds 1e-10 (a non-linear step).
Symbol fourier_symbol(const AmplificationQuery& query, double dx);

double spectral_radius(const Symbol& g);

/// max over k dx = pi j / k_samples, j = 1 .. k_samples, of the spectral radius.
double max_spectral_radius(AnalysisScheme scheme, double mu, double a, double eps, double dx,
                           int k_samples);

struct RegionPoint {
  double a = 0.0;
  double eps = 0.0;
  double mu_max = 0.0;
  AnalysisScheme scheme = AnalysisScheme::Cat2Tay;
};

struct StabilityRegion {
  std::vector<RegionPoint> points;
};

struct RegionOptions {
  int k_samples = 256;
  double mu_tol = 1e-3;
  double mu_ceiling = 1.6;
  double dx = 1.0 / 16.0;
  double growth_tol = 1e-10;
};

/// Largest stable mu in (0, mu_ceiling] by bisection, for each a.
StabilityRegion stability_region(AnalysisScheme scheme, const std::vector<double>& a_values,
                                 double eps, const RegionOptions& options = {});

/// CSV with header a,eps,mu_max,scheme.
void write_region_csv(std::ostream& out, const StabilityRegion& region);

}  // namespace relaxcat

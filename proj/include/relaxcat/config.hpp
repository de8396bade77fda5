#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relaxcat/harness.hpp"
#include "relaxcat/stability.hpp"

namespace relaxcat {

/// Flat key=value run configuration. Section prefixes (mood., reference.,
/// stability., euler.) group related keys; '#' starts a comment.
struct RunConfig {
  std::string case_name = "XinJin-smooth";
  std::vector<std::string> schemes = {"cat2_tay"};
  int n_cells = 200;
  std::optional<double> cfl;
  std::optional<double> dt;
  std::vector<double> eps;  // case default (first listed value) when empty
  std::optional<double> t_final;
  std::optional<double> xinjin_a;
  std::string out_dir = ".";
  int repeats = 1;

  std::optional<bool> mood;
  std::optional<double> mood_eps1;
  std::optional<double> mood_eps2;
  std::optional<int> mood_rounds;
  std::optional<bool> mood_pad;

  std::vector<int> grids = {100, 200, 400, 800};
  int reference_n = 4096;
  double reference_cfl = 0.45;
  bool reference_self = false;

  std::vector<std::string> stability_schemes = {"cat2_trap", "cat2_tay"};
  std::vector<double> stability_a = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  double stability_eps = 1e-14;
  RegionOptions stability{};

  std::optional<EulerRiemannSetup> euler;
};

/// Applies one key=value pair. Throws ConfigError for unknown keys and
/// non-positive physical parameters.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Parses a whole file; errors name the offending line.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// The registry case with the configured overrides applied.
TestCase resolve_case(const RunConfig& cfg);

/// Scheme by name with the configured CFL, dt and MOOD settings applied.
SchemeConfig resolve_scheme(const RunConfig& cfg, const std::string& name, const TestCase& tc);

/// eps values of the run: the configured ones or the case's first value.
std::vector<double> resolve_eps(const RunConfig& cfg, const TestCase& tc);

}  // namespace relaxcat

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relaxcat/grid.hpp"
#include "relaxcat/models.hpp"
#include "relaxcat/mood.hpp"

namespace relaxcat {

/// Initial states of a Sod-type Riemann problem for the Euler heat model.
struct EulerRiemannSetup {
  double rho_left = 1.0, u_left = 0.0, p_left = 1.0;
  double rho_right = 0.125, u_right = 0.0, p_right = 0.1;
  double x_split = 0.5;
  EulerHeatParams params{};
};

struct TestCase {
  std::string name;
  std::string description;
  std::function<ModelPtr()> make_model;
  double x_left = 0.0;
  double x_right = 1.0;
  BoundaryKind boundary = BoundaryKind::Periodic;
  double t_final = 1.0;
  double cfl = 0.9;
  std::vector<double> eps_values;
  MoodConfig mood;
  /// Point value of the initial state at x (sampled at cell centres).
  std::function<State(double)> initial;
  bool well_prepared = false;
  bool smooth = false;
  /// False when the configuration is a stand-in the literature does not pin down.
  bool published_setup = true;
};

/// All built-in cases.
const std::vector<TestCase>& registry();

/// Throws ConfigError for an unknown name.
const TestCase& find_case(std::string_view name);

/// Xin-Jin cases with a different linear slope a.
TestCase with_xinjin_slope(const TestCase& base, double a);

/// The EulerHeat-RP case with custom states.
TestCase euler_riemann_case(const EulerRiemannSetup& setup);

/// Interior field of the initial condition on n cells, ghosts filled.
CellField initial_field(const TestCase& tc, int n_cells);

enum class SchemeKind { Cat2Trap, Cat2Tay, ImexRk2, FirstOrder };

struct SchemeConfig {
  SchemeKind kind = SchemeKind::Cat2Tay;
  bool mood = false;
  MoodConfig mood_cfg{};
  /// CFL number; the case default is used when neither cfl nor fixed_dt is set.
  std::optional<double> cfl;
  std::optional<double> fixed_dt;
};

/// Accepts cat2_trap, cat2_tay, imex_rk2, first_order, catmood2_trap and
/// catmood2_tay, ignoring case and treating '-' as '_'. Throws ConfigError
/// "unknown scheme" otherwise.
SchemeConfig scheme_from_string(std::string_view name);
std::string scheme_name(const SchemeConfig& scheme);

/// One step of any configured scheme. The report is empty unless MOOD is on.
std::pair<CellField, DetectionReport> advance(const CellField& field, const Model& model,
                                              const SchemeConfig& scheme, double dt, double eps);

struct StepRecord {
  int step = 0;
  double t = 0.0;  // time reached after the step
  double dt = 0.0;
  int cad = 0;
  int pad = 0;
  int nad = 0;
  int recomputed = 0;
};

struct RunOptions {
  int n_cells = 200;
  double eps = 1.0;
  std::optional<double> t_final;  // case default when empty
  /// Called after every accepted step; returning false stops the run early.
  std::function<bool(const StepRecord&, const CellField&)> observer;
};

struct RunReport {
  CellField final_field;
  std::vector<StepRecord> steps;
  double wall_seconds = 0.0;

  int step_count() const { return static_cast<int>(steps.size()); }
  /// Steps where at least one cell was flagged in the first detection round.
  int mood_activations() const;
  int flagged_cells() const;
};

/// Advances the case from t = 0 to t_final, clipping the last step.
/// Stepper failures and non-finite states surface as RunError.
RunReport run(const TestCase& tc, const SchemeConfig& scheme, const RunOptions& options);

/// Cell averages of a field on a coarser grid over the same domain, by
/// overlap-weighted averaging (exact cell averaging for integer ratios).
CellField restrict_to(const CellField& fine, int n_coarse);

/// Sum |u_i - r_i| dx on the numerical grid. A finer reference is restricted first.
double l1_error(const CellField& numerical, const CellField& reference, int component);
double l1_error(const CellField& numerical, const std::function<double(double)>& exact,
                int component);

struct EocRow {
  std::string scheme;
  double eps = 0.0;
  int n_cells = 0;
  double l1_error = 0.0;
  std::optional<double> eoc;  // empty on the coarsest grid
};

struct EocTable {
  std::vector<EocRow> rows;
  /// EOC values of one (scheme, eps) block in grid order.
  std::vector<double> eocs(const std::string& scheme, double eps) const;
};

struct ReferenceSpec {
  int n_fine = 4096;
  /// CFL of the IMEX-RK2 reference run.
  double cfl = 0.45;
  /// In eoc_study, compare each scheme with its own n_fine run instead.
  bool self_reference = false;
  /// Cache directory; RELAXCAT_CACHE_DIR, then a temp directory, when empty.
  std::optional<std::filesystem::path> cache_dir;
  bool use_cache = true;
};

std::filesystem::path default_cache_dir();

/// Fine-grid IMEX-RK2 solution of the case at t_final, cached on disk keyed by
/// a hash of (case, n_fine, eps, t_final, cfl).
CellField reference_solution(const TestCase& tc, double eps, const ReferenceSpec& spec = {},
                             std::optional<double> t_final = std::nullopt);

/// The same for an arbitrary scheme (its cfl or the case default).
CellField reference_solution(const TestCase& tc, double eps, const SchemeConfig& scheme,
                             const ReferenceSpec& spec,
                             std::optional<double> t_final = std::nullopt);

/// L1 errors in component 0 on successive grid doublings, one block per
/// (scheme, eps). Runs execute concurrently.
EocTable eoc_study(const TestCase& tc, const std::vector<SchemeConfig>& schemes,
                   const std::vector<int>& grids, const std::vector<double>& eps_list,
                   const ReferenceSpec& reference = {});

void write_eoc_csv(std::ostream& out, const EocTable& table);
void write_solution_csv(std::ostream& out, const CellField& field, const Model& model);
void write_diagnostics_csv(std::ostream& out, const RunReport& report);

/// Median wall-clock seconds over `repeats` identical runs.
double median_wall_seconds(const TestCase& tc, const SchemeConfig& scheme,
                           const RunOptions& options, int repeats = 3);

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a(std::string_view text);

}  // namespace relaxcat

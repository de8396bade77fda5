#include "relaxcat/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "relaxcat/cat2.hpp"
#include "relaxcat/csv.hpp"
#include "relaxcat/errors.hpp"
#include "relaxcat/imex_rk.hpp"

namespace relaxcat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

TestCase xinjin_smooth(double a) {
  TestCase tc;
  tc.name = "XinJin-smooth";
  tc.description = "linear Xin-Jin, smooth well-prepared sine wave";
  tc.make_model = [a] { return std::make_shared<XinJinModel>(a); };
  tc.t_final = 1.0;
  tc.eps_values = {1.0, 1e-1, 1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12, 1e-14};
  tc.mood.eps1 = 1e-3;
  tc.mood.eps2 = 1e-2;
  tc.initial = [a](double x) {
    const double u = 1.0 + std::sin(kTwoPi * x);
    return State{u, a * u};
  };
  tc.well_prepared = true;
  tc.smooth = true;
  return tc;
}

TestCase xinjin_square(double a) {
  TestCase tc;
  tc.name = "XinJin-square";
  tc.description = "linear Xin-Jin, square wave";
  tc.make_model = [a] { return std::make_shared<XinJinModel>(a); };
  tc.t_final = 0.35;
  tc.eps_values = {1.0, 1e-8};
  tc.mood.eps1 = 1e-4;
  tc.mood.eps2 = 1e-3;
  tc.initial = [a](double x) {
    const double u = (x > 0.25 && x < 0.5) ? 2.0 : 1.0;
    return State{u, a * u};
  };
  tc.well_prepared = true;
  return tc;
}

TestCase xinjin_unprepared(double a) {
  TestCase tc;
  tc.name = "XinJin-unprepared";
  tc.description = "linear Xin-Jin, smooth u with v = 0 off equilibrium";
  tc.make_model = [a] { return std::make_shared<XinJinModel>(a); };
  tc.t_final = 0.1;
  tc.eps_values = {1e-14};
  tc.mood.eps1 = 1e-3;
  tc.mood.eps2 = 1e-2;
  tc.initial = [](double x) { return State{1.0 + 0.5 * std::sin(kTwoPi * x), 0.0}; };
  tc.smooth = true;
  tc.published_setup = false;
  return tc;
}

TestCase broadwell_smooth() {
  TestCase tc;
  tc.name = "Broadwell-smooth";
  tc.description = "Broadwell, smooth well-prepared data";
  tc.make_model = [] { return std::make_shared<BroadwellModel>(); };
  tc.t_final = 1.0;
  tc.eps_values = {1.0, 1e-8};
  tc.mood.eps1 = 1e-3;
  tc.mood.eps2 = 1e-2;
  tc.initial = [](double x) {
    const double s = std::sin(kTwoPi * x);
    const double rho = 1.0 + 0.3 * s;
    const double v = 0.5 + 0.1 * s;
    return State{rho, rho * v, 0.5 * rho * (1.0 + v * v)};
  };
  tc.well_prepared = true;
  tc.smooth = true;
  return tc;
}

TestCase broadwell_rp(std::string name, double split, State left, State right, double t,
                      std::vector<double> eps) {
  TestCase tc;
  tc.name = std::move(name);
  tc.description = "Broadwell Riemann problem";
  tc.make_model = [] { return std::make_shared<BroadwellModel>(); };
  tc.x_left = -1.0;
  tc.x_right = 1.0;
  tc.boundary = BoundaryKind::NeumannZero;
  tc.t_final = t;
  tc.eps_values = std::move(eps);
  tc.mood.eps1 = 1e-4;
  tc.mood.eps2 = 1e-3;
  tc.initial = [=](double x) { return x <= split ? left : right; };
  return tc;
}

std::vector<TestCase> build_registry() {
  std::vector<TestCase> cases;
  cases.push_back(xinjin_smooth(0.7));
  cases.push_back(xinjin_square(0.7));
  cases.push_back(broadwell_smooth());
  cases.push_back(broadwell_rp("Broadwell-RP1", 0.2, State{2.0, 1.0, 1.0},
                               State{1.0, 0.13962, 1.0}, 0.5, {1.0, 0.02, 1e-8}));
  cases.push_back(broadwell_rp("Broadwell-RP2", 0.0, State{1.0, 0.0, 1.0},
                               State{0.2, 0.0, 1.0}, 0.25, {1e-8}));
  cases.push_back(euler_riemann_case({}));
  cases.push_back(xinjin_unprepared(0.7));
  return cases;
}

std::string normalized(std::string_view name) {
  std::string s(name);
  for (char& c : s) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (c == '-') c = '_';
  }
  return s;
}

double effective_t_final(const TestCase& tc, const std::optional<double>& t) {
  return t.value_or(tc.t_final);
}

// Runs jobs 0 .. count-1 on up to hardware_concurrency threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& job) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

const std::vector<TestCase>& registry() {
  static const std::vector<TestCase> cases = build_registry();
  return cases;
}

const TestCase& find_case(std::string_view name) {
  for (const auto& tc : registry())
    if (tc.name == name) return tc;
  throw ConfigError("unknown case '" + std::string(name) + "'");
}

TestCase with_xinjin_slope(const TestCase& base, double a) {
  if (!(a > 0.0 && a < 1.0)) throw ConfigError("xinjin slope a must lie in (0, 1)");
  TestCase tc = base;
  if (base.name == "XinJin-smooth")
    tc = xinjin_smooth(a);
  else if (base.name == "XinJin-square")
    tc = xinjin_square(a);
  else if (base.name == "XinJin-unprepared")
    tc = xinjin_unprepared(a);
  else
    throw ConfigError("case '" + base.name + "' is not a Xin-Jin case");
  tc.t_final = base.t_final;
  tc.cfl = base.cfl;
  tc.mood = base.mood;
  tc.eps_values = base.eps_values;
  return tc;
}

TestCase euler_riemann_case(const EulerRiemannSetup& s) {
  if (!(s.rho_left > 0.0 && s.rho_right > 0.0 && s.p_left > 0.0 && s.p_right > 0.0))
    throw ConfigError("euler riemann states need positive density and pressure");
  const auto model = std::make_shared<EulerHeatModel>(s.params);
  TestCase tc;
  tc.name = "EulerHeat-RP";
  tc.description = "Euler with heat transfer, Sod-type states (not from a publication)";
  tc.make_model = [model] { return model; };
  tc.boundary = BoundaryKind::NeumannZero;
  tc.t_final = 0.3;
  tc.cfl = 0.7;
  tc.eps_values = {1e-8};
  tc.mood.eps1 = 1e-4;
  tc.mood.eps2 = 1e-3;
  const State left = model->from_primitive(s.rho_left, s.u_left, s.p_left);
  const State right = model->from_primitive(s.rho_right, s.u_right, s.p_right);
  const double split = s.x_split;
  tc.initial = [=](double x) { return x <= split ? left : right; };
  tc.published_setup = false;
  return tc;
}

CellField initial_field(const TestCase& tc, int n_cells) {
  const Grid grid = build_uniform_grid(tc.x_left, tc.x_right, n_cells);
  const ModelPtr model = tc.make_model();
  CellField f(grid, tc.boundary, model->dim());
  for (int i = 0; i < n_cells; ++i) f[i] = tc.initial(grid.center(i));
  apply_boundary(f);
  return f;
}

SchemeConfig scheme_from_string(std::string_view name) {
  static const std::map<std::string, std::pair<SchemeKind, bool>> known = {
      {"cat2_trap", {SchemeKind::Cat2Trap, false}},
      {"cat2_tay", {SchemeKind::Cat2Tay, false}},
      {"catmood2_trap", {SchemeKind::Cat2Trap, true}},
      {"catmood2_tay", {SchemeKind::Cat2Tay, true}},
      {"imex_rk2", {SchemeKind::ImexRk2, false}},
      {"rk2", {SchemeKind::ImexRk2, false}},
      {"first_order", {SchemeKind::FirstOrder, false}},
  };
  const auto it = known.find(normalized(name));
  if (it == known.end()) throw ConfigError("unknown scheme '" + std::string(name) + "'");
  SchemeConfig s;
  s.kind = it->second.first;
  s.mood = it->second.second;
  return s;
}

std::string scheme_name(const SchemeConfig& s) {
  switch (s.kind) {
    case SchemeKind::Cat2Trap: return s.mood ? "catmood2_trap" : "cat2_trap";
    case SchemeKind::Cat2Tay: return s.mood ? "catmood2_tay" : "cat2_tay";
    case SchemeKind::ImexRk2: return "imex_rk2";
    case SchemeKind::FirstOrder: return "first_order";
  }
  return "?";
}

std::pair<CellField, DetectionReport> advance(const CellField& field, const Model& model,
                                              const SchemeConfig& s, double dt, double eps) {
  if (s.mood) {
    if (s.kind != SchemeKind::Cat2Trap && s.kind != SchemeKind::Cat2Tay)
      throw ConfigError("MOOD is only available on top of the CAT2 schemes");
    const auto ho = s.kind == SchemeKind::Cat2Trap ? HighOrderScheme::Cat2Trap
                                                   : HighOrderScheme::Cat2Tay;
    return mood_step(field, model, ho, s.mood_cfg, dt, eps);
  }
  switch (s.kind) {
    case SchemeKind::Cat2Trap: return {step_cat2_trap(field, model, dt, eps), {}};
    case SchemeKind::Cat2Tay: return {step_cat2_tay(field, model, dt, eps), {}};
    case SchemeKind::ImexRk2: return {step_imex_rk2(field, model, dt, eps), {}};
    case SchemeKind::FirstOrder: return {step_first_order(field, model, dt, eps), {}};
  }
  throw Error("unhandled scheme");
}

int RunReport::mood_activations() const {
  return static_cast<int>(std::count_if(steps.begin(), steps.end(), [](const StepRecord& r) {
    return r.cad + r.pad + r.nad > 0;
  }));
}

int RunReport::flagged_cells() const {
  int total = 0;
  for (const auto& r : steps) total += r.cad + r.pad + r.nad;
  return total;
}

RunReport run(const TestCase& tc, const SchemeConfig& scheme, const RunOptions& opt) {
  const double t_final = effective_t_final(tc, opt.t_final);
  if (!(t_final > 0.0)) throw ConfigError("t_final must be positive");
  if (!(opt.eps > 0.0)) throw ConfigError("eps must be positive");
  if (scheme.fixed_dt && !(*scheme.fixed_dt > 0.0)) throw ConfigError("fixed dt must be positive");
  const double cfl = scheme.cfl.value_or(tc.cfl);
  if (!scheme.fixed_dt && !(cfl > 0.0)) throw ConfigError("cfl must be positive");

  const ModelPtr model = tc.make_model();
  if (scheme.mood) validate(scheme.mood_cfg, model->dim());
  if (scheme.mood && scheme.kind != SchemeKind::Cat2Trap && scheme.kind != SchemeKind::Cat2Tay)
    throw ConfigError("MOOD is only available on top of the CAT2 schemes");

  RunReport report;
  CellField u = initial_field(tc, opt.n_cells);
  const auto start = std::chrono::steady_clock::now();
  int step = 0;
  while (u.time < t_final) {
    double dt = 0.0;
    try {
      dt = scheme.fixed_dt ? *scheme.fixed_dt : compute_dt(u, *model, cfl);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw RunError(std::string("time step: ") + e.what(), u.time, -1);
    }
    const bool last = u.time + dt >= t_final;
    if (last) dt = t_final - u.time;

    std::pair<CellField, DetectionReport> next;
    try {
      next = advance(u, *model, scheme, dt, opt.eps);
    } catch (const StepError& e) {
      throw RunError(e.what(), u.time, e.cell());
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw RunError(e.what(), u.time, -1);
    }
    for (int i = 0; i < next.first.size(); ++i)
      if (!all_finite(next.first[i])) throw RunError("non-finite state", u.time, i);
    if (last) next.first.time = t_final;

    StepRecord rec;
    rec.step = ++step;
    rec.t = next.first.time;
    rec.dt = dt;
    if (!next.second.rounds.empty()) {
      const RoundStats& first = next.second.rounds.front();
      rec.cad = first.cad;
      rec.pad = first.pad;
      rec.nad = first.nad;
      rec.recomputed = next.second.recomputed_cells;
    }
    u = std::move(next.first);
    report.steps.push_back(rec);
    if (opt.observer && !opt.observer(rec, u)) break;
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.final_field = std::move(u);
  return report;
}

CellField restrict_to(const CellField& fine, int n_coarse) {
  const Grid& fg = fine.grid();
  const int nf = fg.n_cells;
  if (n_coarse > nf) throw ConfigError("cannot restrict to a finer grid");
  const Grid cg = build_uniform_grid(fg.x_left, fg.x_right, n_coarse);
  CellField out(cg, fine.boundary(), fine.dim());
  if (nf % n_coarse == 0) {
    const int r = nf / n_coarse;
    for (int c = 0; c < n_coarse; ++c) {
      State sum;
      for (int j = c * r; j < (c + 1) * r; ++j) sum += fine[j];
      out[c] = (1.0 / r) * sum;
    }
  } else {
    const double ratio = static_cast<double>(nf) / n_coarse;
    for (int c = 0; c < n_coarse; ++c) {
      const double a = c * ratio;
      const double b = (c + 1) * ratio;
      State sum;
      for (int j = static_cast<int>(std::floor(a)); j < std::min(nf, static_cast<int>(std::ceil(b)));
           ++j) {
        const double w = std::min(b, j + 1.0) - std::max(a, static_cast<double>(j));
        if (w > 0.0) sum += w * fine[j];
      }
      out[c] = (1.0 / ratio) * sum;
    }
  }
  out.time = fine.time;
  apply_boundary(out);
  return out;
}

double l1_error(const CellField& numerical, const CellField& reference, int component) {
  const Grid& g = numerical.grid();
  const Grid& r = reference.grid();
  const double tol = 1e-12 * std::max(1.0, g.length());
  if (std::fabs(g.x_left - r.x_left) > tol || std::fabs(g.x_right - r.x_right) > tol)
    throw ConfigError("l1_error: fields live on different domains");
  if (component < 0 || component >= numerical.dim() || component >= reference.dim())
    throw ConfigError("l1_error: component out of range");
  if (r.n_cells < g.n_cells) throw ConfigError("l1_error: reference grid is coarser");
  const CellField restricted =
      r.n_cells == g.n_cells ? reference : restrict_to(reference, g.n_cells);
  double sum = 0.0;
  for (int i = 0; i < g.n_cells; ++i) sum += std::fabs(numerical[i][component] - restricted[i][component]);
  return sum * g.dx;
}

double l1_error(const CellField& numerical, const std::function<double(double)>& exact,
                int component) {
  const Grid& g = numerical.grid();
  if (component < 0 || component >= numerical.dim())
    throw ConfigError("l1_error: component out of range");
  double sum = 0.0;
  for (int i = 0; i < g.n_cells; ++i) sum += std::fabs(numerical[i][component] - exact(g.center(i)));
  return sum * g.dx;
}

std::vector<double> EocTable::eocs(const std::string& scheme, double eps) const {
  std::vector<double> out;
  for (const auto& row : rows)
    if (row.scheme == scheme && row.eps == eps && row.eoc) out.push_back(*row.eoc);
  return out;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("RELAXCAT_CACHE_DIR"); env && *env) return env;
  return std::filesystem::temp_directory_path() / "relaxcat_cache";
}

namespace {

std::string reference_key(const TestCase& tc, double eps, const SchemeConfig& scheme,
                          const ReferenceSpec& spec, double t_final) {
  std::ostringstream key;
  key << "relaxcat-reference-v1;case=" << tc.name << ";n=" << spec.n_fine
      << ";eps=" << format_number(eps) << ";t=" << format_number(t_final)
      << ";scheme=" << scheme_name(scheme)
      << ";cfl=" << format_number(scheme.cfl.value_or(tc.cfl));
  if (scheme.fixed_dt) key << ";dt=" << format_number(*scheme.fixed_dt);
  if (scheme.mood)
    key << ";mood=" << format_number(scheme.mood_cfg.eps1) << '/'
        << format_number(scheme.mood_cfg.eps2) << '/' << scheme.mood_cfg.max_cascade_rounds
        << '/' << scheme.mood_cfg.enable_pad << '/' << scheme.mood_cfg.detection_component;
  // The initial condition is part of the configuration.
  const CellField probe = initial_field(tc, 16);
  for (int i = 0; i < 16; ++i)
    for (int k = 0; k < probe.dim(); ++k) key << ',' << format_number(probe[i][k]);
  return key.str();
}

bool read_cached(const std::filesystem::path& file, const std::string& key, CellField& field) {
  std::ifstream in(file);
  if (!in) return false;
  std::string line;
  if (!std::getline(in, line) || line != "# " + key) return false;
  if (!std::getline(in, line)) return false;  // column header
  for (int i = 0; i < field.size(); ++i) {
    if (!std::getline(in, line)) return false;
    const auto cols = split_csv_line(line);
    if (static_cast<int>(cols.size()) != field.dim() + 1) return false;
    try {
      for (int k = 0; k < field.dim(); ++k)
        field[i][k] = parse_number(cols[static_cast<std::size_t>(k + 1)]);
    } catch (const ConfigError&) {
      return false;
    }
  }
  apply_boundary(field);
  return true;
}

void write_cached(const std::filesystem::path& file, const std::string& key,
                  const CellField& field, const Model& model) {
  std::error_code ec;
  std::filesystem::create_directories(file.parent_path(), ec);
  const std::filesystem::path tmp = file.string() + ".tmp" + std::to_string(fnv1a(key) % 100000);
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << "# " << key << '\n';
    write_solution_csv(out, field, model);
  }
  std::filesystem::rename(tmp, file, ec);
}

}  // namespace

CellField reference_solution(const TestCase& tc, double eps, const ReferenceSpec& spec,
                             std::optional<double> t_final) {
  SchemeConfig imex;
  imex.kind = SchemeKind::ImexRk2;
  imex.cfl = spec.cfl;
  return reference_solution(tc, eps, imex, spec, t_final);
}

CellField reference_solution(const TestCase& tc, double eps, const SchemeConfig& scheme,
                             const ReferenceSpec& spec, std::optional<double> t_final) {
  const double tf = effective_t_final(tc, t_final);
  const std::string key = reference_key(tc, eps, scheme, spec, tf);
  const std::filesystem::path dir = spec.cache_dir.value_or(default_cache_dir());
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(key)));
  const std::filesystem::path file = dir / ("ref_" + std::string(hex) + ".csv");

  const ModelPtr model = tc.make_model();
  if (spec.use_cache) {
    CellField cached = initial_field(tc, spec.n_fine);
    if (read_cached(file, key, cached)) {
      cached.time = tf;
      return cached;
    }
  }
  RunOptions opt;
  opt.n_cells = spec.n_fine;
  opt.eps = eps;
  opt.t_final = tf;
  CellField result = run(tc, scheme, opt).final_field;
  if (spec.use_cache) write_cached(file, key, result, *model);
  return result;
}

EocTable eoc_study(const TestCase& tc, const std::vector<SchemeConfig>& schemes,
                   const std::vector<int>& grids, const std::vector<double>& eps_list,
                   const ReferenceSpec& reference) {
  if (grids.empty()) throw ConfigError("eoc study needs at least one grid");
  for (std::size_t i = 1; i < grids.size(); ++i)
    if (grids[i] != 2 * grids[i - 1]) throw ConfigError("eoc grids must be successive doublings");
  if (reference.n_fine < grids.back())
    throw ConfigError("reference grid must be at least as fine as the finest grid");

  const std::size_t ns = schemes.size(), ne = eps_list.size(), ng = grids.size();
  const std::size_t nr = reference.self_reference ? ns * ne : ne;
  std::vector<CellField> refs(nr);
  parallel_for(nr, [&](std::size_t r) {
    const double eps = eps_list[r % ne];
    refs[r] = reference.self_reference ? reference_solution(tc, eps, schemes[r / ne], reference)
                                       : reference_solution(tc, eps, reference);
  });

  std::vector<double> errors(ns * ne * ng);
  parallel_for(errors.size(), [&](std::size_t idx) {
    const std::size_t g = idx % ng, e = (idx / ng) % ne, s = idx / (ng * ne);
    RunOptions opt;
    opt.n_cells = grids[g];
    opt.eps = eps_list[e];
    const RunReport rep = run(tc, schemes[s], opt);
    errors[idx] = l1_error(rep.final_field, refs[reference.self_reference ? s * ne + e : e], 0);
  });

  EocTable table;
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t e = 0; e < ne; ++e)
      for (std::size_t g = 0; g < ng; ++g) {
        EocRow row;
        row.scheme = scheme_name(schemes[s]);
        row.eps = eps_list[e];
        row.n_cells = grids[g];
        row.l1_error = errors[(s * ne + e) * ng + g];
        if (g > 0) row.eoc = std::log2(errors[(s * ne + e) * ng + g - 1] / row.l1_error);
        table.rows.push_back(row);
      }
  return table;
}

void write_eoc_csv(std::ostream& out, const EocTable& table) {
  out << "scheme,eps,N,l1_error,eoc\n";
  for (const auto& r : table.rows) {
    out << r.scheme << ',' << format_number(r.eps) << ',' << r.n_cells << ','
        << format_number(r.l1_error) << ',';
    if (r.eoc) out << format_number(*r.eoc);
    out << '\n';
  }
}

void write_solution_csv(std::ostream& out, const CellField& field, const Model& model) {
  out << 'x';
  for (const auto& name : model.component_names()) out << ',' << name;
  out << '\n';
  for (int i = 0; i < field.size(); ++i) {
    out << format_number(field.grid().center(i));
    for (int k = 0; k < field.dim(); ++k) out << ',' << format_number(field[i][k]);
    out << '\n';
  }
}

void write_diagnostics_csv(std::ostream& out, const RunReport& report) {
  out << "step,t,dt,cells_flagged_cad,cells_flagged_pad,cells_flagged_nad\n";
  for (const auto& r : report.steps)
    out << r.step << ',' << format_number(r.t) << ',' << format_number(r.dt) << ',' << r.cad
        << ',' << r.pad << ',' << r.nad << '\n';
}

double median_wall_seconds(const TestCase& tc, const SchemeConfig& scheme,
                           const RunOptions& options, int repeats) {
  if (repeats < 1) throw ConfigError("repeat count must be positive");
  std::vector<double> t;
  for (int i = 0; i < repeats; ++i) t.push_back(run(tc, scheme, options).wall_seconds);
  std::sort(t.begin(), t.end());
  const auto n = t.size();
  return n % 2 ? t[n / 2] : 0.5 * (t[n / 2 - 1] + t[n / 2]);
}

}  // namespace relaxcat

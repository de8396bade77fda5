#include "relaxcat/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "relaxcat/csv.hpp"
#include "relaxcat/errors.hpp"

namespace relaxcat {

namespace {

std::ofstream open_output(const std::string& dir, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + (std::filesystem::path(dir) / name).string());
  return out;
}

std::string quoted(std::string_view text) {
  std::string s = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') s += '\\';
    s += c == '\n' ? ' ' : c;
  }
  return s + '"';
}

double single_eps(const RunConfig& cfg, const TestCase& tc) {
  const auto eps = resolve_eps(cfg, tc);
  if (eps.size() != 1) throw ConfigError("run takes exactly one eps value");
  return eps.front();
}

}  // namespace

void cmd_run(const RunConfig& cfg, std::ostream& log) {
  if (cfg.schemes.size() != 1) throw ConfigError("run takes exactly one scheme");
  const TestCase tc = resolve_case(cfg);
  const SchemeConfig scheme = resolve_scheme(cfg, cfg.schemes.front(), tc);
  RunOptions opt;
  opt.n_cells = cfg.n_cells;
  opt.eps = single_eps(cfg, tc);

  std::vector<double> walls;
  RunReport report;
  for (int r = 0; r < cfg.repeats; ++r) {
    report = run(tc, scheme, opt);
    walls.push_back(report.wall_seconds);
  }
  std::sort(walls.begin(), walls.end());
  const std::size_t n = walls.size();
  const double median = n % 2 ? walls[n / 2] : 0.5 * (walls[n / 2 - 1] + walls[n / 2]);

  const ModelPtr model = tc.make_model();
  {
    auto out = open_output(cfg.out_dir, "solution.csv");
    write_solution_csv(out, report.final_field, *model);
  }
  {
    auto out = open_output(cfg.out_dir, "diagnostics.csv");
    write_diagnostics_csv(out, report);
  }
  {
    auto out = open_output(cfg.out_dir, "timing.csv");
    out << "case,scheme,n_cells,eps,steps,repeats,median_seconds\n"
        << tc.name << ',' << scheme_name(scheme) << ',' << cfg.n_cells << ','
        << format_number(opt.eps) << ',' << report.step_count() << ',' << cfg.repeats << ','
        << format_number(median) << '\n';
  }
  log << "run " << tc.name << (tc.published_setup ? "" : " (non-published setup)") << ' '
      << scheme_name(scheme) << " N=" << cfg.n_cells << " eps=" << format_number(opt.eps)
      << " steps=" << report.step_count() << " mood_steps=" << report.mood_activations()
      << " seconds=" << format_number(median) << '\n';
}

void cmd_convergence(const RunConfig& cfg, std::ostream& log) {
  const TestCase tc = resolve_case(cfg);
  std::vector<SchemeConfig> schemes;
  for (const auto& name : cfg.schemes) schemes.push_back(resolve_scheme(cfg, name, tc));
  ReferenceSpec ref;
  ref.n_fine = cfg.reference_n;
  ref.cfl = cfg.reference_cfl;
  ref.self_reference = cfg.reference_self;
  const EocTable table = eoc_study(tc, schemes, cfg.grids, resolve_eps(cfg, tc), ref);
  auto out = open_output(cfg.out_dir, "convergence.csv");
  write_eoc_csv(out, table);
  log << "convergence " << tc.name << ": " << table.rows.size() << " rows\n";
}

void cmd_stability(const RunConfig& cfg, std::ostream& log) {
  StabilityRegion all;
  for (const auto& name : cfg.stability_schemes) {
    const auto region = stability_region(analysis_scheme_from_string(name), cfg.stability_a,
                                         cfg.stability_eps, cfg.stability);
    all.points.insert(all.points.end(), region.points.begin(), region.points.end());
  }
  auto out = open_output(cfg.out_dir, "stability.csv");
  write_region_csv(out, all);
  log << "stability eps=" << format_number(cfg.stability_eps) << ": " << all.points.size()
      << " rows\n";
}

void cmd_list_cases(std::ostream& out) {
  out << "name,model,domain,boundary,t_final,cfl,eps_values,published\n";
  for (const auto& tc : registry()) {
    out << tc.name << ',' << tc.make_model()->name() << ",[" << format_number(tc.x_left) << ' '
        << format_number(tc.x_right) << "]," << to_string(tc.boundary) << ','
        << format_number(tc.t_final) << ',' << format_number(tc.cfl) << ',';
    for (std::size_t i = 0; i < tc.eps_values.size(); ++i)
      out << (i ? " " : "") << format_number(tc.eps_values[i]);
    out << ',' << (tc.published_setup ? "yes" : "no") << '\n';
  }
}

int run_command(std::string_view command, const RunConfig& cfg, std::ostream& out,
                std::ostream& err) {
  try {
    if (command == "run")
      cmd_run(cfg, out);
    else if (command == "convergence")
      cmd_convergence(cfg, out);
    else if (command == "stability")
      cmd_stability(cfg, out);
    else if (command == "list-cases")
      cmd_list_cases(out);
    else
      throw ConfigError("unknown command '" + std::string(command) + "'");
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error kind=config message=" << quoted(e.what()) << '\n';
    return kExitConfigError;
  } catch (const RunError& e) {
    err << "error kind=solver time=" << format_number(e.time()) << " cell=" << e.cell()
        << " message=" << quoted(e.what()) << '\n';
    return kExitSolverFailure;
  } catch (const Error& e) {
    err << "error kind=solver message=" << quoted(e.what()) << '\n';
    return kExitSolverFailure;
  } catch (const std::ios_base::failure& e) {
    err << "error kind=io message=" << quoted(e.what()) << '\n';
    return kExitSolverFailure;
  }
}

int seed_check(std::ostream& out) {
  int failures = 0;
  auto check = [&](const std::string& name, const std::function<bool()>& body) {
    bool ok = false;
    try {
      ok = body();
    } catch (const std::exception& e) {
      out << "  exception: " << e.what() << '\n';
    }
    out << (ok ? "ok   " : "FAIL ") << name << '\n';
    if (!ok) ++failures;
  };

  check("registry has at least six cases", [] { return registry().size() >= 6; });
  check("XinJin-smooth is well prepared", [] {
    const TestCase& tc = find_case("XinJin-smooth");
    const CellField f = initial_field(tc, 200);
    const auto model = std::dynamic_pointer_cast<const XinJinModel>(tc.make_model());
    double worst = 0.0;
    for (int i = 0; i < f.size(); ++i) worst = std::max(worst, std::fabs(f[i][1] - model->g(f[i][0])));
    return worst == 0.0;
  });
  check("l1 of identical fields is zero", [] {
    const CellField f = initial_field(find_case("XinJin-smooth"), 64);
    return l1_error(f, f, 0) == 0.0;
  });
  check("l1 of a constant offset 0.1 is 0.1", [] {
    CellField f = initial_field(find_case("XinJin-smooth"), 100);
    CellField g = f;
    for (int i = 0; i < g.size(); ++i) g[i][0] += 0.1;
    return std::fabs(l1_error(g, f, 0) - 0.1) < 1e-12;
  });
  check("restriction self-comparison is zero", [] {
    const CellField fine = initial_field(find_case("XinJin-smooth"), 2000);
    return l1_error(restrict_to(fine, 200), fine, 0) == 0.0;
  });
  check("fixed dt of zero is rejected", [] {
    RunConfig cfg;
    try {
      apply_setting(cfg, "dt", "0");
    } catch (const ConfigError&) {
      return true;
    }
    return false;
  });
  check("unknown scheme exits with code 2", [] {
    RunConfig cfg;
    cfg.schemes = {"no_such_scheme"};
    std::ostringstream o, e;
    return run_command("run", cfg, o, e) == kExitConfigError &&
           e.str().find("unknown scheme") != std::string::npos;
  });
  check("trapezoidal amplification at z = 0 is one",
        [] { return ode_amplification(AnalysisScheme::Cat2Trap, 0.0) == 1.0; });
  check("XinJin-square CATMOOD2-Tay run gives 200 rows and 3 columns", [] {
    const TestCase& tc = find_case("XinJin-square");
    SchemeConfig s = scheme_from_string("catmood2_tay");
    s.mood_cfg = tc.mood;
    RunOptions opt;
    opt.n_cells = 200;
    opt.eps = 1.0;
    const RunReport rep = run(tc, s, opt);
    std::ostringstream csv;
    write_solution_csv(csv, rep.final_field, *tc.make_model());
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    if (split_csv_line(line).size() != 3) return false;
    int rows = 0;
    while (std::getline(in, line)) {
      if (split_csv_line(line).size() != 3) return false;
      ++rows;
    }
    return rows == 200;
  });
  check("convergence table shape and header", [] {
    const TestCase& tc = find_case("XinJin-smooth");
    std::vector<SchemeConfig> schemes;
    for (auto n : {"cat2_trap", "cat2_tay", "imex_rk2"}) schemes.push_back(scheme_from_string(n));
    ReferenceSpec ref;
    ref.n_fine = 400;
    ref.use_cache = false;
    TestCase short_tc = tc;
    short_tc.t_final = 0.05;
    const EocTable t = eoc_study(short_tc, schemes, {100, 200, 400}, {1.0, 1e-8, 1e-14}, ref);
    std::ostringstream csv;
    write_eoc_csv(csv, t);
    const std::string text = csv.str();
    if (text.rfind("scheme,eps,N,l1_error,eoc\n", 0) != 0) return false;
    int coarse_empty = 0;
    for (const auto& r : t.rows)
      if (r.n_cells == 100 && !r.eoc) ++coarse_empty;
    return t.rows.size() == 27 && coarse_empty == 9;
  });
  check("stability sweep gives 18 rows within (0, 1.6]", [] {
    RegionOptions opt;
    opt.k_samples = 16;
    opt.mu_tol = 1e-2;
    std::vector<double> a;
    for (int i = 1; i <= 9; ++i) a.push_back(0.1 * i);
    std::size_t rows = 0;
    bool bounded = true;
    for (auto s : {AnalysisScheme::Cat2Trap, AnalysisScheme::Cat2Tay})
      for (const auto& p : stability_region(s, a, 1e-14, opt).points) {
        ++rows;
        bounded = bounded && p.mu_max > 0.0 && p.mu_max <= 1.6;
      }
    return rows == 18 && bounded;
  });

  out << (failures == 0 ? "seed-check passed" : "seed-check FAILED") << " (" << failures
      << " failures)\n";
  return failures == 0 ? kExitOk : kExitSolverFailure;
}

}  // namespace relaxcat

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <filesystem>
#include <random>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "relaxcat/errors.hpp"
#include "relaxcat/harness.hpp"

using namespace relaxcat;
using namespace testing_helpers;

namespace {

// Exact solution of linear Xin-Jin for u0 = 1 + sin(2 pi x), v0 = a u0.
std::function<double(double)> exact_xinjin_u(double a, double eps, double t) {
  const double k = 2.0 * kPi;
  if (eps < 1e-6) {
    // Slow branch -i k a - eps k^2 (1 - a^2) of the mode; the fast one has decayed.
    const double damp = std::exp(-eps * k * k * (1.0 - a * a) * t);
    return [=](double x) { return 1.0 + damp * std::sin(k * (x - a * t)); };
  }
  const std::complex<double> i(0.0, 1.0);
  Eigen::Matrix2cd m;
  m << 0.0, -i * k, -i * k + a / eps, -1.0 / eps;
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(m);
  const Eigen::Matrix2cd v = es.eigenvectors();
  Eigen::Vector2cd e;
  e << std::exp(es.eigenvalues()(0) * t), std::exp(es.eigenvalues()(1) * t);
  // sin(kx) = Im e^{ikx}: mode amplitudes (1, a) on e^{ikx}.
  const Eigen::Vector2cd c = v.partialPivLu().solve(Eigen::Vector2cd(1.0, a));
  const Eigen::Vector2cd mode = v * c.cwiseProduct(e);
  const std::complex<double> amp = mode(0);
  return [amp, k](double x) { return 1.0 + std::imag(amp * std::exp(std::complex<double>(0.0, k * x))); };
}

std::vector<double> exact_eocs(SchemeKind kind, double eps, double t_final,
                               const std::vector<int>& grids) {
  const TestCase& tc = find_case("XinJin-smooth");
  SchemeConfig s;
  s.kind = kind;
  RunOptions opt;
  opt.eps = eps;
  opt.t_final = t_final;
  const auto exact = exact_xinjin_u(0.7, eps, t_final);
  std::vector<double> err;
  for (int n : grids) {
    opt.n_cells = n;
    err.push_back(l1_error(run(tc, s, opt).final_field, exact, 0));
  }
  std::vector<double> eoc;
  for (std::size_t i = 1; i < err.size(); ++i) eoc.push_back(std::log2(err[i - 1] / err[i]));
  return eoc;
}

double total_variation(const CellField& f, int k) {
  double tv = 0.0;
  for (int i = 1; i < f.size(); ++i) tv += std::fabs(f[i][k] - f[i - 1][k]);
  return tv;
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("relaxcat_unit_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("case registry") {
  CHECK(registry().size() >= 6);
  for (const char* name : {"XinJin-smooth", "XinJin-square", "Broadwell-smooth", "Broadwell-RP1",
                           "Broadwell-RP2", "EulerHeat-RP"})
    CHECK(find_case(name).name == name);
  CHECK_THROWS_AS(find_case("Nope"), ConfigError);
}

TEST_CASE("well-prepared and unprepared initial data") {
  const TestCase& s = find_case("XinJin-smooth");
  const CellField f = initial_field(s, 200);
  const XinJinModel xj(0.7);
  double worst = 0.0;
  for (int i = 0; i < f.size(); ++i) worst = std::max(worst, std::fabs(f[i][1] - xj.g(f[i][0])));
  CHECK(worst == 0.0);

  const TestCase& rp = find_case("Broadwell-RP1");
  const CellField b = initial_field(rp, 200);
  CHECK(b[0][2] == 1.0);
  CHECK(BroadwellModel().equilibrium(b[0])[2] == doctest::Approx(1.25));
  CHECK_FALSE(rp.well_prepared);
}

TEST_CASE("slope override keeps the case well prepared") {
  const TestCase tc = with_xinjin_slope(find_case("XinJin-smooth"), 0.3);
  const CellField f = initial_field(tc, 50);
  for (int i = 0; i < f.size(); ++i) CHECK(f[i][1] == doctest::Approx(0.3 * f[i][0]));
  CHECK_THROWS_AS(with_xinjin_slope(find_case("Broadwell-RP1"), 0.3), ConfigError);
}

TEST_CASE("scheme names") {
  CHECK(scheme_from_string("CAT2-Tay").kind == SchemeKind::Cat2Tay);
  CHECK(scheme_from_string("catmood2_trap").mood);
  CHECK(scheme_from_string("IMEX-RK2").kind == SchemeKind::ImexRk2);
  CHECK(scheme_name(scheme_from_string("catmood2_tay")) == "catmood2_tay");
  CHECK_THROWS_WITH_AS(scheme_from_string("weno5"), doctest::Contains("unknown scheme"), ConfigError);
}

TEST_CASE("l1 error") {
  const TestCase& tc = find_case("XinJin-smooth");
  const CellField f = initial_field(tc, 100);
  CHECK(l1_error(f, f, 0) == 0.0);
  CellField g = f;
  for (int i = 0; i < g.size(); ++i) g[i][0] += 0.1;
  CHECK(l1_error(g, f, 0) == doctest::Approx(0.1).epsilon(1e-12));
  const CellField fine = initial_field(tc, 2000);
  CHECK(l1_error(restrict_to(fine, 200), fine, 0) == 0.0);
  CHECK(l1_error(f, [](double) { return 0.0; }, 1) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK_THROWS_AS(l1_error(f, f, 3), ConfigError);
  CHECK_THROWS_AS(restrict_to(f, 200), ConfigError);
}

TEST_CASE("restriction averages cells") {
  CellField fine(build_uniform_grid(0.0, 1.0, 12), BoundaryKind::Periodic, 1);
  for (int i = 0; i < 12; ++i) fine[i] = State(static_cast<double>(i));
  const CellField c = restrict_to(fine, 6);
  CHECK(c[0][0] == doctest::Approx(0.5));
  CHECK(c[5][0] == doctest::Approx(10.5));
  const CellField odd = restrict_to(fine, 8);
  CHECK(odd[0][0] == doctest::Approx((0.0 + 0.5 * 1.0) / 1.5));
  CHECK(integral(odd, 0) == doctest::Approx(integral(fine, 0)));
}

TEST_CASE("run preconditions") {
  const TestCase& tc = find_case("XinJin-smooth");
  SchemeConfig s = scheme_from_string("cat2_tay");
  s.fixed_dt = 0.0;
  RunOptions opt;
  CHECK_THROWS_AS(run(tc, s, opt), ConfigError);
  s.fixed_dt.reset();
  opt.eps = 0.0;
  CHECK_THROWS_AS(run(tc, s, opt), ConfigError);
  opt.eps = 1.0;
  opt.t_final = -1.0;
  CHECK_THROWS_AS(run(tc, s, opt), ConfigError);
  SchemeConfig m = scheme_from_string("imex_rk2");
  m.mood = true;
  opt.t_final.reset();
  CHECK_THROWS_AS(run(tc, m, opt), ConfigError);
}

TEST_CASE("run reaches the final time exactly") {
  const TestCase& tc = find_case("XinJin-smooth");
  RunOptions opt;
  opt.n_cells = 100;
  opt.t_final = 0.123;
  const RunReport r = run(tc, scheme_from_string("cat2_trap"), opt);
  CHECK(r.final_field.time == 0.123);
  CHECK(r.steps.back().t == 0.123);
  for (std::size_t i = 0; i + 1 < r.steps.size(); ++i)
    CHECK(r.steps[i].dt == doctest::Approx(0.9 / 100));
  CHECK(r.steps.back().dt <= 0.9 / 100 + 1e-15);

  SchemeConfig fixed = scheme_from_string("cat2_trap");
  fixed.fixed_dt = 0.01;
  CHECK(run(tc, fixed, opt).step_count() == 13);
}

TEST_CASE("smooth CATMOOD run needs no repair") {
  const TestCase& tc = find_case("XinJin-smooth");
  SchemeConfig s = scheme_from_string("catmood2_tay");
  s.mood_cfg.eps1 = 1e-3;
  s.mood_cfg.eps2 = 1e-2;
  s.cfl = 0.9;
  RunOptions opt;
  opt.n_cells = 200;
  opt.eps = 1e-8;
  const RunReport r = run(tc, s, opt);
  CHECK(r.final_field.time == 1.0);
  CHECK(r.mood_activations() == 0);
}

TEST_CASE("trapezoidal CAT2 on unprepared Broadwell data in the stiff regime") {
  const TestCase& tc = find_case("Broadwell-RP1");
  const BroadwellModel bw;
  RunOptions opt;
  opt.n_cells = 200;
  opt.eps = 1e-8;
  auto off_equilibrium = [&](const CellField& f) {
    double d = 0.0;
    for (int i = 0; i < f.size(); ++i) d = std::max(d, std::fabs(f[i][2] - bw.equilibrium(f[i])[2]));
    return d;
  };
  bool failed = false;
  double dev = 0.0, tv = 0.0;
  try {
    const CellField f = run(tc, scheme_from_string("cat2_trap"), opt).final_field;
    dev = off_equilibrium(f);
    tv = total_variation(f, 0);
  } catch (const RunError&) {
    failed = true;
  }
  const CellField tay = run(tc, scheme_from_string("cat2_tay"), opt).final_field;
  const CellField low = run(tc, scheme_from_string("first_order"), opt).final_field;
  CHECK(off_equilibrium(tay) < 1e-6);
  CHECK(off_equilibrium(low) < 1e-6);
  CHECK((failed || (dev > 0.1 && tv > 1.5 * total_variation(low, 0))));
}

TEST_CASE("second order against the exact linear solution") {
  const std::vector<int> grids = {100, 200, 400, 800};
  for (double eps : {1.0, 1e-14}) {
    for (SchemeKind k : {SchemeKind::Cat2Trap, SchemeKind::Cat2Tay}) {
      for (double e : exact_eocs(k, eps, 1.0, grids)) {
        CHECK(e >= 1.8);
        CHECK(e <= 2.3);
      }
    }
    for (double e : exact_eocs(SchemeKind::FirstOrder, eps, 1.0, grids)) {
      CHECK(e >= 0.7);
      CHECK(e <= 1.2);
    }
  }
}

TEST_CASE("eoc study table") {
  TestCase tc = find_case("XinJin-smooth");
  tc.t_final = 0.25;
  ReferenceSpec ref;
  ref.n_fine = 1600;
  ref.self_reference = true;
  ref.use_cache = false;
  const EocTable t = eoc_study(tc, {scheme_from_string("cat2_tay"), scheme_from_string("first_order")},
                               {50, 100, 200}, {1e-14}, ref);
  REQUIRE(t.rows.size() == 6);
  CHECK_FALSE(t.rows[0].eoc);
  for (double e : t.eocs("cat2_tay", 1e-14)) CHECK(e == doctest::Approx(2.0).epsilon(0.1));
  for (double e : t.eocs("first_order", 1e-14)) CHECK(e == doctest::Approx(1.0).epsilon(0.25));
  std::ostringstream csv;
  write_eoc_csv(csv, t);
  std::istringstream in(csv.str());
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "scheme,eps,N,l1_error,eoc");
  CHECK(first.back() == ',');
}

TEST_CASE("runs are deterministic") {
  const TestCase& tc = find_case("XinJin-square");
  SchemeConfig s = scheme_from_string("catmood2_tay");
  s.mood_cfg = tc.mood;
  RunOptions opt;
  opt.eps = 1.0;
  const RunReport a = run(tc, s, opt);
  const RunReport b = run(tc, s, opt);
  CHECK(bitwise_equal(a.final_field, b.final_field));
  CHECK(a.mood_activations() == b.mood_activations());
  CHECK(a.mood_activations() > 0);
}

TEST_CASE("reference cache") {
  const auto dir = fresh_dir("cache");
  TestCase tc = find_case("Broadwell-RP1");
  tc.t_final = 0.1;
  ReferenceSpec spec;
  spec.n_fine = 400;
  spec.cache_dir = dir;
  const CellField first = reference_solution(tc, 1e-8, spec);
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    ++files;
    CHECK(e.path().extension() == ".csv");
  }
  CHECK(files == 1);
  const CellField second = reference_solution(tc, 1e-8, spec);
  CHECK(bitwise_equal(first, second));
  ReferenceSpec no_cache = spec;
  no_cache.use_cache = false;
  CHECK(bitwise_equal(first, reference_solution(tc, 1e-8, no_cache)));
  reference_solution(tc, 1.0, spec);
  files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("square-wave reference is grid converged") {
  ReferenceSpec spec;
  spec.use_cache = false;
  const TestCase& tc = find_case("XinJin-square");
  spec.n_fine = 16384;
  const CellField fine = reference_solution(tc, 1.0, spec);
  spec.n_fine = 8192;
  const CellField half = reference_solution(tc, 1.0, spec);
  CHECK(l1_error(half, fine, 0) < 1e-3);
}

TEST_CASE("euler heat-transfer Riemann problem") {
  const TestCase& tc = find_case("EulerHeat-RP");
  const auto model = std::dynamic_pointer_cast<const EulerHeatModel>(tc.make_model());
  SchemeConfig s = scheme_from_string("catmood2_tay");
  s.mood_cfg = tc.mood;
  RunOptions opt;
  opt.n_cells = 200;
  opt.eps = 1e-8;
  opt.t_final = 0.15;
  const CellField f0 = initial_field(tc, 200);
  const RunReport r = run(tc, s, opt);
  const CellField& f = r.final_field;
  for (int i = 0; i < f.size(); ++i) {
    CHECK(all_finite(f[i]));
    CHECK(f[i][0] > 0.0);
    CHECK(model->pressure(f[i]) > 0.0);
  }
  CHECK(integral(f, 0) == doctest::Approx(integral(f0, 0)).epsilon(1e-12));
  CHECK(r.mood_activations() > 0);

  // With both states at the bath temperature the wall pressures stay fixed and
  // momentum grows by exactly (p_L - p_R) t.
  EulerRiemannSetup setup;
  setup.p_right = setup.rho_right;
  const TestCase iso = euler_riemann_case(setup);
  const CellField g0 = initial_field(iso, 200);
  const CellField g = run(iso, s, opt).final_field;
  CHECK(integral(g, 0) == doctest::Approx(integral(g0, 0)).epsilon(1e-12));
  CHECK(integral(g, 1) == doctest::Approx(integral(g0, 1) + (1.0 - 0.125) * 0.15).epsilon(1e-12));

  // Flags over the first steps stay within reach of the waves leaving the jump.
  CellField h = f0;
  int flagged = 0;
  bool localized = true;
  double t = 0.0;
  for (int step = 0; step < 10; ++step) {
    const double dt = compute_dt(h, *model, tc.cfl);
    auto [next, report] = mood_step(h, *model, HighOrderScheme::Cat2Tay, tc.mood, dt, 1e-8);
    t += dt;
    for (int i = 0; i < h.size(); ++i) {
      if (report.first_round[static_cast<std::size_t>(i)] == CellFlag::Accepted) continue;
      ++flagged;
      localized = localized && std::fabs(h.grid().center(i) - 0.5) <= 6 * h.grid().dx + 2.0 * t;
    }
    h = std::move(next);
  }
  CHECK(flagged > 0);
  CHECK(localized);
}

TEST_CASE("solution and diagnostics CSV") {
  const TestCase& tc = find_case("XinJin-square");
  SchemeConfig s = scheme_from_string("catmood2_tay");
  s.mood_cfg = tc.mood;
  RunOptions opt;
  opt.n_cells = 50;
  opt.t_final = 0.05;
  const RunReport r = run(tc, s, opt);
  std::ostringstream sol, diag;
  write_solution_csv(sol, r.final_field, *tc.make_model());
  write_diagnostics_csv(diag, r);
  const std::string s_text = sol.str(), d_text = diag.str();
  CHECK(s_text.rfind("x,u,v\n", 0) == 0);
  CHECK(d_text.rfind("step,t,dt,cells_flagged_cad,cells_flagged_pad,cells_flagged_nad\n", 0) == 0);
  CHECK(std::count(s_text.begin(), s_text.end(), '\n') == 51);
  CHECK(std::count(d_text.begin(), d_text.end(), '\n') == r.step_count() + 1);
  CHECK(s_text.find(" \n") == std::string::npos);
}

TEST_CASE("hash is FNV-1a") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

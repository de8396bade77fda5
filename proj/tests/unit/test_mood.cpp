#include <cmath>
#include <limits>
#include <memory>

#include "doctest.h"
#include "helpers.hpp"
#include "relaxcat/errors.hpp"
#include "relaxcat/harness.hpp"
#include "relaxcat/mood.hpp"

using namespace relaxcat;
using namespace testing_helpers;

namespace {

CellField scalar_field(const std::vector<double>& values) {
  CellField f(build_uniform_grid(0.0, 1.0, static_cast<int>(values.size())),
              BoundaryKind::Periodic, 2);
  for (int i = 0; i < f.size(); ++i) f[i] = State(values[static_cast<std::size_t>(i)], 0.0);
  apply_boundary(f);
  return f;
}

int count(const std::vector<bool>& flags) {
  return static_cast<int>(std::count(flags.begin(), flags.end(), true));
}

MoodConfig tolerances(double e1, double e2) {
  MoodConfig cfg;
  cfg.eps1 = e1;
  cfg.eps2 = e2;
  return cfg;
}

}  // namespace

TEST_CASE("computational admissibility") {
  CellField f = scalar_field({1.0, 2.0, 3.0, 4.0, 5.0});
  CHECK(count(detect_cad(f)) == 0);
  f[2][1] = std::numeric_limits<double>::quiet_NaN();
  auto flags = detect_cad(f);
  CHECK(count(flags) == 1);
  CHECK(flags[2]);
  f[2][1] = 0.0;
  f[4][0] = std::numeric_limits<double>::infinity();
  flags = detect_cad(f);
  CHECK(count(flags) == 1);
  CHECK(flags[4]);
}

TEST_CASE("physical admissibility") {
  const BroadwellModel bw;
  CellField b(build_uniform_grid(0.0, 1.0, 6), BoundaryKind::Periodic, 3);
  for (int i = 0; i < 6; ++i) b[i] = State(1.0, 0.0, 0.5);
  b[3][0] = -1e-9;
  auto flags = detect_pad(b, bw);
  CHECK(count(flags) == 1);
  CHECK(flags[3]);

  CellField x = scalar_field({-5.0, -1.0, 0.0, 3.0});
  CHECK(count(detect_pad(x, XinJinModel(0.7))) == 0);

  const EulerHeatModel eu;
  CellField e(build_uniform_grid(0.0, 1.0, 6), BoundaryKind::Periodic, 3);
  for (int i = 0; i < 6; ++i) e[i] = eu.from_primitive(1.0, 0.2, 1.0);
  e[1][2] = 0.01;  // kinetic energy 0.02 exceeds the total
  flags = detect_pad(e, eu);
  CHECK(count(flags) == 1);
  CHECK(flags[1]);
}

TEST_CASE("relaxed discrete maximum principle") {
  const CellField prev = scalar_field({1.0, 1.5, 1.2, 1.2, 1.0});
  CellField cand = prev;
  cand[1][0] = 1.6;
  auto flags = detect_nad(cand, prev, tolerances(1e-3, 1e-2));
  CHECK(count(flags) == 1);
  CHECK(flags[1]);
  cand[1][0] = 1.504;
  CHECK(count(detect_nad(cand, prev, tolerances(1e-3, 1e-2))) == 0);
  cand[1][0] = 0.996;
  CHECK(count(detect_nad(cand, prev, tolerances(1e-3, 1e-2))) == 0);
  cand[1][0] = 0.994;
  CHECK(count(detect_nad(cand, prev, tolerances(1e-3, 1e-2))) == 1);

  const CellField flat = scalar_field({1.0, 1.0, 1.0, 1.0});
  CellField near = flat;
  near[2][0] = 1.0005;
  CHECK(count(detect_nad(near, flat, tolerances(1e-3, 1e-2))) == 0);
  near[2][0] = 1.0015;
  CHECK(count(detect_nad(near, flat, tolerances(1e-3, 1e-2))) == 1);

  const CellField wild = scalar_field({3.0, -2.0, 7.5, 0.1, -4.0, 2.2});
  CHECK(count(detect_nad(wild, wild, tolerances(1e-12, 1e-12))) == 0);
}

TEST_CASE("detection order and restriction") {
  const BroadwellModel bw;
  CellField prev(build_uniform_grid(0.0, 1.0, 6), BoundaryKind::Periodic, 3);
  for (int i = 0; i < 6; ++i) prev[i] = State(1.0, 0.0, 0.5);
  apply_boundary(prev);
  CellField cand = prev;
  cand[0][2] = std::numeric_limits<double>::quiet_NaN();
  cand[2][0] = -0.5;
  cand[4][0] = 1.5;
  const auto flags = detect(cand, prev, bw, MoodConfig{});
  CHECK(flags[0] == CellFlag::CadFail);
  CHECK(flags[2] == CellFlag::PadFail);
  CHECK(flags[4] == CellFlag::NadFail);
  CHECK(flags[1] == CellFlag::Accepted);
  std::vector<bool> only(6, false);
  only[4] = true;
  const auto some = detect(cand, prev, bw, MoodConfig{}, only);
  CHECK(some[0] == CellFlag::Accepted);
  CHECK(some[4] == CellFlag::NadFail);
  MoodConfig no_pad;
  no_pad.enable_pad = false;
  CHECK(detect(cand, prev, bw, no_pad)[2] == CellFlag::NadFail);
}

TEST_CASE("configuration validation") {
  CHECK_NOTHROW(validate(MoodConfig{}, 2));
  CHECK_THROWS_AS(validate(tolerances(0.0, 1e-3), 2), ConfigError);
  CHECK_THROWS_AS(validate(tolerances(1e-4, -1.0), 2), ConfigError);
  MoodConfig bad;
  bad.detection_component = 3;
  CHECK_THROWS_AS(validate(bad, 3), ConfigError);
  bad = MoodConfig{};
  bad.max_cascade_rounds = 0;
  CHECK_THROWS_AS(validate(bad, 2), ConfigError);
}

TEST_CASE("no effect on smooth well-prepared data") {
  const TestCase& tc = find_case("XinJin-smooth");
  const auto model = tc.make_model();
  CellField f = initial_field(tc, 200);
  const double dt = 0.9 * f.grid().dx;
  for (auto scheme : {HighOrderScheme::Cat2Tay, HighOrderScheme::Cat2Trap}) {
    CellField g = f;
    for (int s = 0; s < 20; ++s) {
      const auto [next, report] = mood_step(g, *model, scheme, tolerances(1e-3, 1e-2), dt, 1e-8);
      CHECK(report.flagged_first_round() == 0);
      const CellField raw = scheme == HighOrderScheme::Cat2Tay ? step_cat2_tay(g, *model, dt, 1e-8)
                                                               : step_cat2_trap(g, *model, dt, 1e-8);
      CHECK(bitwise_equal(next, raw));
      g = next;
    }
  }
}

TEST_CASE("square wave flags stay next to the jumps") {
  const TestCase& tc = find_case("XinJin-square");
  const auto model = tc.make_model();
  const CellField f0 = initial_field(tc, 200);
  const double dx = f0.grid().dx, dt = 0.9 * dx;
  for (double eps : {1e-8, 1.0}) {
    CellField f = f0;
    int first_flagged_step = -1;
    for (int step = 0; step < 5; ++step) {
      const auto [next, report] = mood_step(f, *model, HighOrderScheme::Cat2Tay, tc.mood, dt, eps);
      if (report.flagged_first_round() > 0 && first_flagged_step < 0) first_flagged_step = step;
      const double reach = 6.0 * dx + (step + 1) * dt;
      for (int i = 0; i < f.size(); ++i) {
        if (report.first_round[static_cast<std::size_t>(i)] == CellFlag::Accepted) continue;
        const double x = f.grid().center(i);
        CHECK(std::min(std::fabs(x - 0.25), std::fabs(x - 0.5)) <= reach);
      }
      CHECK(static_cast<int>(report.rounds.size()) <= tc.mood.max_cascade_rounds);
      for (int i = 0; i < next.size(); ++i) CHECK(all_finite(next[i]));
      f = next;
    }
    if (eps < 1e-4) CHECK(first_flagged_step == 0);
    CHECK(first_flagged_step >= 0);
  }
}

TEST_CASE("an injected NaN is repaired locally") {
  const TestCase& tc = find_case("XinJin-smooth");
  const auto model = tc.make_model();
  const CellField f = initial_field(tc, 100);
  const double dt = 0.9 * f.grid().dx, eps = 1e-2;
  const PredictorStates p = predictor_states(f, *model, dt, eps);
  const InterfaceFluxSet fluxes = cat2_flux(f, p, *model);
  CellField cand = apply_fluxes(f, *model, fluxes, dt, eps, SourceTreatment::Taylor);
  CHECK(bitwise_equal(cand, step_cat2_tay(f, *model, dt, eps)));
  const int k = 37;
  cand[k][1] = std::numeric_limits<double>::quiet_NaN();
  const auto [out, report] =
      mood_repair(f, cand, fluxes, *model, HighOrderScheme::Cat2Tay, tolerances(1e-3, 1e-2), dt, eps);
  REQUIRE(!report.rounds.empty());
  CHECK(report.rounds[0].cad == 1);
  CHECK(report.rounds[0].recomputed == 3);
  CHECK(report.recomputed_cells == 3);
  for (int i = 0; i < f.size(); ++i) {
    CHECK(all_finite(out[i]));
    if (std::abs(i - k) > 1) CHECK(out[i] == cand[i]);
  }
  CHECK(report.demoted[k]);
  CHECK(sum_component(out, 0) == doctest::Approx(sum_component(f, 0)).epsilon(1e-13));
}

TEST_CASE("conservation when the cascade fires") {
  const TestCase& tc = find_case("XinJin-square");
  const auto model = tc.make_model();
  CellField f = initial_field(tc, 200);
  const double mass = sum_component(f, 0);
  const double dt = 0.9 * f.grid().dx;
  int fired = 0;
  for (int s = 0; s < 50; ++s) {
    auto [next, report] = mood_step(f, *model, HighOrderScheme::Cat2Trap, tc.mood, dt, 1.0);
    fired += report.flagged_first_round() > 0;
    f = std::move(next);
    CHECK(std::fabs(sum_component(f, 0) - mass) <= 1e-12 * std::fabs(mass));
  }
  CHECK(fired > 0);
}

TEST_CASE("flags at the ring seam keep the shared interface consistent") {
  const XinJinModel xj(0.7);
  CellField f = make_field(100, BoundaryKind::Periodic, 2, [](double x) {
    const double u = x < 0.1 || x > 0.9 ? 2.0 : 1.0;
    return State(u, 0.7 * u);
  });
  const double mass = sum_component(f, 0);
  const double dt = 0.9 * f.grid().dx;
  for (int s = 0; s < 30; ++s) {
    f = mood_step(f, xj, HighOrderScheme::Cat2Tay, tolerances(1e-4, 1e-3), dt, 1e-8).first;
    CHECK(std::fabs(sum_component(f, 0) - mass) <= 1e-12 * mass);
  }
}

TEST_CASE("broadwell Riemann data keeps a positive density") {
  const TestCase& tc = find_case("Broadwell-RP1");
  const auto model = tc.make_model();
  CellField f = initial_field(tc, 200);
  const double dt = 0.9 * f.grid().dx;
  for (int s = 0; s < 60; ++s) {
    f = mood_step(f, *model, HighOrderScheme::Cat2Tay, tc.mood, dt, 1e-8).first;
    for (int i = 0; i < f.size(); ++i) REQUIRE(f[i][0] > 0.0);
  }
}

#include "relaxcat/mood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "relaxcat/errors.hpp"

namespace relaxcat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const State kNaNState{kNaN, kNaN, kNaN};

SourceTreatment treatment_of(HighOrderScheme scheme) {
  return scheme == HighOrderScheme::Cat2Trap ? SourceTreatment::Trapezoidal
                                             : SourceTreatment::Taylor;
}

// CAT2 fluxes where any local failure yields a NaN flux instead of throwing;
// the adjacent candidates then fail CAD and are repaired. f holds F(U_i), i = -1..n.
InterfaceFluxSet tolerant_cat2_fluxes(const CellField& field, const Model& model,
                                      const std::vector<State>& f, double dt, double eps) {
  const int n = field.size();
  const double dx = field.grid().dx;

  InterfaceFluxSet out;
  out.flux.resize(static_cast<std::size_t>(n + 1));
  for (int j = 0; j <= n; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    try {
      const State du = -1.0 / dx * (f[sj + 1] - f[sj]);
      const State left = model.solve_implicit_source(field[j - 1] + dt * du, dt, eps);
      const State right = model.solve_implicit_source(field[j] + dt * du, dt, eps);
      out[j] = 0.25 * (f[sj] + f[sj + 1] + model.flux(left) + model.flux(right));
    } catch (const Error&) {
      out[j] = kNaNState;
    }
  }
  return out;
}

State tolerant_update(const CellField& field, const Model& model, int i, const State& fl,
                      const State& fr, double dt, double eps, SourceTreatment treatment) {
  if (!all_finite(fl) || !all_finite(fr)) return kNaNState;
  try {
    return update_cell(field, model, i, fl, fr, dt, eps, treatment);
  } catch (const Error&) {
    return kNaNState;
  }
}

}  // namespace

void validate(const MoodConfig& cfg, int dim) {
  if (!(cfg.eps1 > 0.0) || !(cfg.eps2 > 0.0))
    throw ConfigError("MOOD tolerances eps1, eps2 must be positive");
  if (cfg.detection_component < 0 || cfg.detection_component >= dim)
    throw ConfigError("MOOD detection component out of range");
  if (cfg.max_cascade_rounds < 1) throw ConfigError("MOOD needs at least one detection round");
}

int DetectionReport::flagged_first_round() const {
  return static_cast<int>(std::count_if(first_round.begin(), first_round.end(),
                                        [](CellFlag f) { return f != CellFlag::Accepted; }));
}

std::vector<bool> detect_cad(const CellField& candidate) {
  std::vector<bool> flags(static_cast<std::size_t>(candidate.size()));
  for (int i = 0; i < candidate.size(); ++i) flags[static_cast<std::size_t>(i)] = !all_finite(candidate[i]);
  return flags;
}

std::vector<bool> detect_pad(const CellField& candidate, const Model& model) {
  std::vector<bool> flags(static_cast<std::size_t>(candidate.size()));
  for (int i = 0; i < candidate.size(); ++i) {
    const State& u = candidate[i];
    flags[static_cast<std::size_t>(i)] = all_finite(u) && !model.admissible(u);
  }
  return flags;
}

namespace {

bool nad_fails(const CellField& candidate, const CellField& previous, const MoodConfig& cfg,
               int i) {
  const int k = cfg.detection_component;
  const double a = previous[i - 1][k], b = previous[i][k], c = previous[i + 1][k];
  const double lo = std::min({a, b, c});
  const double hi = std::max({a, b, c});
  const double delta = std::max(cfg.eps1, cfg.eps2 * (hi - lo));
  const double w = candidate[i][k];
  return !(lo - delta <= w && w <= hi + delta);
}

}  // namespace

std::vector<bool> detect_nad(const CellField& candidate, const CellField& previous,
                             const MoodConfig& cfg) {
  std::vector<bool> flags(static_cast<std::size_t>(candidate.size()));
  for (int i = 0; i < candidate.size(); ++i)
    flags[static_cast<std::size_t>(i)] = nad_fails(candidate, previous, cfg, i);
  return flags;
}

std::vector<CellFlag> detect(const CellField& candidate, const CellField& previous,
                             const Model& model, const MoodConfig& cfg,
                             const std::vector<bool>& only) {
  std::vector<CellFlag> flags(static_cast<std::size_t>(candidate.size()), CellFlag::Accepted);
  for (int i = 0; i < candidate.size(); ++i) {
    const auto si = static_cast<std::size_t>(i);
    if (!only.empty() && !only[si]) continue;
    const State& u = candidate[i];
    if (!all_finite(u))
      flags[si] = CellFlag::CadFail;
    else if (cfg.enable_pad && !model.admissible(u))
      flags[si] = CellFlag::PadFail;
    else if (nad_fails(candidate, previous, cfg, i))
      flags[si] = CellFlag::NadFail;
  }
  return flags;
}

std::pair<CellField, DetectionReport> mood_repair(const CellField& field,
                                                  const CellField& candidate,
                                                  const InterfaceFluxSet& high_order_fluxes,
                                                  const Model& model, HighOrderScheme scheme,
                                                  const MoodConfig& cfg, double dt, double eps) {
  const int n = field.size();
  const bool periodic = field.boundary() == BoundaryKind::Periodic;
  const SourceTreatment high = treatment_of(scheme);

  DetectionReport report;
  report.status.assign(static_cast<std::size_t>(n), CellFlag::Accepted);
  report.demoted.assign(static_cast<std::size_t>(n), false);

  CellField current = candidate;
  InterfaceFluxSet fluxes = high_order_fluxes;
  std::vector<bool> marked(static_cast<std::size_t>(n + 1), false);
  std::vector<bool> to_check;  // empty: every cell

  for (int round = 0; round < cfg.max_cascade_rounds; ++round) {
    const std::vector<CellFlag> flags = detect(current, field, model, cfg, to_check);
    if (round == 0) report.first_round = flags;

    RoundStats stats;
    std::vector<int> newly;
    for (int i = 0; i < n; ++i) {
      switch (flags[static_cast<std::size_t>(i)]) {
        case CellFlag::CadFail: ++stats.cad; break;
        case CellFlag::PadFail: ++stats.pad; break;
        case CellFlag::NadFail: ++stats.nad; break;
        case CellFlag::Accepted: continue;
      }
      newly.push_back(i);
    }
    if (newly.empty()) {
      report.rounds.push_back(stats);
      break;
    }

    // Demote both interfaces of every flagged cell.
    std::vector<bool> touched(static_cast<std::size_t>(n + 1), false);
    for (int i : newly) {
      report.demoted[static_cast<std::size_t>(i)] = true;
      for (int j : {i, i + 1}) {
        if (!marked[static_cast<std::size_t>(j)]) {
          marked[static_cast<std::size_t>(j)] = true;
          touched[static_cast<std::size_t>(j)] = true;
          fluxes[j] = rusanov_flux(field[j - 1], field[j], model);
        }
      }
    }
    if (periodic) {
      // x_{-1/2} and x_{n-1/2} are the same physical interface.
      if (marked[0] != marked[static_cast<std::size_t>(n)]) {
        const int j = marked[0] ? n : 0;
        marked[static_cast<std::size_t>(j)] = true;
        touched[static_cast<std::size_t>(j)] = true;
        fluxes[j] = rusanov_flux(field[j - 1], field[j], model);
      }
    }

    std::vector<bool> recompute(static_cast<std::size_t>(n), false);
    for (int j = 0; j <= n; ++j) {
      if (!touched[static_cast<std::size_t>(j)]) continue;
      if (j - 1 >= 0) recompute[static_cast<std::size_t>(j - 1)] = true;
      if (j < n) recompute[static_cast<std::size_t>(j)] = true;
    }

    to_check.assign(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
      const auto si = static_cast<std::size_t>(i);
      if (!recompute[si]) continue;
      ++stats.recomputed;
      if (report.demoted[si]) {
        try {
          current[i] = update_cell(field, model, i, fluxes[i], fluxes[i + 1], dt, eps,
                                   SourceTreatment::ImplicitEuler);
        } catch (const StepError&) {
          throw;
        } catch (const Error& e) {
          throw StepError("first-order fallback failed at cell " + std::to_string(i) + ": " +
                              e.what(),
                          i);
        }
      } else {
        current[i] = tolerant_update(field, model, i, fluxes[i], fluxes[i + 1], dt, eps, high);
        to_check[si] = true;
      }
    }
    report.recomputed_cells += stats.recomputed;
    report.rounds.push_back(stats);
  }

  current.time = field.time + dt;
  apply_boundary(current);
  return {std::move(current), std::move(report)};
}

std::pair<CellField, DetectionReport> mood_step(const CellField& field, const Model& model,
                                                HighOrderScheme scheme, const MoodConfig& cfg,
                                                double dt, double eps) {
  const int n = field.size();
  const double dx = field.grid().dx;
  std::vector<State> f(static_cast<std::size_t>(n + 2));
  for (int i = -1; i <= n; ++i) f[static_cast<std::size_t>(i + 1)] = model.flux(field[i]);
  const InterfaceFluxSet fluxes = tolerant_cat2_fluxes(field, model, f, dt, eps);
  const SourceTreatment high = treatment_of(scheme);
  CellField candidate = field;
  for (int i = 0; i < n; ++i) {
    const auto si = static_cast<std::size_t>(i);
    if (!all_finite(fluxes[i]) || !all_finite(fluxes[i + 1])) {
      candidate[i] = kNaNState;
      continue;
    }
    const State rest = field[i] - dt / dx * (fluxes[i + 1] - fluxes[i]);
    try {
      candidate[i] = source_update(model, field[i], rest, f[si], f[si + 2], dx, dt, eps, high);
    } catch (const Error&) {
      candidate[i] = kNaNState;
    }
  }
  candidate.time = field.time + dt;
  return mood_repair(field, candidate, fluxes, model, scheme, cfg, dt, eps);
}

}  // namespace relaxcat

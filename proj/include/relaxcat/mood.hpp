#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "relaxcat/cat2.hpp"
#include "relaxcat/grid.hpp"
#include "relaxcat/models.hpp"

namespace relaxcat {

struct MoodConfig {
  double eps1 = 1e-4;  // absolute floor of the NAD relaxation
  double eps2 = 1e-3;  // relative factor on the local range
  int detection_component = 0;
  bool enable_pad = true;
  int max_cascade_rounds = 2;
};

/// Throws ConfigError on non-positive tolerances or a bad component index.
void validate(const MoodConfig& cfg, int dim);

enum class CellFlag : std::uint8_t { Accepted, CadFail, PadFail, NadFail };

/// Per-round detection counts. `recomputed` counts cells whose value was
/// recomputed as a consequence of this round's flags.
struct RoundStats {
  int cad = 0;
  int pad = 0;
  int nad = 0;
  int recomputed = 0;
};

struct DetectionReport {
  /// Outcome of the first detection round, per interior cell.
  std::vector<CellFlag> first_round;
  /// Final status; every cell is Accepted once mood_step returns.
  std::vector<CellFlag> status;
  /// True for cells whose two interfaces both ended up first order.
  std::vector<bool> demoted;
  std::vector<RoundStats> rounds;
  int recomputed_cells = 0;

  int flagged_first_round() const;
};

enum class HighOrderScheme { Cat2Trap, Cat2Tay };

/// Flags cells with a NaN or infinite component.
std::vector<bool> detect_cad(const CellField& candidate);

/// Flags cells that violate the model's admissibility (positivity, pressure).
std::vector<bool> detect_pad(const CellField& candidate, const Model& model);

/// Relaxed discrete maximum principle on the detection component against the
/// three-cell neighbourhood of the previous time level.
std::vector<bool> detect_nad(const CellField& candidate, const CellField& previous,
                             const MoodConfig& cfg);

/// Runs CAD, then PAD, then NAD, on the cells selected by `only` (all if empty).
std::vector<CellFlag> detect(const CellField& candidate, const CellField& previous,
                             const Model& model, const MoodConfig& cfg,
                             const std::vector<bool>& only = {});

/// The a-posteriori repair given a high-order candidate and the fluxes that
/// produced it. Exposed separately so a candidate can be manufactured in tests.
std::pair<CellField, DetectionReport> mood_repair(const CellField& field,
                                                  const CellField& candidate,
                                                  const InterfaceFluxSet& high_order_fluxes,
                                                  const Model& model, HighOrderScheme scheme,
                                                  const MoodConfig& cfg, double dt, double eps);

/// One CATMOOD step: high-order candidate, detection, local first-order repair.
std::pair<CellField, DetectionReport> mood_step(const CellField& field, const Model& model,
                                                HighOrderScheme scheme, const MoodConfig& cfg,
                                                double dt, double eps);

}  // namespace relaxcat

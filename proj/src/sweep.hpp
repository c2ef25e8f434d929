#pragma once

#include <span>
#include <string>
#include <vector>

#include "types.hpp"

namespace episim {

/// One sweep axis: the parameter values to scan, applied to every listed
/// rate name ("omega", "psi", "xi", "lambda", "gamma"). Listing two names on
/// one axis locks them together (the omega = psi scans).
struct SweepAxis {
  std::vector<std::string> params;
  std::vector<double> values;
};

struct SweepGrid {
  std::vector<SweepAxis> axes;
  unsigned replicas = 1;  // per cell, stochastic engine only
};

struct HeatmapCell {
  ModelParams params;  // resolved cell parameters
  bool ok = true;
  std::string error;
  unsigned replicas = 1;
  bool stationary = false;
  double mean_i_inf = 0.0;
  double se_i_inf = 0.0;
  double mean_tau = 0.0;
};

/// Runs every cell of the cartesian grid (first axis slowest). Cells are
/// independent: per-cell dynamics seeds derive from the scenario seed and the
/// cell index, never from scheduling, so results do not depend on `threads`.
/// Per-cell failures are recorded and the sweep continues.
std::vector<HeatmapCell> heatmap(const Scenario& tmpl, const SweepGrid& grid,
                                 unsigned threads = 1);

struct R0Point {
  double r0 = 0.0;
  std::string seeding;
  bool ok = true;
  std::string error;
  bool stationary = false;
  double i_inf = 0.0;
  double tau = 0.0;
};

/// One row per (r0, seeding) combination; r0 is realized at fixed `gamma` by
/// lambda = r0 * gamma. Throws err::Validation when a requested r0 puts
/// lambda outside [0,1].
std::vector<R0Point> r0_curve(const Scenario& tmpl, std::span<const double> r0_values,
                              double gamma, std::span<const SeedingSpec> seedings,
                              unsigned threads = 1);

/// Display label for a seeding variant (e.g. "uniform", "centrality-top-5").
std::string seeding_label(const SeedingSpec& spec);

}  // namespace episim

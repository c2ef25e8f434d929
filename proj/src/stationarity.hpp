#pragma once

#include <span>

#include "types.hpp"

namespace episim {

struct StationarityResult {
  bool stationary = false;
  int tau = 0;        // first step of the quiet window, defined when stationary
  double i_inf = 0.0; // infected fraction at tau, defined when stationary
};

/// Stationary iff the global infected fraction changes by less than `epsilon`
/// (absolute) for `window` consecutive steps; tau is the first step of that
/// window and i_inf the fraction there.
StationarityResult detect_stationarity(std::span<const double> infected_fraction,
                                       double epsilon, int window);

StationarityResult detect_stationarity(const Trajectory& t, double epsilon, int window);

}  // namespace episim

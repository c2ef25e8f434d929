#include "stationarity.hpp"

#include <cmath>

namespace episim {

StationarityResult detect_stationarity(std::span<const double> infected_fraction,
                                       double epsilon, int window) {
  const int points = static_cast<int>(infected_fraction.size());
  if (points < 1 || window < 1 || points - 1 < window) return {};

  int quiet = 0;  // consecutive diffs below epsilon ending at the current step
  for (int t = 1; t < points; ++t) {
    const double d = std::abs(infected_fraction[t] - infected_fraction[t - 1]);
    quiet = d < epsilon ? quiet + 1 : 0;
    if (quiet >= window) {
      const int tau = t - window;
      return {true, tau, infected_fraction[static_cast<std::size_t>(tau)]};
    }
  }
  return {};
}

StationarityResult detect_stationarity(const Trajectory& t, double epsilon, int window) {
  std::vector<double> series(static_cast<std::size_t>(t.steps) + 1);
  for (int s = 0; s <= t.steps; ++s) series[static_cast<std::size_t>(s)] = t.infected_fraction(s);
  return detect_stationarity(series, epsilon, window);
}

}  // namespace episim

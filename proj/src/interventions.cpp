#include "interventions.hpp"

#include <algorithm>
#include <cmath>

namespace episim {

std::uint64_t round_half_even(double x) {
  return static_cast<std::uint64_t>(std::nearbyint(x));
}

FlowMatrix quarantine(const FlowMatrix& m, std::span<const std::size_t> targets) {
  const std::size_t n = m.dim();
  std::vector<bool> is_target(n, false);
  for (auto q : targets) {
    if (q >= n) throw err::Validation("quarantine index " + std::to_string(q) + " out of range");
    is_target[q] = true;
  }

  MatrixData d = m.data();
  for (std::size_t i = 0; i < n; ++i) {
    if (is_target[i]) {
      for (std::size_t j = 0; j < n; ++j) d.at(i, j) = 0.0;
      d.at(i, i) = 1.0;
      continue;
    }
    double removed = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!is_target[j]) continue;
      removed += d.at(i, j);
      d.at(i, j) = 0.0;
    }
    d.at(i, i) += removed;
  }
  return FlowMatrix::checked(std::move(d));
}

namespace {

// Proportional-to-population split of `total` over `targets`, residual fixed
// on the largest target so the global total is exact.
std::vector<std::uint64_t> allocate_proportional(std::span<const std::uint64_t> population,
                                                 std::span<const std::size_t> targets,
                                                 std::uint64_t total) {
  std::uint64_t capacity = 0;
  for (auto t : targets) capacity += population[t];
  if (total > capacity)
    throw err::Validation("seeded count " + std::to_string(total) +
                          " exceeds target population " + std::to_string(capacity));

  std::vector<std::uint64_t> counts(targets.size(), 0);
  if (capacity == 0) return counts;
  std::int64_t allocated = 0;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    counts[k] = round_half_even(static_cast<double>(total) *
                                static_cast<double>(population[targets[k]]) /
                                static_cast<double>(capacity));
    counts[k] = std::min(counts[k], population[targets[k]]);
    allocated += static_cast<std::int64_t>(counts[k]);
  }
  std::int64_t residual = static_cast<std::int64_t>(total) - allocated;
  while (residual != 0) {
    // Largest-population target with room (ties -> lowest index).
    std::size_t best = targets.size();
    for (std::size_t k = 0; k < targets.size(); ++k) {
      const bool has_room = residual > 0 ? counts[k] < population[targets[k]] : counts[k] > 0;
      if (!has_room) continue;
      if (best == targets.size() || population[targets[k]] > population[targets[best]])
        best = k;
    }
    if (best == targets.size())
      throw err::Validation("seeded count exceeds target population");
    counts[best] += residual > 0 ? 1 : -1;
    residual += residual > 0 ? -1 : 1;
  }
  return counts;
}

}  // namespace

CountState seed_infection(std::span<const std::uint64_t> population, const SeedingSpec& spec,
                          const CentralityRanking* ranking, RngStream& rng) {
  const std::size_t n = population.size();
  CountState state = CountState::all_susceptible(population);
  std::uint64_t grand_total = 0;
  for (auto p : population) grand_total += p;
  const std::uint64_t want = round_half_even(spec.fraction * static_cast<double>(grand_total));
  if (want == 0) return state;

  auto infect = [&](std::size_t i, std::uint64_t count) {
    if (count > state.cell(i, kSU))
      throw err::Validation("seeded count exceeds target population in subpopulation " +
                            std::to_string(i));
    state.cell(i, kSU) -= count;
    state.cell(i, kIU) += count;
  };

  switch (spec.strategy) {
    case SeedStrategy::Uniform: {
      std::vector<std::size_t> all(n);
      for (std::size_t i = 0; i < n; ++i) all[i] = i;
      auto counts = allocate_proportional(population, all, want);
      for (std::size_t i = 0; i < n; ++i) infect(i, counts[i]);
      break;
    }
    case SeedStrategy::RandomSingle: {
      const std::size_t origin = static_cast<std::size_t>(rng.uniform_int(n));
      infect(origin, std::min(want, population[origin]));
      break;
    }
    case SeedStrategy::CentralityTopK: {
      if (!ranking) throw err::Validation("centrality-top-k seeding needs a ranking");
      auto targets = top_k(*ranking, static_cast<std::size_t>(spec.k));
      auto counts = allocate_proportional(population, targets, want);
      for (std::size_t k = 0; k < targets.size(); ++k) infect(targets[k], counts[k]);
      break;
    }
    case SeedStrategy::ExplicitList: {
      auto counts = allocate_proportional(population, spec.nodes, want);
      for (std::size_t k = 0; k < spec.nodes.size(); ++k) infect(spec.nodes[k], counts[k]);
      break;
    }
  }
  return state;
}

void seed_awareness(CountState& state, double fraction, RngStream& rng) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw err::Validation("awareness fraction out of [0,1]");
  std::uint64_t total = state.total_population();
  std::uint64_t remaining_draws =
      round_half_even(fraction * static_cast<double>(total));
  std::uint64_t remaining_pop = total;

  for (std::size_t i = 0; i < state.n && remaining_draws > 0; ++i) {
    for (int c = 0; c < kCellCount && remaining_draws > 0; ++c) {
      const std::uint64_t here = state.cell(i, static_cast<Cell>(c));
      if (here == 0) continue;
      const std::uint64_t picked =
          (remaining_pop == here) ? remaining_draws
                                  : rng.hypergeometric(here, remaining_pop - here,
                                                       remaining_draws);
      remaining_draws -= picked;
      remaining_pop -= here;
      switch (static_cast<Cell>(c)) {
        case kSU:
          state.cell(i, kSU) -= picked;
          state.cell(i, kSA) += picked;
          break;
        case kIU:
          state.cell(i, kIU) -= picked;
          state.cell(i, kIA) += picked;
          break;
        case kRU:
          state.cell(i, kRU) -= picked;
          state.cell(i, kRA) += picked;
          break;
        default:
          break;  // already aware, drawing them is a no-op
      }
    }
  }
}

}  // namespace episim

#pragma once

#include <span>

#include "centrality.hpp"
#include "rng.hpp"
#include "types.hpp"

namespace episim {

/// Cuts all flow into and out of the target subpopulations: each target row
/// becomes its unit vector, and every other row's mass toward a target is
/// redirected to that row's diagonal (would-be travelers stay home), keeping
/// the matrix row-stochastic.
FlowMatrix quarantine(const FlowMatrix& m, std::span<const std::size_t> targets);

/// Initial state for a scenario: everyone susceptible and unaware except the
/// seeded infections. `ranking` is required for centrality-top-k.
CountState seed_infection(std::span<const std::uint64_t> population, const SeedingSpec& spec,
                          const CentralityRanking* ranking, RngStream& rng);

/// Marks round(fraction*N) individuals aware, drawn uniformly over the whole
/// population (multivariate hypergeometric across subpop x disease cells).
/// Disease states are untouched.
void seed_awareness(CountState& state, double fraction, RngStream& rng);

/// round(x) half-to-even, the rounding used for seed counts.
std::uint64_t round_half_even(double x);

}  // namespace episim

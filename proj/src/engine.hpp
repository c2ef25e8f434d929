#pragma once

#include "rng.hpp"
#include "types.hpp"

namespace episim {

// --- deterministic engine: expected-value iteration --------------------------

/// One disease-only step: infection lambda*S*I/N, recovery gamma*I (both from
/// the pre-step state), then mobility on every compartment.
MassState step_disease(const MassState& s, const FlowMatrix& m, const ModelParams& p);

/// One coupled step. Sub-steps in order: infection; awareness psi*U*F;
/// immunization omega*F applied to post-infection S plus immunity loss xi*R;
/// recovery gamma*I; mobility on all five compartments. F_j is evaluated once
/// per step from pre-step A and N. `simultaneous` evaluates immunization on
/// pre-step S instead (the printed simultaneous form, for cross-checking at
/// small rates).
MassState step_full(const MassState& s, const FlowMatrix& m, const FlowMatrix& c,
                    const ModelParams& p, bool simultaneous = false);

// --- stochastic engine: integer Monte-Carlo realization ----------------------

/// One disease-only step: infections ~ Binomial(S_j, min(1, lambda*I_j/N_j)),
/// recoveries ~ Binomial(I_j, gamma), then joint multinomial mobility.
CountState mc_step_disease(const CountState& s, const FlowMatrix& m, const ModelParams& p,
                           RngStream& rng);

/// One coupled step with the same sub-step semantics as step_full, realized
/// per origin cell so both partitions stay exact and individuals' disease and
/// awareness labels move together.
CountState mc_step_full(const CountState& s, const FlowMatrix& m, const FlowMatrix& c,
                        const ModelParams& p, RngStream& rng);

// --- full runs ---------------------------------------------------------------

/// Validates, applies quarantine, seeds, iterates the configured engine for
/// the full horizon, and detects stationarity on the complete trajectory.
/// `replica` and `stream_salt` decorrelate dynamics streams across replicas
/// and sweep cells; the seeding stream depends on the scenario seed only, so
/// every replica starts from the same state.
RunSummary run_scenario(const Scenario& s, unsigned replica = 0,
                        std::uint64_t stream_salt = 0);

/// The call-weighted aware fraction F_j for each subpopulation (zero where the
/// denominator vanishes). Exposed for tests.
std::vector<double> aware_contact_fraction(const FlowMatrix& calls,
                                           std::span<const double> aware,
                                           std::span<const double> population);

}  // namespace episim

#include "engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "interventions.hpp"
#include "stationarity.hpp"

namespace episim {

namespace {

// next[i] = sum_j m[j][i] * x[j], shared by both deterministic step kinds so
// reduced trajectories stay bit-identical.
void apply_mobility(std::vector<double>& x, const FlowMatrix& m, std::vector<double>& scratch) {
  const std::size_t n = m.dim();
  scratch.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    const auto row = m.row(j);
    for (std::size_t i = 0; i < n; ++i) scratch[i] += row[i] * xj;
  }
  x.swap(scratch);
}

double infection_probability(double lambda, double infected, double population) {
  if (!(population > 0.0)) return 0.0;
  return std::min(1.0, lambda * (infected / population));
}

// Local flows for one deterministic step. `f` is the per-subpop aware-contact
// fraction (all zero for the disease-only model, which also freezes the psi /
// omega / xi flows regardless of the configured rates).
void local_step(MassState& out, const MassState& s, const ModelParams& p,
                std::span<const double> f, bool info_active, bool simultaneous) {
  for (std::size_t j = 0; j < s.n; ++j) {
    const double S = s.S[j], I = s.I[j], R = s.R[j], A = s.A[j], U = s.U[j];
    const double pop = S + I + R;
    const double new_inf = S * infection_probability(p.lambda, I, pop);
    const double s1 = S - new_inf;
    const double fj = info_active ? f[j] : 0.0;
    const double adopt = info_active ? p.psi * fj * U : 0.0;
    const double immunize = info_active ? p.omega * fj * (simultaneous ? S : s1) : 0.0;
    const double immunity_loss = info_active ? p.xi * R : 0.0;
    const double recover = p.gamma * I;

    const double s2 = s1 - immunize;
    const double s3 = s2 + immunity_loss;
    out.S[j] = s3 + recover;
    const double i1 = I + new_inf;
    out.I[j] = i1 - recover;
    const double r1 = R + immunize;
    out.R[j] = r1 - immunity_loss;
    out.A[j] = A + adopt;
    out.U[j] = U - adopt;
  }
}

void mobility_all(MassState& s, const FlowMatrix& m, std::vector<double>& scratch) {
  apply_mobility(s.S, m, scratch);
  apply_mobility(s.I, m, scratch);
  apply_mobility(s.R, m, scratch);
  apply_mobility(s.A, m, scratch);
  apply_mobility(s.U, m, scratch);
}

}  // namespace

std::vector<double> aware_contact_fraction(const FlowMatrix& calls,
                                           std::span<const double> aware,
                                           std::span<const double> population) {
  const std::size_t n = calls.dim();
  std::vector<double> num(n, 0.0), den(n, 0.0), f(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double ak = aware[k];
    const double nk = population[k];
    const auto row = calls.row(k);
    for (std::size_t j = 0; j < n; ++j) {
      num[j] += row[j] * ak;
      den[j] += row[j] * nk;
    }
  }
  for (std::size_t j = 0; j < n; ++j) f[j] = den[j] > 0.0 ? num[j] / den[j] : 0.0;
  return f;
}

MassState step_disease(const MassState& s, const FlowMatrix& m, const ModelParams& p) {
  MassState out(s.n);
  local_step(out, s, p, {}, /*info_active=*/false, /*simultaneous=*/false);
  std::vector<double> scratch;
  mobility_all(out, m, scratch);
  return out;
}

MassState step_full(const MassState& s, const FlowMatrix& m, const FlowMatrix& c,
                    const ModelParams& p, bool simultaneous) {
  std::vector<double> pop(s.n);
  for (std::size_t j = 0; j < s.n; ++j) pop[j] = s.population(j);
  const auto f = aware_contact_fraction(c, s.A, pop);
  MassState out(s.n);
  local_step(out, s, p, f, /*info_active=*/true, simultaneous);
  std::vector<double> scratch;
  mobility_all(out, m, scratch);
  return out;
}

namespace {

// Local Monte-Carlo transitions, realized per origin cell: every individual
// resolves this step's independent events (infection for S, recovery for
// pre-step I, immunity loss for pre-step R, awareness adoption for origin-U)
// in one pass, so no cell can be overdrawn. Draw order is fixed: subpops
// ascending, origin cells in SU, SA, IU, IA, RU, RA order.
void mc_local_step(CountState& out, const CountState& s, const ModelParams& p,
                   std::span<const double> f, bool info_active, RngStream& rng) {
  for (std::size_t j = 0; j < s.n; ++j) {
    const double pop = static_cast<double>(s.population(j));
    const double p_inf =
        infection_probability(p.lambda, static_cast<double>(s.infected(j)), pop);
    const double fj = info_active ? f[j] : 0.0;
    const double p_adopt = info_active ? std::min(1.0, p.psi * fj) : 0.0;
    const double p_imm = info_active ? std::min(1.0, p.omega * fj) : 0.0;
    const double p_loss = info_active ? p.xi : 0.0;

    {  // susceptible, unaware
      const std::uint64_t su = s.cell(j, kSU);
      const std::uint64_t to_i = rng.binomial(su, p_inf);
      const std::uint64_t rem = su - to_i;
      const std::uint64_t to_r = rng.binomial(rem, p_imm);
      const std::uint64_t stay = rem - to_r;
      const std::uint64_t ai = rng.binomial(to_i, p_adopt);
      const std::uint64_t ar = rng.binomial(to_r, p_adopt);
      const std::uint64_t as = rng.binomial(stay, p_adopt);
      out.cell(j, kIU) += to_i - ai;
      out.cell(j, kIA) += ai;
      out.cell(j, kRU) += to_r - ar;
      out.cell(j, kRA) += ar;
      out.cell(j, kSU) += stay - as;
      out.cell(j, kSA) += as;
    }
    {  // susceptible, aware
      const std::uint64_t sa = s.cell(j, kSA);
      const std::uint64_t to_i = rng.binomial(sa, p_inf);
      const std::uint64_t to_r = rng.binomial(sa - to_i, p_imm);
      out.cell(j, kIA) += to_i;
      out.cell(j, kRA) += to_r;
      out.cell(j, kSA) += sa - to_i - to_r;
    }
    {  // infected, unaware
      const std::uint64_t iu = s.cell(j, kIU);
      const std::uint64_t rec = rng.binomial(iu, p.gamma);
      const std::uint64_t stay = iu - rec;
      const std::uint64_t arec = rng.binomial(rec, p_adopt);
      const std::uint64_t astay = rng.binomial(stay, p_adopt);
      out.cell(j, kSU) += rec - arec;
      out.cell(j, kSA) += arec;
      out.cell(j, kIU) += stay - astay;
      out.cell(j, kIA) += astay;
    }
    {  // infected, aware
      const std::uint64_t ia = s.cell(j, kIA);
      const std::uint64_t rec = rng.binomial(ia, p.gamma);
      out.cell(j, kSA) += rec;
      out.cell(j, kIA) += ia - rec;
    }
    {  // resistant, unaware
      const std::uint64_t ru = s.cell(j, kRU);
      const std::uint64_t loss = rng.binomial(ru, p_loss);
      const std::uint64_t stay = ru - loss;
      const std::uint64_t aloss = rng.binomial(loss, p_adopt);
      const std::uint64_t astay = rng.binomial(stay, p_adopt);
      out.cell(j, kSU) += loss - aloss;
      out.cell(j, kSA) += aloss;
      out.cell(j, kRU) += stay - astay;
      out.cell(j, kRA) += astay;
    }
    {  // resistant, aware
      const std::uint64_t ra = s.cell(j, kRA);
      const std::uint64_t loss = rng.binomial(ra, p_loss);
      out.cell(j, kSA) += loss;
      out.cell(j, kRA) += ra - loss;
    }
  }
}

// Joint multinomial mobility: each (disease, awareness) cell of each origin
// relocates as a unit over the origin's row.
void mc_mobility(const CountState& mid, const FlowMatrix& m, CountState& out,
                 RngStream& rng, std::vector<unsigned int>& buf) {
  const std::size_t n = mid.n;
  for (std::size_t j = 0; j < n; ++j) {
    const bool absorbing = m.at(j, j) == 1.0;
    for (int c = 0; c < kCellCount; ++c) {
      const std::uint64_t count = mid.cell(j, static_cast<Cell>(c));
      if (count == 0) continue;
      if (absorbing) {
        out.cell(j, static_cast<Cell>(c)) += count;
        continue;
      }
      rng.multinomial(m.row(j), count, buf);
      for (std::size_t i = 0; i < n; ++i)
        if (buf[i]) out.cell(i, static_cast<Cell>(c)) += buf[i];
    }
  }
}

CountState mc_step(const CountState& s, const FlowMatrix& m, const ModelParams& p,
                   std::span<const double> f, bool info_active, RngStream& rng) {
  CountState mid(s.n);
  mc_local_step(mid, s, p, f, info_active, rng);
  CountState out(s.n);
  std::vector<unsigned int> buf(s.n);
  mc_mobility(mid, m, out, rng, buf);
  return out;
}

std::vector<double> count_fractions(const CountState& s, const FlowMatrix& calls) {
  std::vector<double> aware(s.n), pop(s.n);
  for (std::size_t i = 0; i < s.n; ++i) {
    aware[i] = static_cast<double>(s.aware(i));
    pop[i] = static_cast<double>(s.population(i));
  }
  return aware_contact_fraction(calls, aware, pop);
}

}  // namespace

CountState mc_step_disease(const CountState& s, const FlowMatrix& m, const ModelParams& p,
                           RngStream& rng) {
  return mc_step(s, m, p, {}, /*info_active=*/false, rng);
}

CountState mc_step_full(const CountState& s, const FlowMatrix& m, const FlowMatrix& c,
                        const ModelParams& p, RngStream& rng) {
  const auto f = count_fractions(s, c);
  return mc_step(s, m, p, f, /*info_active=*/true, rng);
}

RunSummary run_scenario(const Scenario& s, unsigned replica, std::uint64_t stream_salt) {
  auto violations = validate_scenario(s);
  if (!violations.empty()) {
    std::ostringstream os;
    os << "scenario invalid:";
    for (const auto& v : violations) os << " [" << v << "]";
    throw err::Validation(os.str());
  }

  FlowMatrix mobility = FlowMatrix::checked(s.mobility);
  std::optional<CentralityRanking> ranking;
  if (s.infection_seed.strategy == SeedStrategy::CentralityTopK)
    ranking = centrality(mobility, s.infection_seed.centrality);
  if (!s.quarantine.empty()) mobility = quarantine(mobility, s.quarantine);
  std::optional<FlowMatrix> calls;
  if (s.calls) calls = FlowMatrix::checked(*s.calls);

  RngStream seeding_rng(derive_seed(s.rng_seed, kSeedingStream));
  CountState init = seed_infection(s.population, s.infection_seed,
                                   ranking ? &*ranking : nullptr, seeding_rng);
  if (s.awareness_seed) seed_awareness(init, s.awareness_seed->fraction, seeding_rng);

  const int horizon = s.params.horizon;
  Trajectory traj(s.mobility.n, horizon);

  if (s.engine == EngineKind::Deterministic) {
    MassState state = MassState::from(init);
    traj.record(0, state);
    for (int t = 1; t <= horizon; ++t) {
      state = calls ? step_full(state, mobility, *calls, s.params, s.simultaneous_updates)
                    : step_disease(state, mobility, s.params);
      traj.record(t, state);
    }
  } else {
    RngStream dynamics_rng(derive_seed(
        s.rng_seed, kDynamicsStream, (stream_salt << 32) | replica));
    CountState state = init;
    traj.record(0, state);
    for (int t = 1; t <= horizon; ++t) {
      state = calls ? mc_step_full(state, mobility, *calls, s.params, dynamics_rng)
                    : mc_step_disease(state, mobility, s.params, dynamics_rng);
      traj.record(t, state);
    }
  }

  const auto st = detect_stationarity(traj, s.stationarity.epsilon, s.stationarity.window);
  RunSummary out;
  out.stationary = st.stationary;
  out.i_inf = st.stationary ? st.i_inf : std::numeric_limits<double>::quiet_NaN();
  out.tau = st.stationary ? st.tau : -1;
  out.r0 = s.params.gamma > 0.0 ? s.params.lambda / s.params.gamma
                                : std::numeric_limits<double>::infinity();
  out.trajectory = std::move(traj);
  return out;
}

}  // namespace episim

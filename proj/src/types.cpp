#include "types.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace episim {

MatrixData::MatrixData(std::size_t dim, double fill) : n(dim), w(dim * dim, fill) {
  labels.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) labels.push_back(std::to_string(i));
}

std::vector<std::string> FlowMatrix::violations(const MatrixData& d) {
  std::vector<std::string> out;
  if (d.n < 1) {
    out.push_back("matrix empty (n < 1)");
    return out;
  }
  if (d.w.size() != d.n * d.n) {
    out.push_back("matrix not square: " + std::to_string(d.w.size()) + " entries for n=" +
                  std::to_string(d.n));
    return out;
  }
  if (d.labels.size() != d.n) out.push_back("label count does not match n");
  for (std::size_t i = 0; i < d.n; ++i) {
    double sum = 0.0;
    bool entry_bad = false;
    for (std::size_t j = 0; j < d.n; ++j) {
      const double v = d.at(i, j);
      if (!(v >= 0.0 && v <= 1.0) || std::isnan(v)) entry_bad = true;
      sum += v;
    }
    if (entry_bad) out.push_back("row " + std::to_string(i) + " has entries outside [0,1]");
    if (std::abs(sum - 1.0) > kRowSumTol)
      out.push_back("row " + std::to_string(i) + " not stochastic (sum " +
                    std::to_string(sum) + ")");
  }
  return out;
}

FlowMatrix FlowMatrix::checked(MatrixData d) {
  if (d.labels.empty() && d.w.size() == d.n * d.n) {
    for (std::size_t i = 0; i < d.n; ++i) d.labels.push_back(std::to_string(i));
  }
  auto v = violations(d);
  if (!v.empty()) {
    std::ostringstream os;
    os << "invalid flow matrix:";
    for (const auto& s : v) os << " [" << s << "]";
    throw err::Validation(os.str());
  }
  return FlowMatrix(std::move(d));
}

FlowMatrix FlowMatrix::renormalized(MatrixData d) {
  if (d.n >= 1 && d.w.size() == d.n * d.n) {
    for (std::size_t i = 0; i < d.n; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < d.n; ++j) sum += d.at(i, j);
      if (sum <= 0.0) {
        for (std::size_t j = 0; j < d.n; ++j) d.at(i, j) = 0.0;
        d.at(i, i) = 1.0;  // no outgoing flow: absorbing self-loop
      } else {
        for (std::size_t j = 0; j < d.n; ++j) d.at(i, j) /= sum;
      }
    }
  }
  return checked(std::move(d));
}

CountState CountState::all_susceptible(std::span<const std::uint64_t> population) {
  CountState s(population.size());
  for (std::size_t i = 0; i < population.size(); ++i) s.cell(i, kSU) = population[i];
  return s;
}

std::uint64_t CountState::total_population() const {
  std::uint64_t t = 0;
  for (auto c : cells) t += c;
  return t;
}

MassState MassState::from(const CountState& c) {
  MassState m(c.n);
  for (std::size_t i = 0; i < c.n; ++i) {
    m.S[i] = static_cast<double>(c.susceptible(i));
    m.I[i] = static_cast<double>(c.infected(i));
    m.R[i] = static_cast<double>(c.resistant(i));
    m.A[i] = static_cast<double>(c.aware(i));
    m.U[i] = static_cast<double>(c.unaware(i));
  }
  return m;
}

double MassState::total_population() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) t += population(i);
  return t;
}

std::vector<std::string> MassState::violations(double tol) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (S[i] < 0 || I[i] < 0 || R[i] < 0 || A[i] < 0 || U[i] < 0)
      out.push_back("negative compartment in subpopulation " + std::to_string(i));
    const double d = (S[i] + I[i] + R[i]) - (A[i] + U[i]);
    if (std::abs(d) > tol)
      out.push_back("partition mismatch in subpopulation " + std::to_string(i));
  }
  return out;
}

void Trajectory::record(int t, const MassState& s) {
  for (std::size_t i = 0; i < n; ++i) {
    at(t, i, 0) = s.S[i];
    at(t, i, 1) = s.I[i];
    at(t, i, 2) = s.R[i];
    at(t, i, 3) = s.A[i];
    at(t, i, 4) = s.U[i];
  }
}

void Trajectory::record(int t, const CountState& s) {
  for (std::size_t i = 0; i < n; ++i) {
    at(t, i, 0) = static_cast<double>(s.susceptible(i));
    at(t, i, 1) = static_cast<double>(s.infected(i));
    at(t, i, 2) = static_cast<double>(s.resistant(i));
    at(t, i, 3) = static_cast<double>(s.aware(i));
    at(t, i, 4) = static_cast<double>(s.unaware(i));
  }
}

double Trajectory::total(int t, int comp) const {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += at(t, i, comp);
  return s;
}

double Trajectory::infected_fraction(int t) const {
  double inf = 0.0, pop = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    inf += at(t, i, 1);
    pop += at(t, i, 0) + at(t, i, 1) + at(t, i, 2);
  }
  return pop > 0.0 ? inf / pop : 0.0;
}

namespace {

bool rate_ok(double r) { return r >= 0.0 && r <= 1.0 && !std::isnan(r); }

void validate_seeding(const SeedingSpec& spec, std::size_t n, const char* which,
                      std::vector<std::string>& out) {
  if (!(spec.fraction >= 0.0 && spec.fraction <= 1.0))
    out.push_back(std::string(which) + " seed fraction out of [0,1]");
  if (spec.strategy == SeedStrategy::CentralityTopK) {
    if (spec.k < 1) out.push_back(std::string(which) + " seed k < 1 for centrality-top-k");
    if (static_cast<std::size_t>(spec.k) > n)
      out.push_back(std::string(which) + " seed k exceeds subpopulation count");
  }
  if (spec.strategy == SeedStrategy::ExplicitList) {
    if (spec.nodes.empty())
      out.push_back(std::string(which) + " seed explicit-list has no nodes");
    for (auto v : spec.nodes)
      if (v >= n) out.push_back(std::string(which) + " seed node out of range");
  }
}

}  // namespace

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> out;

  auto mv = FlowMatrix::violations(s.mobility);
  for (auto& v : mv) out.push_back("mobility: " + v);
  const std::size_t n = s.mobility.n;

  if (s.calls) {
    auto cv = FlowMatrix::violations(*s.calls);
    for (auto& v : cv) out.push_back("calls: " + v);
    if (s.calls->n != n) out.push_back("calls matrix dimension differs from mobility");
    else if (s.calls->labels != s.mobility.labels)
      out.push_back("calls matrix labels differ from mobility");
  }

  if (!rate_ok(s.params.lambda)) out.push_back("lambda out of [0,1]");
  if (!rate_ok(s.params.gamma)) out.push_back("gamma out of [0,1]");
  if (!rate_ok(s.params.omega)) out.push_back("omega out of [0,1]");
  if (!rate_ok(s.params.psi)) out.push_back("psi out of [0,1]");
  if (!rate_ok(s.params.xi)) out.push_back("xi out of [0,1]");
  if (s.params.horizon < 1) out.push_back("horizon < 1");

  if (s.population.size() != n)
    out.push_back("population vector size does not match matrix dimension");
  std::uint64_t total = 0;
  for (auto p : s.population) total += p;
  if (total == 0) out.push_back("total population is zero");
  if (s.engine == EngineKind::Stochastic &&
      total > std::numeric_limits<unsigned int>::max())
    out.push_back("total population too large for the stochastic engine");

  std::vector<bool> seen(n, false);
  for (auto q : s.quarantine) {
    if (q >= n) {
      out.push_back("quarantine index out of range");
    } else if (seen[q]) {
      out.push_back("duplicate quarantine index " + std::to_string(q));
    } else {
      seen[q] = true;
    }
  }

  validate_seeding(s.infection_seed, n, "infection", out);
  if (s.awareness_seed) validate_seeding(*s.awareness_seed, n, "awareness", out);

  if (s.replicas < 1) out.push_back("replicas < 1");
  if (!(s.stationarity.epsilon > 0)) out.push_back("stationarity epsilon not positive");
  if (s.stationarity.window < 1) out.push_back("stationarity window < 1");
  if (s.stationarity.window > s.params.horizon)
    out.push_back("stationarity window exceeds horizon");

  return out;
}

const char* to_string(SeedStrategy s) {
  switch (s) {
    case SeedStrategy::Uniform: return "uniform";
    case SeedStrategy::RandomSingle: return "random-single";
    case SeedStrategy::CentralityTopK: return "centrality-top-k";
    case SeedStrategy::ExplicitList: return "explicit-list";
  }
  return "?";
}

const char* to_string(CentralityKind k) {
  switch (k) {
    case CentralityKind::Degree: return "degree";
    case CentralityKind::Closeness: return "closeness";
    case CentralityKind::Betweenness: return "betweenness";
    case CentralityKind::Eigenvector: return "eigenvector";
  }
  return "?";
}

const char* to_string(EngineKind e) {
  return e == EngineKind::Deterministic ? "deterministic" : "stochastic";
}

std::optional<SeedStrategy> seed_strategy_from(const std::string& s) {
  if (s == "uniform") return SeedStrategy::Uniform;
  if (s == "random-single") return SeedStrategy::RandomSingle;
  if (s == "centrality-top-k") return SeedStrategy::CentralityTopK;
  if (s == "explicit-list") return SeedStrategy::ExplicitList;
  return std::nullopt;
}

std::optional<CentralityKind> centrality_kind_from(const std::string& s) {
  if (s == "degree") return CentralityKind::Degree;
  if (s == "closeness") return CentralityKind::Closeness;
  if (s == "betweenness") return CentralityKind::Betweenness;
  if (s == "eigenvector") return CentralityKind::Eigenvector;
  return std::nullopt;
}

std::optional<EngineKind> engine_kind_from(const std::string& s) {
  if (s == "deterministic") return EngineKind::Deterministic;
  if (s == "stochastic") return EngineKind::Stochastic;
  return std::nullopt;
}

}  // namespace episim

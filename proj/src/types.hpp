#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace episim {

namespace err {

/// Invariant or scenario validation failure.
struct Validation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File or parse failure.
struct Io : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Iterative method failed to converge within its budget.
struct Convergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace err

/// Square matrix plus subpopulation labels, no invariants enforced.
/// Scenario files are loaded into this form so that validation can report
/// violations instead of refusing to parse.
struct MatrixData {
  std::size_t n = 0;
  std::vector<std::string> labels;
  std::vector<double> w;  // row-major, n*n

  MatrixData() = default;
  MatrixData(std::size_t dim, double fill = 0.0);

  double& at(std::size_t i, std::size_t j) { return w[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return w[i * n + j]; }
  std::span<const double> row(std::size_t i) const { return {w.data() + i * n, n}; }
};

/// Row-stochastic transition matrix (mobility or calls). Always valid:
/// construction goes through checked()/renormalized() and rejects anything
/// violating row stochasticity at kRowSumTol.
class FlowMatrix {
 public:
  static constexpr double kRowSumTol = 1e-12;

  /// Validates and takes ownership; throws err::Validation listing every problem.
  static FlowMatrix checked(MatrixData d);

  /// Divides each row by its sum (a zero row becomes the unit vector at the
  /// diagonal), then validates. Used by the counting builders, where the
  /// ratios are exact in rationals but float division drifts.
  static FlowMatrix renormalized(MatrixData d);

  /// All violations of the FlowMatrix invariants, empty when valid.
  static std::vector<std::string> violations(const MatrixData& d);

  std::size_t dim() const { return data_.n; }
  const std::vector<std::string>& labels() const { return data_.labels; }
  double at(std::size_t i, std::size_t j) const { return data_.at(i, j); }
  std::span<const double> row(std::size_t i) const { return data_.row(i); }
  const MatrixData& data() const { return data_; }

 private:
  explicit FlowMatrix(MatrixData d) : data_(std::move(d)) {}
  MatrixData data_;
};

/// Joint disease x awareness cell indices for integer states. Individuals
/// carry both labels, so mobility moves each cell as a unit and both
/// partitions stay exact.
enum Cell : int { kSU = 0, kIU = 1, kRU = 2, kSA = 3, kIA = 4, kRA = 5 };
inline constexpr int kCellCount = 6;

/// Integer compartment state used by the stochastic engine: six joint cells
/// per subpopulation. Nonnegativity and the S+I+R = A+U partition hold by
/// construction.
struct CountState {
  std::size_t n = 0;
  std::vector<std::uint64_t> cells;  // n * kCellCount, [subpop][cell]

  CountState() = default;
  explicit CountState(std::size_t dim) : n(dim), cells(dim * kCellCount, 0) {}

  /// Everyone susceptible and unaware.
  static CountState all_susceptible(std::span<const std::uint64_t> population);

  std::uint64_t& cell(std::size_t i, Cell c) { return cells[i * kCellCount + c]; }
  std::uint64_t cell(std::size_t i, Cell c) const { return cells[i * kCellCount + c]; }

  std::uint64_t susceptible(std::size_t i) const { return cell(i, kSU) + cell(i, kSA); }
  std::uint64_t infected(std::size_t i) const { return cell(i, kIU) + cell(i, kIA); }
  std::uint64_t resistant(std::size_t i) const { return cell(i, kRU) + cell(i, kRA); }
  std::uint64_t aware(std::size_t i) const {
    return cell(i, kSA) + cell(i, kIA) + cell(i, kRA);
  }
  std::uint64_t unaware(std::size_t i) const {
    return cell(i, kSU) + cell(i, kIU) + cell(i, kRU);
  }
  std::uint64_t population(std::size_t i) const {
    return susceptible(i) + infected(i) + resistant(i);
  }
  std::uint64_t total_population() const;
};

/// Real-valued compartment state used by the deterministic engine.
struct MassState {
  std::size_t n = 0;
  std::vector<double> S, I, R, A, U;

  MassState() = default;
  explicit MassState(std::size_t dim)
      : n(dim), S(dim, 0.0), I(dim, 0.0), R(dim, 0.0), A(dim, 0.0), U(dim, 0.0) {}

  static MassState from(const CountState& c);

  double population(std::size_t i) const { return S[i] + I[i] + R[i]; }
  double total_population() const;

  /// Violations of nonnegativity and the partition identity at `tol`.
  std::vector<std::string> violations(double tol = 1e-9) const;
};

struct ModelParams {
  double lambda = 0.0;  // infection rate per step
  double gamma = 0.0;   // recovery rate per step
  double omega = 0.0;   // immunization-on-information rate
  double psi = 0.0;     // awareness-adoption rate
  double xi = 0.0;      // immunity-loss rate
  int horizon = 180;    // steps
};

enum class SeedStrategy { Uniform, RandomSingle, CentralityTopK, ExplicitList };
enum class CentralityKind { Degree, Closeness, Betweenness, Eigenvector };
enum class EngineKind { Deterministic, Stochastic };

struct SeedingSpec {
  SeedStrategy strategy = SeedStrategy::Uniform;
  double fraction = 0.0;
  int k = 1;                                       // centrality-top-k only
  CentralityKind centrality = CentralityKind::Eigenvector;
  std::vector<std::size_t> nodes;                  // explicit-list only
};

struct StationarityParams {
  double epsilon = 1e-6;  // absolute change in global infected fraction
  int window = 10;        // consecutive steps below epsilon
};

struct Scenario {
  MatrixData mobility;
  std::optional<MatrixData> calls;  // absent: disease-only model
  ModelParams params;
  std::vector<std::uint64_t> population;
  SeedingSpec infection_seed;
  std::optional<SeedingSpec> awareness_seed;
  std::vector<std::size_t> quarantine;  // subpopulation indices, cut before the run
  std::uint64_t rng_seed = 0;
  EngineKind engine = EngineKind::Deterministic;
  unsigned replicas = 1;
  StationarityParams stationarity;
  bool simultaneous_updates = false;  // compat: evaluate the printed simultaneous form
};

/// Every invariant violation in the scenario; empty iff runnable. Never throws.
std::vector<std::string> validate_scenario(const Scenario& s);

/// Per-step marginal compartments, steps+1 recorded states. Stochastic counts
/// are stored as doubles, which is exact below 2^53.
struct Trajectory {
  std::size_t n = 0;
  int steps = 0;
  std::vector<double> data;  // (steps+1) * n * 5, [t][subpop][S I R A U]

  Trajectory() = default;
  Trajectory(std::size_t dim, int nsteps)
      : n(dim), steps(nsteps), data(static_cast<std::size_t>(nsteps + 1) * dim * 5, 0.0) {}

  double at(int t, std::size_t i, int comp) const {
    return data[(static_cast<std::size_t>(t) * n + i) * 5 + comp];
  }
  double& at(int t, std::size_t i, int comp) {
    return data[(static_cast<std::size_t>(t) * n + i) * 5 + comp];
  }
  void record(int t, const MassState& s);
  void record(int t, const CountState& s);

  double total(int t, int comp) const;
  /// Global infected fraction at step t.
  double infected_fraction(int t) const;
};

struct RunSummary {
  bool stationary = false;
  double i_inf = 0.0;  // defined only when stationary
  int tau = 0;         // defined only when stationary
  double r0 = 0.0;     // lambda / gamma, +inf when gamma == 0
  Trajectory trajectory;
};

const char* to_string(SeedStrategy s);
const char* to_string(CentralityKind k);
const char* to_string(EngineKind e);
std::optional<SeedStrategy> seed_strategy_from(const std::string& s);
std::optional<CentralityKind> centrality_kind_from(const std::string& s);
std::optional<EngineKind> engine_kind_from(const std::string& s);

}  // namespace episim

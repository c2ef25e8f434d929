#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "centrality.hpp"
#include "sweep.hpp"
#include "types.hpp"

namespace episim {

/// Shortest round-trip decimal form; NaN renders as the empty string
/// (missing value), infinities as "inf"/"-inf".
std::string fmt_double(double v);

std::uint64_t fnv1a64(const void* data, std::size_t len,
                      std::uint64_t h = 0xCBF29CE484222325ULL);
std::uint64_t matrix_hash(const MatrixData& m);
std::uint64_t scenario_hash(const Scenario& s);

/// Commented header block at the top of every output file. No timestamps:
/// identical inputs must produce identical files byte for byte.
struct OutputMeta {
  std::uint64_t content_hash = 0;
  std::string rng = "none";
  std::uint64_t seed = 0;
};
void write_metadata(std::ostream& os, const OutputMeta& meta);

OutputMeta meta_for(const Scenario& s);
OutputMeta meta_for_matrix(const MatrixData& m);

// Matrix file: metadata block, then a header row of subpopulation labels,
// then the matrix rows.
void write_matrix_csv(const FlowMatrix& m, const std::string& path, const OutputMeta& meta);
/// Raw read (labels + entries); validation is the caller's job.
MatrixData read_matrix_csv(const std::string& path);

void write_trajectory_csv(const Trajectory& t, const std::string& path,
                          const OutputMeta& meta);
void write_summary_csv(std::span<const RunSummary> runs, const std::string& path,
                       const OutputMeta& meta);
void write_ranking_csv(const CentralityRanking& r, const std::string& path,
                       const OutputMeta& meta);
void write_heatmap_csv(std::span<const HeatmapCell> cells, const std::string& path,
                       const OutputMeta& meta);
void write_r0_csv(std::span<const R0Point> rows, const std::string& path,
                  const OutputMeta& meta);

struct R0Config {
  std::vector<double> values;
  double gamma = 0.4;
  std::vector<SeedingSpec> seedings;
};

struct SweepConfig {
  std::optional<SweepGrid> grid;
  std::vector<std::pair<double, double>> pairs;  // (lambda, gamma) per heatmap file
  std::optional<R0Config> r0;
};

struct ScenarioFile {
  Scenario scenario;
  std::optional<SweepConfig> sweep;
};

/// Parses the JSON scenario config (schema in the README). Matrix invariant
/// violations do not fail the load; validate_scenario reports them.
ScenarioFile load_scenario_file(const std::string& path);

/// Runs the configured sweeps and writes heatmap*.csv / r0_curve.csv into
/// `out_dir` (created if needed).
void write_sweep_outputs(const ScenarioFile& sf, const std::string& out_dir,
                         unsigned threads);

}  // namespace episim

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "types.hpp"

namespace episim {

/// Aggregated call volume between two subpopulations (duration ignored).
struct CallAggregateRecord {
  std::uint32_t origin = 0;
  std::uint32_t destination = 0;
  std::uint64_t call_count = 0;
};

/// One position observation of one user; per-user records must appear in
/// strictly increasing timestamp order.
struct TrajectoryRecord {
  std::uint64_t user = 0;
  std::int64_t timestamp = 0;
  std::uint32_t location = 0;
};

/// Call matrix: w[i][j] = calls i->j / total calls originating at i.
/// Rows with no originating calls become absorbing (w[i][i] = 1).
FlowMatrix build_calls_matrix(std::span<const CallAggregateRecord> records, std::size_t n);

/// Mobility matrix from consecutive-record transitions, self-transitions
/// included. `max_gap` > 0 breaks the chain when the timestamp gap exceeds
/// it; 0 treats consecutive records as adjacent regardless of gap.
FlowMatrix build_mobility_matrix(std::span<const TrajectoryRecord> records, std::size_t n,
                                 std::int64_t max_gap = 0);

enum class SynthKind { Identity, Uniform, Hub, DiagonalDominant };

std::optional<SynthKind> synth_kind_from(const std::string& s);
const char* to_string(SynthKind k);

/// Deterministic synthetic matrix for desk-scale runs. `diag_weight` and
/// `seed` only matter for hub / diagonal-dominant.
FlowMatrix synth_matrix(SynthKind kind, std::size_t n, double diag_weight,
                        std::uint64_t seed);

/// CSV `origin_id,destination_id,call_count` with header.
std::vector<CallAggregateRecord> read_calls_csv(const std::string& path);
/// CSV `user_id,timestamp,location_id` with header.
std::vector<TrajectoryRecord> read_trajectories_csv(const std::string& path);

}  // namespace episim

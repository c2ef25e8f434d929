#include "ingest.hpp"

#include <charconv>
#include <fstream>
#include <unordered_map>

#include "rng.hpp"

namespace episim {

namespace {

FlowMatrix matrix_from_counts(const std::unordered_map<std::uint64_t, std::uint64_t>& tally,
                              std::size_t n) {
  MatrixData d(n);
  for (const auto& [key, count] : tally)
    d.w[key] = static_cast<double>(count);
  return FlowMatrix::renormalized(std::move(d));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r')
    out.back().pop_back();
  return out;
}

template <typename T>
T parse_int(const std::string& field, const std::string& path, std::size_t lineno) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw err::Io(path + ":" + std::to_string(lineno) + ": bad integer field '" + field + "'");
  return value;
}

}  // namespace

FlowMatrix build_calls_matrix(std::span<const CallAggregateRecord> records, std::size_t n) {
  std::unordered_map<std::uint64_t, std::uint64_t> tally;
  std::size_t idx = 0;
  for (const auto& r : records) {
    if (r.origin >= n || r.destination >= n)
      throw err::Validation("call record " + std::to_string(idx) + " (" +
                            std::to_string(r.origin) + "->" + std::to_string(r.destination) +
                            ") id out of range for n=" + std::to_string(n));
    tally[static_cast<std::uint64_t>(r.origin) * n + r.destination] += r.call_count;
    ++idx;
  }
  return matrix_from_counts(tally, n);
}

FlowMatrix build_mobility_matrix(std::span<const TrajectoryRecord> records, std::size_t n,
                                 std::int64_t max_gap) {
  struct Last {
    std::int64_t timestamp;
    std::uint32_t location;
  };
  std::unordered_map<std::uint64_t, Last> last_seen;
  std::unordered_map<std::uint64_t, std::uint64_t> tally;

  for (const auto& r : records) {
    if (r.location >= n)
      throw err::Validation("trajectory record for user " + std::to_string(r.user) +
                            " location out of range for n=" + std::to_string(n));
    auto it = last_seen.find(r.user);
    if (it != last_seen.end()) {
      if (r.timestamp <= it->second.timestamp)
        throw err::Validation("records for user " + std::to_string(r.user) +
                              " not strictly increasing in time");
      if (max_gap <= 0 || r.timestamp - it->second.timestamp <= max_gap)
        tally[static_cast<std::uint64_t>(it->second.location) * n + r.location] += 1;
      it->second = {r.timestamp, r.location};
    } else {
      last_seen.emplace(r.user, Last{r.timestamp, r.location});
    }
  }
  return matrix_from_counts(tally, n);
}

std::optional<SynthKind> synth_kind_from(const std::string& s) {
  if (s == "identity") return SynthKind::Identity;
  if (s == "uniform") return SynthKind::Uniform;
  if (s == "hub") return SynthKind::Hub;
  if (s == "diagonal-dominant") return SynthKind::DiagonalDominant;
  return std::nullopt;
}

const char* to_string(SynthKind k) {
  switch (k) {
    case SynthKind::Identity: return "identity";
    case SynthKind::Uniform: return "uniform";
    case SynthKind::Hub: return "hub";
    case SynthKind::DiagonalDominant: return "diagonal-dominant";
  }
  return "?";
}

FlowMatrix synth_matrix(SynthKind kind, std::size_t n, double diag_weight,
                        std::uint64_t seed) {
  if (n < 1) throw err::Validation("synth matrix needs n >= 1");
  if (!(diag_weight >= 0.0 && diag_weight <= 1.0))
    throw err::Validation("diag_weight out of [0,1]");

  MatrixData d(n);
  if (n == 1) {
    d.at(0, 0) = 1.0;
    return FlowMatrix::checked(std::move(d));
  }

  switch (kind) {
    case SynthKind::Identity:
      for (std::size_t i = 0; i < n; ++i) d.at(i, i) = 1.0;
      break;
    case SynthKind::Uniform: {
      const double v = 1.0 / static_cast<double>(n);
      for (auto& x : d.w) x = v;
      break;
    }
    case SynthKind::Hub: {
      // Node 0 is the hub: half of every other row's travel mass goes there,
      // the rest spreads evenly so cutting the hub does not disconnect anyone.
      const double rest = 1.0 - diag_weight;
      for (std::size_t j = 1; j < n; ++j) d.at(0, j) = rest / static_cast<double>(n - 1);
      d.at(0, 0) = diag_weight;
      for (std::size_t i = 1; i < n; ++i) {
        d.at(i, i) = diag_weight;
        d.at(i, 0) = (n == 2) ? rest : rest * 0.5;
        if (n > 2) {
          const double share = rest * 0.5 / static_cast<double>(n - 2);
          for (std::size_t j = 1; j < n; ++j)
            if (j != i) d.at(i, j) = share;
        }
      }
      break;
    }
    case SynthKind::DiagonalDominant: {
      RngStream rng(derive_seed(seed, kSynthStream));
      const double rest = 1.0 - diag_weight;
      for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          const double g = 0.05 + rng.uniform();  // strictly positive shares
          d.at(i, j) = g;
          sum += g;
        }
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) d.at(i, j) *= rest / sum;
        d.at(i, i) = diag_weight;
      }
      break;
    }
  }
  return FlowMatrix::renormalized(std::move(d));
}

std::vector<CallAggregateRecord> read_calls_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw err::Io("cannot open " + path);
  std::string line;
  std::size_t lineno = 0;
  std::vector<CallAggregateRecord> out;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv_line(line);
    if (!header_seen) {
      if (fields.size() != 3 || fields[0] != "origin_id")
        throw err::Io(path + ": expected header origin_id,destination_id,call_count");
      header_seen = true;
      continue;
    }
    if (fields.size() != 3)
      throw err::Io(path + ":" + std::to_string(lineno) + ": expected 3 fields");
    out.push_back({parse_int<std::uint32_t>(fields[0], path, lineno),
                   parse_int<std::uint32_t>(fields[1], path, lineno),
                   parse_int<std::uint64_t>(fields[2], path, lineno)});
  }
  if (!header_seen) throw err::Io(path + ": empty calls file");
  return out;
}

std::vector<TrajectoryRecord> read_trajectories_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw err::Io("cannot open " + path);
  std::string line;
  std::size_t lineno = 0;
  std::vector<TrajectoryRecord> out;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv_line(line);
    if (!header_seen) {
      if (fields.size() != 3 || fields[0] != "user_id")
        throw err::Io(path + ": expected header user_id,timestamp,location_id");
      header_seen = true;
      continue;
    }
    if (fields.size() != 3)
      throw err::Io(path + ":" + std::to_string(lineno) + ": expected 3 fields");
    out.push_back({parse_int<std::uint64_t>(fields[0], path, lineno),
                   parse_int<std::int64_t>(fields[1], path, lineno),
                   parse_int<std::uint32_t>(fields[2], path, lineno)});
  }
  if (!header_seen) throw err::Io(path + ": empty trajectory file");
  return out;
}

}  // namespace episim

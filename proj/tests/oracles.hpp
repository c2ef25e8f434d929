// Test-side oracles, independent of the implementation paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "ingest.hpp"
#include "types.hpp"

namespace oracle {

inline episim::MatrixData matrix_from_rows(const std::vector<std::vector<double>>& rows) {
  episim::MatrixData d(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) d.at(i, j) = rows[i][j];
  return d;
}

// Symmetric star: hub 0 connected to every leaf with weight `c` both ways,
// diagonals complete the rows.
inline episim::MatrixData star_matrix(std::size_t n, double c) {
  episim::MatrixData d(n);
  d.at(0, 0) = 1.0 - c * static_cast<double>(n - 1);
  for (std::size_t j = 1; j < n; ++j) {
    d.at(0, j) = c;
    d.at(j, 0) = c;
    d.at(j, j) = 1.0 - c;
  }
  return d;
}

// --- brute-force counting oracles for the matrix builders --------------------

inline std::vector<std::vector<double>> calls_counting_oracle(
    std::span<const episim::CallAggregateRecord> records, std::size_t n) {
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> tally;
  for (const auto& r : records) tally[{r.origin, r.destination}] += r.call_count;
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t row_total = 0;
    for (std::size_t j = 0; j < n; ++j) {
      auto it = tally.find({i, j});
      if (it != tally.end()) row_total += it->second;
    }
    if (row_total == 0) {
      w[i][i] = 1.0;
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) {
      auto it = tally.find({i, j});
      if (it != tally.end())
        w[i][j] = static_cast<double>(it->second) / static_cast<double>(row_total);
    }
  }
  return w;
}

inline std::vector<std::vector<double>> mobility_counting_oracle(
    std::span<const episim::TrajectoryRecord> records, std::size_t n) {
  // Group per user, then count consecutive transitions (self included).
  std::map<std::uint64_t, std::vector<std::pair<std::int64_t, std::uint32_t>>> users;
  for (const auto& r : records) users[r.user].emplace_back(r.timestamp, r.location);
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> tally;
  for (auto& [user, recs] : users) {
    std::sort(recs.begin(), recs.end());
    for (std::size_t k = 1; k < recs.size(); ++k)
      tally[{recs[k - 1].second, recs[k].second}] += 1;
  }
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t row_total = 0;
    for (std::size_t j = 0; j < n; ++j) {
      auto it = tally.find({i, j});
      if (it != tally.end()) row_total += it->second;
    }
    if (row_total == 0) {
      w[i][i] = 1.0;
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) {
      auto it = tally.find({i, j});
      if (it != tally.end())
        w[i][j] = static_cast<double>(it->second) / static_cast<double>(row_total);
    }
  }
  return w;
}

// --- path-enumeration oracles for centrality ---------------------------------

struct PathEnumeration {
  std::vector<std::vector<double>> dist;  // min length, inf if unreachable
  std::vector<double> credit;             // betweenness credit per node
};

// Enumerates every simple path between every ordered pair (n <= 8) over edge
// lengths -ln(w), self-loops excluded; counts all minimum-length paths within
// a relative tolerance and credits their interior nodes.
inline PathEnumeration enumerate_paths(const episim::MatrixData& w) {
  const std::size_t n = w.n;
  const double inf = std::numeric_limits<double>::infinity();
  PathEnumeration out;
  out.dist.assign(n, std::vector<double>(n, inf));
  out.credit.assign(n, 0.0);

  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (s == t) {
        out.dist[s][t] = 0.0;
        continue;
      }
      double best = inf;
      std::vector<std::vector<std::size_t>> best_paths;  // interior nodes only
      std::vector<bool> used(n, false);
      std::vector<std::size_t> interior;
      used[s] = true;

      auto dfs = [&](auto&& self, std::size_t u, double len) -> void {
        for (std::size_t v = 0; v < n; ++v) {
          if (used[v] || v == u) continue;
          const double p = w.at(u, v);
          if (!(p > 0.0)) continue;
          const double nl = len - std::log(p);
          if (nl > best + 1e-9) continue;  // prune hopeless branches
          if (v == t) {
            const double tol = 1e-12 * std::max(1.0, std::abs(best));
            if (nl < best - tol) {
              best = nl;
              best_paths.clear();
              best_paths.push_back(interior);
            } else if (std::abs(nl - best) <= tol) {
              best_paths.push_back(interior);
            }
            continue;
          }
          used[v] = true;
          interior.push_back(v);
          self(self, v, nl);
          interior.pop_back();
          used[v] = false;
        }
      };
      dfs(dfs, s, 0.0);

      out.dist[s][t] = best;
      if (!best_paths.empty()) {
        const double sigma = static_cast<double>(best_paths.size());
        for (const auto& path : best_paths)
          for (std::size_t v : path) out.credit[v] += 1.0 / sigma;
      }
    }
  }
  return out;
}

inline std::vector<double> betweenness_oracle(const episim::MatrixData& w) {
  return enumerate_paths(w).credit;
}

inline std::vector<double> closeness_oracle(const episim::MatrixData& w) {
  auto paths = enumerate_paths(w);
  std::vector<double> s(w.n, 0.0);
  for (std::size_t i = 0; i < w.n; ++i)
    for (std::size_t j = 0; j < w.n; ++j) {
      if (i == j || std::isinf(paths.dist[i][j])) continue;
      s[i] += 1.0 / paths.dist[i][j];
    }
  return s;
}

inline std::vector<double> degree_oracle(const episim::MatrixData& w) {
  std::vector<double> s(w.n, 0.0);
  for (std::size_t i = 0; i < w.n; ++i)
    for (std::size_t j = 0; j < w.n; ++j)
      if (i != j) s[i] += w.at(i, j) + w.at(j, i);
  return s;
}

// Repeated long-double application of the self-loop-free transpose, no shift.
// Valid for the dense strictly-positive test graphs (primitive matrices).
inline std::vector<double> eigenvector_oracle(const episim::MatrixData& w,
                                              int iters = 200000) {
  const std::size_t n = w.n;
  std::vector<long double> x(n, 1.0L), y(n, 0.0L);
  for (int it = 0; it < iters; ++it) {
    long double norm = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      long double acc = 0.0L;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) acc += static_cast<long double>(w.at(j, i)) * x[j];
      y[i] = acc;
      norm += acc;
    }
    if (norm == 0.0L) break;  // zero matrix: uniform is fine
    long double change = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] /= norm;
      change = std::max(change, std::abs(y[i] - x[i]));
    }
    x.swap(y);
    if (change < 1e-18L) break;
  }
  long double sum = 0.0L;
  for (auto v : x) sum += v;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = static_cast<double>(sum > 0.0L ? x[i] / sum : 1.0L / n);
  return out;
}

// --- misc ---------------------------------------------------------------------

// Dense strictly positive random row-stochastic matrix (primitive, so the
// eigenvector oracle is well-defined).
inline episim::MatrixData random_dense_matrix(std::size_t n, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  episim::MatrixData d(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      d.at(i, j) = u(gen);
      sum += d.at(i, j);
    }
    for (std::size_t j = 0; j < n; ++j) d.at(i, j) /= sum;
  }
  return d;
}

struct Stats {
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;
};

inline Stats stats(std::span<const double> xs) {
  Stats st;
  if (xs.empty()) return st;
  double sum = 0.0;
  for (double x : xs) sum += x;
  st.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - st.mean) * (x - st.mean);
    st.sd = std::sqrt(ss / (static_cast<double>(xs.size()) - 1.0));
    st.se = st.sd / std::sqrt(static_cast<double>(xs.size()));
  }
  return st;
}

}  // namespace oracle

#include "centrality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stack>

namespace episim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative slack when deciding whether two path lengths are equal.
constexpr double kPathTol = 1e-12;

struct ShortestPaths {
  std::vector<double> dist;        // from the source
  std::vector<double> sigma;       // number of shortest paths
  std::vector<std::vector<std::size_t>> pred;  // shortest-path predecessors
  std::vector<std::size_t> order;  // settle order (ascending distance)
};

// Dijkstra over edge lengths -ln(w), self-loops skipped.
ShortestPaths dijkstra(const MatrixData& w, std::size_t src) {
  const std::size_t n = w.n;
  ShortestPaths sp;
  sp.dist.assign(n, kInf);
  sp.sigma.assign(n, 0.0);
  sp.pred.assign(n, {});
  sp.dist[src] = 0.0;
  sp.sigma[src] = 1.0;

  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  heap.push({0.0, src});
  std::vector<bool> settled(n, false);

  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (settled[u]) continue;
    settled[u] = true;
    sp.order.push_back(u);
    for (std::size_t v = 0; v < n; ++v) {
      if (v == u) continue;
      const double p = w.at(u, v);
      if (!(p > 0.0)) continue;
      const double len = -std::log(p);
      const double nd = d + len;
      const double tol = kPathTol * std::max(1.0, std::abs(sp.dist[v]));
      if (nd < sp.dist[v] - tol) {
        sp.dist[v] = nd;
        sp.sigma[v] = sp.sigma[u];
        sp.pred[v] = {u};
        heap.push({nd, v});
      } else if (std::abs(nd - sp.dist[v]) <= tol && !settled[v]) {
        sp.sigma[v] += sp.sigma[u];
        sp.pred[v].push_back(u);
      }
    }
  }
  return sp;
}

}  // namespace

std::vector<double> degree_scores(const MatrixData& w) {
  std::vector<double> s(w.n, 0.0);
  for (std::size_t i = 0; i < w.n; ++i)
    for (std::size_t j = 0; j < w.n; ++j) {
      if (i == j) continue;
      s[i] += w.at(i, j) + w.at(j, i);
    }
  return s;
}

std::vector<double> closeness_scores(const MatrixData& w) {
  // Harmonic closeness over outgoing distances; unreachable terms add zero.
  std::vector<double> s(w.n, 0.0);
  for (std::size_t i = 0; i < w.n; ++i) {
    auto sp = dijkstra(w, i);
    for (std::size_t j = 0; j < w.n; ++j) {
      if (j == i || sp.dist[j] == kInf) continue;
      s[i] += 1.0 / sp.dist[j];
    }
  }
  return s;
}

std::vector<double> betweenness_scores(const MatrixData& w) {
  // Brandes' accumulation, directed, endpoints excluded.
  const std::size_t n = w.n;
  std::vector<double> s(n, 0.0);
  for (std::size_t src = 0; src < n; ++src) {
    auto sp = dijkstra(w, src);
    std::vector<double> delta(n, 0.0);
    for (auto it = sp.order.rbegin(); it != sp.order.rend(); ++it) {
      const std::size_t v = *it;
      for (std::size_t u : sp.pred[v])
        delta[u] += sp.sigma[u] / sp.sigma[v] * (1.0 + delta[v]);
      if (v != src) s[v] += delta[v];
    }
  }
  return s;
}

EigenResult eigenvector_scores(const MatrixData& w, double tol, int max_iter) {
  const std::size_t n = w.n;
  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  std::vector<double> y(n, 0.0);

  for (int iter = 0; iter < max_iter; ++iter) {
    // y = (A + I) x with A the self-loop-free transpose; the shift keeps
    // bipartite-like structures from oscillating.
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = x[i];
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) acc += w.at(j, i) * x[j];
      y[i] = acc;
      norm += acc;
    }
    double max_change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] /= norm;
      max_change = std::max(max_change, std::abs(y[i] - x[i]));
    }
    x.swap(y);
    if (max_change <= tol) {
      // Rayleigh-style estimate of the unshifted eigenvalue.
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) acc += w.at(j, i) * x[j];
        num += acc * x[i];
        den += x[i] * x[i];
      }
      return {std::move(x), den > 0.0 ? num / den : 0.0};
    }
  }
  throw err::Convergence("eigenvector power iteration did not converge after " +
                         std::to_string(max_iter) + " iterations");
}

std::vector<std::size_t> rank_descending(const std::vector<double>& scores) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  return idx;
}

CentralityRanking centrality(const FlowMatrix& m, CentralityKind kind) {
  CentralityRanking r;
  r.kind = kind;
  switch (kind) {
    case CentralityKind::Degree: r.scores = degree_scores(m.data()); break;
    case CentralityKind::Closeness: r.scores = closeness_scores(m.data()); break;
    case CentralityKind::Betweenness: r.scores = betweenness_scores(m.data()); break;
    case CentralityKind::Eigenvector: r.scores = eigenvector_scores(m.data()).vec; break;
  }
  r.ranked = rank_descending(r.scores);
  return r;
}

std::vector<std::size_t> top_k(const CentralityRanking& r, std::size_t k) {
  if (k < 1 || k > r.ranked.size())
    throw std::invalid_argument("top_k: k out of [1, n]");
  return {r.ranked.begin(), r.ranked.begin() + static_cast<std::ptrdiff_t>(k)};
}

}  // namespace episim

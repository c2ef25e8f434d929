#pragma once

#include <cstddef>
#include <vector>

#include "types.hpp"

namespace episim {

/// Scores plus a deterministic ranking (descending score, ties by ascending
/// node index).
struct CentralityRanking {
  CentralityKind kind = CentralityKind::Degree;
  std::vector<double> scores;
  std::vector<std::size_t> ranked;
};

/// Centrality over the matrix viewed as a weighted digraph. Self-loops are
/// excluded everywhere; path-based kinds use edge length -ln(w) so path
/// length corresponds to the product of transition probabilities.
CentralityRanking centrality(const FlowMatrix& m, CentralityKind kind);

/// First k entries of the ranking; throws for k outside [1, n].
std::vector<std::size_t> top_k(const CentralityRanking& r, std::size_t k);

/// Ranking from raw scores with the tie-break above.
std::vector<std::size_t> rank_descending(const std::vector<double>& scores);

// Raw-weight building blocks. These do not require row stochasticity, which
// the scale-invariance properties rely on.
std::vector<double> degree_scores(const MatrixData& w);
std::vector<double> closeness_scores(const MatrixData& w);
std::vector<double> betweenness_scores(const MatrixData& w);

struct EigenResult {
  std::vector<double> vec;  // unit-sum, nonnegative
  double value = 0.0;       // dominant eigenvalue of the self-loop-free transpose
};

/// Power iteration (unit diagonal shift for aperiodicity) on the transpose
/// with zeroed diagonal. Throws err::Convergence after max_iter iterations.
EigenResult eigenvector_scores(const MatrixData& w, double tol = 1e-10,
                               int max_iter = 100000);

}  // namespace episim

#pragma once

#include <Eigen/Core>
#include <vector>

#include "netkrige/topology.hpp"

namespace netkrige {

/// Eigendecomposition of B = G^T G. Eigenvalues are sorted descending and
/// clamped to zero below the rank tolerance; eigenvector columns are paired
/// with their eigenvalues and sign-normalized so the first component larger
/// than 1e-12 in magnitude is positive.
struct Spectrum {
  Eigen::VectorXd eigenvalues;   // descending, nonnegative
  Eigen::MatrixXd eigenvectors;  // column k pairs with eigenvalues(k)
  int numeric_rank = 0;          // eigenvalues above lam_1 * n_e * eps
};

Spectrum compute_spectrum(const RoutingMatrix& g);

/// Threshold rule plus gap diagnostic. `by_threshold` is the smallest k with
/// lam_{k+1}/lam_1 < threshold (k = spectrum size when no such k exists).
/// `largest_gap_index` is argmax_k lam_k/lam_{k+1} over k < numeric_rank.
struct EffectiveRank {
  int by_threshold = 0;
  int largest_gap_index = 0;
};

EffectiveRank effective_rank(const Spectrum& spec, double threshold);

/// Edge betweenness (diagonal of B), co-betweenness (all of B, exact integer
/// counts) and the hop-count diameter of the directed graph.
struct BetweennessReport {
  Eigen::VectorXd edge_betweenness;
  Eigen::MatrixXd co_betweenness;
  int diameter = 0;
};

BetweennessReport betweenness_report(const RoutingMatrix& g, const Topology& topo);

/// One row per k: lam_k against B_(k) * diam(G) with betweenness sorted
/// descending, plus the ratio form lam_k/lam_1 <= (B_(k)/B_(1)) * diam(G)
/// for k > 1. Violations indicate implementation bugs and are reported, not
/// thrown.
struct Proposition1Row {
  int k = 0;
  double lambda = 0.0;
  double betweenness = 0.0;
  double bound = 0.0;
  bool satisfied = false;
  bool ratio_satisfied = false;
};

struct Proposition1Report {
  std::vector<Proposition1Row> rows;
  bool all_satisfied = false;
};

Proposition1Report check_proposition1(const Spectrum& spec,
                                      const BetweennessReport& rep);

}  // namespace netkrige

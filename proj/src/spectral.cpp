#include "netkrige/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "netkrige/errors.hpp"

namespace netkrige {

Spectrum compute_spectrum(const RoutingMatrix& g) {
  if (g.n_paths() == 0 || g.n_links() == 0) {
    throw PreconditionError("compute_spectrum: empty routing matrix");
  }
  const Eigen::MatrixXd b = g.entries().transpose() * g.entries();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
  if (es.info() != Eigen::Success) {
    throw NumericError("compute_spectrum: eigendecomposition failed");
  }
  const Eigen::Index n = b.rows();
  Spectrum spec;
  spec.eigenvalues = es.eigenvalues().reverse();
  spec.eigenvectors = es.eigenvectors().rowwise().reverse();

  const double eps = std::numeric_limits<double>::epsilon();
  const double lam1 = std::max(spec.eigenvalues(0), 0.0);
  const double tol = lam1 * static_cast<double>(n) * eps;
  spec.numeric_rank = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (spec.eigenvalues(k) < tol) spec.eigenvalues(k) = 0.0;
    if (spec.eigenvalues(k) > tol) ++spec.numeric_rank;
    // sign convention: first component above 1e-12 positive
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = spec.eigenvectors(i, k);
      if (std::abs(v) > 1e-12) {
        if (v < 0.0) spec.eigenvectors.col(k) *= -1.0;
        break;
      }
    }
  }
  return spec;
}

EffectiveRank effective_rank(const Spectrum& spec, double threshold) {
  const Eigen::Index n = spec.eigenvalues.size();
  if (n == 0) throw PreconditionError("effective_rank: empty spectrum");
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw PreconditionError("effective_rank: threshold must be in (0, 1]");
  }
  const double lam1 = spec.eigenvalues(0);
  EffectiveRank out;
  out.by_threshold = static_cast<int>(n);
  for (Eigen::Index k = 1; k < n; ++k) {
    if (spec.eigenvalues(k) / lam1 < threshold) {
      out.by_threshold = static_cast<int>(k);
      break;
    }
  }
  out.largest_gap_index = 1;
  double best_ratio = -1.0;
  for (int k = 1; k < spec.numeric_rank; ++k) {
    const double next = spec.eigenvalues(k);
    if (next <= 0.0) break;
    const double ratio = spec.eigenvalues(k - 1) / next;
    if (ratio > best_ratio) {
      best_ratio = ratio;
      out.largest_gap_index = k;
    }
  }
  return out;
}

namespace {

int hop_diameter(const Topology& topo) {
  const int n = topo.n_nodes();
  std::vector<std::vector<int>> adj(n);
  for (const Link& l : topo.links()) adj[l.source].push_back(l.target);
  int diam = 0;
  for (int s = 0; s < n; ++s) {
    std::vector<int> dist(n, -1);
    std::queue<int> q;
    q.push(s);
    dist[s] = 0;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : adj[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          q.push(v);
        }
      }
    }
    diam = std::max(diam, *std::max_element(dist.begin(), dist.end()));
  }
  return diam;
}

}  // namespace

BetweennessReport betweenness_report(const RoutingMatrix& g,
                                     const Topology& topo) {
  if (g.n_links() != topo.n_links()) {
    throw DimensionError("betweenness_report: matrix/topology link mismatch");
  }
  BetweennessReport rep;
  // entries are exact 0/1, so B holds exact integer counts
  rep.co_betweenness = g.entries().transpose() * g.entries();
  rep.edge_betweenness = rep.co_betweenness.diagonal();
  rep.diameter = hop_diameter(topo);
  return rep;
}

Proposition1Report check_proposition1(const Spectrum& spec,
                                      const BetweennessReport& rep) {
  std::vector<double> betw(rep.edge_betweenness.data(),
                           rep.edge_betweenness.data() + rep.edge_betweenness.size());
  std::sort(betw.begin(), betw.end(), std::greater<double>());
  const double diam = static_cast<double>(rep.diameter);
  const double lam1 = spec.eigenvalues(0);
  const double b1 = betw.empty() ? 0.0 : betw[0];
  const double slack = 1.0 + 1e-12;

  Proposition1Report out;
  out.all_satisfied = true;
  for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
    Proposition1Row row;
    row.k = static_cast<int>(k) + 1;
    row.lambda = spec.eigenvalues(k);
    row.betweenness = betw[static_cast<std::size_t>(k)];
    row.bound = row.betweenness * diam;
    row.satisfied = row.lambda <= row.bound * slack;
    row.ratio_satisfied =
        k == 0 ||
        row.lambda / lam1 <= (row.betweenness / b1) * diam * slack;
    out.all_satisfied = out.all_satisfied && row.satisfied && row.ratio_satisfied;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace netkrige

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "netkrige/topology.hpp"

namespace testing {

inline std::filesystem::path data_file(const std::string& name) {
  return std::filesystem::path(NETKRIGE_DATA_DIR) / name;
}

// Row-reduction rank over rationals-in-doubles; independent of Eigen's SVD.
inline int elimination_rank(Eigen::MatrixXd m, double tol = 1e-9) {
  int rank = 0;
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    double best = tol;
    for (int r = rank; r < rows; ++r) {
      if (std::abs(m(r, c)) > best) {
        best = std::abs(m(r, c));
        pivot = r;
      }
    }
    if (pivot < 0) continue;
    m.row(pivot).swap(m.row(rank));
    for (int r = 0; r < rows; ++r) {
      if (r != rank && std::abs(m(r, c)) > 0) {
        m.row(r) -= m(r, c) / m(rank, c) * m.row(rank);
      }
    }
    ++rank;
  }
  return rank;
}

// Exhaustive shortest-path oracle: enumerates every simple path by DFS and
// keeps the minimum-weight one, ties by lexicographically smallest node
// sequence. Only for tiny fixtures.
inline std::vector<int> brute_force_route(const netkrige::Topology& topo,
                                          int src, int dst) {
  const int n = topo.n_nodes();
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const netkrige::Link& l : topo.links()) {
    adj[l.source].push_back({l.target, l.weight});
  }
  std::vector<int> best_seq;
  double best_dist = 0.0;
  std::vector<int> seq{src};
  std::vector<char> used(n, 0);
  used[src] = 1;

  std::function<void(int, double)> dfs = [&](int u, double dist) {
    if (u == dst) {
      if (best_seq.empty() || dist < best_dist - 1e-12 ||
          (std::abs(dist - best_dist) <= 1e-12 && seq < best_seq)) {
        best_seq = seq;
        best_dist = dist;
      }
      return;
    }
    for (const auto& [v, w] : adj[u]) {
      if (used[v]) continue;
      used[v] = 1;
      seq.push_back(v);
      dfs(v, dist + w);
      seq.pop_back();
      used[v] = 0;
    }
  };
  dfs(src, 0.0);
  return best_seq;
}

// Routing matrix built entirely from the brute-force route oracle.
inline Eigen::MatrixXd brute_force_matrix(const netkrige::Topology& topo) {
  const int n = topo.n_nodes();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n * (n - 1), topo.n_links());
  int row = 0;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      const auto seq = brute_force_route(topo, u, v);
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        g(row, *topo.link_between(seq[i], seq[i + 1])) = 1.0;
      }
      ++row;
    }
  }
  return g;
}

}  // namespace testing

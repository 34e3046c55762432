#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace netkrige {

/// One directed link. Undirected input records are expanded to two of these.
struct Link {
  int source = 0;
  int target = 0;
  double weight = 1.0;
};

/// Immutable directed network. Node ids are dense 0..n_nodes-1 and link ids
/// are dense 0..n_links-1 in input-record order (an undirected record m
/// occupies two consecutive ids, forward then reverse). The graph is
/// validated to be strongly connected, self-loop free and free of duplicate
/// (source, target) pairs on construction.
class Topology {
 public:
  Topology(std::vector<std::string> node_names, std::vector<Link> links);

  int n_nodes() const { return static_cast<int>(node_names_.size()); }
  int n_links() const { return static_cast<int>(links_.size()); }
  const std::vector<Link>& links() const { return links_; }
  const std::string& node_name(int id) const { return node_names_.at(id); }
  const std::vector<std::string>& node_names() const { return node_names_; }

  /// Link id for a directed (source, target) pair, if present.
  std::optional<int> link_between(int source, int target) const;

 private:
  std::vector<std::string> node_names_;
  std::vector<Link> links_;
};

/// Parses the JSON topology document (see README for the schema) and
/// validates the result. Throws ParseError on malformed input or invariant
/// violations, including disconnected graphs.
Topology load_topology(const std::filesystem::path& file);
Topology parse_topology(std::istream& in);

struct PathEndpoints {
  int origin = 0;
  int destination = 0;
};

/// Binary path-by-link incidence matrix. Row i column j is 1 iff path i
/// traverses link j. Paths cover all ordered pairs of distinct nodes and are
/// id-ordered lexicographically by (origin, destination); columns follow
/// link ids.
class RoutingMatrix {
 public:
  RoutingMatrix(Eigen::MatrixXd entries, std::vector<PathEndpoints> paths);

  int n_paths() const { return static_cast<int>(entries_.rows()); }
  int n_links() const { return static_cast<int>(entries_.cols()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  const std::vector<PathEndpoints>& paths() const { return paths_; }
  const PathEndpoints& path(int id) const { return paths_.at(id); }

 private:
  Eigen::MatrixXd entries_;
  std::vector<PathEndpoints> paths_;
};

/// Builds the routing matrix for every ordered node pair under unique
/// shortest-path routing by total weight; equal-weight ties are broken by
/// the lexicographically smallest node-id sequence, so rebuilding from the
/// same inputs is bit-identical. `weights`, when given, overrides the
/// per-link weights carried by the topology and must be strictly positive.
RoutingMatrix build_routing_matrix(
    const Topology& topo,
    const std::optional<std::vector<double>>& weights = std::nullopt);

/// y = Gx. Throws DimensionError when x does not have one entry per link.
Eigen::VectorXd path_values(const RoutingMatrix& g, const Eigen::VectorXd& x);

}  // namespace netkrige

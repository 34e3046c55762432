#include "netkrige/topology.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

#include "netkrige/errors.hpp"

namespace netkrige {

namespace {

// Forward/backward BFS from node 0; both must reach every node.
bool strongly_connected(int n_nodes, const std::vector<Link>& links) {
  if (n_nodes == 0) return false;
  auto reaches_all = [&](bool reversed) {
    std::vector<std::vector<int>> adj(n_nodes);
    for (const Link& l : links) {
      if (reversed)
        adj[l.target].push_back(l.source);
      else
        adj[l.source].push_back(l.target);
    }
    std::vector<char> seen(n_nodes, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : adj[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          ++count;
          q.push(v);
        }
      }
    }
    return count == n_nodes;
  };
  return reaches_all(false) && reaches_all(true);
}

}  // namespace

Topology::Topology(std::vector<std::string> node_names, std::vector<Link> links)
    : node_names_(std::move(node_names)), links_(std::move(links)) {
  const int n = n_nodes();
  if (n < 2) throw ParseError("topology needs at least two nodes");
  std::set<std::pair<int, int>> seen;
  for (const Link& l : links_) {
    if (l.source < 0 || l.source >= n || l.target < 0 || l.target >= n) {
      throw ParseError("link endpoint out of range");
    }
    if (l.source == l.target) {
      throw ParseError("self-loop link " + node_names_[l.source] + " -> " +
                       node_names_[l.target]);
    }
    if (!(l.weight > 0.0)) {
      throw ParseError("link weight must be strictly positive");
    }
    if (!seen.insert({l.source, l.target}).second) {
      throw ParseError("duplicate link " + node_names_[l.source] + " -> " +
                       node_names_[l.target]);
    }
  }
  if (!strongly_connected(n, links_)) {
    throw ParseError("graph is not strongly connected");
  }
}

std::optional<int> Topology::link_between(int source, int target) const {
  for (int i = 0; i < n_links(); ++i) {
    if (links_[i].source == source && links_[i].target == target) return i;
  }
  return std::nullopt;
}

Topology parse_topology(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("topology JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges")) {
    throw ParseError("topology JSON must contain 'nodes' and 'edges'");
  }
  std::vector<std::string> names;
  for (const auto& n : doc["nodes"]) {
    if (n.is_string())
      names.push_back(n.get<std::string>());
    else
      throw ParseError("node entries must be strings");
  }
  std::vector<Link> links;
  for (const auto& e : doc["edges"]) {
    if (!e.is_object() || !e.contains("a") || !e.contains("b")) {
      throw ParseError("edge records need integer fields 'a' and 'b'");
    }
    const int a = e["a"].get<int>();
    const int b = e["b"].get<int>();
    const double w = e.value("weight", 1.0);
    const bool directed = e.value("directed", false);
    links.push_back({a, b, w});
    if (!directed) links.push_back({b, a, w});
  }
  return Topology(std::move(names), std::move(links));
}

Topology load_topology(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open topology file " + file.string());
  return parse_topology(in);
}

RoutingMatrix::RoutingMatrix(Eigen::MatrixXd entries,
                             std::vector<PathEndpoints> paths)
    : entries_(std::move(entries)), paths_(std::move(paths)) {
  if (entries_.rows() != static_cast<Eigen::Index>(paths_.size())) {
    throw DimensionError("routing matrix rows do not match path list");
  }
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    if (entries_.row(i).sum() < 1.0) {
      throw ParseError("routing matrix row " + std::to_string(i) +
                       " traverses no link");
    }
  }
}

namespace {

struct PathLabel {
  double dist = 0.0;
  std::vector<int> seq;  // node sequence starting at the source
  bool set = false;
};

// (dist, node sequence) with lexicographic tie-break; strict improvement.
bool better(double d, const std::vector<int>& seq, const PathLabel& cur) {
  if (!cur.set) return true;
  if (d < cur.dist) return true;
  if (d > cur.dist) return false;
  return seq < cur.seq;
}

}  // namespace

RoutingMatrix build_routing_matrix(
    const Topology& topo, const std::optional<std::vector<double>>& weights) {
  const int n = topo.n_nodes();
  const int m = topo.n_links();
  if (weights && static_cast<int>(weights->size()) != m) {
    throw DimensionError("weight vector length does not match link count");
  }
  std::vector<double> w(m);
  for (int i = 0; i < m; ++i) {
    w[i] = weights ? (*weights)[i] : topo.links()[i].weight;
    if (!(w[i] > 0.0)) {
      throw PreconditionError("routing weights must be strictly positive");
    }
  }

  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (target, link id)
  for (int i = 0; i < m; ++i) {
    adj[topo.links()[i].source].push_back({topo.links()[i].target, i});
  }
  std::map<std::pair<int, int>, int> link_of;
  for (int i = 0; i < m; ++i) {
    link_of[{topo.links()[i].source, topo.links()[i].target}] = i;
  }

  const int n_p = n * (n - 1);
  Eigen::MatrixXd entries = Eigen::MatrixXd::Zero(n_p, m);
  std::vector<PathEndpoints> paths;
  paths.reserve(n_p);

  int row = 0;
  for (int src = 0; src < n; ++src) {
    // Label-correcting relaxation to the unique (dist, lex-smallest-sequence)
    // fixpoint; order-independent, so the result is deterministic.
    std::vector<PathLabel> label(n);
    label[src] = {0.0, {src}, true};
    bool changed = true;
    while (changed) {
      changed = false;
      for (int u = 0; u < n; ++u) {
        if (!label[u].set) continue;
        for (const auto& [v, link] : adj[u]) {
          const double nd = label[u].dist + w[link];
          std::vector<int> nseq = label[u].seq;
          nseq.push_back(v);
          if (better(nd, nseq, label[v])) {
            label[v] = {nd, std::move(nseq), true};
            changed = true;
          }
        }
      }
    }
    for (int dst = 0; dst < n; ++dst) {
      if (dst == src) continue;
      const auto& seq = label[dst].seq;
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        entries(row, link_of.at({seq[i], seq[i + 1]})) = 1.0;
      }
      paths.push_back({src, dst});
      ++row;
    }
  }
  return RoutingMatrix(std::move(entries), std::move(paths));
}

Eigen::VectorXd path_values(const RoutingMatrix& g, const Eigen::VectorXd& x) {
  if (x.size() != g.n_links()) {
    throw DimensionError("path_values: expected " +
                         std::to_string(g.n_links()) + " link values, got " +
                         std::to_string(x.size()));
  }
  return g.entries() * x;
}

}  // namespace netkrige

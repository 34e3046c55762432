#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "netkrige/spectral.hpp"
#include "netkrige/topology.hpp"

using namespace netkrige;

namespace {

RoutingMatrix fixture_matrix(const std::string& name) {
  return build_routing_matrix(load_topology(testing::data_file(name)));
}

}  // namespace

TEST_CASE("3-node line spectrum is (3, 3, 1, 1)") {
  const RoutingMatrix g = fixture_matrix("line3.json");
  const Spectrum spec = compute_spectrum(g);

  // dense oracle: B is block-diagonal with two [[2,1],[1,2]] blocks, so the
  // eigenvalues are {3, 1} twice; cross-check with a direct solve of B
  Eigen::MatrixXd b = g.entries().transpose() * g.entries();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
  Eigen::VectorXd oracle = es.eigenvalues().reverse();

  REQUIRE(spec.eigenvalues.size() == 4);
  CHECK(spec.eigenvalues(0) == doctest::Approx(3.0));
  CHECK(spec.eigenvalues(1) == doctest::Approx(3.0));
  CHECK(spec.eigenvalues(2) == doctest::Approx(1.0));
  CHECK(spec.eigenvalues(3) == doctest::Approx(1.0));
  CHECK((spec.eigenvalues - oracle).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(spec.numeric_rank == 4);

  // orthonormality within tolerance
  const Eigen::MatrixXd vtv = spec.eigenvectors.transpose() * spec.eigenvectors;
  CHECK((vtv - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("abilene: rank 30 and the gap sits after the second eigenvalue") {
  const Spectrum spec = compute_spectrum(fixture_matrix("abilene.json"));
  CHECK(spec.numeric_rank == 30);
  const EffectiveRank er = effective_rank(spec, 0.5);
  CHECK(er.largest_gap_index == 2);
  CHECK(spec.eigenvalues(2) / spec.eigenvalues(0) <
        spec.eigenvalues(1) / spec.eigenvalues(0));
}

TEST_CASE("duplicating a path row leaves the rank unchanged") {
  const RoutingMatrix g = fixture_matrix("line3.json");
  Eigen::MatrixXd dup(g.n_paths() + 1, g.n_links());
  dup.topRows(g.n_paths()) = g.entries();
  dup.row(g.n_paths()) = g.entries().row(1);
  std::vector<PathEndpoints> paths = g.paths();
  paths.push_back(g.path(1));
  const RoutingMatrix g2(dup, paths);
  CHECK(compute_spectrum(g2).numeric_rank == compute_spectrum(g).numeric_rank);
}

TEST_CASE("effective rank threshold rule") {
  const Spectrum spec = compute_spectrum(fixture_matrix("line3.json"));
  CHECK(effective_rank(spec, 0.5).by_threshold == 2);   // 1/3 < 0.5 first at k=2
  CHECK(effective_rank(spec, 1.0).by_threshold == 2);   // eigenvalues equal to lam_1
  CHECK(effective_rank(spec, 0.1).by_threshold == 4);   // nothing below 0.1
  CHECK(effective_rank(spec, 0.5).largest_gap_index == 2);
  CHECK_THROWS(effective_rank(spec, 0.0));
}

TEST_CASE("3-node line betweenness and diameter") {
  const Topology t = load_topology(testing::data_file("line3.json"));
  const RoutingMatrix g = build_routing_matrix(t);
  const BetweennessReport rep = betweenness_report(g, t);
  Eigen::VectorXd expected(4);
  expected << 2, 2, 2, 2;
  CHECK(rep.edge_betweenness == expected);
  CHECK(rep.diameter == 2);
  // diagonal equals column sums of G
  CHECK(rep.edge_betweenness == Eigen::VectorXd(g.entries().colwise().sum()));
}

TEST_CASE("star graph: every directed spoke link carries 4 paths") {
  const Topology t = load_topology(testing::data_file("star5.json"));
  const RoutingMatrix g = build_routing_matrix(t);
  REQUIRE(g.n_paths() == 20);
  const BetweennessReport rep = betweenness_report(g, t);
  for (int j = 0; j < 8; ++j) CHECK(rep.edge_betweenness(j) == 4.0);
  CHECK(rep.diameter == 2);
}

TEST_CASE("abilene betweenness peaks at the Indianapolis-Kansas City links") {
  const Topology t = load_topology(testing::data_file("abilene.json"));
  const RoutingMatrix g = build_routing_matrix(t);
  const BetweennessReport rep = betweenness_report(g, t);
  int argmax = 0;
  rep.edge_betweenness.maxCoeff(&argmax);
  const Link& l = t.links()[argmax];
  const bool ipls_kscy =
      (t.node_name(l.source) == "KansasCity" && t.node_name(l.target) == "Indianapolis") ||
      (t.node_name(l.source) == "Indianapolis" && t.node_name(l.target) == "KansasCity");
  CHECK(ipls_kscy);
}

TEST_CASE("co-betweenness is bounded by the smaller edge betweenness") {
  const Topology t = load_topology(testing::data_file("abilene.json"));
  const RoutingMatrix g = build_routing_matrix(t);
  const BetweennessReport rep = betweenness_report(g, t);
  for (int i = 0; i < g.n_links(); ++i) {
    for (int j = 0; j < g.n_links(); ++j) {
      CHECK(rep.co_betweenness(i, j) <=
            std::min(rep.co_betweenness(i, i), rep.co_betweenness(j, j)));
    }
  }
}

TEST_CASE("proposition 1 holds on every fixture") {
  for (const char* name :
       {"line3.json", "cycle3.json", "star5.json", "ring6_chord.json",
        "abilene.json"}) {
    CAPTURE(name);
    const Topology t = load_topology(testing::data_file(name));
    const RoutingMatrix g = build_routing_matrix(t);
    const Spectrum spec = compute_spectrum(g);
    const BetweennessReport rep = betweenness_report(g, t);
    const Proposition1Report p1 = check_proposition1(spec, rep);
    CHECK(p1.all_satisfied);
    REQUIRE(!p1.rows.empty());
    // k=1 is the Gershgorin row-sum case
    CHECK(p1.rows[0].satisfied);
    // lam_1 >= B_{1,1}
    CHECK(spec.eigenvalues(0) >= rep.edge_betweenness.maxCoeff() - 1e-9);
  }
}

TEST_CASE("3-node line proposition 1 numbers") {
  const Topology t = load_topology(testing::data_file("line3.json"));
  const RoutingMatrix g = build_routing_matrix(t);
  const Proposition1Report p1 =
      check_proposition1(compute_spectrum(g), betweenness_report(g, t));
  CHECK(p1.rows[0].lambda == doctest::Approx(3.0));
  CHECK(p1.rows[0].bound == doctest::Approx(4.0));  // 2 * diam 2
  CHECK(p1.rows[0].satisfied);
}

TEST_CASE("trace identity: sum of eigenvalues equals the number of ones in G") {
  for (const char* name : {"line3.json", "star5.json", "abilene.json"}) {
    CAPTURE(name);
    const RoutingMatrix g = fixture_matrix(name);
    const Spectrum spec = compute_spectrum(g);
    const double ones = g.entries().sum();
    CHECK(spec.eigenvalues.sum() == doctest::Approx(ones).epsilon(1e-12));
  }
}

#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "netkrige/errors.hpp"
#include "netkrige/kriging.hpp"
#include "netkrige/topology.hpp"

using namespace netkrige;

namespace {

RoutingMatrix line3_matrix() {
  return build_routing_matrix(load_topology(testing::data_file("line3.json")));
}

LinkModel identity_model(int n_e) {
  return LinkModel(Eigen::VectorXd::Ones(n_e), Eigen::MatrixXd::Identity(n_e, n_e));
}

Eigen::VectorXd slice(const Eigen::VectorXd& y, const std::vector<int>& ids) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(ids.size()));
  for (std::size_t i = 0; i < ids.size(); ++i) out(i) = y(ids[i]);
  return out;
}

}  // namespace

TEST_CASE("link model validation") {
  CHECK_THROWS_AS(LinkModel(Eigen::VectorXd::Ones(3), Eigen::MatrixXd::Identity(4, 4)),
                  DimensionError);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
  bad(0, 0) = 0.0;
  CHECK_THROWS_AS(LinkModel(Eigen::VectorXd::Ones(3), bad), PreconditionError);
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(3, 3);
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS(LinkModel(Eigen::VectorXd::Ones(3), asym), PreconditionError);
  Eigen::VectorXd var(3);
  var << 1.0, 2.0, 3.0;
  const LinkModel m = LinkModel::diagonal(Eigen::VectorXd::Zero(3), var);
  CHECK(m.sigma()(2, 2) == 3.0);
}

TEST_CASE("partition_moments on the 3-node line") {
  const RoutingMatrix g = line3_matrix();
  const LinkModel model = identity_model(4);

  SUBCASE("single two-hop path") {
    const PartitionedMoments p = partition_moments(g, model, {1});  // AC
    REQUIRE(p.v_ss.rows() == 1);
    CHECK(p.v_ss(0, 0) == 2.0);  // row (1,0,1,0) dotted with itself
    CHECK(p.rest_ids == std::vector<int>{0, 2, 3, 4, 5});
    CHECK(p.v_rs == p.v_sr.transpose());
  }

  SUBCASE("orthogonal binary rows give a diagonal V_ss of hop counts") {
    const PartitionedMoments p = partition_moments(g, model, {0, 3});  // AB, BC
    Eigen::MatrixXd expected(2, 2);
    expected << 1, 0, 0, 1;
    CHECK(p.v_ss == expected);
  }

  SUBCASE("selecting every path leaves no rest block") {
    const PartitionedMoments p = partition_moments(g, model, {0, 1, 2, 3, 4, 5});
    CHECK(p.rest_ids.empty());
    CHECK(p.v_ss == g.entries() * g.entries().transpose());
    CHECK(p.v_rr.size() == 0);
  }
}

TEST_CASE("blp_ideal") {
  const RoutingMatrix g = line3_matrix();
  const LinkModel model = identity_model(4);
  const Eigen::VectorXd l = summary_average(6);

  SUBCASE("sampling at the mean returns l^T G mu") {
    const std::vector<int> s{0, 4};
    const Eigen::VectorXd y_s = slice(g.entries() * model.mu(), s);
    CHECK(blp_ideal(g, model, s, l, y_s) ==
          doctest::Approx(l.dot(g.entries() * model.mu())).epsilon(1e-12));
  }

  SUBCASE("zero rest weights reduce to l_s^T y_s") {
    Eigen::VectorXd l_only = Eigen::VectorXd::Zero(6);
    l_only(0) = 0.5;
    Eigen::VectorXd y_s(1);
    y_s << 7.0;
    CHECK(blp_ideal(g, model, {0}, l_only, y_s) == doctest::Approx(3.5));
  }

  SUBCASE("full-rank selection recovers l^T y exactly for realizable y") {
    const std::vector<int> s{0, 3, 2, 5};  // AB, BC, BA, CB: rank 4
    std::mt19937 rng(7);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd x(4);
      for (int i = 0; i < 4; ++i) x(i) = normal(rng) + 1.0;
      const Eigen::VectorXd y = g.entries() * x;
      CHECK(blp_ideal(g, model, s, l, slice(y, s)) ==
            doctest::Approx(l.dot(y)).epsilon(1e-9));
    }
  }
}

TEST_CASE("gls_mean") {
  const RoutingMatrix g = line3_matrix();

  SUBCASE("identity rows copy measurements and zero the rest") {
    // paths AB and CB are single distinct links (0 and 3)
    Eigen::MatrixXd g_s(2, 4);
    g_s << 1, 0, 0, 0, 0, 0, 0, 1;
    Eigen::VectorXd y_s(2);
    y_s << 5.0, 9.0;
    const Eigen::VectorXd mu_hat =
        gls_mean(g_s, Eigen::MatrixXd::Identity(2, 2), y_s);
    Eigen::VectorXd expected(4);
    expected << 5, 0, 0, 9;
    CHECK((mu_hat - expected).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("noiseless full-rank measurements are reproduced: G_s mu_hat = y_s") {
    const std::vector<int> s{0, 1, 2, 5};
    Eigen::MatrixXd g_s(4, 4);
    for (int i = 0; i < 4; ++i) g_s.row(i) = g.entries().row(s[i]);
    Eigen::VectorXd x(4);
    x << 2.0, 3.0, 5.0, 7.0;
    const Eigen::VectorXd y_s = g_s * x;
    const Eigen::MatrixXd v_ss = g_s * g_s.transpose();
    const Eigen::VectorXd mu_hat = gls_mean(g_s, v_ss, y_s);
    CHECK((g_s * mu_hat - y_s).cwiseAbs().maxCoeff() < 1e-9);
  }

  SUBCASE("zero measurements give a zero estimate") {
    Eigen::MatrixXd g_s = line3_matrix().entries().topRows(2);
    const Eigen::VectorXd mu_hat =
        gls_mean(g_s, g_s * g_s.transpose(), Eigen::VectorXd::Zero(2));
    CHECK(mu_hat.isZero(1e-14));
  }
}

TEST_CASE("build_eblp") {
  const RoutingMatrix g = line3_matrix();
  const LinkModel model = identity_model(4);
  const Eigen::VectorXd l = summary_average(6);

  SUBCASE("measuring every path reproduces l^T y") {
    const std::vector<int> all{0, 1, 2, 3, 4, 5};
    const Predictor pred = build_eblp(g, model, all, l);
    Eigen::VectorXd x(4);
    x << 1.0, 4.0, 2.0, 8.0;
    const Eigen::VectorXd y = g.entries() * x;
    CHECK(pred.predict(slice(y, all)) == doctest::Approx(l.dot(y)).epsilon(1e-12));
  }

  SUBCASE("k = rank(G) recovers l^T y to 1e-9 relative") {
    const std::vector<int> s{0, 2, 3, 5};
    const Predictor pred = build_eblp(g, model, s, l);
    std::mt19937 rng(11);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd x(4);
      for (int i = 0; i < 4; ++i) x(i) = 3.0 * normal(rng);
      const Eigen::VectorXd y = g.entries() * x;
      CHECK(pred.predict(slice(y, s)) ==
            doctest::Approx(l.dot(y)).epsilon(1e-9));
    }
  }

  SUBCASE("single measured path: hand-computed block arithmetic") {
    // s = {AB}: V_ss = [1], V_rs = (1,0,0,0,0)^T, so
    // a_hat = 1/6 + 1/6 = 1/3 and the prediction for y_s = (1) is 1/3
    const Predictor pred = build_eblp(g, model, {0}, l);
    REQUIRE(pred.weight_vector.size() == 1);
    CHECK(pred.weight_vector(0) == doctest::Approx(1.0 / 3.0));
    Eigen::VectorXd y_s(1);
    y_s << 1.0;
    CHECK(pred.predict(y_s) == doctest::Approx(1.0 / 3.0));
    CHECK(!pred.condition_warning);
  }

  SUBCASE("prediction is invariant to the ordering of selected indices") {
    Eigen::VectorXd x(4);
    x << 0.3, 1.7, 2.9, 0.2;
    const Eigen::VectorXd y = g.entries() * x;
    const std::vector<int> a{1, 4, 0};
    const std::vector<int> b{4, 0, 1};
    const double pa = build_eblp(g, model, a, l).predict(slice(y, a));
    const double pb = build_eblp(g, model, b, l).predict(slice(y, b));
    CHECK(pa == doctest::Approx(pb).epsilon(1e-12));
  }

  SUBCASE("duplicate rows are tolerated via the pseudo-inverse") {
    const std::vector<int> dup{1, 1, 4};
    const Predictor pred = build_eblp(g, model, dup, l);
    CHECK(pred.condition_warning);  // V_ss is exactly singular
    Eigen::VectorXd x(4);
    x << 1.0, 2.0, 0.5, 0.25;
    const Eigen::VectorXd y = g.entries() * x;
    const double with_dup = pred.predict(slice(y, dup));
    const std::vector<int> nodup{1, 4};
    const double without =
        build_eblp(g, model, nodup, l).predict(slice(y, nodup));
    CHECK(with_dup == doctest::Approx(without).epsilon(1e-9));
  }
}

TEST_CASE("mspe_exact") {
  const RoutingMatrix g = line3_matrix();
  const LinkModel model = identity_model(4);
  const Eigen::VectorXd l = summary_average(6);

  SUBCASE("full-rank selection has zero error") {
    const MspeReport rep = mspe_exact(g, model, {0, 2, 3, 5}, l);
    CHECK(rep.total < 1e-18);
    CHECK(rep.blp_mspe < 1e-18);
    CHECK(rep.squared_bias < 1e-18);
  }

  SUBCASE("summaries supported on measured paths have zero error") {
    Eigen::VectorXd l_s_only = Eigen::VectorXd::Zero(6);
    l_s_only(0) = 1.0;
    const MspeReport rep = mspe_exact(g, model, {0}, l_s_only);
    CHECK(rep.total < 1e-18);
  }

  SUBCASE("closed form matches Monte-Carlo over 1e5 Gaussian draws") {
    const std::vector<int> s{0};
    const Predictor pred = build_eblp(g, model, s, l);
    const MspeReport rep = mspe_exact(g, model, s, l);

    std::mt19937 rng(12345);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int n_draws = 100000;
    double acc = 0.0;
    double acc_sq = 0.0;
    for (int d = 0; d < n_draws; ++d) {
      Eigen::VectorXd x(4);
      for (int i = 0; i < 4; ++i) x(i) = model.mu()(i) + normal(rng);
      const Eigen::VectorXd y = g.entries() * x;
      const double err = l.dot(y) - pred.predict(slice(y, s));
      acc += err * err;
      acc_sq += err * err * err * err;
    }
    const double mc = acc / n_draws;
    const double variance = acc_sq / n_draws - mc * mc;
    const double se = std::sqrt(variance / n_draws);
    CHECK(std::abs(mc - rep.total) <= 3.0 * se);
  }

  SUBCASE("the two closed forms agree and the variance term is nonnegative") {
    for (const std::vector<int>& s :
         {std::vector<int>{0}, std::vector<int>{1, 4}, std::vector<int>{2, 3, 5}}) {
      const MspeReport rep = mspe_exact(g, model, s, l);
      CHECK(rep.blp_mspe >= 0.0);
      const double scale = std::max(rep.blp_mspe, 1e-15);
      CHECK(std::abs(rep.blp_mspe - rep.projection_form) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("bias_correct") {
  const RoutingMatrix g = line3_matrix();
  const LinkModel model = identity_model(4);
  const Eigen::VectorXd l = summary_average(6);

  SUBCASE("an already exact predictor gets a zero offset") {
    const std::vector<int> s{0, 2, 3, 5};
    const Predictor pred = build_eblp(g, model, s, l);
    Eigen::VectorXd x(4);
    x << 1, 2, 3, 4;
    const Eigen::VectorXd y = g.entries() * x;
    const Predictor corrected = bias_correct(pred, g, l, y);
    CHECK(std::abs(corrected.bias_offset) < 1e-12);
  }

  SUBCASE("a constant series is predicted exactly after correction") {
    const std::vector<int> s{0};
    const Predictor pred = build_eblp(g, model, s, l);
    Eigen::VectorXd x(4);
    x << 5, 1, 2, 9;
    const Eigen::VectorXd y = g.entries() * x;  // same at every epoch
    const Predictor corrected = bias_correct(pred, g, l, y);
    CHECK(corrected.predict(slice(y, s)) ==
          doctest::Approx(l.dot(y)).epsilon(1e-12));
  }
}

TEST_CASE("summary vector builders") {
  const Eigen::VectorXd avg = summary_average(6);
  CHECK(avg.sum() == doctest::Approx(1.0));
  CHECK(avg(3) == doctest::Approx(1.0 / 6.0));

  const Eigen::VectorXd diff = summary_group_difference(6, {0, 1}, {4});
  CHECK(diff(0) == doctest::Approx(0.5));
  CHECK(diff(4) == doctest::Approx(-1.0));
  CHECK(diff.sum() == doctest::Approx(0.0));
  CHECK_THROWS_AS(summary_group_difference(6, {}, {1}), PreconditionError);
}

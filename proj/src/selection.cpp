#include "netkrige/selection.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "netkrige/errors.hpp"
#include "netkrige/linalg.hpp"
#include "netkrige/rng.hpp"

namespace netkrige {

namespace {

Eigen::MatrixXd weighted_matrix(const RoutingMatrix& g, const Eigen::MatrixXd& c) {
  if (c.rows() != g.n_links() || c.cols() != g.n_links()) {
    throw DimensionError("link scaling matrix must be n_e x n_e");
  }
  return g.entries() * c;
}

Eigen::VectorXd probabilities_of(const Eigen::MatrixXd& m) {
  const double total = m.squaredNorm();
  if (!(total > 0.0)) throw NumericError("row probabilities: zero matrix");
  Eigen::VectorXd p(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    p(i) = m.row(i).squaredNorm() / total;
    if (!(p(i) > 0.0)) {
      throw NumericError("row probabilities: zero row " + std::to_string(i));
    }
  }
  return p;
}

Eigen::MatrixXd selected_rows(const Eigen::MatrixXd& m, const std::vector<int>& ids) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(ids.size()), m.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) out.row(i) = m.row(ids[i]);
  return out;
}

// Rows rescaled per G_(i) -> G_(i) / sqrt(n p_i).
Eigen::MatrixXd rescaled_rows(const Eigen::MatrixXd& m, const std::vector<int>& ids,
                              const Eigen::VectorXd& p) {
  Eigen::MatrixXd out = selected_rows(m, ids);
  const double n = static_cast<double>(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out.row(i) /= std::sqrt(n * p(ids[i]));
  }
  return out;
}

std::vector<double> scaling_of(const std::vector<int>& ids, const Eigen::VectorXd& p) {
  std::vector<double> s(ids.size());
  const double n = static_cast<double>(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    s[i] = 1.0 / std::sqrt(n * p(ids[i]));
  }
  return s;
}

// Eigenvalue lambda_{k+1} of M^T M (zero past the spectrum end).
double lambda_after(const Eigen::MatrixXd& m, int k) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  if (k >= s.size()) return 0.0;
  return s(k) * s(k);
}

}  // namespace

Eigen::VectorXd row_sampling_probabilities(const RoutingMatrix& g,
                                           const Eigen::MatrixXd& c) {
  return probabilities_of(weighted_matrix(g, c));
}

SelectionResult select_paths_deterministic(const RoutingMatrix& g,
                                           const Eigen::MatrixXd& sigma, int k) {
  const Eigen::MatrixXd c = linalg::sqrt_spd(sigma);
  const Eigen::MatrixXd m = weighted_matrix(g, c);
  const int rank = linalg::numeric_rank(m);
  if (k < 1 || k > rank) {
    throw PreconditionError("select_paths_deterministic: k must be in [1, " +
                            std::to_string(rank) + "], got " + std::to_string(k));
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const Eigen::MatrixXd u_k = svd.matrixU().leftCols(k);

  SelectionResult res;
  res.indices = linalg::pivoted_qr_columns(u_k.transpose(), k);
  res.scaling = scaling_of(res.indices, probabilities_of(m));
  res.method = SelectionMethod::deterministic;
  res.achieved_rank = linalg::numeric_rank(selected_rows(g.entries(), res.indices));
  return res;
}

SelectionResult select_paths_randomized(const RoutingMatrix& g,
                                        const Eigen::MatrixXd& c, int c_draws,
                                        std::uint64_t seed) {
  if (c_draws < 1 || c_draws > g.n_paths()) {
    throw PreconditionError("select_paths_randomized: c must be in [1, n_p]");
  }
  const Eigen::VectorXd p = row_sampling_probabilities(g, c);
  Eigen::VectorXd cdf(p.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    acc += p(i);
    cdf(i) = acc;
  }

  Rng rng(seed);
  SelectionResult res;
  res.method = SelectionMethod::randomized;
  res.seed = seed;
  res.indices.reserve(c_draws);
  for (int d = 0; d < c_draws; ++d) {
    const double u = rng.uniform01() * acc;  // acc ~ 1 up to rounding
    int idx = static_cast<int>(
        std::lower_bound(cdf.data(), cdf.data() + cdf.size(), u) - cdf.data());
    if (idx >= p.size()) idx = static_cast<int>(p.size()) - 1;
    res.indices.push_back(idx);
  }
  res.scaling = scaling_of(res.indices, p);
  res.achieved_rank = linalg::numeric_rank(selected_rows(g.entries(), res.indices));
  return res;
}

std::vector<FkPoint> compute_fk_curve(const RoutingMatrix& g,
                                      const Eigen::MatrixXd& sigma, int k_max) {
  const Eigen::MatrixXd c = linalg::sqrt_spd(sigma);
  const Eigen::MatrixXd m = weighted_matrix(g, c);
  const int rank = linalg::numeric_rank(m);
  if (k_max < 1 || k_max > rank) {
    throw PreconditionError("compute_fk_curve: k_max must be in [1, rank(GC)]");
  }
  const Eigen::VectorXd p = probabilities_of(m);
  const Eigen::MatrixXd gram = m.transpose() * m;
  const double norm_f2 = m.squaredNorm();

  std::vector<FkPoint> curve;
  curve.reserve(k_max);
  for (int k = 1; k <= k_max; ++k) {
    const SelectionResult sel = select_paths_deterministic(g, sigma, k);
    const Eigen::MatrixXd ms = rescaled_rows(m, sel.indices, p);
    const double dev = (gram - ms.transpose() * ms).norm() / norm_f2;
    curve.push_back({k, dev});
  }
  return curve;
}

namespace {

// Whitened mean C^{-1} mu: the proposition's mean term in the coordinates
// where the link covariance is the identity.
Eigen::VectorXd whitened_mean(const Eigen::MatrixXd& c, const Eigen::VectorXd& mu) {
  return linalg::pinv(c) * mu;
}

}  // namespace

Proposition2Result check_proposition2_bound(const RoutingMatrix& g,
                                            const Eigen::MatrixXd& sigma,
                                            const Eigen::VectorXd& mu,
                                            const Eigen::VectorXd& l, int k) {
  const Eigen::MatrixXd c = linalg::sqrt_spd(sigma);
  const Eigen::MatrixXd m = weighted_matrix(g, c);
  const Eigen::VectorXd p = probabilities_of(m);

  const SelectionResult sel = select_paths_deterministic(g, sigma, k);
  const LinkModel model(mu, sigma);
  const MspeReport mspe = mspe_exact(g, model, sel.indices, l);

  const Eigen::MatrixXd ms = rescaled_rows(m, sel.indices, p);
  const double norm_f2 = m.squaredNorm();
  const double fk = (m.transpose() * m - ms.transpose() * ms).norm() / norm_f2;

  const double mu_term = whitened_mean(c, mu).squaredNorm() + 1.0;
  Proposition2Result out;
  out.fk = fk;
  out.mspe_exact = mspe.total;
  out.bound_value =
      mu_term * (lambda_after(m, k) + 2.0 * fk * norm_f2) * l.squaredNorm();
  out.satisfied = out.mspe_exact <= out.bound_value * (1.0 + 1e-9) + 1e-15;
  return out;
}

Proposition3Result check_proposition3_bound(const RoutingMatrix& g,
                                            const Eigen::MatrixXd& sigma,
                                            const Eigen::VectorXd& mu,
                                            const Eigen::VectorXd& l, int c_draws,
                                            int k, double delta, int trials,
                                            std::uint64_t base_seed) {
  if (k > c_draws || c_draws > g.n_paths()) {
    throw PreconditionError("check_proposition3_bound: need k <= c <= n_p");
  }
  if (!(delta > 0.0)) {
    throw PreconditionError("check_proposition3_bound: delta must be positive");
  }
  const Eigen::MatrixXd c = linalg::sqrt_spd(sigma);
  const Eigen::MatrixXd m = weighted_matrix(g, c);
  const Eigen::VectorXd p = probabilities_of(m);
  const double norm_f2 = m.squaredNorm();
  const double lam_next = lambda_after(m, k);
  const Eigen::VectorXd mu_w = whitened_mean(c, mu);
  const Eigen::VectorXd w_full = m.transpose() * l;

  const double rhs = (mu_w.squaredNorm() + 1.0) *
                     (lam_next + 2.0 * (1.0 + std::sqrt(std::log(2.0 / delta))) /
                                     std::sqrt(static_cast<double>(c_draws)) *
                                     norm_f2) *
                     l.squaredNorm();

  Proposition3Result out;
  out.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const SelectionResult sel =
        select_paths_randomized(g, c, c_draws, base_seed + static_cast<std::uint64_t>(t));
    const Eigen::MatrixXd ms = rescaled_rows(m, sel.indices, p);

    // Projector onto the first (at most) k singular dimensions of the
    // rescaled sample; the predictor estimates the whitened link vector
    // inside that subspace and reads the summary off the full matrix.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(ms, Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff =
        sv.size() > 0
            ? sv(0) * static_cast<double>(std::max(ms.rows(), ms.cols())) *
                  std::numeric_limits<double>::epsilon()
            : 0.0;
    int dims = 0;
    while (dims < std::min<int>(k, static_cast<int>(sv.size())) && sv(dims) > cutoff) {
      ++dims;
    }
    const Eigen::MatrixXd v_k = svd.matrixV().leftCols(dims);

    const Eigen::VectorXd resid = w_full - v_k * (v_k.transpose() * w_full);
    const double bias = mu_w.dot(resid);
    const double mspe = bias * bias + resid.squaredNorm();
    if (mspe > rhs * (1.0 + 1e-9) + 1e-15) ++out.violations;
  }
  out.violation_rate =
      static_cast<double>(out.violations) / static_cast<double>(trials);
  return out;
}

}  // namespace netkrige

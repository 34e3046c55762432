#include "netkrige/kriging.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "netkrige/errors.hpp"
#include "netkrige/linalg.hpp"

namespace netkrige {

LinkModel::LinkModel(Eigen::VectorXd mu, Eigen::MatrixXd sigma)
    : mu_(std::move(mu)), sigma_(std::move(sigma)) {
  if (sigma_.rows() != sigma_.cols() || sigma_.rows() != mu_.size()) {
    throw DimensionError("LinkModel: mu and sigma sizes disagree");
  }
  const double scale = std::max(sigma_.cwiseAbs().maxCoeff(), 1.0);
  if (!sigma_.isApprox(sigma_.transpose(), 1e-9)) {
    throw PreconditionError("LinkModel: sigma is not symmetric");
  }
  if (linalg::is_diagonal(sigma_, scale * 1e-15)) {
    for (Eigen::Index i = 0; i < sigma_.rows(); ++i) {
      if (!(sigma_(i, i) > 0.0)) {
        throw PreconditionError("LinkModel: diagonal sigma needs positive entries");
      }
    }
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma_);
    if (es.info() != Eigen::Success || !(es.eigenvalues().minCoeff() > 0.0)) {
      throw PreconditionError("LinkModel: sigma is not positive definite");
    }
  }
}

LinkModel LinkModel::diagonal(Eigen::VectorXd mu, const Eigen::VectorXd& variances) {
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(variances.size(), variances.size());
  sigma.diagonal() = variances;
  return LinkModel(std::move(mu), std::move(sigma));
}

namespace {

void validate_indices(const RoutingMatrix& g, const std::vector<int>& indices) {
  for (int id : indices) {
    if (id < 0 || id >= g.n_paths()) {
      throw PreconditionError("path index " + std::to_string(id) + " out of range");
    }
  }
}

std::vector<int> complement_of(const RoutingMatrix& g, const std::vector<int>& indices) {
  std::set<int> s(indices.begin(), indices.end());
  std::vector<int> rest;
  for (int i = 0; i < g.n_paths(); ++i) {
    if (!s.count(i)) rest.push_back(i);
  }
  return rest;
}

Eigen::MatrixXd rows_of(const Eigen::MatrixXd& m, const std::vector<int>& ids) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(ids.size()), m.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) out.row(i) = m.row(ids[i]);
  return out;
}

Eigen::VectorXd entries_of(const Eigen::VectorXd& v, const std::vector<int>& ids) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(ids.size()));
  for (std::size_t i = 0; i < ids.size(); ++i) out(i) = v(ids[i]);
  return out;
}

// l restricted to the selected multiset: a path picked more than once has
// its summary weight split evenly over its occurrences, so l_s^T y_s still
// contributes l_i y_i.
Eigen::VectorXd split_l_s(const Eigen::VectorXd& l, const std::vector<int>& indices) {
  std::map<int, int> mult;
  for (int id : indices) ++mult[id];
  Eigen::VectorXd l_s(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i) {
    l_s(i) = l(indices[i]) / static_cast<double>(mult[indices[i]]);
  }
  return l_s;
}

// Inverse of V_ss, falling back to the Moore-Penrose pseudo-inverse when the
// condition number exceeds 1e12. Reports which route was taken.
Eigen::MatrixXd invert_v_ss(const Eigen::MatrixXd& v_ss, bool* warned) {
  const double cond = linalg::condition_number(v_ss);
  if (warned) *warned = !(cond <= 1e12);
  return linalg::pinv(v_ss);
}

}  // namespace

PartitionedMoments partition_moments(const RoutingMatrix& g,
                                     const LinkModel& model,
                                     const std::vector<int>& indices) {
  if (model.n_links() != g.n_links()) {
    throw DimensionError("partition_moments: model and matrix link counts disagree");
  }
  validate_indices(g, indices);
  PartitionedMoments p;
  p.selected_ids = indices;
  p.rest_ids = complement_of(g, indices);
  const Eigen::MatrixXd g_s = rows_of(g.entries(), indices);
  const Eigen::MatrixXd g_r = rows_of(g.entries(), p.rest_ids);
  p.nu_s = g_s * model.mu();
  p.nu_r = g_r * model.mu();
  p.v_ss = g_s * model.sigma() * g_s.transpose();
  p.v_sr = g_s * model.sigma() * g_r.transpose();
  p.v_rs = p.v_sr.transpose();
  p.v_rr = g_r * model.sigma() * g_r.transpose();
  return p;
}

double blp_ideal(const RoutingMatrix& g, const LinkModel& model,
                 const std::vector<int>& indices, const Eigen::VectorXd& l,
                 const Eigen::VectorXd& y_s) {
  if (y_s.size() != static_cast<Eigen::Index>(indices.size())) {
    throw DimensionError("blp_ideal: y_s length does not match selection");
  }
  if (l.size() != g.n_paths()) {
    throw DimensionError("blp_ideal: summary vector length mismatch");
  }
  const PartitionedMoments p = partition_moments(g, model, indices);
  const Eigen::MatrixXd g_s = rows_of(g.entries(), indices);
  const Eigen::VectorXd l_s = split_l_s(l, indices);
  const Eigen::VectorXd l_r = entries_of(l, p.rest_ids);
  const Eigen::MatrixXd c_star = p.v_rs * linalg::pinv(p.v_ss);
  return l_s.dot(y_s) + l_r.dot(p.nu_r) + l_r.dot(c_star * (y_s - g_s * model.mu()));
}

Eigen::VectorXd gls_mean(const Eigen::MatrixXd& g_s, const Eigen::MatrixXd& v_ss,
                         const Eigen::VectorXd& y_s) {
  if (g_s.rows() != v_ss.rows() || v_ss.rows() != v_ss.cols() ||
      y_s.size() != g_s.rows()) {
    throw DimensionError("gls_mean: inconsistent shapes");
  }
  const Eigen::MatrixXd w = linalg::pinv(v_ss);
  const Eigen::MatrixXd gtw = g_s.transpose() * w;
  return linalg::pinv(gtw * g_s) * gtw * y_s;
}

double Predictor::predict(const Eigen::VectorXd& y_s) const {
  if (y_s.size() != weight_vector.size()) {
    throw DimensionError("Predictor: y_s length does not match weights");
  }
  return weight_vector.dot(y_s) + bias_offset;
}

Predictor build_eblp(const RoutingMatrix& g, const LinkModel& model,
                     const std::vector<int>& indices, const Eigen::VectorXd& l) {
  if (indices.empty()) throw PreconditionError("build_eblp: empty selection");
  if (l.size() != g.n_paths()) {
    throw DimensionError("build_eblp: summary vector length mismatch");
  }
  const PartitionedMoments p = partition_moments(g, model, indices);
  Predictor pred;
  pred.selected_ids = indices;
  pred.rest_ids = p.rest_ids;
  pred.summary = l;
  const Eigen::VectorXd l_s = split_l_s(l, indices);
  const Eigen::VectorXd l_r = entries_of(l, p.rest_ids);
  const Eigen::MatrixXd v_ss_inv = invert_v_ss(p.v_ss, &pred.condition_warning);
  pred.weight_vector = l_s + (p.v_rs * v_ss_inv).transpose() * l_r;
  return pred;
}

MspeReport mspe_exact(const RoutingMatrix& g, const LinkModel& model,
                      const std::vector<int>& indices, const Eigen::VectorXd& l) {
  const PartitionedMoments p = partition_moments(g, model, indices);
  const Eigen::MatrixXd g_s = rows_of(g.entries(), indices);
  const Eigen::MatrixXd g_r = rows_of(g.entries(), p.rest_ids);
  const Eigen::VectorXd l_r = entries_of(l, p.rest_ids);
  const Eigen::MatrixXd v_ss_inv = linalg::pinv(p.v_ss);

  MspeReport rep;
  rep.blp_mspe = l_r.dot((p.v_rr - p.v_rs * v_ss_inv * p.v_sr) * l_r);
  const double bias = l_r.dot((p.v_rs * v_ss_inv * g_s - g_r) * model.mu());
  rep.squared_bias = bias * bias;
  rep.total = rep.blp_mspe + rep.squared_bias;

  // Independent projection route: || (I - B_s) (G_r C)^T l_r ||^2 with B_s
  // the projector onto row(G_s C).
  const Eigen::MatrixXd c = linalg::sqrt_spd(model.sigma());
  const Eigen::MatrixXd b_s = linalg::row_space_projector(g_s * c);
  const Eigen::VectorXd w = (g_r * c).transpose() * l_r;
  rep.projection_form = (w - b_s * w).squaredNorm();

  const double scale = std::max({std::abs(rep.blp_mspe), rep.projection_form, 1e-30});
  if (std::abs(rep.blp_mspe - rep.projection_form) > 1e-9 * scale + 1e-15) {
    throw NumericError("mspe_exact: Eq.6 and Eq.7 routes disagree");
  }
  return rep;
}

Predictor bias_correct(const Predictor& pred, const RoutingMatrix& g,
                       const Eigen::VectorXd& l,
                       const Eigen::VectorXd& full_y_at_t0) {
  if (full_y_at_t0.size() != g.n_paths()) {
    throw DimensionError("bias_correct: full measurement must cover all paths");
  }
  Eigen::VectorXd y_s(static_cast<Eigen::Index>(pred.selected_ids.size()));
  for (std::size_t i = 0; i < pred.selected_ids.size(); ++i) {
    y_s(i) = full_y_at_t0(pred.selected_ids[i]);
  }
  Predictor out = pred;
  out.bias_offset = pred.bias_offset +
                    (l.dot(full_y_at_t0) - pred.predict(y_s));
  return out;
}

Eigen::VectorXd summary_average(int n_paths) {
  return Eigen::VectorXd::Constant(n_paths, 1.0 / static_cast<double>(n_paths));
}

Eigen::VectorXd summary_group_difference(int n_paths,
                                         const std::vector<int>& group_a,
                                         const std::vector<int>& group_b) {
  if (group_a.empty() || group_b.empty()) {
    throw PreconditionError("summary_group_difference: empty group");
  }
  Eigen::VectorXd l = Eigen::VectorXd::Zero(n_paths);
  for (int i : group_a) l(i) += 1.0 / static_cast<double>(group_a.size());
  for (int i : group_b) l(i) -= 1.0 / static_cast<double>(group_b.size());
  return l;
}

}  // namespace netkrige

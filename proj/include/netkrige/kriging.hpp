#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "netkrige/topology.hpp"

namespace netkrige {

/// First two moments of the per-link metric: mean vector mu and symmetric
/// positive-definite covariance sigma (diagonal in the default workflow).
/// Validated on construction.
class LinkModel {
 public:
  LinkModel(Eigen::VectorXd mu, Eigen::MatrixXd sigma);

  /// Diagonal covariance from per-link variances.
  static LinkModel diagonal(Eigen::VectorXd mu, const Eigen::VectorXd& variances);

  const Eigen::VectorXd& mu() const { return mu_; }
  const Eigen::MatrixXd& sigma() const { return sigma_; }
  int n_links() const { return static_cast<int>(mu_.size()); }

 private:
  Eigen::VectorXd mu_;
  Eigen::MatrixXd sigma_;
};

/// Moments of y partitioned by a selection s (duplicates allowed) and its
/// complement r, per nu = [G_s mu; G_r mu] and the V blocks G_* Sigma G_*^T.
/// rest_ids lists the complement in ascending path-id order.
struct PartitionedMoments {
  Eigen::VectorXd nu_s;
  Eigen::VectorXd nu_r;
  Eigen::MatrixXd v_ss;
  Eigen::MatrixXd v_sr;
  Eigen::MatrixXd v_rs;
  Eigen::MatrixXd v_rr;
  std::vector<int> selected_ids;
  std::vector<int> rest_ids;
};

PartitionedMoments partition_moments(const RoutingMatrix& g,
                                     const LinkModel& model,
                                     const std::vector<int>& indices);

/// Linear predictor of l^T y from the measured subvector y_s:
/// prediction(y_s) = weight_vector . y_s + bias_offset. weight_vector has
/// one entry per selected index (duplicates included); when r is empty it
/// equals l_s.
struct Predictor {
  std::vector<int> selected_ids;
  std::vector<int> rest_ids;
  Eigen::VectorXd weight_vector;
  Eigen::VectorXd summary;  // l over all paths
  double bias_offset = 0.0;
  bool condition_warning = false;  // V_ss solved by pseudo-inverse

  double predict(const Eigen::VectorXd& y_s) const;
};

/// Ideal best linear predictor value (requires the true mean; oracle and
/// testing use): l_s^T y_s + l_r^T G_r mu + l_r^T c_* (y_s - G_s mu) with
/// c_* = V_rs pinv(V_ss).
double blp_ideal(const RoutingMatrix& g, const LinkModel& model,
                 const std::vector<int>& indices, const Eigen::VectorXd& l,
                 const Eigen::VectorXd& y_s);

/// Generalized least squares estimate of the link mean from measured paths:
/// mu_hat = [G_s^T V_ss^{-1} G_s]^- G_s^T V_ss^{-1} y_s. Links untouched by
/// every selected path receive estimate 0 (Moore-Penrose convention).
Eigen::VectorXd gls_mean(const Eigen::MatrixXd& g_s, const Eigen::MatrixXd& v_ss,
                         const Eigen::VectorXd& y_s);

/// Estimated BLP: a_hat = l_s + (V_rs V_ss^{-1})^T l_r, computable from y_s,
/// G and Sigma alone. A V_ss with 2-norm condition above 1e12 (randomized
/// selection with repeats makes it exactly singular) falls back to the
/// pseudo-inverse and sets condition_warning.
Predictor build_eblp(const RoutingMatrix& g, const LinkModel& model,
                     const std::vector<int>& indices, const Eigen::VectorXd& l);

/// Exact mean-squared prediction error of the E-BLP, split into the BLP
/// variance term l_r^T (V_rr - V_rs V_ss^{-1} V_sr) l_r and the squared bias
/// [l_r^T (V_rs V_ss^{-1} G_s - G_r) mu]^2. `projection_form` evaluates the
/// equivalent l_r^T (G_r C)(I - B_s)(G_r C)^T l_r route; the two must agree
/// to 1e-9 relative for positive-definite Sigma.
struct MspeReport {
  double total = 0.0;
  double blp_mspe = 0.0;
  double squared_bias = 0.0;
  double projection_form = 0.0;
};

MspeReport mspe_exact(const RoutingMatrix& g, const LinkModel& model,
                      const std::vector<int>& indices, const Eigen::VectorXd& l);

/// One-time bias correction: offset = l^T y(t0) - a_hat^T y_s(t0), added to
/// every subsequent prediction. full_y_at_t0 must hold all path values.
Predictor bias_correct(const Predictor& pred, const RoutingMatrix& g,
                       const Eigen::VectorXd& l,
                       const Eigen::VectorXd& full_y_at_t0);

/// Network-wide average summary, l_i = 1/n_p.
Eigen::VectorXd summary_average(int n_paths);

/// Group difference summary: +1/|A| on A, -1/|B| on B.
Eigen::VectorXd summary_group_difference(int n_paths,
                                         const std::vector<int>& group_a,
                                         const std::vector<int>& group_b);

}  // namespace netkrige

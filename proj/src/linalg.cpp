#include "netkrige/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "netkrige/errors.hpp"

namespace netkrige::linalg {

namespace {

double rank_cutoff(const Eigen::VectorXd& singular_values, Eigen::Index rows,
                   Eigen::Index cols) {
  if (singular_values.size() == 0) return 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  return singular_values(0) * static_cast<double>(std::max(rows, cols)) * eps;
}

}  // namespace

Eigen::MatrixXd pinv(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = rank_cutoff(s, m.rows(), m.cols());
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

int numeric_rank(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = rank_cutoff(s, m.rows(), m.cols());
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) ++rank;
  }
  return rank;
}

Eigen::MatrixXd sqrt_spd(const Eigen::MatrixXd& sigma) {
  if (is_diagonal(sigma)) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(sigma.rows(), sigma.cols());
    for (Eigen::Index i = 0; i < sigma.rows(); ++i) {
      const double v = sigma(i, i);
      if (v < 0.0) throw NumericError("sqrt_spd: negative diagonal entry");
      c(i, i) = std::sqrt(v);
    }
    return c;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  if (es.info() != Eigen::Success) {
    throw NumericError("sqrt_spd: eigendecomposition failed");
  }
  Eigen::VectorXd lam = es.eigenvalues();
  const double floor = -lam.cwiseAbs().maxCoeff() * 1e-12;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) < floor) throw NumericError("sqrt_spd: matrix is not PSD");
    lam(i) = std::sqrt(std::max(lam(i), 0.0));
  }
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd row_space_projector(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = rank_cutoff(s, m.rows(), m.cols());
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) ++rank;
  }
  const Eigen::MatrixXd v = svd.matrixV().leftCols(rank);
  return v * v.transpose();
}

std::vector<int> pivoted_qr_columns(Eigen::MatrixXd a, int steps) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  steps = std::min({steps, rows, cols});
  std::vector<int> perm(cols);
  for (int i = 0; i < cols; ++i) perm[i] = i;

  for (int step = 0; step < steps; ++step) {
    // Recompute residual column norms; exact ties keep the lowest original
    // column index because candidates are scanned in permuted-slot order and
    // the comparison is strict.
    int best = step;
    double best_norm = a.col(step).tail(rows - step).squaredNorm();
    int best_orig = perm[step];
    for (int j = step + 1; j < cols; ++j) {
      const double nj = a.col(j).tail(rows - step).squaredNorm();
      if (nj > best_norm || (nj == best_norm && perm[j] < best_orig)) {
        best_norm = nj;
        best = j;
        best_orig = perm[j];
      }
    }
    a.col(step).swap(a.col(best));
    std::swap(perm[step], perm[best]);

    Eigen::VectorXd x = a.col(step).tail(rows - step);
    const double nx = x.norm();
    if (nx <= 0.0) continue;
    Eigen::VectorXd v = x;
    v(0) += (x(0) >= 0.0 ? nx : -nx);
    const double nv = v.norm();
    if (nv <= 0.0) continue;
    v /= nv;
    auto block = a.block(step, step, rows - step, cols - step);
    block -= 2.0 * v * (v.transpose() * block);
  }
  return {perm.begin(), perm.begin() + steps};
}

double condition_number(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return s(0) / s(s.size() - 1);
}

bool is_diagonal(const Eigen::MatrixXd& m, double tol) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != j && std::abs(m(i, j)) > tol) return false;
    }
  }
  return true;
}

}  // namespace netkrige::linalg

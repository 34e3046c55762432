#pragma once

#include <Eigen/Dense>
#include <vector>

namespace netkrige::linalg {

/// Moore-Penrose pseudo-inverse via SVD. Singular values below
/// sigma_max * max(rows, cols) * machine epsilon are treated as zero.
Eigen::MatrixXd pinv(const Eigen::MatrixXd& m);

/// Numerical rank with the same cutoff convention as pinv().
int numeric_rank(const Eigen::MatrixXd& m);

/// Principal square root of a symmetric positive-semidefinite matrix.
/// Diagonal inputs take the elementwise-sqrt fast path.
Eigen::MatrixXd sqrt_spd(const Eigen::MatrixXd& sigma);

/// Orthogonal projector onto the row space of m.
Eigen::MatrixXd row_space_projector(const Eigen::MatrixXd& m);

/// Businger-Golub QR with column pivoting on `a`, stopping after `steps`
/// pivots. Remaining column norms are recomputed at every step and exact
/// ties go to the lowest column index, so the pivot sequence is a pure
/// function of the input. Returns the pivot columns in pivot order.
std::vector<int> pivoted_qr_columns(Eigen::MatrixXd a, int steps);

/// 2-norm condition number estimate from the SVD (inf when singular).
double condition_number(const Eigen::MatrixXd& m);

bool is_diagonal(const Eigen::MatrixXd& m, double tol = 0.0);

}  // namespace netkrige::linalg

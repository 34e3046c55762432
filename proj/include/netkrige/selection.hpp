#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netkrige/kriging.hpp"
#include "netkrige/topology.hpp"

namespace netkrige {

enum class SelectionMethod { deterministic, randomized };

/// Which k (or c) paths to measure, with the Proposition 2 row scaling
/// 1/sqrt(k p_i) attached. Deterministic indices are distinct; randomized
/// ones are drawn with replacement and may repeat.
struct SelectionResult {
  std::vector<int> indices;
  std::vector<double> scaling;
  SelectionMethod method = SelectionMethod::deterministic;
  int achieved_rank = 0;  // rank of the selected rows of G
  std::optional<std::uint64_t> seed;
};

/// Row sampling probabilities p_i = ||(GC)_(i)||_2^2 / ||GC||_F^2 for a
/// nonsingular link scaling C. Nonnegative and summing to one.
Eigen::VectorXd row_sampling_probabilities(const RoutingMatrix& g,
                                           const Eigen::MatrixXd& c);

/// Deterministic subset selection: with C satisfying Sigma = C C^T, take the
/// first k left singular vectors of GC and run QR with column pivoting on
/// their transpose; the pivot columns are the chosen paths. Pure function of
/// (G, Sigma, k). Requires 1 <= k <= rank(GC) and positive-definite Sigma.
SelectionResult select_paths_deterministic(const RoutingMatrix& g,
                                           const Eigen::MatrixXd& sigma, int k);

/// Randomized selection: c i.i.d. draws from {p_i} with replacement,
/// reproducible from the seed. Scaling entries are 1/sqrt(c p_i).
SelectionResult select_paths_randomized(const RoutingMatrix& g,
                                        const Eigen::MatrixXd& c, int c_draws,
                                        std::uint64_t seed);

struct FkPoint {
  int k = 0;
  double fk = 0.0;  // ||M^T M - Ms~^T Ms~||_F / ||M||_F^2, M = GC
};

/// Realized normalized Frobenius deviation of the rescaled selected-row Gram
/// matrix, for k = 1..k_max under deterministic selection. Everything is
/// evaluated on the weighted matrix M = GC (plain G when Sigma = I).
std::vector<FkPoint> compute_fk_curve(const RoutingMatrix& g,
                                      const Eigen::MatrixXd& sigma, int k_max);

/// MSPE bound check with the realized f(k):
/// mspe <= (||mu_w||^2 + 1)(lambda_{k+1} + 2 f(k) ||M||_F^2) ||l||^2,
/// where M = GC, lambda_{k+1} is the (k+1)-th eigenvalue of M^T M and mu_w =
/// C^{-1} mu is the mean in the whitened coordinates the proposition is
/// proved in (mu itself when Sigma = I). Violations are reported, not thrown.
struct Proposition2Result {
  double mspe_exact = 0.0;
  double bound_value = 0.0;
  double fk = 0.0;
  bool satisfied = false;
};

Proposition2Result check_proposition2_bound(const RoutingMatrix& g,
                                            const Eigen::MatrixXd& sigma,
                                            const Eigen::VectorXd& mu,
                                            const Eigen::VectorXd& l, int k);

/// Empirical coverage of the randomized-selection bound: over `trials`
/// seeded repetitions of c draws, the fraction of runs whose exact MSPE
/// (E-BLP built from the first at-most-k singular dimensions of the rescaled
/// sample) exceeds the Eq. 10 bound. The rate should stay below
/// delta + 3 sqrt(delta (1 - delta) / trials).
struct Proposition3Result {
  int trials = 0;
  int violations = 0;
  double violation_rate = 0.0;
};

Proposition3Result check_proposition3_bound(const RoutingMatrix& g,
                                            const Eigen::MatrixXd& sigma,
                                            const Eigen::VectorXd& mu,
                                            const Eigen::VectorXd& l, int c_draws,
                                            int k, double delta, int trials,
                                            std::uint64_t base_seed);

}  // namespace netkrige

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "netkrige/kriging.hpp"
#include "netkrige/topology.hpp"

namespace netkrige {

/// Per-epoch path measurements (epochs x n_p). The simulator also stores the
/// per-link truth it generated from.
struct EpochSeries {
  Eigen::MatrixXd values;         // epochs x n_p
  double epoch_duration = 600.0;  // seconds
  std::optional<Eigen::MatrixXd> link_truth;  // epochs x n_e

  int n_epochs() const { return static_cast<int>(values.rows()); }
};

struct SpikeEvent {
  int epoch = 0;
  int link = 0;
  double delta = 0.0;  // added link delay, >= 0
};

/// Draws x(t) ~ N(mu, Sigma) independently per epoch (per-epoch substreams
/// derived from seed and epoch index), applies spike injections, and sets
/// y(t) = G x(t). Reproducible from the seed.
EpochSeries simulate_series(const RoutingMatrix& g, const LinkModel& model,
                            int epochs, std::uint64_t seed,
                            const std::vector<SpikeEvent>& spikes = {});

struct RelativeErrorPoint {
  int k = 0;
  double mean_abs_relative_error = 0.0;
  int excluded_epochs = 0;  // epochs with true summary exactly zero
};

/// For each k: deterministic selection, E-BLP, per-epoch prediction of
/// l^T y(t), averaged |pred - true| / |true| over epochs.
std::vector<RelativeErrorPoint> relative_error_curve(
    const EpochSeries& series, const RoutingMatrix& g, const LinkModel& model,
    const Eigen::VectorXd& l, const std::vector<int>& k_values);

/// Pearson correlation; throws on length mismatch, fewer than two points, or
/// zero variance.
double correlation(const Eigen::VectorXd& pred_series,
                   const Eigen::VectorXd& true_series);

/// Spike labels: epoch t is flagged iff |v_t - mean(previous `window`)| >
/// multiplier * sample std of that window. The first `window` epochs are
/// never flagged.
struct AnomalyLabels {
  std::vector<bool> flags;
  int window = 6;
  double multiplier = 3.0;

  int count() const;
};

AnomalyLabels detect_spikes(const Eigen::VectorXd& summary_series, int window,
                            double multiplier);

struct RocPoint {
  double threshold = 0.0;
  double tpr = 0.0;  // NaN when there are no true spikes
  double fpr = 0.0;
  int true_count = 0;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double truth_multiplier = 3.0;
};

/// Truth labels come from detect_spikes(true, window, truth_multiplier);
/// each threshold is applied to the predicted series and scored against
/// them.
RocCurve roc_sweep(const Eigen::VectorXd& true_summary,
                   const Eigen::VectorXd& pred_summary, int window,
                   double truth_multiplier, const std::vector<double>& thresholds);

/// The Fig. 9 sweep: 1.0, 1.25, ..., 5.0.
std::vector<double> default_roc_thresholds();

}  // namespace netkrige

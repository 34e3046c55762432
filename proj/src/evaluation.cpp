#include "netkrige/evaluation.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>

#include "netkrige/errors.hpp"
#include "netkrige/linalg.hpp"
#include "netkrige/rng.hpp"
#include "netkrige/selection.hpp"

namespace netkrige {

EpochSeries simulate_series(const RoutingMatrix& g, const LinkModel& model,
                            int epochs, std::uint64_t seed,
                            const std::vector<SpikeEvent>& spikes) {
  if (epochs < 1) throw PreconditionError("simulate_series: epochs must be >= 1");
  if (model.n_links() != g.n_links()) {
    throw DimensionError("simulate_series: model and matrix link counts disagree");
  }
  for (const SpikeEvent& s : spikes) {
    if (s.epoch < 0 || s.epoch >= epochs || s.link < 0 || s.link >= g.n_links() ||
        s.delta < 0.0) {
      throw PreconditionError("simulate_series: invalid spike event");
    }
  }

  const int n_e = g.n_links();
  Eigen::MatrixXd factor;  // x = mu + factor * z, z standard normal
  if (linalg::is_diagonal(model.sigma())) {
    factor = Eigen::MatrixXd::Zero(n_e, n_e);
    factor.diagonal() = model.sigma().diagonal().cwiseSqrt();
  } else {
    Eigen::LLT<Eigen::MatrixXd> llt(model.sigma());
    if (llt.info() != Eigen::Success) {
      throw NumericError("simulate_series: covariance factorization failed");
    }
    factor = llt.matrixL();
  }

  EpochSeries series;
  series.values.resize(epochs, g.n_paths());
  series.link_truth = Eigen::MatrixXd(epochs, n_e);
  for (int t = 0; t < epochs; ++t) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(t));
    Eigen::VectorXd z(n_e);
    for (int j = 0; j < n_e; ++j) z(j) = rng.normal();
    Eigen::VectorXd x = model.mu() + factor * z;
    for (const SpikeEvent& s : spikes) {
      if (s.epoch == t) x(s.link) += s.delta;
    }
    series.link_truth->row(t) = x.transpose();
    series.values.row(t) = (g.entries() * x).transpose();
  }
  return series;
}

std::vector<RelativeErrorPoint> relative_error_curve(
    const EpochSeries& series, const RoutingMatrix& g, const LinkModel& model,
    const Eigen::VectorXd& l, const std::vector<int>& k_values) {
  if (series.values.cols() != g.n_paths()) {
    throw DimensionError("relative_error_curve: series does not cover all paths");
  }
  const Eigen::VectorXd truth = series.values * l;

  std::vector<RelativeErrorPoint> out;
  out.reserve(k_values.size());
  for (int k : k_values) {
    const SelectionResult sel = select_paths_deterministic(g, model.sigma(), k);
    const Predictor pred = build_eblp(g, model, sel.indices, l);

    double acc = 0.0;
    int used = 0;
    int excluded = 0;
    Eigen::VectorXd y_s(static_cast<Eigen::Index>(sel.indices.size()));
    for (int t = 0; t < series.n_epochs(); ++t) {
      for (std::size_t i = 0; i < sel.indices.size(); ++i) {
        y_s(i) = series.values(t, sel.indices[i]);
      }
      if (truth(t) == 0.0) {
        ++excluded;
        continue;
      }
      acc += std::abs(pred.predict(y_s) - truth(t)) / std::abs(truth(t));
      ++used;
    }
    RelativeErrorPoint point;
    point.k = k;
    point.excluded_epochs = excluded;
    point.mean_abs_relative_error = used > 0 ? acc / used : 0.0;
    out.push_back(point);
  }
  return out;
}

double correlation(const Eigen::VectorXd& pred_series,
                   const Eigen::VectorXd& true_series) {
  if (pred_series.size() != true_series.size()) {
    throw DimensionError("correlation: series lengths differ");
  }
  const Eigen::Index n = pred_series.size();
  if (n < 2) throw PreconditionError("correlation: need at least two points");
  const Eigen::VectorXd a = pred_series.array() - pred_series.mean();
  const Eigen::VectorXd b = true_series.array() - true_series.mean();
  const double denom = std::sqrt(a.squaredNorm() * b.squaredNorm());
  if (!(denom > 0.0)) {
    throw NumericError("correlation: zero-variance series");
  }
  return a.dot(b) / denom;
}

int AnomalyLabels::count() const {
  int c = 0;
  for (bool f : flags) c += f ? 1 : 0;
  return c;
}

AnomalyLabels detect_spikes(const Eigen::VectorXd& summary_series, int window,
                            double multiplier) {
  if (window < 2) throw PreconditionError("detect_spikes: window must be >= 2");
  if (summary_series.size() <= window) {
    throw PreconditionError("detect_spikes: series shorter than window");
  }
  AnomalyLabels labels;
  labels.window = window;
  labels.multiplier = multiplier;
  labels.flags.assign(static_cast<std::size_t>(summary_series.size()), false);
  for (Eigen::Index t = window; t < summary_series.size(); ++t) {
    const auto w = summary_series.segment(t - window, window);
    const double mean = w.mean();
    const double var = (w.array() - mean).square().sum() / (window - 1);
    const double dev = std::abs(summary_series(t) - mean);
    labels.flags[static_cast<std::size_t>(t)] = dev > multiplier * std::sqrt(var);
  }
  return labels;
}

RocCurve roc_sweep(const Eigen::VectorXd& true_summary,
                   const Eigen::VectorXd& pred_summary, int window,
                   double truth_multiplier,
                   const std::vector<double>& thresholds) {
  if (true_summary.size() != pred_summary.size()) {
    throw DimensionError("roc_sweep: series lengths differ");
  }
  const AnomalyLabels truth = detect_spikes(true_summary, window, truth_multiplier);
  const int n = static_cast<int>(truth.flags.size());
  const int positives = truth.count();
  const int negatives = n - positives;

  RocCurve curve;
  curve.truth_multiplier = truth_multiplier;
  for (double threshold : thresholds) {
    const AnomalyLabels pred = detect_spikes(pred_summary, window, threshold);
    int tp = 0;
    int fp = 0;
    for (int t = 0; t < n; ++t) {
      if (pred.flags[t] && truth.flags[t]) ++tp;
      if (pred.flags[t] && !truth.flags[t]) ++fp;
    }
    RocPoint point;
    point.threshold = threshold;
    point.true_count = positives;
    point.tpr = positives > 0
                    ? static_cast<double>(tp) / positives
                    : std::numeric_limits<double>::quiet_NaN();
    point.fpr = negatives > 0 ? static_cast<double>(fp) / negatives : 0.0;
    curve.points.push_back(point);
  }
  return curve;
}

std::vector<double> default_roc_thresholds() {
  std::vector<double> t;
  for (int i = 0; i <= 16; ++i) t.push_back(1.0 + 0.25 * i);
  return t;
}

}  // namespace netkrige

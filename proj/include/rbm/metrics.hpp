#pragma once

#include <map>
#include <string>
#include <vector>

#include "rbm/model.hpp"

namespace rbm {

/// Column-oriented record of everything monitored along one training run.
struct TraceSeries {
  std::vector<std::string> columns;           // excludes the epoch column
  std::vector<std::size_t> epochs;            // strictly increasing
  std::vector<std::vector<double>> rows;      // rows[i][k] <-> columns[k]
  std::map<std::string, std::string> metadata;

  std::size_t n_rows() const { return epochs.size(); }
  bool has_column(const std::string& name) const;
  std::size_t column_index(const std::string& name) const;  // throws if absent
  std::vector<double> column(const std::string& name) const;

  /// First measurement fixes the column set; later rows must match it.
  void append(std::size_t epoch,
              const std::vector<std::pair<std::string, double>>& values);
};

struct StopDecision {
  std::size_t stop_epoch = 0;
  std::string criterion;
  double trace_value_at_stop = 0.0;
};

/// Probabilistic reconstruction error R(x) = -log P(x | E[h|x]), with the
/// hidden expectation fed to the visible conditional as a real vector.
double recon_error_prob(const RbmParams& params, const BinaryState& x);

/// Squared reconstruction error ||x - x_n||^2 with x_n the endpoint of an
/// n-step Gibbs chain started at x.
double recon_error_sq(const RbmParams& params, const BinaryState& x,
                      std::size_t n, RngStream& rng);

/// Argmax of the moving-average-smoothed column. patience == 0 scans the
/// whole trace (earliest epoch on ties); patience > 0 emulates online
/// detection, stopping once the running maximum has not improved for
/// `patience` consecutive measurements.
StopDecision detect_stop(const TraceSeries& trace,
                         const std::string& criterion_column,
                         std::size_t smoothing_window, std::size_t patience);

/// CSV with an `epoch` first column; lossless round trip.
void write_csv(const TraceSeries& trace, const std::string& path);
TraceSeries read_csv(const std::string& path);

/// Key=value sidecar carrying the trace metadata.
void write_metadata(const TraceSeries& trace, const std::string& path);

/// Row-wise mean of traces that share epochs and columns.
TraceSeries aggregate_mean(const std::vector<TraceSeries>& traces);

}  // namespace rbm

#include "rbm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rbm/datasets.hpp"

namespace rbm {

bool TraceSeries::has_column(const std::string& name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

std::size_t TraceSeries::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end())
    throw std::invalid_argument("TraceSeries: unknown column " + name);
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> TraceSeries::column(const std::string& name) const {
  const std::size_t k = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[k]);
  return out;
}

void TraceSeries::append(
    std::size_t epoch,
    const std::vector<std::pair<std::string, double>>& values) {
  if (!epochs.empty() && epoch <= epochs.back())
    throw std::invalid_argument("TraceSeries: epochs must increase");
  if (columns.empty() && rows.empty()) {
    columns.reserve(values.size());
    for (const auto& [name, _] : values) columns.push_back(name);
  }
  if (values.size() != columns.size())
    throw std::invalid_argument("TraceSeries: row shape changed");
  std::vector<double> row(columns.size());
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (values[k].first != columns[k])
      throw std::invalid_argument("TraceSeries: column order changed at " +
                                  values[k].first);
    row[k] = values[k].second;
  }
  epochs.push_back(epoch);
  rows.push_back(std::move(row));
}

double recon_error_prob(const RbmParams& params, const BinaryState& x) {
  const Vec h_mean = hidden_activation_probs(params, x);
  const Vec p = visible_activation_probs(params, h_mean);
  double r = 0.0;
  for (std::size_t i = 0; i < params.n_visible; ++i) {
    const double pi = p[i];
    // -log of the Bernoulli mass; clamp to keep saturated units finite.
    const double mass = x.bit(i) ? pi : 1.0 - pi;
    r -= std::log(std::max(mass, 1e-300));
  }
  return r;
}

double recon_error_sq(const RbmParams& params, const BinaryState& x,
                      std::size_t n, RngStream& rng) {
  const GibbsResult gr = gibbs_chain(params, x, n, rng);
  return static_cast<double>(x.hamming(gr.x_n));
}

namespace {

/// Centered moving average, window clamped at the edges.
std::vector<double> smooth(const std::vector<double>& v, std::size_t window) {
  if (window <= 1) return v;
  std::vector<double> out(v.size());
  const std::size_t half = window / 2;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(v.size() - 1, i + half);
    double s = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) s += v[k];
    out[i] = s / static_cast<double>(hi - lo + 1);
  }
  return out;
}

}  // namespace

StopDecision detect_stop(const TraceSeries& trace,
                         const std::string& criterion_column,
                         std::size_t smoothing_window, std::size_t patience) {
  if (trace.n_rows() < std::max<std::size_t>(smoothing_window, 1))
    throw std::invalid_argument("detect_stop: trace shorter than window");
  const std::vector<double> raw = trace.column(criterion_column);
  const std::vector<double> s = smooth(raw, smoothing_window);

  std::size_t best = 0;
  if (patience == 0) {
    for (std::size_t i = 1; i < s.size(); ++i)
      if (s[i] > s[best]) best = i;
  } else {
    std::size_t since_improve = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (s[i] > s[best]) {
        best = i;
        since_improve = 0;
      } else if (++since_improve >= patience) {
        break;
      }
    }
  }
  StopDecision d;
  d.stop_epoch = trace.epochs[best];
  d.criterion = criterion_column;
  d.trace_value_at_stop = s[best];
  return d;
}

void write_csv(const TraceSeries& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out.precision(17);
  out << "epoch";
  for (const std::string& c : trace.columns) out << ',' << c;
  out << '\n';
  for (std::size_t r = 0; r < trace.n_rows(); ++r) {
    out << trace.epochs[r];
    for (double v : trace.rows[r]) out << ',' << v;
    out << '\n';
  }
  if (!out) throw std::runtime_error("write_csv: write failed: " + path);
}

TraceSeries read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path);
  TraceSeries trace;
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("read_csv: " + path + ": empty file");
  {
    std::stringstream ss(line);
    std::string cell;
    bool first = true;
    while (std::getline(ss, cell, ',')) {
      if (first) {
        if (cell != "epoch")
          throw ParseError("read_csv: " + path + ": first column must be epoch");
        first = false;
      } else {
        trace.columns.push_back(cell);
      }
    }
    if (first) throw ParseError("read_csv: " + path + ": missing header");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    if (!std::getline(ss, cell, ','))
      throw ParseError("read_csv: " + path + ":" + std::to_string(lineno));
    std::vector<double> row;
    row.reserve(trace.columns.size());
    const std::size_t epoch = std::stoul(cell);
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != trace.columns.size())
      throw ParseError("read_csv: " + path + ":" + std::to_string(lineno) +
                       ": expected " + std::to_string(trace.columns.size()) +
                       " values, got " + std::to_string(row.size()));
    trace.epochs.push_back(epoch);
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

void write_metadata(const TraceSeries& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_metadata: cannot open " + path);
  for (const auto& [k, v] : trace.metadata) out << k << '=' << v << '\n';
}

TraceSeries aggregate_mean(const std::vector<TraceSeries>& traces) {
  if (traces.empty())
    throw std::invalid_argument("aggregate_mean: no traces");
  const TraceSeries& first = traces.front();
  for (const TraceSeries& t : traces) {
    if (t.columns != first.columns)
      throw std::invalid_argument("aggregate_mean: column mismatch");
    if (t.epochs != first.epochs)
      throw std::invalid_argument("aggregate_mean: epoch grid mismatch");
  }
  TraceSeries out;
  out.columns = first.columns;
  out.epochs = first.epochs;
  out.rows.assign(first.n_rows(),
                  std::vector<double>(first.columns.size(), 0.0));
  for (const TraceSeries& t : traces)
    for (std::size_t r = 0; r < t.n_rows(); ++r)
      for (std::size_t k = 0; k < t.rows[r].size(); ++k)
        out.rows[r][k] += t.rows[r][k];
  const double inv = 1.0 / static_cast<double>(traces.size());
  for (auto& row : out.rows)
    for (double& v : row) v *= inv;
  out.metadata["aggregated_runs"] = std::to_string(traces.size());
  return out;
}

}  // namespace rbm

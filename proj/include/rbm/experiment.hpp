#pragma once

#include <optional>

#include "rbm/metrics.hpp"
#include "rbm/neighborhood.hpp"
#include "rbm/training.hpp"

namespace rbm {

/// Invalid experiment configuration (bad value, missing key, unknown key).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DatasetSpec {
  std::string family;        // "bs" | "lse" | "ran" | "file"
  std::size_t n_visible = 0; // ran only
  std::uint64_t seed = 1;    // ran only
  std::string path;          // file only

  Dataset build() const;
};

struct MonitorConfig {
  std::string exact_ll = "auto";      // "on" | "off" | "auto" (n_v <= bound)
  std::size_t exact_ll_auto_bound = 20;
  bool recon = true;
  std::vector<std::size_t> xi_da;        // ball denominators D_A
  std::vector<std::size_t> xi_ds;        // shell denominators D_S
  std::vector<std::size_t> xi_sampled;   // sampled balls, |D| = sample_size
  std::vector<std::size_t> sum_probs_da; // requires exact evaluation
  std::size_t sample_size = 0;           // 0 = training-set size
  bool resample_every_measurement = false;

  std::size_t max_d() const;
};

struct ExperimentConfig {
  DatasetSpec dataset;
  InitSpec init;
  TrainConfig train;
  MonitorConfig monitor;
  std::size_t n_seeds = 10;
  std::uint64_t base_seed = 1;
  std::size_t workers = 1;
  std::string out_dir = "out";
  std::size_t smoothing_window = 5;
  std::size_t patience = 0;

  void validate() const;
};

/// Flat `key = value` file with `[section]` headers.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin = "<config>");
void write_config(const ExperimentConfig& cfg, const std::string& path);

/// Per-dataset defaults used when a config omits the learning rate. These
/// are tuned values, not taken from any reference; chosen so that long CD
/// runs show the characteristic rise-then-decay of the log-likelihood.
double default_learning_rate(const std::string& family);
std::size_t default_n_hidden(const std::string& family,
                             std::size_t n_visible);

/// Builds the monitor set for one run. The returned monitors capture the
/// dataset, neighborhood index and (optionally) sampled subsets.
std::vector<Monitor> build_monitors(const Dataset& dataset,
                                    const MonitorConfig& mc,
                                    const NeighborhoodIndex& index,
                                    std::size_t n_gibbs,
                                    RngStream monitor_rng);

struct RunOutcome {
  std::uint64_t seed = 0;
  bool diverged = false;
  std::size_t diverged_epoch = 0;
  TraceSeries trace;
  RbmParams final_params;
};

struct ExperimentSummary {
  std::vector<RunOutcome> runs;
  TraceSeries aggregate;
  std::vector<StopDecision> stops;  // per monitored criterion column
  bool any_diverged = false;
};

/// The full protocol: one training run per seed, per-seed trace CSVs, an
/// aggregated mean trace and a stop-decision report, all under cfg.out_dir.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

/// Gibbs sampling from a trained model: random start, burn_in discarded
/// steps, one sample every `thin` steps.
std::vector<BinaryState> generate_samples(const RbmParams& params,
                                          std::size_t count,
                                          std::size_t burn_in,
                                          std::size_t thin, RngStream& rng);

/// Tiled plain-PBM montage (bit 1 = black); each state is a rows x cols
/// tile. tiles_per_row = 0 lays all tiles out in one row.
void render_pbm(const std::vector<BinaryState>& states, std::size_t rows,
                std::size_t cols, const std::string& path,
                std::size_t tiles_per_row = 0);
std::vector<BinaryState> read_pbm_tiles(const std::string& path,
                                        std::size_t rows, std::size_t cols);

/// Plain-text parameter file (shape header + one value per line).
void save_params(const RbmParams& params, const std::string& path);
RbmParams load_params(const std::string& path);

}  // namespace rbm

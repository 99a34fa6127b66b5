#include "rbm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <thread>

#include "rbm/exact.hpp"

namespace rbm {

namespace fs = std::filesystem;

Dataset DatasetSpec::build() const {
  if (family == "bs") return gen_bars_and_stripes();
  if (family == "lse") return gen_labeled_shifter();
  if (family == "ran") return gen_random(n_visible, RngStream(seed));
  if (family == "file") return load_dataset(path);
  throw ConfigError("unknown dataset family: " + family);
}

std::size_t MonitorConfig::max_d() const {
  std::size_t m = 0;
  for (std::size_t d : xi_da) m = std::max(m, d);
  for (std::size_t d : xi_ds) m = std::max(m, d);
  for (std::size_t d : xi_sampled) m = std::max(m, d);
  for (std::size_t d : sum_probs_da) m = std::max(m, d);
  return m;
}

void ExperimentConfig::validate() const {
  train.validate();
  if (dataset.family.empty()) throw ConfigError("dataset family not set");
  if (dataset.family == "ran" &&
      (dataset.n_visible == 0 || dataset.n_visible % 2 != 0))
    throw ConfigError("ran dataset needs positive even n_visible");
  if (dataset.family == "file" && dataset.path.empty())
    throw ConfigError("file dataset needs a path");
  if (init.n_hidden == 0) throw ConfigError("n_hidden not set");
  if (n_seeds == 0) throw ConfigError("seeds must be >= 1");
  if (workers == 0) throw ConfigError("workers must be >= 1");
  if (out_dir.empty()) throw ConfigError("output directory not set");
  if (monitor.exact_ll != "on" && monitor.exact_ll != "off" &&
      monitor.exact_ll != "auto")
    throw ConfigError("exact_ll must be on, off or auto");
}

// Tuned so the aggregate log-likelihood rises and then degenerates within
// 50000 epochs while the reconstruction errors decay near-monotonically.
double default_learning_rate(const std::string& family) {
  if (family == "bs") return 0.5;
  if (family == "lse") return 0.3;
  if (family == "ran") return 0.02;
  return 0.1;
}

std::size_t default_n_hidden(const std::string& family,
                             std::size_t n_visible) {
  if (family == "bs") return 8;
  if (family == "lse") return 10;
  if (family == "ran") return 10;
  return std::max<std::size_t>(n_visible, 1);
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::size_t strict_stoul(const std::string& s) {
  std::size_t pos = 0;
  const unsigned long v = std::stoul(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("trailing characters");
  return static_cast<std::size_t>(v);
}

// Comma- and/or whitespace-separated.
std::vector<std::size_t> parse_size_list(const std::string& v,
                                         const std::string& key) {
  std::vector<std::size_t> out;
  if (trim(v).empty() || trim(v) == "none") return out;
  std::string normalized = v;
  for (char& ch : normalized)
    if (ch == ',') ch = ' ';
  std::stringstream ss(normalized);
  std::string cell;
  while (ss >> cell) {
    try {
      out.push_back(strict_stoul(cell));
    } catch (...) {
      throw ConfigError("bad integer list for " + key + ": " + v);
    }
  }
  return out;
}

std::size_t parse_size(const std::string& v, const std::string& key) {
  try {
    return strict_stoul(trim(v));
  } catch (...) {
    throw ConfigError("bad integer for " + key + ": " + v);
  }
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    return std::stod(trim(v));
  } catch (...) {
    throw ConfigError("bad number for " + key + ": " + v);
  }
}

bool parse_bool(const std::string& v, const std::string& key) {
  const std::string t = trim(v);
  if (t == "on" || t == "true" || t == "1") return true;
  if (t == "off" || t == "false" || t == "0") return false;
  throw ConfigError("bad boolean for " + key + ": " + v);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin) {
  ExperimentConfig cfg;
  bool lr_set = false;
  bool nh_set = false;
  std::string section;
  std::stringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string qual = section + "." + key;

    if (qual == "dataset.family") {
      cfg.dataset.family = value;
    } else if (qual == "dataset.n_visible") {
      cfg.dataset.n_visible = parse_size(value, qual);
    } else if (qual == "dataset.seed") {
      cfg.dataset.seed = parse_size(value, qual);
    } else if (qual == "dataset.path") {
      cfg.dataset.path = value;
    } else if (qual == "model.n_hidden") {
      cfg.init.n_hidden = parse_size(value, qual);
      nh_set = true;
    } else if (qual == "model.weight_sigma") {
      cfg.init.weight_sigma = parse_double(value, qual);
    } else if (qual == "train.n_gibbs") {
      cfg.train.n_gibbs = parse_size(value, qual);
    } else if (qual == "train.learning_rate") {
      cfg.train.learning_rate = parse_double(value, qual);
      lr_set = true;
    } else if (qual == "train.momentum") {
      cfg.train.momentum = parse_double(value, qual);
    } else if (qual == "train.epochs") {
      cfg.train.epochs = parse_size(value, qual);
    } else if (qual == "train.measure_every") {
      cfg.train.measure_every = parse_size(value, qual);
    } else if (qual == "train.minibatch") {
      cfg.train.minibatch = parse_size(value, qual);
    } else if (qual == "train.weight_decay") {
      cfg.train.weight_decay = parse_double(value, qual);
    } else if (qual == "monitor.exact_ll") {
      cfg.monitor.exact_ll = value;
    } else if (qual == "monitor.recon") {
      cfg.monitor.recon = parse_bool(value, qual);
    } else if (qual == "monitor.xi_da") {
      cfg.monitor.xi_da = parse_size_list(value, qual);
    } else if (qual == "monitor.xi_ds") {
      cfg.monitor.xi_ds = parse_size_list(value, qual);
    } else if (qual == "monitor.xi_sampled") {
      cfg.monitor.xi_sampled = parse_size_list(value, qual);
    } else if (qual == "monitor.sum_probs_da") {
      cfg.monitor.sum_probs_da = parse_size_list(value, qual);
    } else if (qual == "monitor.sample_size") {
      cfg.monitor.sample_size = parse_size(value, qual);
    } else if (qual == "monitor.resample_every_measurement") {
      cfg.monitor.resample_every_measurement = parse_bool(value, qual);
    } else if (qual == "run.seeds") {
      cfg.n_seeds = parse_size(value, qual);
    } else if (qual == "run.base_seed") {
      cfg.base_seed = parse_size(value, qual);
    } else if (qual == "run.workers") {
      cfg.workers = parse_size(value, qual);
    } else if (qual == "run.out") {
      cfg.out_dir = value;
    } else if (qual == "run.smoothing_window") {
      cfg.smoothing_window = parse_size(value, qual);
    } else if (qual == "run.patience") {
      cfg.patience = parse_size(value, qual);
    } else {
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": unknown key " + qual);
    }
  }
  if (!nh_set)
    cfg.init.n_hidden =
        default_n_hidden(cfg.dataset.family, cfg.dataset.n_visible);
  if (!lr_set)
    cfg.train.learning_rate = default_learning_rate(cfg.dataset.family);
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void write_config(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_config: cannot open " + path);
  out.precision(17);
  auto list = [](const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
      s += (i ? "," : "") + std::to_string(v[i]);
    return s.empty() ? "none" : s;
  };
  out << "[dataset]\n"
      << "family = " << cfg.dataset.family << "\n";
  if (cfg.dataset.family == "ran")
    out << "n_visible = " << cfg.dataset.n_visible << "\n"
        << "seed = " << cfg.dataset.seed << "\n";
  if (cfg.dataset.family == "file") out << "path = " << cfg.dataset.path << "\n";
  out << "\n[model]\n"
      << "n_hidden = " << cfg.init.n_hidden << "\n"
      << "weight_sigma = " << cfg.init.weight_sigma << "\n";
  out << "\n[train]\n"
      << "n_gibbs = " << cfg.train.n_gibbs << "\n"
      << "learning_rate = " << cfg.train.learning_rate << "\n"
      << "momentum = " << cfg.train.momentum << "\n"
      << "epochs = " << cfg.train.epochs << "\n"
      << "measure_every = " << cfg.train.measure_every << "\n"
      << "minibatch = " << cfg.train.minibatch << "\n"
      << "weight_decay = " << cfg.train.weight_decay << "\n";
  out << "\n[monitor]\n"
      << "exact_ll = " << cfg.monitor.exact_ll << "\n"
      << "recon = " << (cfg.monitor.recon ? "on" : "off") << "\n"
      << "xi_da = " << list(cfg.monitor.xi_da) << "\n"
      << "xi_ds = " << list(cfg.monitor.xi_ds) << "\n"
      << "xi_sampled = " << list(cfg.monitor.xi_sampled) << "\n"
      << "sum_probs_da = " << list(cfg.monitor.sum_probs_da) << "\n"
      << "sample_size = " << cfg.monitor.sample_size << "\n"
      << "resample_every_measurement = "
      << (cfg.monitor.resample_every_measurement ? "on" : "off") << "\n";
  out << "\n[run]\n"
      << "seeds = " << cfg.n_seeds << "\n"
      << "base_seed = " << cfg.base_seed << "\n"
      << "workers = " << cfg.workers << "\n"
      << "out = " << cfg.out_dir << "\n"
      << "smoothing_window = " << cfg.smoothing_window << "\n"
      << "patience = " << cfg.patience << "\n";
}

namespace {

struct LogSumExpMerge {
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;

  void add_value(double f) {
    if (f <= max) {
      sum += std::exp(f - max);
    } else {
      sum = sum * std::exp(max - f) + 1.0;
      max = f;
    }
  }
  void merge(const LogSumExpMerge& o) {
    if (o.sum == 0.0) return;
    if (o.max <= max) {
      sum += o.sum * std::exp(o.max - max);
    } else {
      sum = sum * std::exp(max - o.max) + o.sum;
      max = o.max;
    }
  }
  double value() const { return max + std::log(sum); }
};

}  // namespace

std::vector<Monitor> build_monitors(const Dataset& dataset,
                                    const MonitorConfig& mc,
                                    const NeighborhoodIndex& index,
                                    std::size_t n_gibbs,
                                    RngStream monitor_rng) {
  std::vector<Monitor> monitors;
  const bool exact_on =
      mc.exact_ll == "on" ||
      (mc.exact_ll == "auto" && dataset.n_visible <= mc.exact_ll_auto_bound);
  if ((exact_on && !mc.sum_probs_da.empty()) || !mc.xi_da.empty() ||
      !mc.xi_ds.empty() || !mc.xi_sampled.empty()) {
    if (index.d_max() < mc.max_d())
      throw ConfigError("neighborhood index too shallow for monitors");
  }

  // Sampled neighborhoods, one draw per run by default.
  const std::size_t sample_size =
      mc.sample_size == 0 ? dataset.size() : mc.sample_size;
  auto sample_rng = std::make_shared<RngStream>(monitor_rng.split(1));
  auto samples =
      std::make_shared<std::vector<SampledNeighborhood>>();
  for (std::size_t d : mc.xi_sampled)
    samples->push_back(sample_neighborhood(index, d, sample_size, *sample_rng));

  // Fixed noise realization for the squared reconstruction error: the same
  // stream is replayed at every measurement epoch (and the error averaged
  // over several chains per example), so consecutive trace values differ
  // through parameter movement rather than resampling noise.
  const std::uint64_t recon_seed = monitor_rng.split(2).seed();
  constexpr std::size_t kReconChains = 256;

  monitors.push_back([=, &dataset, &index](
                         std::size_t, const RbmParams& params) {
    std::vector<std::pair<std::string, double>> row;

    double log_Z = 0.0;
    if (exact_on) {
      log_Z = log_partition(params);
      double sum_ll = 0.0;
      for (const BinaryState& x : dataset.states)
        sum_ll += free_energy_unnorm(params, x) - log_Z;
      row.emplace_back("log_likelihood_sum", sum_ll);
      row.emplace_back("log_likelihood_mean",
                       sum_ll / static_cast<double>(dataset.size()));
    }

    if (mc.recon) {
      double rp = 0.0, rs = 0.0;
      RngStream rng(recon_seed);
      for (const BinaryState& x : dataset.states) {
        rp += recon_error_prob(params, x);
        double s = 0.0;
        for (std::size_t k = 0; k < kReconChains; ++k)
          s += recon_error_sq(params, x, n_gibbs, rng);
        rs += s / static_cast<double>(kReconChains);
      }
      const double inv = 1.0 / static_cast<double>(dataset.size());
      row.emplace_back("recon_prob", rp * inv);
      row.emplace_back("recon_sq", rs * inv);
    }

    // Free energies per shell, shared across every xi / sum_probs column.
    const std::size_t need_d = mc.max_d();
    std::vector<LogSumExpMerge> shell_lse;
    std::vector<double> shell_prob;
    std::vector<std::size_t> shell_count;
    const bool need_shells = !mc.xi_da.empty() || !mc.xi_ds.empty() ||
                             (!mc.sum_probs_da.empty() && exact_on);
    if (need_shells) {
      for (std::size_t d = 0; d <= need_d && d < index.shells.size(); ++d) {
        LogSumExpMerge lse;
        double prob = 0.0;
        for (const BinaryState& y : index.shells[d]) {
          const double f = free_energy_unnorm(params, y);
          lse.add_value(f);
          if (exact_on) prob += std::exp(f - log_Z);
        }
        shell_lse.push_back(lse);
        shell_prob.push_back(prob);
        shell_count.push_back(index.shells[d].size());
      }
    }

    double mean_f = 0.0;
    for (const BinaryState& x : dataset.states)
      mean_f += free_energy_unnorm(params, x);
    mean_f /= static_cast<double>(dataset.size());

    auto log_xi_from = [&](const LogSumExpMerge& lse, std::size_t count) {
      return mean_f -
             (lse.value() - std::log(static_cast<double>(count)));
    };

    for (std::size_t d : mc.xi_da) {
      LogSumExpMerge acc;
      std::size_t count = 0;
      for (std::size_t k = 0; k <= d && k < shell_lse.size(); ++k) {
        acc.merge(shell_lse[k]);
        count += shell_count[k];
      }
      row.emplace_back("log_xi_DA_d" + std::to_string(d),
                       log_xi_from(acc, count));
    }
    for (std::size_t d : mc.xi_ds) {
      if (d < shell_lse.size() && shell_count[d] > 0) {
        row.emplace_back("log_xi_DS_d" + std::to_string(d),
                         log_xi_from(shell_lse[d], shell_count[d]));
      } else {
        row.emplace_back("log_xi_DS_d" + std::to_string(d),
                         std::numeric_limits<double>::quiet_NaN());
      }
    }
    for (std::size_t si = 0; si < mc.xi_sampled.size(); ++si) {
      const std::size_t d = mc.xi_sampled[si];
      std::vector<BinaryState> states;
      if (mc.resample_every_measurement) {
        states = sample_neighborhood(index, d, sample_size, *sample_rng).states;
      } else {
        states = (*samples)[si].states;
      }
      const XiValue v = xi(params, dataset, states);
      row.emplace_back("log_xi_SA_d" + std::to_string(d), v.log_xi);
    }
    if (exact_on) {
      for (std::size_t d : mc.sum_probs_da) {
        double p = 0.0;
        for (std::size_t k = 0; k <= d && k < shell_prob.size(); ++k)
          p += shell_prob[k];
        row.emplace_back("sum_probs_DA_d" + std::to_string(d), p);
      }
    }
    return row;
  });
  return monitors;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Dataset dataset = cfg.dataset.build();
  NeighborhoodIndex index;
  if (cfg.monitor.max_d() > 0 || !cfg.monitor.xi_da.empty() ||
      !cfg.monitor.xi_ds.empty() || !cfg.monitor.xi_sampled.empty())
    index = build_index(dataset, cfg.monitor.max_d());
  else
    index = build_index(dataset, 0);

  fs::create_directories(cfg.out_dir);
  write_config(cfg, (fs::path(cfg.out_dir) / "config.cfg").string());
  save_dataset(dataset, (fs::path(cfg.out_dir) / "dataset.txt").string());

  ExperimentSummary summary;
  summary.runs.resize(cfg.n_seeds);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cfg.n_seeds) return;
      RunOutcome& out = summary.runs[i];
      out.seed = cfg.base_seed + i;
      RngStream train_rng(out.seed);
      const std::vector<Monitor> monitors = build_monitors(
          dataset, cfg.monitor, index, cfg.train.n_gibbs,
          RngStream(out.seed).split(1000));
      try {
        TrainResult res =
            train(dataset, cfg.train, cfg.init, train_rng, monitors);
        out.trace = std::move(res.trace);
        out.final_params = std::move(res.final_params);
      } catch (const TrainingDiverged& e) {
        out.diverged = true;
        out.diverged_epoch = e.epoch;
        out.trace = e.partial_trace;
      }
      const std::string stem =
          (fs::path(cfg.out_dir) / ("trace_seed" + std::to_string(out.seed)))
              .string();
      write_csv(out.trace, stem + ".csv");
      write_metadata(out.trace, stem + ".meta");
      if (!out.diverged)
        save_params(out.final_params,
                    (fs::path(cfg.out_dir) /
                     ("params_seed" + std::to_string(out.seed) + ".txt"))
                        .string());
    }
  };

  if (cfg.workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < cfg.workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<TraceSeries> completed;
  for (const RunOutcome& r : summary.runs) {
    if (r.diverged)
      summary.any_diverged = true;
    else
      completed.push_back(r.trace);
  }

  std::ofstream report((fs::path(cfg.out_dir) / "stop_report.txt").string());
  if (!completed.empty()) {
    summary.aggregate = aggregate_mean(completed);
    write_csv(summary.aggregate,
              (fs::path(cfg.out_dir) / "aggregate.csv").string());
    report << "# criterion stop_epoch value\n";
    for (const std::string& col : summary.aggregate.columns) {
      if (col.rfind("log_xi_", 0) != 0 && col != "log_likelihood_sum")
        continue;
      const std::size_t window =
          std::min(cfg.smoothing_window, summary.aggregate.n_rows());
      const StopDecision d =
          detect_stop(summary.aggregate, col, window, cfg.patience);
      summary.stops.push_back(d);
      report << d.criterion << ' ' << d.stop_epoch << ' '
             << d.trace_value_at_stop << '\n';
    }
  }
  for (const RunOutcome& r : summary.runs)
    if (r.diverged)
      report << "# seed " << r.seed << " diverged at epoch "
             << r.diverged_epoch << '\n';
  return summary;
}

std::vector<BinaryState> generate_samples(const RbmParams& params,
                                          std::size_t count,
                                          std::size_t burn_in,
                                          std::size_t thin, RngStream& rng) {
  if (count < 1) throw std::invalid_argument("generate_samples: count >= 1");
  if (thin < 1) throw std::invalid_argument("generate_samples: thin >= 1");
  BinaryState x(params.n_visible);
  for (std::size_t i = 0; i < params.n_visible; ++i)
    x.set_bit(i, rng.bernoulli(0.5));
  auto step = [&]() {
    const BinaryState h =
        sample_bernoulli(hidden_activation_probs(params, x), rng);
    x = sample_bernoulli(visible_activation_probs(params, h), rng);
  };
  for (std::size_t k = 0; k < burn_in; ++k) step();
  std::vector<BinaryState> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    for (std::size_t k = 0; k < thin; ++k) step();
    out.push_back(x);
  }
  return out;
}

void render_pbm(const std::vector<BinaryState>& states, std::size_t rows,
                std::size_t cols, const std::string& path,
                std::size_t tiles_per_row) {
  if (states.empty()) throw std::invalid_argument("render_pbm: no states");
  for (const BinaryState& s : states)
    if (s.size() != rows * cols)
      throw DimensionError("render_pbm: rows*cols != state size");
  const std::size_t tpr = tiles_per_row == 0 ? states.size() : tiles_per_row;
  const std::size_t grid_rows = (states.size() + tpr - 1) / tpr;
  const std::size_t width = tpr * cols + (tpr - 1);
  const std::size_t height = grid_rows * rows + (grid_rows - 1);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("render_pbm: cannot open " + path);
  out << "P1\n" << width << ' ' << height << '\n';
  for (std::size_t py = 0; py < height; ++py) {
    const std::size_t tile_r = py / (rows + 1);
    const std::size_t in_r = py % (rows + 1);
    for (std::size_t px = 0; px < width; ++px) {
      const std::size_t tile_c = px / (cols + 1);
      const std::size_t in_c = px % (cols + 1);
      int bit = 0;
      if (in_r < rows && in_c < cols) {
        const std::size_t idx = tile_r * tpr + tile_c;
        if (idx < states.size()) bit = states[idx].bit(in_r * cols + in_c);
      }
      out << bit;
      if (px + 1 < width) out << ' ';
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("render_pbm: write failed: " + path);
}

std::vector<BinaryState> read_pbm_tiles(const std::string& path,
                                        std::size_t rows, std::size_t cols) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_pbm_tiles: cannot open " + path);
  std::string magic;
  in >> magic;
  if (magic != "P1") throw ParseError("read_pbm_tiles: not a plain PBM");
  std::size_t width = 0, height = 0;
  in >> width >> height;
  std::vector<int> pixels;
  pixels.reserve(width * height);
  char ch;
  while (in >> ch) {
    if (ch == '0') pixels.push_back(0);
    else if (ch == '1') pixels.push_back(1);
  }
  if (pixels.size() != width * height)
    throw ParseError("read_pbm_tiles: pixel count mismatch");
  const std::size_t tpr = (width + 1) / (cols + 1);
  const std::size_t grid_rows = (height + 1) / (rows + 1);
  std::vector<BinaryState> out;
  for (std::size_t tr = 0; tr < grid_rows; ++tr) {
    for (std::size_t tc = 0; tc < tpr; ++tc) {
      BinaryState s(rows * cols);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
          const std::size_t py = tr * (rows + 1) + r;
          const std::size_t px = tc * (cols + 1) + c;
          s.set_bit(r * cols + c, pixels[py * width + px] != 0);
        }
      out.push_back(s);
    }
  }
  return out;
}

void save_params(const RbmParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_params: cannot open " + path);
  out.precision(17);
  out << "# n_visible=" << params.n_visible << "\n";
  out << "# n_hidden=" << params.n_hidden << "\n";
  for (double v : params.W) out << v << "\n";
  for (double v : params.b) out << v << "\n";
  for (double v : params.c) out << v << "\n";
  if (!out) throw std::runtime_error("save_params: write failed: " + path);
}

RbmParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_params: cannot open " + path);
  std::size_t nv = 0, nh = 0;
  std::string line;
  std::vector<double> values;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = trim(line.substr(1, eq - 1));
      if (key == "n_visible") nv = std::stoul(line.substr(eq + 1));
      if (key == "n_hidden") nh = std::stoul(line.substr(eq + 1));
      continue;
    }
    values.push_back(std::stod(line));
  }
  if (nv == 0 || nh == 0)
    throw ParseError("load_params: " + path + ": missing shape headers");
  if (values.size() != nv * nh + nv + nh)
    throw ParseError("load_params: " + path + ": wrong value count");
  RbmParams p(nv, nh);
  std::copy(values.begin(), values.begin() + nv * nh, p.W.begin());
  std::copy(values.begin() + nv * nh, values.begin() + nv * nh + nv,
            p.b.begin());
  std::copy(values.begin() + nv * nh + nv, values.end(), p.c.begin());
  return p;
}

}  // namespace rbm

// rbmstop: experiment harness around the rbm library. Each verb reads and
// writes the documented text formats so stages can be re-run independently.

#include <CLI11.hpp>

#include <iostream>

#include "rbm/exact.hpp"
#include "rbm/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDiverged = 2;
constexpr int kExitIo = 3;

int cmd_gen_data(const std::string& family, std::size_t n_visible,
                 std::uint64_t seed, const std::string& out) {
  rbm::DatasetSpec spec;
  spec.family = family;
  spec.n_visible = n_visible;
  spec.seed = seed;
  const rbm::Dataset ds = spec.build();
  rbm::save_dataset(ds, out);
  std::cout << ds.name << ": " << ds.size() << " states of " << ds.n_visible
            << " bits -> " << out << "\n";
  return kExitOk;
}

int cmd_build_neighborhood(const std::string& data, std::size_t d_max,
                           const std::string& out) {
  const rbm::Dataset ds = rbm::load_dataset(data);
  const rbm::NeighborhoodIndex index = rbm::build_index(ds, d_max);
  rbm::save_index(index, out);
  for (std::size_t d = 0; d < index.shells.size(); ++d)
    std::cout << "shell d=" << d << ": " << index.shells[d].size()
              << " states\n";
  return kExitOk;
}

int cmd_train(const std::string& config_path, std::size_t seeds,
              std::size_t workers, const std::string& out,
              std::size_t epochs, std::size_t measure_every) {
  rbm::ExperimentConfig cfg = rbm::parse_config_file(config_path);
  if (seeds) cfg.n_seeds = seeds;
  if (workers) cfg.workers = workers;
  if (!out.empty()) cfg.out_dir = out;
  if (epochs != static_cast<std::size_t>(-1)) cfg.train.epochs = epochs;
  if (measure_every) cfg.train.measure_every = measure_every;
  cfg.validate();
  const rbm::ExperimentSummary summary = rbm::run_experiment(cfg);
  for (const rbm::RunOutcome& r : summary.runs) {
    std::cout << "seed " << r.seed << ": "
              << (r.diverged ? "diverged at epoch " +
                                   std::to_string(r.diverged_epoch)
                             : "ok")
              << "\n";
  }
  for (const rbm::StopDecision& d : summary.stops)
    std::cout << d.criterion << " -> stop at epoch " << d.stop_epoch << "\n";
  return summary.any_diverged ? kExitDiverged : kExitOk;
}

int cmd_aggregate(const std::vector<std::string>& traces,
                  const std::string& out) {
  std::vector<rbm::TraceSeries> ts;
  ts.reserve(traces.size());
  for (const std::string& p : traces) ts.push_back(rbm::read_csv(p));
  rbm::write_csv(rbm::aggregate_mean(ts), out);
  std::cout << "aggregated " << ts.size() << " traces -> " << out << "\n";
  return kExitOk;
}

int cmd_detect_stop(const std::string& trace_path, const std::string& column,
                    std::size_t window, std::size_t patience) {
  const rbm::TraceSeries trace = rbm::read_csv(trace_path);
  const rbm::StopDecision d =
      rbm::detect_stop(trace, column, window, patience);
  std::cout << d.criterion << " -> stop at epoch " << d.stop_epoch
            << " (value " << d.trace_value_at_stop << ")\n";
  return kExitOk;
}

int cmd_sample(const std::string& params_path, std::size_t count,
               std::size_t burn_in, std::size_t thin, std::uint64_t seed,
               const std::string& out) {
  const rbm::RbmParams params = rbm::load_params(params_path);
  rbm::RngStream rng(seed);
  const std::vector<rbm::BinaryState> samples =
      rbm::generate_samples(params, count, burn_in, thin, rng);
  rbm::Dataset ds;
  ds.name = "samples";
  ds.generator_spec = "gibbs count=" + std::to_string(count) +
                      " burn_in=" + std::to_string(burn_in) +
                      " thin=" + std::to_string(thin) +
                      " seed=" + std::to_string(seed);
  ds.n_visible = params.n_visible;
  ds.states = samples;
  rbm::save_dataset(ds, out);
  std::cout << count << " samples -> " << out << "\n";
  return kExitOk;
}

int cmd_render(const std::string& states_path, std::size_t rows,
               std::size_t cols, std::size_t tiles_per_row,
               const std::string& out) {
  const rbm::Dataset ds = rbm::load_dataset(states_path);
  rbm::render_pbm(ds.states, rows, cols, out, tiles_per_row);
  std::cout << ds.size() << " tiles -> " << out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RBM training with a neighborhood-based stopping criterion"};
  app.require_subcommand(1);

  // gen-data
  std::string family = "bs", data_out = "dataset.txt";
  std::size_t gen_nv = 10;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen-data", "Generate a benchmark dataset");
  gen->add_option("--family", family, "bs | lse | ran")->required();
  gen->add_option("--n-visible", gen_nv, "dimension (ran only)");
  gen->add_option("--seed", gen_seed, "generator seed (ran only)");
  gen->add_option("--out", data_out, "output dataset file")->required();

  // build-neighborhood
  std::string nb_data, nb_out = "index.txt";
  std::size_t nb_dmax = 3;
  auto* nb = app.add_subcommand("build-neighborhood",
                                "Precompute Hamming shells around a dataset");
  nb->add_option("--data", nb_data, "dataset file")->required();
  nb->add_option("--d-max", nb_dmax, "largest shell distance");
  nb->add_option("--out", nb_out, "output shell file")->required();

  // train
  std::string cfg_path, train_out;
  std::size_t tr_seeds = 0, tr_workers = 0, tr_measure = 0;
  std::size_t tr_epochs = static_cast<std::size_t>(-1);
  auto* tr = app.add_subcommand(
      "train", "Run the multi-seed experiment described by a config file");
  tr->add_option("--config", cfg_path, "experiment config file")->required();
  tr->add_option("--seeds", tr_seeds, "override: number of seeds");
  tr->add_option("--workers", tr_workers, "override: parallel workers");
  tr->add_option("--out", train_out, "override: output directory");
  tr->add_option("--epochs", tr_epochs, "override: training epochs");
  tr->add_option("--measure-every", tr_measure, "override: measure period");

  // aggregate
  std::vector<std::string> agg_traces;
  std::string agg_out = "aggregate.csv";
  auto* agg = app.add_subcommand("aggregate", "Mean of per-seed trace CSVs");
  agg->add_option("--traces", agg_traces, "input trace CSVs")->required();
  agg->add_option("--out", agg_out, "output CSV")->required();

  // detect-stop
  std::string ds_trace, ds_column = "log_xi_DA_d1";
  std::size_t ds_window = 5, ds_patience = 0;
  auto* dst = app.add_subcommand("detect-stop",
                                 "Locate the stopping epoch on a trace column");
  dst->add_option("--trace", ds_trace, "trace CSV")->required();
  dst->add_option("--column", ds_column, "criterion column");
  dst->add_option("--window", ds_window, "smoothing window (measurements)");
  dst->add_option("--patience", ds_patience, "0 = offline argmax");

  // sample
  std::string sp_params, sp_out = "samples.txt";
  std::size_t sp_count = 30, sp_burn = 1000, sp_thin = 100;
  std::uint64_t sp_seed = 1;
  auto* sp = app.add_subcommand("sample", "Draw Gibbs samples from a model");
  sp->add_option("--params", sp_params, "parameter file")->required();
  sp->add_option("--count", sp_count, "number of samples");
  sp->add_option("--burn-in", sp_burn, "discarded leading steps");
  sp->add_option("--thin", sp_thin, "steps between samples");
  sp->add_option("--seed", sp_seed, "rng seed");
  sp->add_option("--out", sp_out, "output states file")->required();

  // render
  std::string rd_states, rd_out = "montage.pbm";
  std::size_t rd_rows = 4, rd_cols = 4, rd_tpr = 0;
  auto* rd = app.add_subcommand("render", "Render states to a PBM montage");
  rd->add_option("--states", rd_states, "states file")->required();
  rd->add_option("--rows", rd_rows, "tile rows");
  rd->add_option("--cols", rd_cols, "tile cols");
  rd->add_option("--tiles-per-row", rd_tpr, "0 = single row");
  rd->add_option("--out", rd_out, "output PBM")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_data(family, gen_nv, gen_seed, data_out);
    if (nb->parsed()) return cmd_build_neighborhood(nb_data, nb_dmax, nb_out);
    if (tr->parsed())
      return cmd_train(cfg_path, tr_seeds, tr_workers, train_out, tr_epochs,
                       tr_measure);
    if (agg->parsed()) return cmd_aggregate(agg_traces, agg_out);
    if (dst->parsed())
      return cmd_detect_stop(ds_trace, ds_column, ds_window, ds_patience);
    if (sp->parsed())
      return cmd_sample(sp_params, sp_count, sp_burn, sp_thin, sp_seed, sp_out);
    if (rd->parsed()) return cmd_render(rd_states, rd_rows, rd_cols, rd_tpr, rd_out);
  } catch (const rbm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rbm::TrainingDiverged& e) {
    std::cerr << "run error: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

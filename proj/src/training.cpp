#include "rbm/training.hpp"

#include <cmath>

namespace rbm {

void TrainConfig::validate() const {
  if (n_gibbs < 1) throw std::invalid_argument("TrainConfig: n_gibbs >= 1");
  if (learning_rate <= 0.0)
    throw std::invalid_argument("TrainConfig: learning_rate > 0");
  if (momentum < 0.0 || momentum >= 1.0)
    throw std::invalid_argument("TrainConfig: momentum in [0,1)");
  if (measure_every < 1)
    throw std::invalid_argument("TrainConfig: measure_every >= 1");
  if (weight_decay < 0.0)
    throw std::invalid_argument("TrainConfig: weight_decay >= 0");
}

double GradientEstimate::max_abs() const {
  double m = 0.0;
  for (double v : dW) m = std::max(m, std::abs(v));
  for (double v : db) m = std::max(m, std::abs(v));
  for (double v : dc) m = std::max(m, std::abs(v));
  return m;
}

GradientEstimate positive_phase(const RbmParams& params,
                                std::span<const BinaryState> batch) {
  if (batch.empty())
    throw std::invalid_argument("positive_phase: empty batch");
  const std::size_t nv = params.n_visible;
  const std::size_t nh = params.n_hidden;
  GradientEstimate g(nv, nh);
  for (const BinaryState& x : batch) {
    if (x.size() != nv)
      throw DimensionError("positive_phase: batch dimension mismatch");
    const Vec ph = hidden_activation_probs(params, x);
    for (std::size_t j = 0; j < nh; ++j) {
      double* row = g.dW.data() + j * nv;
      for (std::size_t i = 0; i < nv; ++i)
        if (x.bit(i)) row[i] += ph[j];
      g.dc[j] += ph[j];
    }
    for (std::size_t i = 0; i < nv; ++i)
      if (x.bit(i)) g.db[i] += 1.0;
  }
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (double& v : g.dW) v *= inv_n;
  for (double& v : g.db) v *= inv_n;
  for (double& v : g.dc) v *= inv_n;
  return g;
}

GradientEstimate cd_gradient(const RbmParams& params,
                             std::span<const BinaryState> batch, std::size_t n,
                             RngStream& rng) {
  if (batch.empty()) throw std::invalid_argument("cd_gradient: empty batch");
  const std::size_t nv = params.n_visible;
  const std::size_t nh = params.n_hidden;
  GradientEstimate g(nv, nh);
  for (const BinaryState& x : batch) {
    if (x.size() != nv)
      throw DimensionError("cd_gradient: batch dimension mismatch");
    const GibbsResult gr = gibbs_chain(params, x, n, rng);
    for (std::size_t j = 0; j < nh; ++j) {
      double* row = g.dW.data() + j * nv;
      const double pos = gr.h1_probs[j];
      const double neg = gr.hn_probs[j];
      for (std::size_t i = 0; i < nv; ++i) {
        if (x.bit(i)) row[i] += pos;
        if (gr.x_n.bit(i)) row[i] -= neg;
      }
      g.dc[j] += pos - neg;
    }
    for (std::size_t i = 0; i < nv; ++i) {
      if (x.bit(i)) g.db[i] += 1.0;
      if (gr.x_n.bit(i)) g.db[i] -= 1.0;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (double& v : g.dW) v *= inv_n;
  for (double& v : g.db) v *= inv_n;
  for (double& v : g.dc) v *= inv_n;
  return g;
}

std::pair<RbmParams, GradientEstimate> sgd_step(const RbmParams& params,
                                                const GradientEstimate& grad,
                                                const GradientEstimate& velocity,
                                                const TrainConfig& cfg) {
  if (grad.n_visible != params.n_visible || grad.n_hidden != params.n_hidden)
    throw DimensionError("sgd_step: gradient shape mismatch");
  GradientEstimate v(params.n_visible, params.n_hidden);
  const bool have_velocity = !velocity.dW.empty();
  for (std::size_t k = 0; k < v.dW.size(); ++k)
    v.dW[k] = cfg.momentum * (have_velocity ? velocity.dW[k] : 0.0) +
              cfg.learning_rate * grad.dW[k];
  for (std::size_t k = 0; k < v.db.size(); ++k)
    v.db[k] = cfg.momentum * (have_velocity ? velocity.db[k] : 0.0) +
              cfg.learning_rate * grad.db[k];
  for (std::size_t k = 0; k < v.dc.size(); ++k)
    v.dc[k] = cfg.momentum * (have_velocity ? velocity.dc[k] : 0.0) +
              cfg.learning_rate * grad.dc[k];
  RbmParams p = params;
  for (std::size_t k = 0; k < p.W.size(); ++k)
    p.W[k] += v.dW[k] - cfg.learning_rate * cfg.weight_decay * params.W[k];
  for (std::size_t k = 0; k < p.b.size(); ++k) p.b[k] += v.db[k];
  for (std::size_t k = 0; k < p.c.size(); ++k) p.c[k] += v.dc[k];
  return {std::move(p), std::move(v)};
}

RbmParams init_params(std::size_t n_visible, const InitSpec& init,
                      RngStream& rng) {
  if (init.n_hidden == 0)
    throw std::invalid_argument("init_params: n_hidden must be positive");
  RbmParams p(n_visible, init.n_hidden);
  // Box-Muller pairs; biases stay zero so the initial model is near-uniform.
  for (std::size_t k = 0; k < p.W.size(); k += 2) {
    double u1 = rng.next_double();
    while (u1 == 0.0) u1 = rng.next_double();
    const double u2 = rng.next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    p.W[k] = init.weight_sigma * r * std::cos(2.0 * M_PI * u2);
    if (k + 1 < p.W.size())
      p.W[k + 1] = init.weight_sigma * r * std::sin(2.0 * M_PI * u2);
  }
  return p;
}

namespace {

void run_monitors(const std::vector<Monitor>& monitors, std::size_t epoch,
                  const RbmParams& params, TraceSeries& trace) {
  std::vector<std::pair<std::string, double>> values;
  for (const Monitor& m : monitors) {
    auto part = m(epoch, params);
    values.insert(values.end(), part.begin(), part.end());
  }
  trace.append(epoch, values);
}

}  // namespace

TrainResult train(const Dataset& dataset, const TrainConfig& cfg,
                  const InitSpec& init, RngStream& rng,
                  const std::vector<Monitor>& monitors) {
  cfg.validate();
  if (dataset.states.empty())
    throw std::invalid_argument("train: empty dataset");

  RbmParams params = init_params(dataset.n_visible, init, rng);
  GradientEstimate velocity(params.n_visible, params.n_hidden);
  TraceSeries trace;
  trace.metadata["dataset"] = dataset.name;
  trace.metadata["generator"] = dataset.generator_spec;
  trace.metadata["seed"] = std::to_string(rng.seed());
  trace.metadata["n_visible"] = std::to_string(params.n_visible);
  trace.metadata["n_hidden"] = std::to_string(params.n_hidden);
  trace.metadata["n_gibbs"] = std::to_string(cfg.n_gibbs);
  trace.metadata["learning_rate"] = std::to_string(cfg.learning_rate);
  trace.metadata["momentum"] = std::to_string(cfg.momentum);
  trace.metadata["epochs"] = std::to_string(cfg.epochs);
  trace.metadata["measure_every"] = std::to_string(cfg.measure_every);
  trace.metadata["weight_decay"] = std::to_string(cfg.weight_decay);
  trace.metadata["weight_sigma"] = std::to_string(init.weight_sigma);
  trace.metadata["batch_mode"] =
      cfg.minibatch == 0 ? "full" : "minibatch:" + std::to_string(cfg.minibatch);

  run_monitors(monitors, 0, params, trace);

  const std::size_t batch =
      cfg.minibatch == 0 ? dataset.size() : cfg.minibatch;
  std::span<const BinaryState> all(dataset.states);

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (std::size_t start = 0; start < dataset.size(); start += batch) {
      const std::size_t len = std::min(batch, dataset.size() - start);
      const GradientEstimate grad =
          cd_gradient(params, all.subspan(start, len), cfg.n_gibbs, rng);
      auto [next, vel] = sgd_step(params, grad, velocity, cfg);
      params = std::move(next);
      velocity = std::move(vel);
    }
    if (!params.all_finite() || params.max_abs_weight() > cfg.divergence_limit)
      throw TrainingDiverged(epoch, std::move(trace));
    if (epoch % cfg.measure_every == 0)
      run_monitors(monitors, epoch, params, trace);
  }
  return {std::move(trace), std::move(params)};
}

}  // namespace rbm

#pragma once

#include <functional>
#include <span>

#include "rbm/datasets.hpp"
#include "rbm/metrics.hpp"
#include "rbm/model.hpp"

namespace rbm {

struct TrainConfig {
  std::size_t n_gibbs = 1;        // CD-n steps
  double learning_rate = 0.1;
  double momentum = 0.8;
  std::size_t epochs = 50000;
  std::size_t measure_every = 50;
  std::size_t minibatch = 0;      // 0 = full batch (one update per epoch)
  double weight_decay = 0.0;      // applied to W only
  double divergence_limit = 1e6;  // abort when any |W_ij| exceeds this

  void validate() const;
};

/// Gradient in the ascent direction of the log-likelihood; same shapes as
/// the parameters it updates.
struct GradientEstimate {
  std::size_t n_visible = 0;
  std::size_t n_hidden = 0;
  Vec dW, db, dc;

  GradientEstimate() = default;
  GradientEstimate(std::size_t nv, std::size_t nh)
      : n_visible(nv), n_hidden(nh), dW(nv * nh, 0.0), db(nv, 0.0),
        dc(nh, 0.0) {}

  double max_abs() const;
};

struct InitSpec {
  std::size_t n_hidden = 0;
  double weight_sigma = 0.01;  // W ~ N(0, sigma^2); biases start at zero
};

/// Training aborted because a weight left the finite/divergence budget.
struct TrainingDiverged : std::runtime_error {
  std::size_t epoch;
  TraceSeries partial_trace;
  TrainingDiverged(std::size_t e, TraceSeries t)
      : std::runtime_error("training diverged at epoch " + std::to_string(e)),
        epoch(e), partial_trace(std::move(t)) {}
};

/// A monitor is sampled at every measurement epoch and contributes named
/// columns to the trace. Monitors returning no columns are allowed (useful
/// for parameter snapshots).
using Monitor = std::function<std::vector<std::pair<std::string, double>>(
    std::size_t epoch, const RbmParams& params)>;

/// Data-conditioned phase of the gradient, batch-averaged: the analytic
/// derivative of the mean unnormalized free energy. dW = E[h|x] x',
/// db = x, dc = E[h|x].
GradientEstimate positive_phase(const RbmParams& params,
                                std::span<const BinaryState> batch);

/// CD-n estimate of the log-likelihood gradient, batch-averaged. Positive
/// phase uses the exact conditional expectation E[h|x]; negative phase uses
/// E[h|x_n] with x_n from the Gibbs chain.
GradientEstimate cd_gradient(const RbmParams& params,
                             std::span<const BinaryState> batch,
                             std::size_t n, RngStream& rng);

/// Momentum update: v' = momentum * v + lr * grad;
/// params' = params + v' - lr * weight_decay * W. Pure.
std::pair<RbmParams, GradientEstimate> sgd_step(const RbmParams& params,
                                                const GradientEstimate& grad,
                                                const GradientEstimate& velocity,
                                                const TrainConfig& cfg);

RbmParams init_params(std::size_t n_visible, const InitSpec& init,
                      RngStream& rng);

struct TrainResult {
  TraceSeries trace;
  RbmParams final_params;
};

/// Runs cfg.epochs epochs of CD-n with momentum SGD, invoking every monitor
/// at epoch 0 and every measure_every epochs thereafter. Deterministic for a
/// given rng seed. Throws TrainingDiverged (carrying the partial trace) if a
/// weight exceeds the divergence limit or turns non-finite.
TrainResult train(const Dataset& dataset, const TrainConfig& cfg,
                  const InitSpec& init, RngStream& rng,
                  const std::vector<Monitor>& monitors);

}  // namespace rbm

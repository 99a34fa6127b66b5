#pragma once

#include <cstddef>
#include <vector>

#include "rbm/binary_state.hpp"
#include "rbm/rng.hpp"

namespace rbm {

using Vec = std::vector<double>;

/// Weights and biases of a binary RBM. W is row-major with shape
/// (n_hidden x n_visible); b biases the visible units, c the hidden ones.
struct RbmParams {
  std::size_t n_visible = 0;
  std::size_t n_hidden = 0;
  Vec W;  // W[j * n_visible + i]
  Vec b;  // length n_visible
  Vec c;  // length n_hidden

  RbmParams() = default;
  RbmParams(std::size_t nv, std::size_t nh)
      : n_visible(nv), n_hidden(nh), W(nv * nh, 0.0), b(nv, 0.0), c(nh, 0.0) {}

  double w(std::size_t j, std::size_t i) const { return W[j * n_visible + i]; }
  double& w(std::size_t j, std::size_t i) { return W[j * n_visible + i]; }

  bool all_finite() const;
  double max_abs_weight() const;
};

/// Numerically stable sigmoid; finite for any finite input.
double sigmoid(double z);

/// Numerically stable log(1 + e^z); finite for any finite input.
double softplus(double z);

/// Energy(x, h) = -b'x - c'h - h'Wx.
double energy(const RbmParams& params, const BinaryState& x,
              const BinaryState& h);

/// log sum_h e^{-Energy(x,h)} = b'x + sum_j softplus(c_j + W_j . x).
/// Unnormalized: log P(x) = free_energy_unnorm(x) - log Z.
double free_energy_unnorm(const RbmParams& params, const BinaryState& x);

/// P(h_j = 1 | x) for every hidden unit.
Vec hidden_activation_probs(const RbmParams& params, const BinaryState& x);

/// P(x_i = 1 | h) for every visible unit.
Vec visible_activation_probs(const RbmParams& params, const BinaryState& h);

/// Mean-field variant: the hidden vector may be real-valued (e.g. E[h|x]).
Vec visible_activation_probs(const RbmParams& params, const Vec& h);

/// Draw a binary state from independent per-unit Bernoulli probabilities,
/// consuming one uniform per unit in index order.
BinaryState sample_bernoulli(const Vec& probs, RngStream& rng);

struct GibbsResult {
  BinaryState x_n;   // final visible sample
  Vec h1_probs;      // P(h|x_0), the CD positive-phase activations
  Vec hn_probs;      // P(h|x_n), the CD negative-phase activations
};

/// n alternations h_k ~ P(h|x_{k-1}), x_k ~ P(x|h_k), starting from x0.
GibbsResult gibbs_chain(const RbmParams& params, const BinaryState& x0,
                        std::size_t n, RngStream& rng);

}  // namespace rbm

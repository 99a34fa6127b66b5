#include "rbm/exact.hpp"

#include <bit>
#include <cmath>

#include "rbm/training.hpp"

namespace rbm {

namespace {

void check_bound(const RbmParams& params, std::size_t enum_bound,
                 const char* where) {
  if (params.n_visible > enum_bound)
    throw CapabilityError(std::string(where) + ": n_visible " +
                          std::to_string(params.n_visible) +
                          " above enumeration bound " +
                          std::to_string(enum_bound));
}

/// Streaming max-shifted log-sum-exp accumulator.
struct LogSumExp {
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;  // sum of e^{f - max}

  void add(double f) {
    if (f <= max) {
      sum += std::exp(f - max);
    } else {
      sum = sum * std::exp(max - f) + 1.0;
      max = f;
    }
  }

  double value() const { return max + std::log(sum); }
};

}  // namespace

void enumerate_free_energies(
    const RbmParams& params,
    const std::function<void(std::uint64_t key, double f)>& visit,
    std::size_t enum_bound) {
  check_bound(params, enum_bound, "enumerate_free_energies");
  const std::size_t nv = params.n_visible;
  const std::size_t nh = params.n_hidden;
  // Activations for x = 0.
  Vec act(params.c);
  double bx = 0.0;
  auto emit = [&](std::uint64_t key) {
    double f = bx;
    for (std::size_t j = 0; j < nh; ++j) f += softplus(act[j]);
    visit(key, f);
  };
  std::uint64_t gray = 0;
  emit(gray);
  const std::uint64_t total = std::uint64_t{1} << nv;
  for (std::uint64_t i = 1; i < total; ++i) {
    const std::size_t flip = std::countr_zero(i);
    gray ^= std::uint64_t{1} << flip;
    const bool now_set = (gray >> flip) & 1;
    const double sign = now_set ? 1.0 : -1.0;
    bx += sign * params.b[flip];
    for (std::size_t j = 0; j < nh; ++j)
      act[j] += sign * params.W[j * nv + flip];
    emit(gray);
  }
}

double log_partition(const RbmParams& params, std::size_t enum_bound) {
  check_bound(params, enum_bound, "log_partition");
  LogSumExp lse;
  enumerate_free_energies(
      params, [&](std::uint64_t, double f) { lse.add(f); }, enum_bound);
  return lse.value();
}

double log_likelihood(const RbmParams& params, const Dataset& dataset,
                      std::size_t enum_bound) {
  const double log_Z = log_partition(params, enum_bound);
  double sum = 0.0;
  for (const BinaryState& x : dataset.states)
    sum += free_energy_unnorm(params, x) - log_Z;
  return sum;
}

ExactEval exact_eval(const RbmParams& params, const Dataset& dataset,
                     std::size_t enum_bound) {
  ExactEval ev;
  ev.log_Z = log_partition(params, enum_bound);
  for (const BinaryState& x : dataset.states) {
    const double lp = free_energy_unnorm(params, x) - ev.log_Z;
    ev.log_px.emplace(x, lp);
    ev.sum_ll += lp;
  }
  ev.mean_ll = dataset.size() ? ev.sum_ll / dataset.size() : 0.0;
  return ev;
}

GradientEstimate exact_gradient(const RbmParams& params, const Dataset& dataset,
                                std::size_t enum_bound) {
  check_bound(params, enum_bound, "exact_gradient");
  if (dataset.states.empty())
    throw std::invalid_argument("exact_gradient: empty dataset");
  const std::size_t nv = params.n_visible;
  const std::size_t nh = params.n_hidden;
  GradientEstimate g(nv, nh);

  // Positive phase: data average of E[h|x] x', E[h|x], x.
  for (const BinaryState& x : dataset.states) {
    if (x.size() != nv)
      throw DimensionError("exact_gradient: dataset dimension mismatch");
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
  const double inv_n = 1.0 / static_cast<double>(dataset.size());
  for (double& v : g.dW) v *= inv_n;
  for (double& v : g.db) v *= inv_n;
  for (double& v : g.dc) v *= inv_n;

  // Negative phase: model expectation by enumeration, P(x)-weighted.
  const double log_Z = log_partition(params, enum_bound);
  GradientEstimate neg(nv, nh);
  enumerate_free_energies(
      params,
      [&](std::uint64_t key, double f) {
        const double w = std::exp(f - log_Z);
        if (w == 0.0) return;
        const BinaryState x(key, nv);
        const Vec ph = hidden_activation_probs(params, x);
        for (std::size_t j = 0; j < nh; ++j) {
          double* row = neg.dW.data() + j * nv;
          const double wp = w * ph[j];
          for (std::size_t i = 0; i < nv; ++i)
            if (x.bit(i)) row[i] += wp;
          neg.dc[j] += wp;
        }
        for (std::size_t i = 0; i < nv; ++i)
          if (x.bit(i)) neg.db[i] += w;
      },
      enum_bound);

  for (std::size_t k = 0; k < g.dW.size(); ++k) g.dW[k] -= neg.dW[k];
  for (std::size_t k = 0; k < g.db.size(); ++k) g.db[k] -= neg.db[k];
  for (std::size_t k = 0; k < g.dc.size(); ++k) g.dc[k] -= neg.dc[k];
  return g;
}

}  // namespace rbm

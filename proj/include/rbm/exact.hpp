#pragma once

#include <functional>
#include <unordered_map>

#include "rbm/datasets.hpp"
#include "rbm/model.hpp"

namespace rbm {

/// Largest n_visible the enumeration routines accept by default.
inline constexpr std::size_t kDefaultEnumBound = 24;

struct GradientEstimate;  // training.hpp

/// Results of one exact sweep over the visible space.
struct ExactEval {
  double log_Z = 0.0;
  double mean_ll = 0.0;  // mean over the training set
  double sum_ll = 0.0;   // sum over the training set
  std::unordered_map<BinaryState, double, BinaryStateHash> log_px;
};

/// Visits every visible state in Gray-code order, passing its packed key and
/// free_energy_unnorm value. Hidden activations are updated incrementally
/// (one weight column per step).
void enumerate_free_energies(
    const RbmParams& params,
    const std::function<void(std::uint64_t key, double f)>& visit,
    std::size_t enum_bound = kDefaultEnumBound);

/// log Z by max-shifted log-sum-exp of free_energy_unnorm over all 2^{n_v}
/// visible states.
double log_partition(const RbmParams& params,
                     std::size_t enum_bound = kDefaultEnumBound);

/// Sum over the dataset of log P(x) = free_energy_unnorm(x) - log Z.
double log_likelihood(const RbmParams& params, const Dataset& dataset,
                      std::size_t enum_bound = kDefaultEnumBound);

ExactEval exact_eval(const RbmParams& params, const Dataset& dataset,
                     std::size_t enum_bound = kDefaultEnumBound);

/// Exact ascent-direction gradient of the dataset log-likelihood (mean over
/// the dataset): data-conditioned positive phase minus the full model
/// expectation computed by enumeration.
GradientEstimate exact_gradient(const RbmParams& params, const Dataset& dataset,
                                std::size_t enum_bound = kDefaultEnumBound);

}  // namespace rbm

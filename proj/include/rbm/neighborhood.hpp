#pragma once

#include <span>

#include "rbm/datasets.hpp"
#include "rbm/model.hpp"

namespace rbm {

/// Hamming shells around a training set: shells[d] holds every state whose
/// minimum distance to the dataset equals exactly d. shells[0] is the
/// dataset itself; the union of shells 0..d is the distance-d ball D_A and
/// shells[d] alone is D_S.
struct NeighborhoodIndex {
  std::size_t n_visible = 0;
  std::vector<std::vector<BinaryState>> shells;

  std::size_t d_max() const { return shells.empty() ? 0 : shells.size() - 1; }
  std::size_t ball_size(std::size_t d) const;
  /// Concatenated shells 0..d (a fresh vector).
  std::vector<BinaryState> ball(std::size_t d) const;
};

/// Random subset of a ball, |states| = requested size (clamped to the ball).
struct SampledNeighborhood {
  std::vector<BinaryState> states;
  std::uint64_t seed = 0;
};

/// Breadth-first shell expansion: shell[d+1] = one-bit flips of shell[d]
/// minus everything already placed. Shells come out sorted by integer key.
/// max_states bounds the total number of states kept across shells.
NeighborhoodIndex build_index(const Dataset& dataset, std::size_t d_max,
                              std::size_t max_states = std::size_t{1} << 26);

/// Uniform sample without replacement from the ball of radius d.
SampledNeighborhood sample_neighborhood(const NeighborhoodIndex& index,
                                        std::size_t d, std::size_t size,
                                        RngStream& rng);

struct XiValue {
  double log_xi = 0.0;
  double xi = 0.0;
};

/// The stopping statistic: ratio of the geometric mean of unnormalized
/// training-state probabilities to the arithmetic mean over denom_states,
/// evaluated wholly in log space so the partition function never appears.
/// log_xi = mean_i F(x_i) - (logsumexp_j F(y_j) - log |D|).
XiValue xi(const RbmParams& params, const Dataset& dataset,
           std::span<const BinaryState> denom_states);

/// Sum of exact probabilities of the given states (needs the enumerated
/// partition function, so the enumeration bound applies).
double sum_probs(const RbmParams& params, std::span<const BinaryState> states);

/// Shell file: dataset-style text with `# shell=d` group headers.
void save_index(const NeighborhoodIndex& index, const std::string& path);
NeighborhoodIndex load_index(const std::string& path);

}  // namespace rbm

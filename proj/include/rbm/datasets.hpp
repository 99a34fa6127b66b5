#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rbm/binary_state.hpp"
#include "rbm/rng.hpp"

namespace rbm {

/// Malformed dataset/trace/config file; message carries the line or column.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Ordered, duplicate-free training set plus provenance.
struct Dataset {
  std::string name;
  std::string generator_spec;
  std::size_t n_visible = 0;
  std::vector<BinaryState> states;

  std::size_t size() const { return states.size(); }
};

/// Bars and Stripes: all 4x4 images whose rows are each uniformly filled or
/// empty, plus the column analogue; the blank and full images appear once.
/// 30 states of 16 bits, row-major (bit i = pixel (i/4, i%4)).
Dataset gen_bars_and_stripes();

/// Labeled Shifter Ensemble: 19-bit states, 8-bit pattern (bit 0 leftmost),
/// 3-bit code (001 -> rotate left, 010 -> copy, 100 -> rotate right),
/// 8-bit result. All 2^8 * 3 = 768 states.
Dataset gen_labeled_shifter();

/// 2^{n_visible/2} distinct states sampled uniformly without replacement.
Dataset gen_random(std::size_t n_visible, RngStream rng);

/// Text format: `# key=value` headers, then one '0'/'1' string per line.
void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

}  // namespace rbm

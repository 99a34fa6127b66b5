#include "rbm/neighborhood.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "rbm/exact.hpp"

namespace rbm {

std::size_t NeighborhoodIndex::ball_size(std::size_t d) const {
  std::size_t total = 0;
  for (std::size_t k = 0; k <= d && k < shells.size(); ++k)
    total += shells[k].size();
  return total;
}

std::vector<BinaryState> NeighborhoodIndex::ball(std::size_t d) const {
  std::vector<BinaryState> out;
  out.reserve(ball_size(d));
  for (std::size_t k = 0; k <= d && k < shells.size(); ++k)
    out.insert(out.end(), shells[k].begin(), shells[k].end());
  return out;
}

NeighborhoodIndex build_index(const Dataset& dataset, std::size_t d_max,
                              std::size_t max_states) {
  if (dataset.states.empty())
    throw std::invalid_argument("build_index: empty dataset");
  const std::size_t nv = dataset.n_visible;
  NeighborhoodIndex index;
  index.n_visible = nv;

  std::unordered_set<std::uint64_t> placed;
  std::vector<std::uint64_t> frontier;
  frontier.reserve(dataset.size());
  for (const BinaryState& s : dataset.states) {
    if (s.size() != nv)
      throw DimensionError("build_index: dataset dimension mismatch");
    if (placed.insert(s.key()).second) frontier.push_back(s.key());
  }
  std::sort(frontier.begin(), frontier.end());

  std::size_t total = frontier.size();
  for (std::size_t d = 0; d <= d_max; ++d) {
    auto& shell = index.shells.emplace_back();
    shell.reserve(frontier.size());
    for (std::uint64_t key : frontier) shell.emplace_back(key, nv);
    if (d == d_max || frontier.empty()) continue;

    std::vector<std::uint64_t> next;
    for (std::uint64_t key : frontier) {
      for (std::size_t i = 0; i < nv; ++i) {
        const std::uint64_t flipped = key ^ (std::uint64_t{1} << i);
        if (placed.insert(flipped).second) next.push_back(flipped);
      }
    }
    total += next.size();
    if (total > max_states)
      throw CapabilityError("build_index: state budget exceeded at d=" +
                            std::to_string(d + 1));
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
  }
  return index;
}

SampledNeighborhood sample_neighborhood(const NeighborhoodIndex& index,
                                        std::size_t d, std::size_t size,
                                        RngStream& rng) {
  if (d > index.d_max())
    throw std::invalid_argument("sample_neighborhood: d above index d_max");
  SampledNeighborhood sn;
  sn.seed = rng.seed();
  std::vector<BinaryState> ball = index.ball(d);
  if (size >= ball.size()) {
    sn.states = std::move(ball);
    return sn;
  }
  // Partial Fisher-Yates: the first `size` slots become the sample.
  for (std::size_t k = 0; k < size; ++k) {
    const std::size_t pick = k + rng.next_below(ball.size() - k);
    std::swap(ball[k], ball[pick]);
  }
  ball.resize(size);
  sn.states = std::move(ball);
  return sn;
}

XiValue xi(const RbmParams& params, const Dataset& dataset,
           std::span<const BinaryState> denom_states) {
  if (denom_states.empty())
    throw std::invalid_argument("xi: empty denominator set");
  if (dataset.states.empty())
    throw std::invalid_argument("xi: empty dataset");

  double mean_f = 0.0;
  for (const BinaryState& x : dataset.states)
    mean_f += free_energy_unnorm(params, x);
  mean_f /= static_cast<double>(dataset.size());

  double max_f = -std::numeric_limits<double>::infinity();
  std::vector<double> fs;
  fs.reserve(denom_states.size());
  for (const BinaryState& y : denom_states) {
    fs.push_back(free_energy_unnorm(params, y));
    max_f = std::max(max_f, fs.back());
  }
  double sum = 0.0;
  for (double f : fs) sum += std::exp(f - max_f);
  const double lse = max_f + std::log(sum);

  XiValue v;
  v.log_xi =
      mean_f - (lse - std::log(static_cast<double>(denom_states.size())));
  v.xi = std::exp(v.log_xi);
  return v;
}

double sum_probs(const RbmParams& params,
                 std::span<const BinaryState> states) {
  const double log_Z = log_partition(params);
  double total = 0.0;
  for (const BinaryState& y : states)
    total += std::exp(free_energy_unnorm(params, y) - log_Z);
  return total;
}

void save_index(const NeighborhoodIndex& index, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_index: cannot open " + path);
  out << "# n_visible=" << index.n_visible << "\n";
  out << "# d_max=" << index.d_max() << "\n";
  for (std::size_t d = 0; d < index.shells.size(); ++d) {
    out << "# shell=" << d << "\n";
    for (const BinaryState& s : index.shells[d]) out << s.to_string() << "\n";
  }
  if (!out) throw std::runtime_error("save_index: write failed: " + path);
}

NeighborhoodIndex load_index(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_index: cannot open " + path);
  NeighborhoodIndex index;
  std::string line;
  std::size_t lineno = 0;
  bool in_shell = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(" \t"));
      key.erase(key.find_last_not_of(" \t") + 1);
      const std::string value = line.substr(eq + 1);
      if (key == "n_visible") {
        index.n_visible = std::stoul(value);
      } else if (key == "shell") {
        const std::size_t d = std::stoul(value);
        if (d != index.shells.size())
          throw ParseError("load_index: " + path + ":" +
                           std::to_string(lineno) + ": shells out of order");
        index.shells.emplace_back();
        in_shell = true;
      }
      continue;
    }
    if (!in_shell)
      throw ParseError("load_index: " + path + ":" + std::to_string(lineno) +
                       ": state before any shell header");
    BinaryState s;
    try {
      s = BinaryState::from_string(line);
    } catch (const std::invalid_argument&) {
      throw ParseError("load_index: " + path + ":" + std::to_string(lineno) +
                       ": invalid state line");
    }
    if (s.size() != index.n_visible)
      throw ParseError("load_index: " + path + ":" + std::to_string(lineno) +
                       ": wrong state length");
    index.shells.back().push_back(s);
  }
  if (index.shells.empty())
    throw ParseError("load_index: " + path + ": no shells");
  return index;
}

}  // namespace rbm

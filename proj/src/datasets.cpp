#include "rbm/datasets.hpp"

#include <fstream>
#include <unordered_set>

namespace rbm {

Dataset gen_bars_and_stripes() {
  Dataset ds;
  ds.name = "BS";
  ds.generator_spec = "bars_and_stripes";
  ds.n_visible = 16;
  std::unordered_set<std::uint64_t> seen;
  auto add = [&](std::uint64_t key) {
    if (seen.insert(key).second) ds.states.emplace_back(key, 16);
  };
  // Row images: row r filled iff bit r of the pattern is set.
  for (std::uint64_t pat = 0; pat < 16; ++pat) {
    std::uint64_t key = 0;
    for (std::size_t r = 0; r < 4; ++r)
      if ((pat >> r) & 1) key |= std::uint64_t{0xf} << (4 * r);
    add(key);
  }
  // Column images; blank and full coincide with the row family.
  for (std::uint64_t pat = 0; pat < 16; ++pat) {
    std::uint64_t key = 0;
    for (std::size_t col = 0; col < 4; ++col)
      if ((pat >> col) & 1)
        for (std::size_t r = 0; r < 4; ++r)
          key |= std::uint64_t{1} << (4 * r + col);
    add(key);
  }
  return ds;
}

Dataset gen_labeled_shifter() {
  Dataset ds;
  ds.name = "LSE";
  ds.generator_spec = "labeled_shifter";
  ds.n_visible = 19;
  // Codes as bit triples (bits 8,9,10): "001", "010", "100".
  struct Code {
    std::uint64_t bits;
    int shift;  // rotation applied to the pattern, in leftward positions
  };
  const Code codes[3] = {{0b100, +1}, {0b010, 0}, {0b001, -1}};
  for (std::uint64_t pat = 0; pat < 256; ++pat) {
    for (const Code& code : codes) {
      std::uint64_t result = 0;
      for (std::size_t i = 0; i < 8; ++i) {
        // Bit 0 is the leftmost position; a left rotation moves every bit
        // one position toward index 0, circularly.
        const std::size_t src = (i + 8 + code.shift) % 8;
        if ((pat >> src) & 1) result |= std::uint64_t{1} << i;
      }
      const std::uint64_t key = pat | (code.bits << 8) | (result << 11);
      ds.states.emplace_back(key, 19);
    }
  }
  return ds;
}

Dataset gen_random(std::size_t n_visible, RngStream rng) {
  if (n_visible == 0 || n_visible % 2 != 0)
    throw std::invalid_argument("gen_random: n_visible must be positive even");
  if (n_visible > BinaryState::kMaxBits)
    throw CapabilityError("gen_random: n_visible above 64");
  Dataset ds;
  ds.name = "RAN" + std::to_string(n_visible);
  ds.generator_spec = "random n_visible=" + std::to_string(n_visible) +
                      " seed=" + std::to_string(rng.seed());
  ds.n_visible = n_visible;
  const std::size_t count = std::size_t{1} << (n_visible / 2);
  const std::uint64_t mask = (n_visible == 64)
                                 ? ~std::uint64_t{0}
                                 : (std::uint64_t{1} << n_visible) - 1;
  std::unordered_set<std::uint64_t> seen;
  while (ds.states.size() < count) {
    const std::uint64_t key = rng.next_u64() & mask;
    if (seen.insert(key).second) ds.states.emplace_back(key, n_visible);
  }
  return ds;
}

void save_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_dataset: cannot open " + path);
  out << "# name=" << ds.name << "\n";
  out << "# n_visible=" << ds.n_visible << "\n";
  out << "# generator=" << ds.generator_spec << "\n";
  for (const BinaryState& s : ds.states) out << s.to_string() << "\n";
  if (!out) throw std::runtime_error("save_dataset: write failed: " + path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_dataset: cannot open " + path);
  Dataset ds;
  std::string line;
  std::size_t lineno = 0;
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
      if (key == "name")
        ds.name = value;
      else if (key == "n_visible")
        ds.n_visible = std::stoul(value);
      else if (key == "generator")
        ds.generator_spec = value;
      continue;
    }
    BinaryState s;
    try {
      s = BinaryState::from_string(line);
    } catch (const std::invalid_argument&) {
      throw ParseError("load_dataset: " + path + ":" +
                       std::to_string(lineno) + ": invalid state line");
    }
    if (ds.n_visible == 0 && ds.states.empty()) ds.n_visible = s.size();
    if (s.size() != ds.n_visible)
      throw ParseError("load_dataset: " + path + ":" +
                       std::to_string(lineno) + ": wrong state length");
    ds.states.push_back(s);
  }
  if (ds.states.empty())
    throw ParseError("load_dataset: " + path + ": no states");
  return ds;
}

}  // namespace rbm

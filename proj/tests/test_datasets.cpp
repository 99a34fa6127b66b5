#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "rbm/datasets.hpp"

using namespace rbm;

namespace {

bool row_constant(const BinaryState& s) {
  for (std::size_t r = 0; r < 4; ++r) {
    const bool v = s.bit(4 * r);
    for (std::size_t c = 1; c < 4; ++c)
      if (s.bit(4 * r + c) != v) return false;
  }
  return true;
}

bool col_constant(const BinaryState& s) {
  for (std::size_t c = 0; c < 4; ++c) {
    const bool v = s.bit(c);
    for (std::size_t r = 1; r < 4; ++r)
      if (s.bit(4 * r + c) != v) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("bars and stripes: 30 distinct states, blank and full once") {
  const Dataset bs = gen_bars_and_stripes();
  CHECK(bs.size() == 30);
  CHECK(bs.n_visible == 16);
  std::unordered_set<std::uint64_t> keys;
  std::size_t blank = 0, full = 0;
  for (const BinaryState& s : bs.states) {
    CHECK(keys.insert(s.key()).second);
    if (s.key() == 0) ++blank;
    if (s.key() == 0xffff) ++full;
    CHECK((row_constant(s) || col_constant(s)));
  }
  CHECK(blank == 1);
  CHECK(full == 1);
}

TEST_CASE("bars and stripes: exactly two states in both families") {
  const Dataset bs = gen_bars_and_stripes();
  std::size_t both = 0;
  for (const BinaryState& s : bs.states)
    if (row_constant(s) && col_constant(s)) ++both;
  CHECK(both == 2);  // blank and full
}

TEST_CASE("labeled shifter: 768 distinct states") {
  const Dataset lse = gen_labeled_shifter();
  CHECK(lse.size() == 768);
  CHECK(lse.n_visible == 19);
  std::unordered_set<std::uint64_t> keys;
  for (const BinaryState& s : lse.states) CHECK(keys.insert(s.key()).second);
}

TEST_CASE("labeled shifter: zero pattern is a fixed point of all codes") {
  const Dataset lse = gen_labeled_shifter();
  std::size_t zero_pattern = 0;
  for (const BinaryState& s : lse.states) {
    if ((s.key() & 0xff) != 0) continue;
    ++zero_pattern;
    CHECK((s.key() >> 11) == 0);  // result also all zero
  }
  CHECK(zero_pattern == 3);
}

TEST_CASE("labeled shifter: code 010 copies, 001/100 rotate") {
  const Dataset lse = gen_labeled_shifter();
  for (const BinaryState& s : lse.states) {
    const std::uint64_t pat = s.key() & 0xff;
    const std::uint64_t code = (s.key() >> 8) & 0x7;
    const std::uint64_t result = s.key() >> 11;
    // code bits: bit 8 is the first code character.
    if (code == 0b010) {
      CHECK(result == pat);
    } else if (code == 0b100) {  // "001": rotate left
      for (std::size_t i = 0; i < 8; ++i)
        CHECK(((result >> i) & 1) == ((pat >> ((i + 1) % 8)) & 1));
    } else {
      CHECK(code == 0b001);  // "100": rotate right
      for (std::size_t i = 0; i < 8; ++i)
        CHECK(((result >> i) & 1) == ((pat >> ((i + 7) % 8)) & 1));
    }
  }
}

TEST_CASE("gen_random: cardinality 2^{n/2}, distinct, deterministic") {
  for (std::size_t nv : {10u, 12u, 14u, 16u}) {
    const Dataset a = gen_random(nv, RngStream(99));
    CHECK(a.size() == (std::size_t{1} << (nv / 2)));
    CHECK(a.n_visible == nv);
    std::unordered_set<std::uint64_t> keys;
    for (const BinaryState& s : a.states) CHECK(keys.insert(s.key()).second);
    const Dataset b = gen_random(nv, RngStream(99));
    CHECK(a.states == b.states);
    const Dataset c = gen_random(nv, RngStream(100));
    CHECK(a.states != c.states);
  }
  CHECK_THROWS_AS(gen_random(11, RngStream(1)), std::invalid_argument);
}

TEST_CASE("dataset save/load round trip") {
  const Dataset bs = gen_bars_and_stripes();
  const std::string path = "test_dataset_roundtrip.txt";
  save_dataset(bs, path);
  const Dataset loaded = load_dataset(path);
  CHECK(loaded.name == bs.name);
  CHECK(loaded.n_visible == bs.n_visible);
  CHECK(loaded.generator_spec == bs.generator_spec);
  CHECK(loaded.states == bs.states);
  std::remove(path.c_str());
}

TEST_CASE("load_dataset: malformed line reports its number") {
  const std::string path = "test_dataset_bad.txt";
  {
    std::ofstream out(path);
    out << "# n_visible=4\n0101\n0102\n";
  }
  try {
    load_dataset(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("load_dataset: empty file is an error") {
  const std::string path = "test_dataset_empty.txt";
  { std::ofstream out(path); }
  CHECK_THROWS_AS(load_dataset(path), ParseError);
  std::remove(path.c_str());
}

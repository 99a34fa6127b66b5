#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rbm {

/// Dimension or shape mismatch between arguments.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Problem size exceeds what an operation can handle (enumeration bound,
/// memory budget, bit width).
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fixed-width vector of {0,1} packed into a 64-bit word. The packed value
/// doubles as the integer key used for hashing, ordering and set membership.
class BinaryState {
 public:
  static constexpr std::size_t kMaxBits = 64;

  BinaryState() : bits_(0), n_(0) {}

  explicit BinaryState(std::size_t n) : bits_(0), n_(n) { check_width(n); }

  BinaryState(std::uint64_t key, std::size_t n) : bits_(key), n_(n) {
    check_width(n);
    if (n < 64 && (key >> n) != 0)
      throw std::invalid_argument("BinaryState: key has bits beyond length");
  }

  /// Parse a string of '0'/'1', character i giving bit i.
  static BinaryState from_string(std::string_view s) {
    check_width(s.size());
    BinaryState st(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1')
        st.bits_ |= std::uint64_t{1} << i;
      else if (s[i] != '0')
        throw std::invalid_argument("BinaryState: character is not 0 or 1");
    }
    return st;
  }

  std::size_t size() const { return n_; }
  std::uint64_t key() const { return bits_; }

  bool bit(std::size_t i) const { return (bits_ >> i) & 1u; }

  void set_bit(std::size_t i, bool v) {
    if (i >= n_) throw std::out_of_range("BinaryState: bit index");
    const std::uint64_t m = std::uint64_t{1} << i;
    bits_ = v ? (bits_ | m) : (bits_ & ~m);
  }

  BinaryState with_flipped(std::size_t i) const {
    BinaryState st(*this);
    st.bits_ ^= std::uint64_t{1} << i;
    return st;
  }

  std::size_t popcount() const { return std::popcount(bits_); }

  std::size_t hamming(const BinaryState& other) const {
    if (other.n_ != n_) throw DimensionError("hamming: length mismatch");
    return std::popcount(bits_ ^ other.bits_);
  }

  std::string to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
      if (bit(i)) s[i] = '1';
    return s;
  }

  friend bool operator==(const BinaryState& a, const BinaryState& b) {
    return a.n_ == b.n_ && a.bits_ == b.bits_;
  }

  /// Orders by integer key within equal lengths.
  friend std::strong_ordering operator<=>(const BinaryState& a,
                                          const BinaryState& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

 private:
  static void check_width(std::size_t n) {
    if (n > kMaxBits)
      throw CapabilityError("BinaryState supports at most 64 bits");
  }

  std::uint64_t bits_;
  std::size_t n_;
};

struct BinaryStateHash {
  std::size_t operator()(const BinaryState& s) const {
    std::uint64_t z = s.key() + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return static_cast<std::size_t>(z ^ (z >> 31));
  }
};

}  // namespace rbm

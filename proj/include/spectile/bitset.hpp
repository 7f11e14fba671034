#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace spectile::detail {

// Fixed-size dynamic bitset tuned for clique search: word-level and/andnot,
// popcount and ordered iteration.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  std::size_t bits() const noexcept { return bits_; }

  void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }

  bool none() const noexcept {
    for (const auto w : words_) {
      if (w) return false;
    }
    return true;
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (const auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  // First set bit at or after `from`; bits() if none.
  std::size_t next(std::size_t from) const noexcept {
    if (from >= bits_) return bits_;
    std::size_t wi = from >> 6;
    std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (from & 63));
    while (true) {
      if (w) return (wi << 6) + static_cast<std::size_t>(std::countr_zero(w));
      if (++wi == words_.size()) return bits_;
      w = words_[wi];
    }
  }

  Bitset& operator&=(const Bitset& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }

  void and_not(const Bitset& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  }

  friend Bitset operator&(Bitset a, const Bitset& b) noexcept { return a &= b; }

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace spectile::detail

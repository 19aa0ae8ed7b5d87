#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace dchain {

/// Runtime-sized bitset over word storage. Poset rows and embedding candidate
/// sets are held in these; sizes are fixed at construction.
class Bitset {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  Bitset() = default;
  explicit Bitset(std::size_t bits) : bits_(bits), words_((bits + kWordBits - 1) / kWordBits, 0) {}

  static Bitset full(std::size_t bits) {
    Bitset b(bits);
    b.set_all();
    return b;
  }

  std::size_t size() const { return bits_; }
  std::size_t word_count() const { return words_.size(); }
  const Word* data() const { return words_.data(); }
  Word* data() { return words_.data(); }

  bool test(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set(std::size_t i) { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
  void reset(std::size_t i) { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }

  void set_all() {
    for (auto& w : words_) w = ~Word{0};
    trim();
  }
  void clear() {
    for (auto& w : words_) w = 0;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool none() const {
    for (Word w : words_)
      if (w != 0) return false;
    return true;
  }
  bool any() const { return !none(); }

  /// First set index at or after `from`, or size() when none.
  std::size_t find_next(std::size_t from) const {
    if (from >= bits_) return bits_;
    std::size_t wi = from / kWordBits;
    Word w = words_[wi] & (~Word{0} << (from % kWordBits));
    while (true) {
      if (w != 0) return wi * kWordBits + static_cast<std::size_t>(std::countr_zero(w));
      if (++wi == words_.size()) return bits_;
      w = words_[wi];
    }
  }
  std::size_t find_first() const { return find_next(0); }

  Bitset& operator&=(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  Bitset& operator|=(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  Bitset& subtract(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  bool is_subset_of(const Bitset& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & ~o.words_[i]) != 0) return false;
    return true;
  }
  std::size_t intersect_count(const Bitset& o) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
      c += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
    return c;
  }

  friend bool operator==(const Bitset&, const Bitset&) = default;

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      Word w = words_[wi];
      while (w != 0) {
        f(wi * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

 private:
  void trim() {
    if (bits_ % kWordBits != 0 && !words_.empty()) words_.back() &= (Word{1} << (bits_ % kWordBits)) - 1;
  }

  std::size_t bits_ = 0;
  std::vector<Word> words_;
};

}  // namespace dchain

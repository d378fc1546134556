#ifndef BTC_BITS_HPP
#define BTC_BITS_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace btc {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

inline std::size_t words_for(std::size_t bits) {
  return (bits + kWordBits - 1) / kWordBits;
}

inline std::int64_t popcount(std::span<const Word> w) {
  std::int64_t c = 0;
  for (Word x : w) c += std::popcount(x);
  return c;
}

inline std::int64_t and_popcount(std::span<const Word> a, std::span<const Word> b) {
  std::int64_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += std::popcount(a[i] & b[i]);
  return c;
}

inline std::int64_t xor_popcount(std::span<const Word> a, std::span<const Word> b) {
  std::int64_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += std::popcount(a[i] ^ b[i]);
  return c;
}

// number of positions with a=1 and b=0
inline std::int64_t andnot_popcount(std::span<const Word> a, std::span<const Word> b) {
  std::int64_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += std::popcount(a[i] & ~b[i]);
  return c;
}

template <typename F>
void for_each_set_bit(std::span<const Word> w, F&& f) {
  for (std::size_t wi = 0; wi < w.size(); ++wi) {
    Word x = w[wi];
    while (x) {
      f(wi * kWordBits + static_cast<std::size_t>(std::countr_zero(x)));
      x &= x - 1;
    }
  }
}

inline void or_into(std::span<Word> dest, std::span<const Word> src) {
  for (std::size_t i = 0; i < src.size(); ++i) dest[i] |= src[i];
}

// dest |= src shifted left by bit_offset; src carries src_bits valid bits
// (higher bits zero). Caller guarantees bit_offset + src_bits fits in dest.
inline void or_shifted(std::span<Word> dest, std::span<const Word> src,
                       std::size_t src_bits, std::size_t bit_offset) {
  const std::size_t sw = words_for(src_bits);
  const std::size_t wid = bit_offset / kWordBits;
  const std::size_t off = bit_offset % kWordBits;
  if (off == 0) {
    for (std::size_t i = 0; i < sw; ++i) dest[wid + i] |= src[i];
    return;
  }
  for (std::size_t i = 0; i < sw; ++i) {
    dest[wid + i] |= src[i] << off;
    const Word hi = src[i] >> (kWordBits - off);
    if (hi) dest[wid + i + 1] |= hi;
  }
}

// Packed bit vector; trailing bits of the last word are kept zero so
// popcounts need no masking.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n) : n_(n), w_(words_for(n), 0) {}

  static BitVector from_string(std::string_view s) {
    BitVector v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1')
        v.set(i);
      else if (s[i] != '0')
        throw std::invalid_argument("BitVector::from_string: expected 0/1");
    }
    return v;
  }

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  bool test(std::size_t i) const {
    return (w_[i / kWordBits] >> (i % kWordBits)) & 1u;
  }
  void set(std::size_t i, bool v = true) {
    const Word m = Word{1} << (i % kWordBits);
    if (v)
      w_[i / kWordBits] |= m;
    else
      w_[i / kWordBits] &= ~m;
  }

  std::int64_t popcount() const { return btc::popcount(words()); }

  std::span<const Word> words() const { return {w_.data(), w_.size()}; }
  std::span<Word> words_mut() { return {w_.data(), w_.size()}; }

  bool operator==(const BitVector& o) const = default;

  std::string to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
      if (test(i)) s[i] = '1';
    return s;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Word> w_;
};

// bits [start, start+len) of a packed sequence, as a fresh BitVector
inline BitVector extract_bits(std::span<const Word> w, std::size_t start,
                              std::size_t len) {
  BitVector out(len);
  auto d = out.words_mut();
  const std::size_t wid = start / kWordBits;
  const std::size_t off = start % kWordBits;
  const std::size_t ow = words_for(len);
  for (std::size_t i = 0; i < ow; ++i) {
    Word x = w[wid + i] >> off;
    if (off != 0 && wid + i + 1 < w.size()) x |= w[wid + i + 1] << (kWordBits - off);
    d[i] = x;
  }
  // clear tail past len
  const std::size_t tail = len % kWordBits;
  if (tail != 0) d[ow - 1] &= (Word{1} << tail) - 1;
  return out;
}

}  // namespace btc

#endif

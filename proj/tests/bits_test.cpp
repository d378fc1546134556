#include <doctest.h>

#include <algorithm>
#include <vector>

#include "btc/bits.hpp"
#include "btc/rng.hpp"

using namespace btc;

TEST_CASE("bit vector basics") {
  BitVector v(130);
  CHECK(v.size() == 130);
  CHECK(v.popcount() == 0);
  v.set(0);
  v.set(64);
  v.set(129);
  CHECK(v.popcount() == 3);
  CHECK(v.test(64));
  v.set(64, false);
  CHECK_FALSE(v.test(64));
  CHECK(v.popcount() == 2);
}

TEST_CASE("from_string round trip") {
  const auto v = BitVector::from_string("1011001");
  CHECK(v.to_string() == "1011001");
  CHECK(v.popcount() == 4);
  CHECK_THROWS_AS(BitVector::from_string("10x"), std::invalid_argument);
}

TEST_CASE("word kernels") {
  const auto a = BitVector::from_string("110101");
  const auto b = BitVector::from_string("011101");
  CHECK(and_popcount(a.words(), b.words()) == 3);
  CHECK(xor_popcount(a.words(), b.words()) == 2);
  CHECK(andnot_popcount(a.words(), b.words()) == 1);
  CHECK(andnot_popcount(b.words(), a.words()) == 1);
}

TEST_CASE("or_shifted and extract_bits invert each other") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t src_bits = 1 + uniform_below(rng, 150);
    const std::size_t offset = uniform_below(rng, 200);
    BitVector src(src_bits);
    for (std::size_t i = 0; i < src_bits; ++i)
      if (bernoulli_bit(rng, 0.4)) src.set(i);

    BitVector dest(offset + src_bits + 17);
    or_shifted(dest.words_mut(), src.words(), src_bits, offset);
    CHECK(extract_bits(dest.words(), offset, src_bits) == src);
    CHECK(dest.popcount() == src.popcount());
  }
}

TEST_CASE("for_each_set_bit enumerates in order") {
  BitVector v(70);
  for (std::size_t p : {1u, 9u, 65u, 68u}) v.set(p);
  std::vector<std::size_t> seen;
  for_each_set_bit(v.words(), [&](std::size_t p) { seen.push_back(p); });
  CHECK(seen == std::vector<std::size_t>{1, 9, 65, 68});
}

TEST_CASE("sample_distinct draws k distinct in range") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + uniform_below(rng, 30);
    const std::size_t k = 1 + uniform_below(rng, n);
    auto s = sample_distinct(rng, n, k);
    CHECK(s.size() == k);
    std::sort(s.begin(), s.end());
    CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
    CHECK(s.back() < n);
  }
}

TEST_CASE("derived seeds differ per stream") {
  CHECK(derive_seed(0, 0) != derive_seed(0, 1));
  CHECK(derive_seed(0, 0) != derive_seed(1, 0));
  CHECK(derive_seed(42, 7) == derive_seed(42, 7));
}

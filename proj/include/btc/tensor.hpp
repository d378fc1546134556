#ifndef BTC_TENSOR_HPP
#define BTC_TENSOR_HPP

#include <array>
#include <cstdint>

#include "btc/matrix.hpp"

namespace btc {

// n x m x l binary tensor, stored as its mode-3 unfolding: one bit-packed
// row per frontal slice, the slice vectorized column-major (cell (i,j,k)
// lives in row k at flat position j*n + i). One bit per cell apart from
// per-row word padding. Indices are 0-based; file formats are 1-based.
class BinaryTensor3 {
 public:
  BinaryTensor3() = default;
  BinaryTensor3(std::size_t n, std::size_t m, std::size_t l)
      : n_(n), m_(m), l_(l), x3_(l, n * m) {}

  static BinaryTensor3 from_triples(
      std::size_t n, std::size_t m, std::size_t l,
      std::span<const std::array<std::size_t, 3>> entries);

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  std::size_t l() const { return l_; }
  std::int64_t cell_count() const {
    return static_cast<std::int64_t>(n_) * m_ * l_;
  }

  bool test(std::size_t i, std::size_t j, std::size_t k) const {
    return x3_.test(k, j * n_ + i);
  }
  void set(std::size_t i, std::size_t j, std::size_t k, bool v = true) {
    x3_.set(k, j * n_ + i, v);
  }

  std::int64_t ones() const { return x3_.popcount(); }

  std::span<const Word> slice_row(std::size_t k) const { return x3_.row(k); }
  std::span<Word> slice_row_mut(std::size_t k) { return x3_.row_mut(k); }
  const BinaryMatrix& mode3() const { return x3_; }

  // x n x m frontal slice, materialized
  BinaryMatrix slice(std::size_t k) const;

  std::size_t storage_bytes() const { return x3_.storage_bytes(); }

  bool operator==(const BinaryTensor3& o) const = default;

 private:
  std::size_t n_ = 0, m_ = 0, l_ = 0;
  BinaryMatrix x3_;
};

std::int64_t similarity(const BinaryTensor3& x, const BinaryTensor3& y);

// mode-n matricization; fibers of the chosen mode become columns:
//   mode 1: n x (m*l), column j + k*m
//   mode 2: m x (n*l), column i + k*n
//   mode 3: l x (n*m), column i + j*n
BinaryMatrix unfold(const BinaryTensor3& x, int mode);
BinaryTensor3 fold(const BinaryMatrix& u, int mode, std::size_t n,
                   std::size_t m, std::size_t l);

// Permutes so the requested mode becomes the third (clustered) one.
// mode 1 -> dims (m, l, n); mode 2 -> dims (n, l, m); mode 3 -> copy.
BinaryTensor3 permute_mode_last(const BinaryTensor3& x, int mode);

struct FactorTriple {
  BinaryMatrix A;  // n x k
  BinaryMatrix B;  // m x k
  BinaryMatrix C;  // l x k
};

// every row of c has exactly one nonzero
bool is_cluster_assignment(const BinaryMatrix& c);

// x_ijk = OR_t A_it B_jt C_kt
BinaryTensor3 bcp_reconstruct(const FactorTriple& f);

struct TuckerModel {
  BinaryTensor3 core;  // r1 x r2 x r3
  BinaryMatrix A;      // n x r1
  BinaryMatrix B;      // m x r2
  BinaryMatrix C;      // l x r3
};

// x_ijk = OR_{abc} g_abc A_ia B_jb C_kc
BinaryTensor3 tucker_reconstruct(const TuckerModel& t);

}  // namespace btc

#endif

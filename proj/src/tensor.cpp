#include "btc/tensor.hpp"

#include <stdexcept>
#include <string>

namespace btc {

BinaryTensor3 BinaryTensor3::from_triples(
    std::size_t n, std::size_t m, std::size_t l,
    std::span<const std::array<std::size_t, 3>> entries) {
  BinaryTensor3 x(n, m, l);
  for (const auto& e : entries) {
    if (e[0] >= n || e[1] >= m || e[2] >= l)
      throw std::out_of_range("from_triples: index (" + std::to_string(e[0]) +
                              "," + std::to_string(e[1]) + "," +
                              std::to_string(e[2]) + ") out of bounds");
    x.set(e[0], e[1], e[2]);
  }
  return x;
}

BinaryMatrix BinaryTensor3::slice(std::size_t k) const {
  return reshape_col_major_transposed(slice_row(k), n_, m_).transpose();
}

std::int64_t similarity(const BinaryTensor3& x, const BinaryTensor3& y) {
  if (x.n() != y.n() || x.m() != y.m() || x.l() != y.l())
    throw std::invalid_argument("similarity: dimension mismatch");
  return similarity(x.mode3(), y.mode3());
}

BinaryMatrix unfold(const BinaryTensor3& x, int mode) {
  const std::size_t n = x.n(), m = x.m(), l = x.l();
  switch (mode) {
    case 3:
      return x.mode3();
    case 1: {
      BinaryMatrix u(n, m * l);
      for (std::size_t k = 0; k < l; ++k)
        for_each_set_bit(x.slice_row(k), [&](std::size_t p) {
          u.set(p % n, p / n + k * m);
        });
      return u;
    }
    case 2: {
      BinaryMatrix u(m, n * l);
      for (std::size_t k = 0; k < l; ++k)
        for_each_set_bit(x.slice_row(k), [&](std::size_t p) {
          u.set(p / n, p % n + k * n);
        });
      return u;
    }
    default:
      throw std::invalid_argument("unfold: mode must be 1, 2 or 3");
  }
}

BinaryTensor3 fold(const BinaryMatrix& u, int mode, std::size_t n,
                   std::size_t m, std::size_t l) {
  auto expect = [&](std::size_t r, std::size_t c) {
    if (u.rows() != r || u.cols() != c)
      throw std::invalid_argument("fold: matrix shape does not match dims");
  };
  BinaryTensor3 x(n, m, l);
  switch (mode) {
    case 3:
      expect(l, n * m);
      for (std::size_t k = 0; k < l; ++k)
        for_each_set_bit(u.row(k),
                         [&](std::size_t p) { x.set(p % n, p / n, k); });
      return x;
    case 1:
      expect(n, m * l);
      for (std::size_t i = 0; i < n; ++i)
        for_each_set_bit(u.row(i),
                         [&](std::size_t p) { x.set(i, p % m, p / m); });
      return x;
    case 2:
      expect(m, n * l);
      for (std::size_t j = 0; j < m; ++j)
        for_each_set_bit(u.row(j),
                         [&](std::size_t p) { x.set(p % n, j, p / n); });
      return x;
    default:
      throw std::invalid_argument("fold: mode must be 1, 2 or 3");
  }
}

BinaryTensor3 permute_mode_last(const BinaryTensor3& x, int mode) {
  const std::size_t n = x.n(), m = x.m(), l = x.l();
  switch (mode) {
    case 3:
      return x;
    case 1: {
      BinaryTensor3 y(m, l, n);
      for (std::size_t k = 0; k < l; ++k)
        for_each_set_bit(x.slice_row(k), [&](std::size_t p) {
          y.set(p / n, k, p % n);
        });
      return y;
    }
    case 2: {
      BinaryTensor3 y(n, l, m);
      for (std::size_t k = 0; k < l; ++k)
        for_each_set_bit(x.slice_row(k), [&](std::size_t p) {
          y.set(p % n, k, p / n);
        });
      return y;
    }
    default:
      throw std::invalid_argument("permute: mode must be 1, 2 or 3");
  }
}

bool is_cluster_assignment(const BinaryMatrix& c) {
  for (std::size_t r = 0; r < c.rows(); ++r)
    if (c.row_popcount(r) != 1) return false;
  return true;
}

BinaryTensor3 bcp_reconstruct(const FactorTriple& f) {
  const std::size_t n = f.A.rows(), m = f.B.rows(), l = f.C.rows();
  const std::size_t k = f.A.cols();
  if (f.B.cols() != k || f.C.cols() != k)
    throw std::invalid_argument("bcp_reconstruct: factor rank mismatch");
  std::vector<BitVector> comp(k);
  for (std::size_t t = 0; t < k; ++t)
    comp[t] = kronecker(f.B.column_vector(t), f.A.column_vector(t));
  BinaryTensor3 x(n, m, l);
  for (std::size_t s = 0; s < l; ++s) {
    auto dst = x.slice_row_mut(s);
    for_each_set_bit(f.C.row(s),
                     [&](std::size_t t) { or_into(dst, comp[t].words()); });
  }
  return x;
}

BinaryTensor3 tucker_reconstruct(const TuckerModel& t) {
  const std::size_t r1 = t.core.n(), r2 = t.core.m(), r3 = t.core.l();
  if (t.A.cols() != r1 || t.B.cols() != r2 || t.C.cols() != r3)
    throw std::invalid_argument("tucker_reconstruct: factor/core mismatch");
  const std::size_t n = t.A.rows(), m = t.B.rows(), l = t.C.rows();
  // per-core-slice OR of b_beta (x) a_alpha, built lazily
  std::vector<BitVector> per_gamma(r3);
  std::vector<bool> built(r3, false);
  auto gamma_rows = [&](std::size_t g) -> const BitVector& {
    if (!built[g]) {
      BitVector acc(n * m);
      for (std::size_t a = 0; a < r1; ++a)
        for (std::size_t b = 0; b < r2; ++b)
          if (t.core.test(a, b, g))
            or_into(acc.words_mut(),
                    kronecker(t.B.column_vector(b), t.A.column_vector(a)).words());
      per_gamma[g] = std::move(acc);
      built[g] = true;
    }
    return per_gamma[g];
  };
  BinaryTensor3 x(n, m, l);
  for (std::size_t s = 0; s < l; ++s) {
    auto dst = x.slice_row_mut(s);
    for_each_set_bit(t.C.row(s), [&](std::size_t g) {
      or_into(dst, gamma_rows(g).words());
    });
  }
  return x;
}

}  // namespace btc

#include "btc/matrix.hpp"

#include <charconv>
#include <stdexcept>
#include <string>

namespace btc {

void Weight::validate() const {
  if (den < 1 || num < den)
    throw std::invalid_argument("weight must be >= 1 (num/den with num >= den >= 1)");
}

Weight Weight::parse(std::string_view s) {
  auto parse_int = [](std::string_view t) -> std::int64_t {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size())
      throw std::invalid_argument("bad weight: " + std::string(t));
    return v;
  };
  Weight w;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    w.num = parse_int(s.substr(0, slash));
    w.den = parse_int(s.substr(slash + 1));
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    const std::string_view frac = s.substr(dot + 1);
    if (frac.empty() || frac.size() > 9)
      throw std::invalid_argument("bad weight: " + std::string(s));
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    w.num = parse_int(s.substr(0, dot)) * scale + parse_int(frac);
    w.den = scale;
  } else {
    w.num = parse_int(s);
    w.den = 1;
  }
  w.validate();
  return w;
}

BinaryMatrix BinaryMatrix::identity(std::size_t n) {
  BinaryMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

BinaryMatrix BinaryMatrix::from_rows(std::initializer_list<std::string_view> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  BinaryMatrix m(r, c);
  std::size_t i = 0;
  for (auto s : rows) {
    if (s.size() != c) throw std::invalid_argument("ragged rows");
    for (std::size_t j = 0; j < c; ++j) {
      if (s[j] == '1')
        m.set(i, j);
      else if (s[j] != '0')
        throw std::invalid_argument("expected 0/1");
    }
    ++i;
  }
  return m;
}

void BinaryMatrix::set_row(std::size_t r, const BitVector& v) {
  if (v.size() != cols_) throw std::invalid_argument("set_row: length mismatch");
  auto dst = row_mut(r);
  auto src = v.words();
  for (std::size_t i = 0; i < wpr_; ++i) dst[i] = src[i];
}

BitVector BinaryMatrix::row_vector(std::size_t r) const {
  BitVector v(cols_);
  auto dst = v.words_mut();
  auto src = row(r);
  for (std::size_t i = 0; i < wpr_; ++i) dst[i] = src[i];
  return v;
}

BitVector BinaryMatrix::column_vector(std::size_t c) const {
  BitVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    if (test(r, c)) v.set(r);
  return v;
}

BinaryMatrix BinaryMatrix::transpose() const {
  BinaryMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for_each_set_bit(row(r), [&](std::size_t c) { t.set(c, r); });
  return t;
}

std::int64_t similarity(const BinaryMatrix& x, const BinaryMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw std::invalid_argument("similarity: dimension mismatch");
  std::int64_t ham = 0;
  for (std::size_t r = 0; r < x.rows(); ++r) ham += xor_popcount(x.row(r), y.row(r));
  return x.cell_count() - ham;
}

std::int64_t similarity(const BitVector& x, const BitVector& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("similarity: length mismatch");
  return static_cast<std::int64_t>(x.size()) - xor_popcount(x.words(), y.words());
}

std::int64_t weighted_similarity_scaled(std::span<const Word> x,
                                        std::span<const Word> y,
                                        std::size_t len, Weight w) {
  const std::int64_t c11 = and_popcount(x, y);
  const std::int64_t cx = popcount(x);
  const std::int64_t cy = popcount(y);
  const std::int64_t c00 = static_cast<std::int64_t>(len) - cx - cy + c11;
  return w.num * c11 + w.den * c00;
}

std::int64_t weighted_cost_scaled(std::span<const Word> x,
                                  std::span<const Word> y, std::size_t len,
                                  Weight w) {
  const std::int64_t c11 = and_popcount(x, y);
  const std::int64_t c10 = popcount(x) - c11;
  const std::int64_t c01 = popcount(y) - c11;
  (void)len;
  return w.num * c10 + w.den * c01;
}

std::int64_t weighted_similarity_scaled(const BitVector& x, const BitVector& y,
                                        Weight w) {
  if (x.size() != y.size())
    throw std::invalid_argument("weighted similarity: length mismatch");
  w.validate();
  return weighted_similarity_scaled(x.words(), y.words(), x.size(), w);
}

std::int64_t weighted_cost_scaled(const BitVector& x, const BitVector& y,
                                  Weight w) {
  if (x.size() != y.size())
    throw std::invalid_argument("weighted cost: length mismatch");
  w.validate();
  return weighted_cost_scaled(x.words(), y.words(), x.size(), w);
}

BinaryMatrix outer(const BitVector& a, const BitVector& b) {
  BinaryMatrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.test(i)) m.set_row(i, b);
  return m;
}

BitVector kronecker(const BitVector& x, const BitVector& y) {
  const std::size_t q = y.size();
  BitVector out(x.size() * q);
  if (q == 0) return out;
  for_each_set_bit(x.words(), [&](std::size_t i) {
    or_shifted(out.words_mut(), y.words(), q, i * q);
  });
  return out;
}

BinaryMatrix khatri_rao(const BinaryMatrix& x, const BinaryMatrix& y) {
  if (x.cols() != y.cols())
    throw std::invalid_argument("khatri_rao: column count mismatch");
  BinaryMatrix out(x.rows() * y.rows(), x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    const BitVector col = kronecker(x.column_vector(c), y.column_vector(c));
    for_each_set_bit(col.words(), [&](std::size_t r) { out.set(r, c); });
  }
  return out;
}

BinaryMatrix boolean_product(const BinaryMatrix& x, const BinaryMatrix& y) {
  if (x.cols() != y.rows())
    throw std::invalid_argument("boolean_product: inner dimension mismatch");
  BinaryMatrix out(x.rows(), y.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto dst = out.row_mut(r);
    for_each_set_bit(x.row(r), [&](std::size_t k) { or_into(dst, y.row(k)); });
  }
  return out;
}

BinaryMatrix reshape_col_major(const BitVector& x, std::size_t n, std::size_t m) {
  if (x.size() != n * m)
    throw std::invalid_argument("reshape: length does not match n*m");
  BinaryMatrix out(n, m);
  for_each_set_bit(x.words(), [&](std::size_t p) { out.set(p % n, p / n); });
  return out;
}

BitVector flatten_col_major(const BinaryMatrix& y) {
  BitVector x(y.rows() * y.cols());
  for (std::size_t r = 0; r < y.rows(); ++r)
    for_each_set_bit(y.row(r), [&](std::size_t c) { x.set(c * y.rows() + r); });
  return x;
}

BinaryMatrix reshape_col_major_transposed(std::span<const Word> x, std::size_t n,
                                          std::size_t m) {
  BinaryMatrix out(m, n);
  for (std::size_t j = 0; j < m; ++j)
    out.set_row(j, extract_bits(x, j * n, n));
  return out;
}

}  // namespace btc

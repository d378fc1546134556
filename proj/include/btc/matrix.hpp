#ifndef BTC_MATRIX_HPP
#define BTC_MATRIX_HPP

#include <cstdint>
#include <initializer_list>
#include <string_view>

#include "btc/bits.hpp"

namespace btc {

// Disagreement weight w = num/den >= 1: representing a data 1 as a 0
// costs w, representing a data 0 as a 1 costs 1. Kept as an exact
// integer ratio so score comparisons never tie-break on float noise.
struct Weight {
  std::int64_t num = 1;
  std::int64_t den = 1;

  bool is_unit() const { return num == den; }
  void validate() const;
  static Weight parse(std::string_view s);  // "10", "2.5", "5/2"

  bool operator==(const Weight& o) const = default;
};

// Bit-packed binary matrix, row-major, each row padded to a whole number
// of 64-bit words. Padding bits stay zero.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), wpr_(words_for(cols)), w_(rows * wpr_, 0) {}

  static BinaryMatrix identity(std::size_t n);
  static BinaryMatrix from_rows(std::initializer_list<std::string_view> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_row() const { return wpr_; }
  std::size_t storage_bytes() const { return w_.size() * sizeof(Word); }

  bool test(std::size_t r, std::size_t c) const {
    return (w_[r * wpr_ + c / kWordBits] >> (c % kWordBits)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool v = true) {
    const Word m = Word{1} << (c % kWordBits);
    if (v)
      w_[r * wpr_ + c / kWordBits] |= m;
    else
      w_[r * wpr_ + c / kWordBits] &= ~m;
  }

  std::span<const Word> row(std::size_t r) const {
    return {w_.data() + r * wpr_, wpr_};
  }
  std::span<Word> row_mut(std::size_t r) { return {w_.data() + r * wpr_, wpr_}; }

  void set_row(std::size_t r, const BitVector& v);
  BitVector row_vector(std::size_t r) const;
  BitVector column_vector(std::size_t c) const;

  std::int64_t popcount() const { return btc::popcount({w_.data(), w_.size()}); }
  std::int64_t row_popcount(std::size_t r) const { return btc::popcount(row(r)); }
  std::int64_t cell_count() const {
    return static_cast<std::int64_t>(rows_) * static_cast<std::int64_t>(cols_);
  }

  BinaryMatrix transpose() const;

  bool operator==(const BinaryMatrix& o) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
  std::vector<Word> w_;
};

// sim(X, Y) = rows*cols - |X xor Y|
std::int64_t similarity(const BinaryMatrix& x, const BinaryMatrix& y);
std::int64_t similarity(const BitVector& x, const BitVector& y);

// Weighted scores, scaled by w.den so they stay integral.
// similarity flavor: w.num * #(x=1,y=1) + w.den * #(x=0,y=0)
// cost flavor:       w.num * #(x=1,y=0) + w.den * #(x=0,y=1)
// With w = 1 the similarity flavor equals plain similarity.
std::int64_t weighted_similarity_scaled(std::span<const Word> x,
                                        std::span<const Word> y,
                                        std::size_t len, Weight w);
std::int64_t weighted_cost_scaled(std::span<const Word> x,
                                  std::span<const Word> y, std::size_t len,
                                  Weight w);
std::int64_t weighted_similarity_scaled(const BitVector& x, const BitVector& y,
                                        Weight w);
std::int64_t weighted_cost_scaled(const BitVector& x, const BitVector& y,
                                  Weight w);

// outer product a b^T (n x m)
BinaryMatrix outer(const BitVector& a, const BitVector& b);

// Kronecker product of vectors: out[i*len(y) + j] = x_i y_j
BitVector kronecker(const BitVector& x, const BitVector& y);

// column-wise Kronecker; X (p x r), Y (q x r) -> (p*q x r)
BinaryMatrix khatri_rao(const BinaryMatrix& x, const BinaryMatrix& y);

// Boolean OR-AND product
BinaryMatrix boolean_product(const BinaryMatrix& x, const BinaryMatrix& y);

// x (length n*m) reshaped to n x m with entry (i,j) = x[j*n + i]
BinaryMatrix reshape_col_major(const BitVector& x, std::size_t n, std::size_t m);
BitVector flatten_col_major(const BinaryMatrix& y);
// same reshape but transposed (m x n); rows are contiguous runs of x,
// so this is the cheap form. reshape_col_major(x,n,m) == this->transpose().
BinaryMatrix reshape_col_major_transposed(std::span<const Word> x, std::size_t n,
                                          std::size_t m);

}  // namespace btc

#endif

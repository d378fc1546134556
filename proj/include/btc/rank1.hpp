#ifndef BTC_RANK1_HPP
#define BTC_RANK1_HPP

#include <cstdint>

#include "btc/matrix.hpp"

namespace btc {

// Binary rank-1 approximation a b^T of a binary matrix, scored by the
// number of agreeing cells.
struct Rank1Pair {
  BitVector a;
  BitVector b;
  std::int64_t sim = 0;  // plain (unweighted) similarity

  bool operator==(const Rank1Pair& o) const = default;
};

// Column-wise majority over the rows selected by a: b_j = 1 iff strictly
// more selected rows have a 1 than a 0 in column j (weighted: ones count
// w times). |a| = 0 and exact ties give 0.
BitVector solve_b_given_a(const BinaryMatrix& x, const BitVector& a,
                          Weight w = {});

// Per-row decision: a_i = 1 iff representing row i by b beats representing
// it by the zero row under the (weighted) similarity; ties give 0.
BitVector solve_a_given_b(const BinaryMatrix& x, const BitVector& b,
                          Weight w = {});

// Deterministic approximation: tries every row of x as b (transposing
// first when that side is shorter), solves the other side per candidate,
// and keeps the best; the all-zero pair is always a candidate, so the
// result is never worse than the empty decomposition. O(nm min(n,m)).
// Approximation ratio 2*sqrt(2)-2 ~ 0.828 on the optimal similarity.
Rank1Pair rank1_approx(const BinaryMatrix& x, Weight w = {});

struct PtasOptions {
  double eps = 0.3;               // target (1-eps) expected ratio
  std::uint64_t seed = 0;
  int sample_constant = 1;        // c in s = ceil(c / eps^2)
  std::size_t* partitions_evaluated = nullptr;  // instrumentation
};

// Randomized scheme: draws s = ceil(c/eps^2) rows with replacement
// (duplicates kept; they reweight the majority), enumerates all 2^s
// incidence vectors over the sample, solves b on the sample and re-solves
// a on the full matrix for each, and keeps the best pair found. Expected
// similarity is within (1-eps) of the optimum. s is capped at 24 since
// the 2^s enumeration is infeasible beyond that.
Rank1Pair rank1_ptas(const BinaryMatrix& x, const PtasOptions& opts);

// Exact maximum-similarity pair by enumerating every bit vector on the
// smaller side and solving the other side optimally. Rejects instances
// with min(n,m) > cap.
Rank1Pair rank1_brute(const BinaryMatrix& x, std::size_t cap = 20);

}  // namespace btc

#endif

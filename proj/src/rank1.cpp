#include "btc/rank1.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "btc/rng.hpp"

namespace btc {

namespace {

struct Scores {
  std::int64_t sim = 0;   // plain similarity
  std::int64_t wsim = 0;  // weighted, scaled by w.den
};

// score of the model a b^T against z, using precomputed row popcounts
Scores pair_scores(const BinaryMatrix& z, const BitVector& a, const BitVector& b,
                   Weight w, std::span<const std::int64_t> row_ones) {
  const auto cols = static_cast<std::int64_t>(z.cols());
  const std::int64_t cb = b.popcount();
  Scores s;
  for (std::size_t i = 0; i < z.rows(); ++i) {
    if (a.test(i)) {
      const std::int64_t c11 = and_popcount(z.row(i), b.words());
      s.sim += cols - (row_ones[i] + cb - 2 * c11);
      s.wsim += w.num * c11 + w.den * (cols - row_ones[i] - cb + c11);
    } else {
      s.sim += cols - row_ones[i];
      s.wsim += w.den * (cols - row_ones[i]);
    }
  }
  return s;
}

std::vector<std::int64_t> row_popcounts(const BinaryMatrix& z) {
  std::vector<std::int64_t> rc(z.rows());
  for (std::size_t i = 0; i < z.rows(); ++i) rc[i] = z.row_popcount(i);
  return rc;
}

}  // namespace

BitVector solve_b_given_a(const BinaryMatrix& x, const BitVector& a, Weight w) {
  if (a.size() != x.rows())
    throw std::invalid_argument("solve_b_given_a: length mismatch");
  w.validate();
  BitVector b(x.cols());
  const std::int64_t selected = a.popcount();
  if (selected == 0) return b;
  std::vector<std::int64_t> ones(x.cols(), 0);
  for (std::size_t i = 0; i < x.rows(); ++i)
    if (a.test(i))
      for_each_set_bit(x.row(i), [&](std::size_t j) { ++ones[j]; });
  // w*ones > zeros, i.e. (num+den)*ones > den*selected; ties stay 0
  for (std::size_t j = 0; j < x.cols(); ++j)
    if ((w.num + w.den) * ones[j] > w.den * selected) b.set(j);
  return b;
}

BitVector solve_a_given_b(const BinaryMatrix& x, const BitVector& b, Weight w) {
  if (b.size() != x.cols())
    throw std::invalid_argument("solve_a_given_b: length mismatch");
  w.validate();
  BitVector a(x.rows());
  const std::int64_t cb = b.popcount();
  if (cb == 0) return a;  // b = 0 ties the zero row everywhere
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const std::int64_t c11 = and_popcount(x.row(i), b.words());
    // sim(x_i, b) > sim(x_i, 0) reduces to (num+den)*c11 > den*|b|
    if ((w.num + w.den) * c11 > w.den * cb) a.set(i);
  }
  return a;
}

Rank1Pair rank1_approx(const BinaryMatrix& x, Weight w) {
  if (x.rows() == 0 || x.cols() == 0)
    throw std::invalid_argument("rank1_approx: empty matrix");
  w.validate();
  const bool flip = x.rows() > x.cols();
  const BinaryMatrix zt = flip ? x.transpose() : BinaryMatrix{};
  const BinaryMatrix& z = flip ? zt : x;

  const auto rc = row_popcounts(z);
  const auto rows = z.rows();

  std::vector<Scores> cand(rows);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < static_cast<long>(rows); ++i) {
    const BitVector b = z.row_vector(static_cast<std::size_t>(i));
    const BitVector a = solve_a_given_b(z, b, w);
    cand[static_cast<std::size_t>(i)] = pair_scores(z, a, b, w, rc);
  }

  // zero decomposition as the baseline; rows replace it only when
  // strictly better, lowest index winning ties
  Scores best = pair_scores(z, BitVector(rows), BitVector(z.cols()), w, rc);
  long best_idx = -1;
  for (long i = 0; i < static_cast<long>(rows); ++i)
    if (cand[static_cast<std::size_t>(i)].wsim > best.wsim) {
      best = cand[static_cast<std::size_t>(i)];
      best_idx = i;
    }

  Rank1Pair out;
  BitVector a(rows), b(z.cols());
  if (best_idx >= 0) {
    b = z.row_vector(static_cast<std::size_t>(best_idx));
    a = solve_a_given_b(z, b, w);
  }
  out.sim = best.sim;
  out.a = flip ? std::move(b) : std::move(a);
  out.b = flip ? std::move(a) : std::move(b);
  return out;
}

Rank1Pair rank1_ptas(const BinaryMatrix& x, const PtasOptions& opts) {
  if (x.rows() == 0 || x.cols() == 0)
    throw std::invalid_argument("rank1_ptas: empty matrix");
  if (!(opts.eps > 0.0 && opts.eps < 1.0))
    throw std::invalid_argument("rank1_ptas: eps must be in (0,1)");
  if (opts.sample_constant < 1)
    throw std::invalid_argument("rank1_ptas: sample constant must be >= 1");
  const double raw = std::ceil(opts.sample_constant / (opts.eps * opts.eps));
  if (raw > 24)
    throw std::invalid_argument(
        "rank1_ptas: sample size ceil(c/eps^2) exceeds 24; the 2^s "
        "enumeration is infeasible");
  const std::size_t s = static_cast<std::size_t>(raw);

  Rng rng(opts.seed);
  BinaryMatrix xs(s, x.cols());
  for (std::size_t t = 0; t < s; ++t)
    xs.set_row(t, x.row_vector(static_cast<std::size_t>(
                      uniform_below(rng, x.rows()))));

  const auto rc = row_popcounts(x);
  const Weight unit{};
  const std::uint64_t nmask = std::uint64_t{1} << s;
  if (opts.partitions_evaluated) *opts.partitions_evaluated = nmask;

  // fixed chunking so the reduction is identical for any thread count
  const std::uint64_t nchunk = std::min<std::uint64_t>(nmask, 256);
  struct ChunkBest {
    std::int64_t sim = -1;
    std::uint64_t mask = 0;
  };
  std::vector<ChunkBest> chunk_best(nchunk);

#pragma omp parallel for schedule(static)
  for (long c = 0; c < static_cast<long>(nchunk); ++c) {
    const std::uint64_t lo = nmask * c / nchunk;
    const std::uint64_t hi = nmask * (c + 1) / nchunk;
    ChunkBest cb;
    for (std::uint64_t mask = lo; mask < hi; ++mask) {
      BitVector inc(s);
      if (s > 0) inc.words_mut()[0] = mask;
      const BitVector b = solve_b_given_a(xs, inc, unit);
      const BitVector a = solve_a_given_b(x, b, unit);
      const std::int64_t sim = pair_scores(x, a, b, unit, rc).sim;
      if (sim > cb.sim) {
        cb.sim = sim;
        cb.mask = mask;
      }
    }
    chunk_best[static_cast<std::size_t>(c)] = cb;
  }

  ChunkBest best;
  for (const auto& cb : chunk_best)
    if (cb.sim > best.sim) best = cb;

  // zero decomposition fallback
  const Scores zero =
      pair_scores(x, BitVector(x.rows()), BitVector(x.cols()), unit, rc);

  Rank1Pair out;
  if (best.sim > zero.sim) {
    BitVector inc(s);
    if (s > 0) inc.words_mut()[0] = best.mask;
    out.b = solve_b_given_a(xs, inc, unit);
    out.a = solve_a_given_b(x, out.b, unit);
    out.sim = best.sim;
  } else {
    out.a = BitVector(x.rows());
    out.b = BitVector(x.cols());
    out.sim = zero.sim;
  }
  return out;
}

Rank1Pair rank1_brute(const BinaryMatrix& x, std::size_t cap) {
  if (x.rows() == 0 || x.cols() == 0)
    throw std::invalid_argument("rank1_brute: empty matrix");
  const bool flip = x.rows() > x.cols();
  const BinaryMatrix zt = flip ? x.transpose() : BinaryMatrix{};
  const BinaryMatrix& z = flip ? zt : x;
  const std::size_t rows = z.rows();
  if (rows > cap)
    throw std::invalid_argument("rank1_brute: instance above enumeration cap");

  const auto rc = row_popcounts(z);
  const Weight unit{};
  const std::uint64_t nmask = std::uint64_t{1} << rows;
  const std::uint64_t nchunk = std::min<std::uint64_t>(nmask, 256);
  struct ChunkBest {
    std::int64_t sim = -1;
    std::uint64_t mask = 0;
  };
  std::vector<ChunkBest> chunk_best(nchunk);

#pragma omp parallel for schedule(static)
  for (long c = 0; c < static_cast<long>(nchunk); ++c) {
    const std::uint64_t lo = nmask * c / nchunk;
    const std::uint64_t hi = nmask * (c + 1) / nchunk;
    ChunkBest cb;
    for (std::uint64_t mask = lo; mask < hi; ++mask) {
      BitVector a(rows);
      a.words_mut()[0] = mask;
      const BitVector b = solve_b_given_a(z, a, unit);
      const std::int64_t sim = pair_scores(z, a, b, unit, rc).sim;
      if (sim > cb.sim) {
        cb.sim = sim;
        cb.mask = mask;
      }
    }
    chunk_best[static_cast<std::size_t>(c)] = cb;
  }

  ChunkBest best;
  for (const auto& cb : chunk_best)
    if (cb.sim > best.sim) best = cb;

  BitVector a(rows);
  a.words_mut()[0] = best.mask;
  BitVector b = solve_b_given_a(z, a, unit);
  Rank1Pair out;
  out.sim = best.sim;
  out.a = flip ? std::move(b) : std::move(a);
  out.b = flip ? std::move(a) : std::move(b);
  return out;
}

}  // namespace btc

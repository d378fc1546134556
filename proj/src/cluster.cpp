#include "btc/cluster.hpp"

#include <stdexcept>

#include "btc/rng.hpp"

namespace btc {

namespace {

// rank-1 restriction of one vectorized slice (Lemma-style reshaping: the
// slice row is solved as its n x m matrix; the transposed reshape is the
// cheap one, so roles are swapped back afterwards)
Rank1Pair restrict_slice(std::span<const Word> slice_row, std::size_t n,
                         std::size_t m, Weight w) {
  const BinaryMatrix zt = reshape_col_major_transposed(slice_row, n, m);
  Rank1Pair p = rank1_approx(zt, w);
  return Rank1Pair{std::move(p.b), std::move(p.a), p.sim};
}

BinaryMatrix rows_from_pairs(const std::vector<Rank1Pair>& pairs,
                             std::size_t n, std::size_t m) {
  BinaryMatrix rows(pairs.size(), n * m);
  for (std::size_t j = 0; j < pairs.size(); ++j)
    rows.set_row(j, kronecker(pairs[j].b, pairs[j].a));
  return rows;
}

void check_model_shape(std::size_t n, std::size_t m, std::size_t l,
                       std::size_t k, const std::vector<std::uint32_t>& asg,
                       const BinaryTensor3& x) {
  if (x.n() != n || x.m() != m || x.l() != l)
    throw std::invalid_argument("model does not match tensor dimensions");
  if (asg.size() != l) throw std::invalid_argument("assignment length mismatch");
  for (auto c : asg)
    if (c >= k) throw std::invalid_argument("assignment id out of range");
}

std::vector<std::size_t> sample_round(std::uint64_t seed, std::size_t t,
                                      std::size_t l, std::size_t k) {
  Rng rng(derive_seed(seed, t));
  return sample_distinct(rng, l, k);
}

}  // namespace

Assignment assign_clusters(const BinaryMatrix& x3,
                           const BinaryMatrix& centroid_rows, Weight w) {
  if (centroid_rows.rows() < 1)
    throw std::invalid_argument("assign_clusters: need at least one centroid");
  if (centroid_rows.cols() != x3.cols())
    throw std::invalid_argument("assign_clusters: row length mismatch");
  w.validate();

  const std::size_t l = x3.rows();
  const std::size_t k = centroid_rows.rows();
  const auto len = static_cast<std::int64_t>(x3.cols());

  std::vector<std::int64_t> cent_ones(k);
  for (std::size_t j = 0; j < k; ++j) cent_ones[j] = centroid_rows.row_popcount(j);

  Assignment out;
  out.cluster.resize(l);
  out.slice_sim.resize(l);
  std::vector<std::int64_t> slice_wsim(l);

#pragma omp parallel for schedule(static)
  for (long i = 0; i < static_cast<long>(l); ++i) {
    const auto row = x3.row(static_cast<std::size_t>(i));
    const std::int64_t ones = popcount(row);
    std::int64_t best_w = 0, best_sim = 0;
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const std::int64_t c11 = and_popcount(row, centroid_rows.row(j));
      const std::int64_t ws =
          w.num * c11 + w.den * (len - ones - cent_ones[j] + c11);
      if (j == 0 || ws > best_w) {
        best_w = ws;
        best_j = j;
        best_sim = len - (ones + cent_ones[j] - 2 * c11);
      }
    }
    out.cluster[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(best_j);
    out.slice_sim[static_cast<std::size_t>(i)] = best_sim;
    slice_wsim[static_cast<std::size_t>(i)] = best_w;
  }

  for (std::size_t i = 0; i < l; ++i) {
    out.sim += out.slice_sim[i];
    out.wsim += slice_wsim[i];
  }
  return out;
}

BinaryMatrix ClusterModel::centroid_rows() const {
  return rows_from_pairs(centroids, n, m);
}

BinaryMatrix ClusterModel::factor_a() const {
  BinaryMatrix a(n, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < n; ++i)
      if (centroids[j].a.test(i)) a.set(i, j);
  return a;
}

BinaryMatrix ClusterModel::factor_b() const {
  BinaryMatrix b(m, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < m; ++i)
      if (centroids[j].b.test(i)) b.set(i, j);
  return b;
}

BinaryMatrix ClusterModel::assignment_matrix() const {
  BinaryMatrix c(l, k);
  for (std::size_t s = 0; s < l; ++s) c.set(s, assignment[s]);
  return c;
}

ClusterModel saboteur(const BinaryTensor3& x, std::size_t k,
                      const SaboteurOptions& opts) {
  const std::size_t n = x.n(), m = x.m(), l = x.l();
  if (n == 0 || m == 0) throw std::invalid_argument("saboteur: empty tensor");
  if (k < 1 || k > l)
    throw std::invalid_argument("saboteur: need 1 <= k <= number of slices");
  if (opts.samples < 1)
    throw std::invalid_argument("saboteur: need at least one resample");
  opts.weight.validate();
  const Weight w = opts.weight;
  const std::size_t r = opts.samples;

  std::vector<std::int64_t> scores(r);
#pragma omp parallel for schedule(dynamic)
  for (long t = 0; t < static_cast<long>(r); ++t) {
    const auto rows = sample_round(opts.seed, static_cast<std::size_t>(t), l, k);
    std::vector<Rank1Pair> pairs(k);
    for (std::size_t j = 0; j < k; ++j)
      pairs[j] = restrict_slice(x.slice_row(rows[j]), n, m, w);
    const Assignment asg =
        assign_clusters(x.mode3(), rows_from_pairs(pairs, n, m), w);
    scores[static_cast<std::size_t>(t)] = asg.wsim;
  }

  std::size_t best_t = 0;
  for (std::size_t t = 1; t < r; ++t)
    if (scores[t] > scores[best_t]) best_t = t;

  // rebuild the winning round
  const auto rows = sample_round(opts.seed, best_t, l, k);
  ClusterModel model;
  model.n = n, model.m = m, model.l = l, model.k = k;
  model.weight = w;
  model.centroids.resize(k);
  for (std::size_t j = 0; j < k; ++j)
    model.centroids[j] = restrict_slice(x.slice_row(rows[j]), n, m, w);
  Assignment asg = assign_clusters(x.mode3(), model.centroid_rows(), w);
  model.assignment = std::move(asg.cluster);
  model.sim = asg.sim;
  model.wsim = asg.wsim;
  model.sample_scores = std::move(scores);

  if (opts.iterative_updates) {
    auto refined = iterative_updates(model, x, w);
    refined.sample_scores = std::move(model.sample_scores);
    return refined;
  }
  return model;
}

namespace {

// strict (weighted) majority over cluster members; empty clusters yield
// no row and the caller keeps the previous centroid
std::vector<BitVector> majority_rows(const BinaryMatrix& x3,
                                     const std::vector<std::uint32_t>& asg,
                                     std::size_t k, Weight w,
                                     std::vector<std::int64_t>& members) {
  const std::size_t cells = x3.cols();
  members.assign(k, 0);
  std::vector<std::vector<std::int64_t>> counts(
      k, std::vector<std::int64_t>(cells, 0));
  for (std::size_t s = 0; s < x3.rows(); ++s) {
    auto& cnt = counts[asg[s]];
    ++members[asg[s]];
    for_each_set_bit(x3.row(s), [&](std::size_t p) { ++cnt[p]; });
  }
  std::vector<BitVector> rows(k);
  for (std::size_t j = 0; j < k; ++j) {
    rows[j] = BitVector(cells);
    if (members[j] == 0) continue;
    for (std::size_t p = 0; p < cells; ++p)
      if ((w.num + w.den) * counts[j][p] > w.den * members[j]) rows[j].set(p);
  }
  return rows;
}

}  // namespace

ClusterModel iterative_updates(const ClusterModel& model,
                               const BinaryTensor3& x, Weight w,
                               int* rounds) {
  check_model_shape(model.n, model.m, model.l, model.k, model.assignment, x);
  w.validate();
  ClusterModel cur = model;
  std::int64_t cur_score = cur.wsim;
  int accepted = 0;
  while (true) {
    std::vector<std::int64_t> members;
    const auto maj =
        majority_rows(x.mode3(), cur.assignment, cur.k, w, members);
    std::vector<Rank1Pair> pairs(cur.k);
    for (std::size_t j = 0; j < cur.k; ++j)
      pairs[j] = members[j] == 0
                     ? cur.centroids[j]
                     : restrict_slice(maj[j].words(), cur.n, cur.m, w);
    Assignment asg =
        assign_clusters(x.mode3(), rows_from_pairs(pairs, cur.n, cur.m), w);
    if (asg.wsim <= cur_score) break;
    cur.centroids = std::move(pairs);
    cur.assignment = std::move(asg.cluster);
    cur.sim = asg.sim;
    cur.wsim = asg.wsim;
    cur_score = cur.wsim;
    ++accepted;
  }
  if (rounds) *rounds = accepted;
  return cur;
}

UnrestrictedModel unrestricted_btc(const BinaryTensor3& x, std::size_t k,
                                   const SaboteurOptions& opts) {
  const std::size_t n = x.n(), m = x.m(), l = x.l();
  if (n == 0 || m == 0)
    throw std::invalid_argument("unrestricted_btc: empty tensor");
  if (k < 1 || k > l)
    throw std::invalid_argument(
        "unrestricted_btc: need 1 <= k <= number of slices");
  if (opts.samples < 1)
    throw std::invalid_argument("unrestricted_btc: need at least one resample");
  opts.weight.validate();
  const Weight w = opts.weight;
  const std::size_t r = opts.samples;

  auto round_rows = [&](std::size_t t) {
    const auto idx = sample_round(opts.seed, t, l, k);
    BinaryMatrix rows(k, n * m);
    for (std::size_t j = 0; j < k; ++j)
      rows.set_row(j, x.mode3().row_vector(idx[j]));
    return rows;
  };

  std::vector<std::int64_t> scores(r);
#pragma omp parallel for schedule(dynamic)
  for (long t = 0; t < static_cast<long>(r); ++t) {
    const Assignment asg =
        assign_clusters(x.mode3(), round_rows(static_cast<std::size_t>(t)), w);
    scores[static_cast<std::size_t>(t)] = asg.wsim;
  }
  std::size_t best_t = 0;
  for (std::size_t t = 1; t < r; ++t)
    if (scores[t] > scores[best_t]) best_t = t;

  UnrestrictedModel model;
  model.n = n, model.m = m, model.l = l, model.k = k;
  model.weight = w;
  model.centroids = round_rows(best_t);
  Assignment asg = assign_clusters(x.mode3(), model.centroids, w);
  model.assignment = std::move(asg.cluster);
  model.sim = asg.sim;
  model.wsim = asg.wsim;
  model.sample_scores = std::move(scores);

  if (opts.iterative_updates) {
    // majority refinement without the rank-1 step
    std::int64_t cur_score = model.wsim;
    while (true) {
      std::vector<std::int64_t> members;
      const auto maj =
          majority_rows(x.mode3(), model.assignment, k, w, members);
      BinaryMatrix rows(k, n * m);
      for (std::size_t j = 0; j < k; ++j) {
        if (members[j] == 0)
          rows.set_row(j, model.centroids.row_vector(j));
        else
          rows.set_row(j, maj[j]);
      }
      Assignment next = assign_clusters(x.mode3(), rows, w);
      if (next.wsim <= cur_score) break;
      model.centroids = std::move(rows);
      model.assignment = std::move(next.cluster);
      model.sim = next.sim;
      model.wsim = next.wsim;
      cur_score = model.wsim;
    }
  }
  return model;
}

Assignment predict(const ClusterModel& model, const BinaryTensor3& heldout) {
  if (heldout.n() != model.n || heldout.m() != model.m)
    throw std::invalid_argument("predict: slice shape mismatch");
  return assign_clusters(heldout.mode3(), model.centroid_rows(), model.weight);
}

Assignment predict(const UnrestrictedModel& model, const BinaryTensor3& heldout) {
  if (heldout.n() != model.n || heldout.m() != model.m)
    throw std::invalid_argument("predict: slice shape mismatch");
  return assign_clusters(heldout.mode3(), model.centroids, model.weight);
}

namespace {

template <typename Model>
BinaryTensor3 reconstruct_from_rows(const Model& model,
                                    const BinaryMatrix& rows) {
  BinaryTensor3 out(model.n, model.m, model.l);
  for (std::size_t s = 0; s < model.l; ++s)
    or_into(out.slice_row_mut(s), rows.row(model.assignment[s]));
  return out;
}

}  // namespace

BinaryTensor3 reconstruct(const ClusterModel& model) {
  return reconstruct_from_rows(model, model.centroid_rows());
}

BinaryTensor3 reconstruct(const UnrestrictedModel& model) {
  return reconstruct_from_rows(model, model.centroids);
}

}  // namespace btc

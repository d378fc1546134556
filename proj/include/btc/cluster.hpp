#ifndef BTC_CLUSTER_HPP
#define BTC_CLUSTER_HPP

#include <cstdint>
#include <vector>

#include "btc/rank1.hpp"
#include "btc/tensor.hpp"

namespace btc {

struct SaboteurOptions {
  std::size_t samples = 20;  // resampling rounds r
  std::uint64_t seed = 0;
  Weight weight{};
  bool iterative_updates = false;
};

struct Assignment {
  std::vector<std::uint32_t> cluster;   // per slice, 0-based
  std::vector<std::int64_t> slice_sim;  // plain similarity per slice
  std::int64_t sim = 0;                 // plain total
  std::int64_t wsim = 0;                // weighted total (scaled); == sim when w = 1
};

// Each slice goes to the centroid row of maximum (weighted) similarity;
// ties pick the lowest centroid index.
Assignment assign_clusters(const BinaryMatrix& x3,
                           const BinaryMatrix& centroid_rows, Weight w = {});

// Clustering of the frontal slices with rank-1 centroids a_j b_j^T.
struct ClusterModel {
  std::size_t n = 0, m = 0, l = 0, k = 0;
  Weight weight{};
  std::vector<Rank1Pair> centroids;      // size k
  std::vector<std::uint32_t> assignment; // size l, 0-based
  std::int64_t sim = 0;                  // plain total similarity to the data
  std::int64_t wsim = 0;                 // weighted (scaled), selection metric
  std::vector<std::int64_t> sample_scores;  // selection score per resample

  BinaryMatrix centroid_rows() const;    // k x (n*m), row j = b_j (x) a_j
  BinaryMatrix factor_a() const;         // n x k
  BinaryMatrix factor_b() const;         // m x k
  BinaryMatrix assignment_matrix() const;  // l x k one-hot

  bool operator==(const ClusterModel& o) const = default;
};

// Same clustering but with unconstrained binary-matrix centroids.
struct UnrestrictedModel {
  std::size_t n = 0, m = 0, l = 0, k = 0;
  Weight weight{};
  BinaryMatrix centroids;                // k x (n*m)
  std::vector<std::uint32_t> assignment;
  std::int64_t sim = 0;
  std::int64_t wsim = 0;
  std::vector<std::int64_t> sample_scores;

  bool operator==(const UnrestrictedModel& o) const = default;
};

// Sampling-based clustering: r times, draw k distinct slices, constrain
// each to a rank-1 centroid via its n x m reshaping, assign every slice,
// and keep the best-scoring round. Deterministic for a fixed seed,
// independent of thread count. Set opts.iterative_updates to refine the
// winner with accept-only-if-better majority rounds.
ClusterModel saboteur(const BinaryTensor3& x, std::size_t k,
                      const SaboteurOptions& opts);

// Majority-vote centroid updates constrained back to rank-1, repeated
// while the total (weighted) similarity strictly improves. Empty clusters
// keep their previous centroid. The result never scores below the input.
ClusterModel iterative_updates(const ClusterModel& model,
                               const BinaryTensor3& x, Weight w = {},
                               int* rounds = nullptr);

// Baseline without the rank-1 restriction: sampled slices are used as
// centroids directly; opts.iterative_updates enables plain majority
// refinement (no rank-1 step).
UnrestrictedModel unrestricted_btc(const BinaryTensor3& x, std::size_t k,
                                   const SaboteurOptions& opts);

// Nearest-centroid assignment of held-out slices.
Assignment predict(const ClusterModel& model, const BinaryTensor3& heldout);
Assignment predict(const UnrestrictedModel& model, const BinaryTensor3& heldout);

BinaryTensor3 reconstruct(const ClusterModel& model);
BinaryTensor3 reconstruct(const UnrestrictedModel& model);

}  // namespace btc

#endif

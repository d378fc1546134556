#ifndef BTC_METRICS_HPP
#define BTC_METRICS_HPP

#include <span>
#include <vector>

#include "btc/cluster.hpp"
#include "btc/tensor.hpp"

namespace btc {

// fraction of cells where data and reconstruction agree
double relative_similarity(const BinaryTensor3& x, const BinaryTensor3& recon);
double relative_similarity(const BinaryTensor3& x, const ClusterModel& model);
double relative_similarity(const BinaryTensor3& x, const UnrestrictedModel& model);

// |X xor reconstruction|
std::int64_t reconstruction_error(const BinaryTensor3& x,
                                  const BinaryTensor3& recon);
std::int64_t reconstruction_error(const BinaryTensor3& x,
                                  const ClusterModel& model);
std::int64_t reconstruction_error(const BinaryTensor3& x,
                                  const UnrestrictedModel& model);

// Minimum-cost perfect matching on a square cost matrix; returns the
// column matched to each row. Entries must be finite.
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost);

// Cohen's kappa after matching the labelings with the agreement-maximizing
// bipartite matching; both constant and matched gives 1 by convention.
double cohens_kappa(std::span<const std::uint32_t> a,
                    std::span<const std::uint32_t> b);

// Mutual information normalized by the joint entropy, in [0,1]; a zero
// joint entropy gives 1 by convention.
double nmi_joint(std::span<const std::uint32_t> a,
                 std::span<const std::uint32_t> b);

}  // namespace btc

#endif

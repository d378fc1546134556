#include "btc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace btc {

double relative_similarity(const BinaryTensor3& x, const BinaryTensor3& recon) {
  return static_cast<double>(similarity(x, recon)) /
         static_cast<double>(x.cell_count());
}

double relative_similarity(const BinaryTensor3& x, const ClusterModel& model) {
  return relative_similarity(x, reconstruct(model));
}

double relative_similarity(const BinaryTensor3& x, const UnrestrictedModel& model) {
  return relative_similarity(x, reconstruct(model));
}

std::int64_t reconstruction_error(const BinaryTensor3& x,
                                  const BinaryTensor3& recon) {
  return x.cell_count() - similarity(x, recon);
}

std::int64_t reconstruction_error(const BinaryTensor3& x,
                                  const ClusterModel& model) {
  return reconstruction_error(x, reconstruct(model));
}

std::int64_t reconstruction_error(const BinaryTensor3& x,
                                  const UnrestrictedModel& model) {
  return reconstruction_error(x, reconstruct(model));
}

std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  for (const auto& row : cost) {
    if (row.size() != n)
      throw std::invalid_argument("hungarian: cost matrix must be square");
    for (double c : row)
      if (!std::isfinite(c))
        throw std::invalid_argument("hungarian: non-finite cost entry");
  }
  if (n == 0) return {};

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // shortest augmenting paths with potentials; 1-based with column 0 virtual
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      std::size_t j1 = 0;
      double delta = kInf;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> match(n, 0);
  for (std::size_t j = 1; j <= n; ++j)
    if (p[j] != 0) match[p[j] - 1] = j - 1;
  return match;
}

namespace {

std::size_t label_count(std::span<const std::uint32_t> v) {
  std::uint32_t mx = 0;
  for (auto x : v) mx = std::max(mx, x);
  return v.empty() ? 0 : static_cast<std::size_t>(mx) + 1;
}

}  // namespace

double cohens_kappa(std::span<const std::uint32_t> a,
                    std::span<const std::uint32_t> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("cohens_kappa: length mismatch");
  const auto l = static_cast<std::int64_t>(a.size());
  if (l == 0) return 1.0;
  const std::size_t kk = std::max(label_count(a), label_count(b));

  std::vector<std::vector<std::int64_t>> agree(
      kk, std::vector<std::int64_t>(kk, 0));
  std::vector<std::int64_t> fa(kk, 0), fb(kk, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++agree[a[i]][b[i]];
    ++fa[a[i]];
    ++fb[b[i]];
  }

  // agreement-maximizing matching of the labels; among ties prefer the
  // matching with the smallest chance agreement (largest kappa), encoded
  // lexicographically into one integer-valued cost
  const double big = static_cast<double>(l) * static_cast<double>(l) + 1.0;
  std::vector<std::vector<double>> cost(kk, std::vector<double>(kk));
  for (std::size_t i = 0; i < kk; ++i)
    for (std::size_t j = 0; j < kk; ++j)
      cost[i][j] = -static_cast<double>(agree[i][j]) * big +
                   static_cast<double>(fa[i]) * static_cast<double>(fb[j]);
  const auto match = hungarian(cost);

  std::int64_t observed = 0, chance = 0;
  for (std::size_t c = 0; c < kk; ++c) {
    observed += agree[c][match[c]];
    chance += fa[c] * fb[match[c]];
  }
  if (chance == l * l) return 1.0;  // both constant after matching
  const double po = static_cast<double>(observed) / static_cast<double>(l);
  const double pe =
      static_cast<double>(chance) / static_cast<double>(l * l);
  return (po - pe) / (1.0 - pe);
}

double nmi_joint(std::span<const std::uint32_t> a,
                 std::span<const std::uint32_t> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("nmi_joint: length mismatch");
  const auto l = static_cast<double>(a.size());
  if (a.empty()) return 1.0;
  const std::size_t ka = label_count(a), kb = label_count(b);

  std::vector<std::vector<std::int64_t>> joint(
      ka, std::vector<std::int64_t>(kb, 0));
  std::vector<std::int64_t> fa(ka, 0), fb(kb, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++joint[a[i]][b[i]];
    ++fa[a[i]];
    ++fb[b[i]];
  }

  double mi = 0.0, joint_entropy = 0.0;
  for (std::size_t i = 0; i < ka; ++i)
    for (std::size_t j = 0; j < kb; ++j) {
      if (joint[i][j] == 0) continue;
      const double pij = static_cast<double>(joint[i][j]) / l;
      mi += pij * std::log(static_cast<double>(joint[i][j]) * l /
                           (static_cast<double>(fa[i]) *
                            static_cast<double>(fb[j])));
      joint_entropy -= pij * std::log(pij);
    }
  if (joint_entropy == 0.0) return 1.0;
  return std::clamp(mi / joint_entropy, 0.0, 1.0);
}

}  // namespace btc

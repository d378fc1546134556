#include "btc/mdl.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace btc {

double elias_delta_bits(std::uint64_t v) {
  if (v == 0) throw std::invalid_argument("elias_delta_bits: v must be >= 1");
  const auto len = static_cast<std::uint64_t>(std::bit_width(v)) - 1;  // floor(log2 v)
  const auto len_len = static_cast<std::uint64_t>(std::bit_width(len + 1)) - 1;
  return static_cast<double>(len + 2 * len_len + 1);
}

double log2_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw std::invalid_argument("log2_binomial: k > n");
  if (k == 0 || k == n) return 0.0;
  const double ln2 = std::log(2.0);
  return (std::lgamma(static_cast<double>(n) + 1.0) -
          std::lgamma(static_cast<double>(k) + 1.0) -
          std::lgamma(static_cast<double>(n - k) + 1.0)) /
         ln2;
}

namespace {

double dims_bits(const BinaryTensor3& x) {
  return elias_delta_bits(x.n()) + elias_delta_bits(x.m()) +
         elias_delta_bits(x.l());
}

// column code: popcount header plus enumerative position code
double factor_bits(std::size_t dim, const std::vector<std::int64_t>& col_ones) {
  double bits = 0.0;
  for (auto h : col_ones)
    bits += std::log2(static_cast<double>(dim) + 1.0) +
            log2_binomial(dim, static_cast<std::uint64_t>(h));
  return bits;
}

double error_bits(std::int64_t m1, std::int64_t m0, std::int64_t e1,
                  std::int64_t e0) {
  return std::log2(static_cast<double>(m1) + 1.0) +
         log2_binomial(static_cast<std::uint64_t>(m1),
                       static_cast<std::uint64_t>(e1)) +
         std::log2(static_cast<double>(m0) + 1.0) +
         log2_binomial(static_cast<std::uint64_t>(m0),
                       static_cast<std::uint64_t>(e0));
}

}  // namespace

DescriptionLength description_length(const BinaryTensor3& x,
                                     const ClusterModel& model) {
  if (x.n() != model.n || x.m() != model.m || x.l() != model.l)
    throw std::invalid_argument("description_length: model/tensor mismatch");
  if (model.assignment.size() != model.l || model.centroids.size() != model.k)
    throw std::invalid_argument("description_length: inconsistent model");

  const std::size_t k = model.k;
  std::vector<std::int64_t> a_ones(k), b_ones(k);
  for (std::size_t j = 0; j < k; ++j) {
    a_ones[j] = model.centroids[j].a.popcount();
    b_ones[j] = model.centroids[j].b.popcount();
  }

  DescriptionLength dl;
  dl.model_bits = dims_bits(x) + elias_delta_bits(k + 1) +
                  factor_bits(model.n, a_ones) + factor_bits(model.m, b_ones) +
                  static_cast<double>(model.l) * std::log2(static_cast<double>(k));

  // error tensor split by the model's cell type
  std::int64_t m1 = 0;
  for (std::size_t s = 0; s < model.l; ++s)
    m1 += a_ones[model.assignment[s]] * b_ones[model.assignment[s]];
  const std::int64_t m0 = x.cell_count() - m1;

  const BinaryMatrix rows = model.centroid_rows();
  std::int64_t e1 = 0, e0 = 0;  // false positives / false negatives
  for (std::size_t s = 0; s < model.l; ++s) {
    const auto model_row = rows.row(model.assignment[s]);
    e1 += andnot_popcount(model_row, x.slice_row(s));
    e0 += andnot_popcount(x.slice_row(s), model_row);
  }
  dl.data_bits = error_bits(m1, m0, e1, e0);
  return dl;
}

DescriptionLength baseline_description_length(const BinaryTensor3& x) {
  DescriptionLength dl;
  dl.model_bits = dims_bits(x) + elias_delta_bits(1);  // k = 0
  dl.data_bits = error_bits(0, x.cell_count(), 0, x.ones());
  return dl;
}

MdlReport select_k(const BinaryTensor3& x, std::size_t k_min, std::size_t k_max,
                   const SaboteurOptions& opts) {
  if (k_min < 1 || k_min > k_max || k_max > x.l())
    throw std::invalid_argument("select_k: need 1 <= k_min <= k_max <= l");

  MdlReport report;
  const std::size_t count = k_max - k_min + 1;
  report.records.resize(count + 1);

  const DescriptionLength base = baseline_description_length(x);
  report.records[0] = {0, base.model_bits, base.data_bits, base.total()};

#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(count); ++i) {
    const std::size_t k = k_min + static_cast<std::size_t>(i);
    const ClusterModel model = saboteur(x, k, opts);
    const DescriptionLength dl = description_length(x, model);
    report.records[static_cast<std::size_t>(i) + 1] = {k, dl.model_bits,
                                                       dl.data_bits, dl.total()};
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < report.records.size(); ++i)
    if (report.records[i].total_bits < report.records[best].total_bits) best = i;
  report.best_k = report.records[best].k;
  return report;
}

}  // namespace btc

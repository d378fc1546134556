#include <doctest.h>

#include <cmath>

#include "btc/mdl.hpp"
#include "btc/metrics.hpp"
#include "btc/synth.hpp"

using namespace btc;

namespace {

// a consistent all-zero-centroid model over an l-slice tensor
ClusterModel zero_model(std::size_t n, std::size_t m, std::size_t l,
                        std::size_t k) {
  ClusterModel model;
  model.n = n, model.m = m, model.l = l, model.k = k;
  model.centroids.assign(k, Rank1Pair{BitVector(n), BitVector(m), 0});
  model.assignment.assign(l, 0);
  return model;
}

}  // namespace

TEST_CASE("elias delta code lengths") {
  CHECK(elias_delta_bits(1) == 1.0);
  CHECK(elias_delta_bits(2) == 4.0);
  CHECK(elias_delta_bits(3) == 4.0);
  CHECK(elias_delta_bits(4) == 5.0);
  CHECK(elias_delta_bits(8) == 8.0);
  CHECK(elias_delta_bits(16) == 9.0);
  CHECK_THROWS_AS(elias_delta_bits(0), std::invalid_argument);
}

TEST_CASE("log2 binomial") {
  CHECK(log2_binomial(5, 0) == 0.0);
  CHECK(log2_binomial(5, 5) == 0.0);
  CHECK(log2_binomial(5, 2) == doctest::Approx(std::log2(10.0)));
  CHECK(log2_binomial(10, 3) == doctest::Approx(std::log2(120.0)));
  CHECK_THROWS_AS(log2_binomial(3, 4), std::invalid_argument);
}

TEST_CASE("assignment code costs l*log2(k) bits") {
  // isolate the assignment component by keeping everything else fixed and
  // comparing against the hand-computed remainder: l = 8, k = 4 gives 16
  const std::size_t n = 3, m = 3, l = 8, k = 4;
  const BinaryTensor3 x(n, m, l);
  const auto dl = description_length(x, zero_model(n, m, l, k));
  const double header = elias_delta_bits(n) + elias_delta_bits(m) +
                        elias_delta_bits(l) + elias_delta_bits(k + 1);
  const double factors =
      k * std::log2(n + 1.0) + k * std::log2(m + 1.0);  // empty columns
  CHECK(dl.model_bits - header - factors == doctest::Approx(16.0));
}

TEST_CASE("single-cluster assignment is free") {
  const std::size_t n = 4, m = 4, l = 6;
  const BinaryTensor3 x(n, m, l);
  const auto dl1 = description_length(x, zero_model(n, m, l, 1));
  const double header = elias_delta_bits(n) + elias_delta_bits(m) +
                        elias_delta_bits(l) + elias_delta_bits(2);
  const double factors = std::log2(n + 1.0) + std::log2(m + 1.0);
  CHECK(dl1.model_bits == doctest::Approx(header + factors));  // no C bits
}

TEST_CASE("error coding of the zero tensor with the zero model") {
  const std::size_t n = 4, m = 5, l = 6;
  const BinaryTensor3 x(n, m, l);
  const auto dl = description_length(x, zero_model(n, m, l, 2));
  // no model-1 cells and no errors: only the two count headers remain
  CHECK(dl.data_bits ==
        doctest::Approx(std::log2(static_cast<double>(n * m * l) + 1.0)));
  CHECK(dl.total() == doctest::Approx(dl.model_bits + dl.data_bits));
}

TEST_CASE("perfect model pays only the count headers") {
  // planted noise-free data clustered exactly
  SynthConfig cfg;
  cfg.n = 25, cfg.m = 20, cfg.l = 8, cfg.k = 2;
  cfg.target_density = 0.1;
  cfg.additive_noise = 0;
  cfg.destructive_noise = 0;
  cfg.seed = 31;
  const auto inst = gen_instance(cfg);

  ClusterModel model;
  model.n = cfg.n, model.m = cfg.m, model.l = cfg.l, model.k = cfg.k;
  model.assignment = inst.labels;
  model.centroids.resize(cfg.k);
  for (std::size_t j = 0; j < cfg.k; ++j) {
    model.centroids[j].a = inst.factors.A.column_vector(j);
    model.centroids[j].b = inst.factors.B.column_vector(j);
  }
  REQUIRE(reconstruct(model) == inst.clean);

  std::int64_t m1 = 0;
  for (std::size_t s = 0; s < cfg.l; ++s)
    m1 += model.centroids[inst.labels[s]].a.popcount() *
          model.centroids[inst.labels[s]].b.popcount();
  const auto dl = description_length(inst.clean, model);
  const double expected =
      std::log2(static_cast<double>(m1) + 1.0) +
      std::log2(static_cast<double>(inst.clean.cell_count() - m1) + 1.0);
  CHECK(dl.data_bits == doctest::Approx(expected));
}

TEST_CASE("error counts agree with the reconstruction error") {
  SynthConfig cfg;
  cfg.n = 20, cfg.m = 18, cfg.l = 10, cfg.k = 3;
  cfg.target_density = 0.1;
  cfg.seed = 37;
  const auto inst = gen_instance(cfg);
  SaboteurOptions opts;
  opts.samples = 5;
  opts.seed = 2;
  const auto model = saboteur(inst.noisy, 3, opts);

  // recompute the typed error split independently and rebuild data_bits
  const auto recon = reconstruct(model);
  std::int64_t e1 = 0, e0 = 0, m1 = recon.ones();
  for (std::size_t s = 0; s < cfg.l; ++s) {
    e1 += andnot_popcount(recon.slice_row(s), inst.noisy.slice_row(s));
    e0 += andnot_popcount(inst.noisy.slice_row(s), recon.slice_row(s));
  }
  CHECK(e0 + e1 == reconstruction_error(inst.noisy, model));

  const std::int64_t m0 = inst.noisy.cell_count() - m1;
  const double expected =
      std::log2(static_cast<double>(m1) + 1.0) +
      log2_binomial(static_cast<std::uint64_t>(m1),
                    static_cast<std::uint64_t>(e1)) +
      std::log2(static_cast<double>(m0) + 1.0) +
      log2_binomial(static_cast<std::uint64_t>(m0),
                    static_cast<std::uint64_t>(e0));
  const auto dl = description_length(inst.noisy, model);
  CHECK(dl.data_bits == doctest::Approx(expected));
}

TEST_CASE("assignment header grows with l for fixed k") {
  const auto bits_for_l = [](std::size_t l) {
    const BinaryTensor3 x(3, 3, l);
    return description_length(x, zero_model(3, 3, l, 2)).model_bits;
  };
  CHECK(bits_for_l(9) > bits_for_l(8));
  CHECK(bits_for_l(17) > bits_for_l(16));
}

TEST_CASE("select_k on the zero tensor keeps the baseline") {
  const BinaryTensor3 x(10, 10, 6);
  SaboteurOptions opts;
  opts.samples = 2;
  const auto report = select_k(x, 1, 4, opts);
  CHECK(report.records.size() == 5);  // baseline + 4 sweep records
  CHECK(report.records[0].k == 0);
  CHECK(report.best_k == 0);
  for (const auto& r : report.records)
    CHECK(r.total_bits == doctest::Approx(r.model_bits + r.data_bits));
}

TEST_CASE("select_k finds compressible structure") {
  SynthConfig cfg;
  cfg.n = 40, cfg.m = 30, cfg.l = 16, cfg.k = 3;
  cfg.target_density = 0.08;
  cfg.additive_noise = 0.05;
  cfg.destructive_noise = 0.05;
  cfg.seed = 41;
  const auto inst = gen_instance(cfg);
  SaboteurOptions opts;
  opts.samples = 10;
  opts.seed = 7;
  const auto report = select_k(inst.noisy, 1, 6, opts);
  CHECK(report.records.size() == 7);
  CHECK(report.best_k >= 1);  // planted data always beats the raw baseline
  CHECK_THROWS_AS(select_k(inst.noisy, 3, 2, opts), std::invalid_argument);
  CHECK_THROWS_AS(select_k(inst.noisy, 1, 30, opts), std::invalid_argument);
}

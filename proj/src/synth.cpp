#include "btc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace btc {

namespace {

std::vector<std::uint32_t> draw_labels(std::size_t l, std::size_t k, Rng& rng) {
  if (k == l) {
    std::vector<std::uint32_t> id(l);
    for (std::size_t s = 0; s < l; ++s) id[s] = static_cast<std::uint32_t>(s);
    return id;
  }
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<std::uint32_t> labels(l);
    std::vector<bool> seen(k, false);
    for (std::size_t s = 0; s < l; ++s) {
      labels[s] = static_cast<std::uint32_t>(uniform_below(rng, k));
      seen[labels[s]] = true;
    }
    if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
      return labels;
  }
  throw std::runtime_error("gen_instance: could not draw nonempty clusters");
}

BinaryMatrix bernoulli_matrix(std::size_t rows, std::size_t cols, double p,
                              Rng& rng) {
  BinaryMatrix m(rows, cols);
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < rows; ++r)
      if (bernoulli_bit(rng, p)) m.set(r, c);
  return m;
}

BinaryMatrix one_hot(const std::vector<std::uint32_t>& labels, std::size_t k) {
  BinaryMatrix c(labels.size(), k);
  for (std::size_t s = 0; s < labels.size(); ++s) c.set(s, labels[s]);
  return c;
}

}  // namespace

SynthInstance gen_instance(const SynthConfig& cfg) {
  if (cfg.k < 1 || cfg.k > cfg.l)
    throw std::invalid_argument("gen_instance: need 1 <= k <= l");
  if (!(cfg.target_density > 0.0 && cfg.target_density < 1.0))
    throw std::invalid_argument("gen_instance: density must be in (0,1)");
  if (cfg.additive_noise < 0 || cfg.destructive_noise < 0)
    throw std::invalid_argument("gen_instance: noise fractions must be >= 0");

  SynthInstance inst;
  {
    Rng rng(derive_seed(cfg.seed, 1));
    inst.labels = draw_labels(cfg.l, cfg.k, rng);
  }
  const BinaryMatrix c = one_hot(inst.labels, cfg.k);

  // bisection on the Bernoulli parameter; expected density is about p^2,
  // so that is the starting point
  const double target = cfg.target_density;
  double lo = 0.0, hi = 1.0;
  double p = std::clamp(std::sqrt(target), 1e-9, 1.0 - 1e-9);
  const auto cells = static_cast<double>(cfg.n) * cfg.m * cfg.l;
  bool ok = false;
  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    Rng rng(derive_seed(cfg.seed, 100 + static_cast<std::uint64_t>(attempt)));
    BinaryMatrix a = bernoulli_matrix(cfg.n, cfg.k, p, rng);
    BinaryMatrix b = bernoulli_matrix(cfg.m, cfg.k, p, rng);
    BinaryTensor3 clean = bcp_reconstruct({a, b, c});
    const double realized = static_cast<double>(clean.ones()) / cells;
    if (std::abs(realized - target) <= cfg.density_band * target) {
      inst.factors = {std::move(a), std::move(b), c};
      inst.clean = std::move(clean);
      inst.factor_density = p;
      ok = true;
      break;
    }
    if (realized < target)
      lo = p;
    else
      hi = p;
    p = (lo + hi) / 2.0;
  }
  if (!ok)
    throw std::runtime_error(
        "gen_instance: could not calibrate density " + std::to_string(target) +
        " within " + std::to_string(cfg.max_attempts) + " attempts");

  Rng noise_rng(derive_seed(cfg.seed, 2));
  inst.noisy =
      apply_noise(inst.clean, cfg.additive_noise, cfg.destructive_noise, noise_rng);
  return inst;
}

BinaryTensor3 apply_noise(const BinaryTensor3& x, double additive,
                          double destructive, Rng& rng) {
  if (additive < 0 || destructive < 0)
    throw std::invalid_argument("apply_noise: noise fractions must be >= 0");
  const std::int64_t ones = x.ones();
  const std::int64_t zeros = x.cell_count() - ones;
  const auto n_del = static_cast<std::int64_t>(
      std::llround(destructive * static_cast<double>(ones)));
  const auto n_add = static_cast<std::int64_t>(
      std::llround(additive * static_cast<double>(ones)));
  if (n_del > ones)
    throw std::invalid_argument("apply_noise: destructive count exceeds |X|");
  if (n_add > zeros)
    throw std::invalid_argument("apply_noise: additive count exceeds zero cells");

  // flat cell ids (k * n*m + position), split by current value
  const std::size_t nm = x.n() * x.m();
  std::vector<std::uint64_t> one_cells, zero_cells;
  one_cells.reserve(static_cast<std::size_t>(ones));
  zero_cells.reserve(static_cast<std::size_t>(zeros));
  for (std::size_t s = 0; s < x.l(); ++s) {
    const auto row = x.slice_row(s);
    for (std::size_t p = 0; p < nm; ++p) {
      const std::uint64_t id = s * nm + p;
      if ((row[p / kWordBits] >> (p % kWordBits)) & 1u)
        one_cells.push_back(id);
      else
        zero_cells.push_back(id);
    }
  }

  BinaryTensor3 out = x;
  auto flip = [&](std::vector<std::uint64_t>& pool, std::int64_t count, bool to) {
    for (std::int64_t i = 0; i < count; ++i) {
      const std::size_t j =
          static_cast<std::size_t>(i) +
          static_cast<std::size_t>(uniform_below(rng, pool.size() - i));
      std::swap(pool[i], pool[j]);
      const std::uint64_t id = pool[i];
      const std::size_t s = id / nm, p = id % nm;
      out.set(p % x.n(), p / x.n(), s, to);
    }
  };
  flip(one_cells, n_del, false);
  flip(zero_cells, n_add, true);
  return out;
}

}  // namespace btc

#ifndef BTC_SYNTH_HPP
#define BTC_SYNTH_HPP

#include <cstdint>
#include <vector>

#include "btc/rng.hpp"
#include "btc/tensor.hpp"

namespace btc {

struct SynthConfig {
  std::size_t n = 70, m = 50, l = 20;
  std::size_t k = 5;
  double target_density = 0.05;   // of the clean tensor, in (0,1)
  double additive_noise = 0.1;    // fraction of |X| zeros flipped to 1
  double destructive_noise = 0.1; // fraction of |X| ones flipped to 0
  std::uint64_t seed = 0;
  double density_band = 0.2;      // accept realized density within +-20%
  int max_attempts = 64;
};

struct SynthInstance {
  BinaryTensor3 clean;
  BinaryTensor3 noisy;
  FactorTriple factors;
  std::vector<std::uint32_t> labels;  // planted assignment, 0-based
  double factor_density = 0.0;        // calibrated Bernoulli parameter
};

// Planted model: uniform slice assignment (re-drawn until every cluster
// is nonempty; k = l short-circuits to the identity assignment), factor
// columns Bernoulli(p) with p calibrated by bisection until the realized
// clean density lands in the band, then exact-count noise. Deterministic
// per seed.
SynthInstance gen_instance(const SynthConfig& cfg);

// Flips exactly round(destructive*|X|) distinct ones to 0 and
// round(additive*|X|) distinct zeros to 1, counts taken from the
// original |X|.
BinaryTensor3 apply_noise(const BinaryTensor3& x, double additive,
                          double destructive, Rng& rng);

}  // namespace btc

#endif

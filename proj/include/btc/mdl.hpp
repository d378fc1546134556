#ifndef BTC_MDL_HPP
#define BTC_MDL_HPP

#include <cstdint>
#include <vector>

#include "btc/cluster.hpp"

namespace btc {

// code length in bits of the Elias delta code for v >= 1
double elias_delta_bits(std::uint64_t v);

// log2 of the binomial coefficient, via lgamma
double log2_binomial(std::uint64_t n, std::uint64_t k);

struct DescriptionLength {
  double model_bits = 0.0;
  double data_bits = 0.0;
  double total() const { return model_bits + data_bits; }
};

// Two-part description length. The model part encodes the dimensions and
// k (Elias delta), A and B column-wise as a popcount header plus an
// enumerative position code, and the assignment at l*log2(k) bits. The
// data part encodes the error tensor separately over model-1 cells
// (false positives) and model-0 cells (false negatives), each as a count
// header plus an enumerative position code.
DescriptionLength description_length(const BinaryTensor3& x,
                                     const ClusterModel& model);

// description length of explaining the data with no clusters at all
DescriptionLength baseline_description_length(const BinaryTensor3& x);

struct MdlRecord {
  std::size_t k = 0;
  double model_bits = 0.0;
  double data_bits = 0.0;
  double total_bits = 0.0;
};

struct MdlReport {
  std::vector<MdlRecord> records;  // k = 0 baseline first, then the sweep
  std::size_t best_k = 0;          // argmin of total_bits, ties -> smallest k
};

// Sweeps k over [k_min, k_max], clustering each k with the same options
// and seed, and picks the description-length minimizer (the k = 0
// baseline is always included).
MdlReport select_k(const BinaryTensor3& x, std::size_t k_min, std::size_t k_max,
                   const SaboteurOptions& opts);

}  // namespace btc

#endif

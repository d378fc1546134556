#ifndef BTC_IO_HPP
#define BTC_IO_HPP

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "btc/cluster.hpp"
#include "btc/mdl.hpp"

namespace btc {

// data or format problem in an input file; carries file and line
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Coordinate text format: lines "i j k" or "i j k v" (1-based, v in {0,1};
// v = 0 lines are ignored), '#' comment lines, and an optional
// "%dims n m l" header. Without the header, dimensions are the maximum
// indices seen. Duplicates collapse.
BinaryTensor3 parse_tns(const std::filesystem::path& path);
BinaryTensor3 parse_tns(std::istream& in, const std::string& name);
void write_tns(const BinaryTensor3& x, const std::filesystem::path& path);

// one cluster id per line, 1-based in the file
std::vector<std::uint32_t> read_labels(const std::filesystem::path& path);
void write_labels(std::span<const std::uint32_t> labels,
                  const std::filesystem::path& path);

struct PreprocessResult {
  BinaryTensor3 tensor;
  // surviving original indices per mode, in order (kept[mode-1][new] = old)
  std::array<std::vector<std::size_t>, 3> kept;
};

// Iteratively drops slices with fewer than min_entries cells set, in every
// mode, until nothing changes. Fails if the tensor empties out.
PreprocessResult preprocess(const BinaryTensor3& x, std::int64_t min_entries);

// model files: text, factors as per-column lists of set positions
void save_model(const ClusterModel& model, int clustered_mode,
                const std::filesystem::path& path);
void save_model(const UnrestrictedModel& model, int clustered_mode,
                const std::filesystem::path& path);

struct LoadedModel {
  int clustered_mode = 3;
  std::variant<ClusterModel, UnrestrictedModel> model;

  bool unrestricted() const {
    return std::holds_alternative<UnrestrictedModel>(model);
  }
};
LoadedModel load_model(const std::filesystem::path& path);

void write_mdl_csv(const MdlReport& report, const std::filesystem::path& path);

}  // namespace btc

#endif

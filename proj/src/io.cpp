#include "btc/io.hpp"

#include <algorithm>
#include <climits>
#include <fstream>
#include <sstream>

namespace btc {

namespace {

[[noreturn]] void parse_fail(const std::string& name, std::size_t line,
                             const std::string& what) {
  throw ParseError(name + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

}  // namespace

BinaryTensor3 parse_tns(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_tns(in, path.string());
}

BinaryTensor3 parse_tns(std::istream& in, const std::string& name) {
  struct Entry {
    std::size_t i, j, k, line;
  };
  std::vector<Entry> entries;
  std::size_t dn = 0, dm = 0, dl = 0;
  bool have_dims = false;
  std::size_t max_i = 0, max_j = 0, max_k = 0;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok)) continue;  // blank
    if (tok[0] == '#') continue;
    if (tok == "%dims") {
      if (have_dims) parse_fail(name, lineno, "duplicate %dims header");
      if (!(ss >> dn >> dm >> dl) || dn == 0 || dm == 0 || dl == 0)
        parse_fail(name, lineno, "bad %dims header");
      std::string rest;
      if (ss >> rest) parse_fail(name, lineno, "trailing tokens after %dims");
      have_dims = true;
      continue;
    }
    if (tok[0] == '%') parse_fail(name, lineno, "unknown directive " + tok);

    long long i = 0, j = 0, k = 0, v = 1;
    std::istringstream ls(line);
    if (!(ls >> i >> j >> k)) parse_fail(name, lineno, "expected 'i j k [v]'");
    const bool has_v = static_cast<bool>(ls >> v);
    std::string rest;
    if (ls >> rest) parse_fail(name, lineno, "trailing tokens");
    if (i < 1 || j < 1 || k < 1) parse_fail(name, lineno, "indices are 1-based");
    if (has_v && v != 0 && v != 1)
      parse_fail(name, lineno, "value must be 0 or 1");
    if (v == 0) continue;
    const auto ui = static_cast<std::size_t>(i);
    const auto uj = static_cast<std::size_t>(j);
    const auto uk = static_cast<std::size_t>(k);
    max_i = std::max(max_i, ui);
    max_j = std::max(max_j, uj);
    max_k = std::max(max_k, uk);
    entries.push_back({ui, uj, uk, lineno});
  }

  if (!have_dims) {
    if (entries.empty())
      throw ParseError(name + ": no entries and no %dims header");
    dn = max_i, dm = max_j, dl = max_k;
  }

  BinaryTensor3 x(dn, dm, dl);
  for (const auto& e : entries) {
    if (e.i > dn || e.j > dm || e.k > dl)
      parse_fail(name, e.line, "index exceeds declared dimensions");
    x.set(e.i - 1, e.j - 1, e.k - 1);
  }
  return x;
}

void write_tns(const BinaryTensor3& x, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "%dims " << x.n() << ' ' << x.m() << ' ' << x.l() << '\n';
  for (std::size_t k = 0; k < x.l(); ++k)
    for_each_set_bit(x.slice_row(k), [&](std::size_t p) {
      out << (p % x.n()) + 1 << ' ' << (p / x.n()) + 1 << ' ' << k + 1 << '\n';
    });
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<std::uint32_t> read_labels(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<std::uint32_t> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    long long v = 0;
    if (!(ss >> v)) {
      std::string tok;
      std::istringstream probe(line);
      if (!(probe >> tok)) continue;  // blank
      parse_fail(path.string(), lineno, "expected an integer label");
    }
    if (v < 1) parse_fail(path.string(), lineno, "labels are 1-based");
    labels.push_back(static_cast<std::uint32_t>(v - 1));
  }
  return labels;
}

void write_labels(std::span<const std::uint32_t> labels,
                  const std::filesystem::path& path) {
  auto out = open_out(path);
  for (auto c : labels) out << c + 1 << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

PreprocessResult preprocess(const BinaryTensor3& x, std::int64_t min_entries) {
  if (min_entries < 1)
    throw std::invalid_argument("preprocess: min_entries must be >= 1");

  PreprocessResult res;
  res.tensor = x;
  for (int m = 0; m < 3; ++m) {
    res.kept[m].resize(m == 0 ? x.n() : m == 1 ? x.m() : x.l());
    for (std::size_t i = 0; i < res.kept[m].size(); ++i) res.kept[m][i] = i;
  }

  for (;;) {
    const BinaryTensor3& t = res.tensor;
    const std::size_t n = t.n(), m = t.m(), l = t.l();
    std::vector<std::int64_t> cnt1(n, 0), cnt2(m, 0), cnt3(l, 0);
    for (std::size_t k = 0; k < l; ++k)
      for_each_set_bit(t.slice_row(k), [&](std::size_t p) {
        ++cnt1[p % n];
        ++cnt2[p / n];
        ++cnt3[k];
      });

    auto keep_of = [&](const std::vector<std::int64_t>& cnt) {
      std::vector<std::size_t> keep;
      for (std::size_t i = 0; i < cnt.size(); ++i)
        if (cnt[i] >= min_entries) keep.push_back(i);
      return keep;
    };
    const auto k1 = keep_of(cnt1), k2 = keep_of(cnt2), k3 = keep_of(cnt3);
    if (k1.size() == n && k2.size() == m && k3.size() == l) break;
    if (k1.empty() || k2.empty() || k3.empty())
      throw std::runtime_error("preprocess: tensor emptied out");

    std::vector<std::size_t> inv1(n, SIZE_MAX), inv2(m, SIZE_MAX),
        inv3(l, SIZE_MAX);
    for (std::size_t i = 0; i < k1.size(); ++i) inv1[k1[i]] = i;
    for (std::size_t i = 0; i < k2.size(); ++i) inv2[k2[i]] = i;
    for (std::size_t i = 0; i < k3.size(); ++i) inv3[k3[i]] = i;

    BinaryTensor3 next(k1.size(), k2.size(), k3.size());
    for (std::size_t k = 0; k < l; ++k) {
      if (inv3[k] == SIZE_MAX) continue;
      for_each_set_bit(t.slice_row(k), [&](std::size_t p) {
        const std::size_t i = p % n, j = p / n;
        if (inv1[i] != SIZE_MAX && inv2[j] != SIZE_MAX)
          next.set(inv1[i], inv2[j], inv3[k]);
      });
    }

    auto compose = [](std::vector<std::size_t>& overall,
                      const std::vector<std::size_t>& keep) {
      std::vector<std::size_t> out(keep.size());
      for (std::size_t i = 0; i < keep.size(); ++i) out[i] = overall[keep[i]];
      overall = std::move(out);
    };
    compose(res.kept[0], k1);
    compose(res.kept[1], k2);
    compose(res.kept[2], k3);
    res.tensor = std::move(next);
  }
  return res;
}

namespace {

void write_index_line(std::ostream& out, const char* tag, std::size_t id,
                      const BitVector& v) {
  out << tag << ' ' << id + 1 << " :";
  for_each_set_bit(v.words(), [&](std::size_t p) { out << ' ' << p + 1; });
  out << '\n';
}

void write_model_header(std::ostream& out, const char* kind, std::size_t n,
                        std::size_t m, std::size_t l, std::size_t k, Weight w,
                        std::int64_t sim, int clustered_mode) {
  out << "btc-model 1\n";
  out << "kind " << kind << '\n';
  out << "dims " << n << ' ' << m << ' ' << l << '\n';
  out << "mode " << clustered_mode << '\n';
  out << "k " << k << '\n';
  out << "weight " << w.num << '/' << w.den << '\n';
  out << "sim " << sim << '\n';
}

void write_assignment(std::ostream& out,
                      std::span<const std::uint32_t> assignment) {
  out << "assign :";
  for (auto c : assignment) out << ' ' << c + 1;
  out << '\n';
}

}  // namespace

void save_model(const ClusterModel& model, int clustered_mode,
                const std::filesystem::path& path) {
  auto out = open_out(path);
  write_model_header(out, "bcpc", model.n, model.m, model.l, model.k,
                     model.weight, model.sim, clustered_mode);
  for (std::size_t j = 0; j < model.k; ++j)
    write_index_line(out, "a", j, model.centroids[j].a);
  for (std::size_t j = 0; j < model.k; ++j)
    write_index_line(out, "b", j, model.centroids[j].b);
  write_assignment(out, model.assignment);
  if (!out) throw IoError("failed writing " + path.string());
}

void save_model(const UnrestrictedModel& model, int clustered_mode,
                const std::filesystem::path& path) {
  auto out = open_out(path);
  write_model_header(out, "unrestricted", model.n, model.m, model.l, model.k,
                     model.weight, model.sim, clustered_mode);
  for (std::size_t j = 0; j < model.k; ++j)
    write_index_line(out, "c", j, model.centroids.row_vector(j));
  write_assignment(out, model.assignment);
  if (!out) throw IoError("failed writing " + path.string());
}

LoadedModel load_model(const std::filesystem::path& path) {
  auto in = open_in(path);
  const std::string name = path.string();
  std::string line;
  std::size_t lineno = 0;

  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos)
        return true;
    }
    return false;
  };

  if (!next_line() || line.rfind("btc-model 1", 0) != 0)
    throw ParseError(name + ": not a btc-model file");

  std::string kind;
  std::size_t n = 0, m = 0, l = 0, k = 0;
  int mode = 3;
  Weight w{};
  std::int64_t sim = 0;
  std::vector<std::vector<std::size_t>> a_cols, b_cols, c_rows;
  std::vector<std::uint32_t> assignment;

  while (next_line()) {
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "kind") {
      ss >> kind;
      if (kind != "bcpc" && kind != "unrestricted")
        parse_fail(name, lineno, "unknown model kind");
    } else if (key == "dims") {
      if (!(ss >> n >> m >> l)) parse_fail(name, lineno, "bad dims");
      a_cols.clear();
    } else if (key == "mode") {
      if (!(ss >> mode) || mode < 1 || mode > 3)
        parse_fail(name, lineno, "bad mode");
    } else if (key == "k") {
      if (!(ss >> k)) parse_fail(name, lineno, "bad k");
      a_cols.resize(k);
      b_cols.resize(k);
      c_rows.resize(k);
    } else if (key == "weight") {
      std::string spec;
      ss >> spec;
      w = Weight::parse(spec);
    } else if (key == "sim") {
      if (!(ss >> sim)) parse_fail(name, lineno, "bad sim");
    } else if (key == "a" || key == "b" || key == "c") {
      std::size_t id = 0;
      std::string colon;
      if (!(ss >> id >> colon) || colon != ":" || id < 1 || id > k)
        parse_fail(name, lineno, "bad factor line");
      std::vector<std::size_t> idx;
      long long v;
      while (ss >> v) {
        if (v < 1) parse_fail(name, lineno, "factor indices are 1-based");
        idx.push_back(static_cast<std::size_t>(v - 1));
      }
      (key == "a" ? a_cols : key == "b" ? b_cols : c_rows)[id - 1] =
          std::move(idx);
    } else if (key == "assign") {
      std::string colon;
      ss >> colon;
      if (colon != ":") parse_fail(name, lineno, "bad assign line");
      long long v;
      while (ss >> v) {
        if (v < 1 || static_cast<std::size_t>(v) > k)
          parse_fail(name, lineno, "assignment id out of range");
        assignment.push_back(static_cast<std::uint32_t>(v - 1));
      }
    } else {
      parse_fail(name, lineno, "unknown key " + key);
    }
  }

  if (kind.empty() || n == 0 || m == 0 || l == 0 || k == 0)
    throw ParseError(name + ": incomplete model header");
  if (assignment.size() != l)
    throw ParseError(name + ": assignment length does not match l");

  LoadedModel loaded;
  loaded.clustered_mode = mode;
  auto fill = [&](const std::vector<std::size_t>& idx, std::size_t dim,
                  BitVector& v) {
    v = BitVector(dim);
    for (auto p : idx) {
      if (p >= dim) throw ParseError(name + ": factor index out of range");
      v.set(p);
    }
  };

  if (kind == "bcpc") {
    ClusterModel model;
    model.n = n, model.m = m, model.l = l, model.k = k;
    model.weight = w;
    model.sim = sim;
    model.assignment = std::move(assignment);
    model.centroids.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
      fill(a_cols[j], n, model.centroids[j].a);
      fill(b_cols[j], m, model.centroids[j].b);
      model.centroids[j].sim = 0;  // recomputable against data
    }
    loaded.model = std::move(model);
  } else {
    UnrestrictedModel model;
    model.n = n, model.m = m, model.l = l, model.k = k;
    model.weight = w;
    model.sim = sim;
    model.assignment = std::move(assignment);
    model.centroids = BinaryMatrix(k, n * m);
    for (std::size_t j = 0; j < k; ++j) {
      BitVector row;
      fill(c_rows[j], n * m, row);
      model.centroids.set_row(j, row);
    }
    loaded.model = std::move(model);
  }
  return loaded;
}

void write_mdl_csv(const MdlReport& report, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "k,L_model,L_data,L_total\n";
  out.precision(6);
  out << std::fixed;
  for (const auto& r : report.records)
    out << r.k << ',' << r.model_bits << ',' << r.data_bits << ','
        << r.total_bits << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace btc

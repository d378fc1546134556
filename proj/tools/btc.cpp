#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "btc/io.hpp"
#include "btc/metrics.hpp"
#include "btc/synth.hpp"
#include "btc/version.hpp"

namespace fs = std::filesystem;
using namespace btc;

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// structured key/value run summary
class Report {
 public:
  explicit Report(std::string command) {
    add("btc-report", 1);
    add("command", command);
    add("version", kVersion);
  }
  template <typename T>
  void add(const std::string& key, const T& value) {
    std::ostringstream ss;
    ss << value;
    lines_.emplace_back(key, ss.str());
  }
  void add_double(const std::string& key, double value) {
    std::ostringstream ss;
    ss.precision(6);
    ss << std::fixed << value;
    lines_.emplace_back(key, ss.str());
  }
  void write(const fs::path& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    for (const auto& [k, v] : lines_) out << k << ' ' << v << '\n';
  }

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

void set_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

struct CommonOpts {
  std::string input;
  std::string out;
  std::size_t samples = 20;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string weight = "1";
  bool iterative_updates = false;
  int mode = 3;
  std::int64_t min_entries = 0;
};

void add_common_cluster_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("input", o.input, "input tensor (.tns coordinate text)")
      ->required();
  cmd->add_option("--samples", o.samples, "resampling rounds r")
      ->default_val(20);
  cmd->add_option("--seed", o.seed, "random seed")->default_val(0);
  cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)")
      ->default_val(0);
  cmd->add_option("--weight", o.weight,
                  "cost of representing a data 1 as a 0 (e.g. 10 or 5/2)")
      ->default_val("1");
  cmd->add_flag("--iterative-updates", o.iterative_updates,
                "refine with accept-if-better majority rounds");
  cmd->add_option("--mode", o.mode, "tensor mode to cluster (1, 2 or 3)")
      ->default_val(3)
      ->check(CLI::Range(1, 3));
  cmd->add_option("--min-entries", o.min_entries,
                  "prune slices with fewer entries (in every mode) before "
                  "clustering; 0 disables")
      ->default_val(0);
  cmd->add_option("--out", o.out, "output path prefix")->required();
}

// shared ingestion: parse, optional pruning (maps written next to outputs),
// then permute the clustered mode to the back
BinaryTensor3 load_input(const CommonOpts& o, Report& report) {
  BinaryTensor3 x = parse_tns(o.input);
  report.add("input", o.input);
  report.add("input_dims",
             std::to_string(x.n()) + " " + std::to_string(x.m()) + " " +
                 std::to_string(x.l()));
  if (o.min_entries >= 1) {
    PreprocessResult pre = preprocess(x, o.min_entries);
    x = std::move(pre.tensor);
    for (int mm = 0; mm < 3; ++mm) {
      std::ofstream map(o.out + ".map" + std::to_string(mm + 1));
      if (!map) throw IoError("cannot write index map");
      for (std::size_t i = 0; i < pre.kept[mm].size(); ++i)
        map << i + 1 << ' ' << pre.kept[mm][i] + 1 << '\n';
    }
    write_tns(x, o.out + ".pre.tns");
    report.add("pruned_dims",
               std::to_string(x.n()) + " " + std::to_string(x.m()) + " " +
                   std::to_string(x.l()));
  }
  return permute_mode_last(x, o.mode);
}

void add_config(Report& report, const CommonOpts& o, const Weight& w) {
  report.add("seed", o.seed);
  report.add("threads", o.threads);
  report.add("samples", o.samples);
  report.add("weight", std::to_string(w.num) + "/" + std::to_string(w.den));
  report.add("iterative_updates", o.iterative_updates ? 1 : 0);
  report.add("mode", o.mode);
  report.add("min_entries", o.min_entries);
}

int run_cluster(const CommonOpts& o, std::size_t k, bool unrestricted) {
  Stopwatch timer;
  Report report("cluster");
  set_threads(o.threads);
  const Weight w = Weight::parse(o.weight);
  const BinaryTensor3 x = load_input(o, report);
  add_config(report, o, w);
  report.add("unrestricted", unrestricted ? 1 : 0);
  report.add("k", k);
  report.add("n", x.n());
  report.add("m", x.m());
  report.add("l", x.l());

  SaboteurOptions opts{o.samples, o.seed, w, o.iterative_updates};
  std::int64_t sim = 0, wsim = 0;
  double rel = 0.0;
  if (unrestricted) {
    UnrestrictedModel model = unrestricted_btc(x, k, opts);
    save_model(model, o.mode, o.out + ".model");
    sim = model.sim;
    wsim = model.wsim;
    rel = relative_similarity(x, model);
  } else {
    ClusterModel model = saboteur(x, k, opts);
    save_model(model, o.mode, o.out + ".model");
    sim = model.sim;
    wsim = model.wsim;
    rel = relative_similarity(x, model);
  }
  report.add("sim", sim);
  if (!w.is_unit()) report.add("weighted_score", wsim);
  report.add_double("relative_similarity", rel);
  report.add("reconstruction_error", x.cell_count() - sim);
  report.add_double("wall_ms", timer.ms());
  report.write(o.out + ".report.txt");
  std::cout << "sim " << sim << "  relative_similarity " << rel << '\n';
  return 0;
}

int run_mdl(const CommonOpts& o, std::size_t k_min, std::size_t k_max) {
  Stopwatch timer;
  Report report("mdl");
  set_threads(o.threads);
  const Weight w = Weight::parse(o.weight);
  const BinaryTensor3 x = load_input(o, report);
  add_config(report, o, w);
  report.add("k_min", k_min);
  report.add("k_max", std::min(k_max, x.l()));

  SaboteurOptions opts{o.samples, o.seed, w, o.iterative_updates};
  const MdlReport mdl = select_k(x, k_min, std::min(k_max, x.l()), opts);
  write_mdl_csv(mdl, o.out + ".csv");
  report.add("best_k", mdl.best_k);
  report.add_double("wall_ms", timer.ms());
  report.write(o.out + ".report.txt");
  std::cout << "best_k " << mdl.best_k << '\n';
  return 0;
}

int run_synth(const SynthConfig& cfg, const std::string& out, int threads) {
  Stopwatch timer;
  Report report("synth");
  set_threads(threads);
  const SynthInstance inst = gen_instance(cfg);
  write_tns(inst.noisy, out + ".tns");
  write_tns(inst.clean, out + ".clean.tns");
  write_labels(inst.labels, out + ".labels");
  report.add("n", cfg.n);
  report.add("m", cfg.m);
  report.add("l", cfg.l);
  report.add("k", cfg.k);
  report.add("seed", cfg.seed);
  report.add_double("target_density", cfg.target_density);
  report.add_double("additive_noise", cfg.additive_noise);
  report.add_double("destructive_noise", cfg.destructive_noise);
  report.add("clean_ones", inst.clean.ones());
  report.add("noisy_ones", inst.noisy.ones());
  report.add_double("realized_density",
                    static_cast<double>(inst.clean.ones()) /
                        static_cast<double>(inst.clean.cell_count()));
  report.add_double("factor_density", inst.factor_density);
  report.add_double("wall_ms", timer.ms());
  report.write(out + ".report.txt");
  std::cout << "wrote " << out << ".tns (" << inst.noisy.ones() << " ones)\n";
  return 0;
}

int run_eval(const std::string& model_path, const std::string& tensor_path,
             const std::string& labels_path, const std::string& out) {
  Stopwatch timer;
  Report report("eval");
  const LoadedModel loaded = load_model(model_path);
  BinaryTensor3 x = parse_tns(tensor_path);
  x = permute_mode_last(x, loaded.clustered_mode);
  report.add("model", model_path);
  report.add("tensor", tensor_path);
  report.add("mode", loaded.clustered_mode);

  std::visit(
      [&](const auto& model) {
        if (model.n != x.n() || model.m != x.m() || model.l != x.l())
          throw std::invalid_argument(
              "eval: tensor dimensions do not match the model");
        const std::int64_t sim = similarity(x, reconstruct(model));
        report.add("k", model.k);
        report.add("stored_sim", model.sim);
        report.add("sim", sim);
        report.add_double("relative_similarity",
                          static_cast<double>(sim) /
                              static_cast<double>(x.cell_count()));
        report.add("reconstruction_error", x.cell_count() - sim);
        if (!labels_path.empty()) {
          const auto labels = read_labels(labels_path);
          if (labels.size() != model.assignment.size())
            throw std::invalid_argument("eval: label count mismatch");
          report.add_double("kappa", cohens_kappa(model.assignment, labels));
          report.add_double("nmi", nmi_joint(model.assignment, labels));
        }
      },
      loaded.model);
  report.add_double("wall_ms", timer.ms());
  report.write(out + ".report.txt");
  std::cout << "wrote " << out << ".report.txt\n";
  return 0;
}

int run_rank1(const std::string& input, const std::string& weight_spec,
              std::optional<double> eps, std::uint64_t seed, int threads,
              const std::string& out) {
  Stopwatch timer;
  Report report("rank1");
  set_threads(threads);
  const Weight w = Weight::parse(weight_spec);
  const BinaryTensor3 x = parse_tns(input);
  if (x.l() != 1)
    throw std::invalid_argument("rank1: expected a single-slice tensor (l = 1)");
  const BinaryMatrix mat = x.slice(0);

  Rank1Pair pair;
  if (eps) {
    PtasOptions opts;
    opts.eps = *eps;
    opts.seed = seed;
    pair = rank1_ptas(mat, opts);
    report.add_double("eps", *eps);
  } else {
    pair = rank1_approx(mat, w);
  }

  report.add("input", input);
  report.add("n", mat.rows());
  report.add("m", mat.cols());
  report.add("seed", seed);
  report.add("weight", std::to_string(w.num) + "/" + std::to_string(w.den));
  report.add("sim", pair.sim);
  report.add_double("relative_similarity",
                    static_cast<double>(pair.sim) /
                        static_cast<double>(mat.cell_count()));
  {
    std::ostringstream sa, sb;
    for_each_set_bit(pair.a.words(), [&](std::size_t p) { sa << ' ' << p + 1; });
    for_each_set_bit(pair.b.words(), [&](std::size_t p) { sb << ' ' << p + 1; });
    report.add("a", sa.str().empty() ? std::string("-") : sa.str().substr(1));
    report.add("b", sb.str().empty() ? std::string("-") : sb.str().substr(1));
  }
  report.add_double("wall_ms", timer.ms());
  report.write(out + ".report.txt");
  std::cout << "sim " << pair.sim << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boolean tensor clustering with rank-1 centroids"};
  app.require_subcommand(1);

  CommonOpts cluster_opts;
  std::size_t cluster_k = 0;
  bool unrestricted = false;
  auto* cluster = app.add_subcommand("cluster", "cluster one mode of a tensor");
  add_common_cluster_flags(cluster, cluster_opts);
  cluster->add_option("--k", cluster_k, "number of clusters")->required();
  cluster->add_flag("--unrestricted", unrestricted,
                    "use raw sampled slices as centroids (no rank-1 restriction)");

  CommonOpts mdl_opts;
  std::size_t k_min = 1, k_max = 0;
  auto* mdl = app.add_subcommand("mdl", "pick the cluster count by description length");
  add_common_cluster_flags(mdl, mdl_opts);
  mdl->add_option("--k-min", k_min, "smallest k to try")->default_val(1);
  mdl->add_option("--k-max", k_max, "largest k to try")->required();

  SynthConfig synth_cfg;
  std::string synth_out;
  int synth_threads = 0;
  auto* synth = app.add_subcommand("synth", "generate a planted clustering benchmark");
  synth->add_option("--n", synth_cfg.n, "mode-1 size")->required();
  synth->add_option("--m", synth_cfg.m, "mode-2 size")->required();
  synth->add_option("--l", synth_cfg.l, "mode-3 size (clustered)")->required();
  synth->add_option("--k", synth_cfg.k, "planted clusters")->required();
  synth->add_option("--density", synth_cfg.target_density, "clean tensor density")
      ->default_val(0.05);
  synth->add_option("--additive", synth_cfg.additive_noise,
                    "additive noise as a fraction of |X|")
      ->default_val(0.1);
  synth->add_option("--destructive", synth_cfg.destructive_noise,
                    "destructive noise as a fraction of |X|")
      ->default_val(0.1);
  synth->add_option("--seed", synth_cfg.seed, "random seed")->default_val(0);
  synth->add_option("--threads", synth_threads, "worker threads")->default_val(0);
  synth->add_option("--out", synth_out, "output path prefix")->required();

  std::string eval_model, eval_tensor, eval_labels, eval_out;
  auto* eval = app.add_subcommand("eval", "score a saved model against a tensor");
  eval->add_option("--model", eval_model, "model file")->required();
  eval->add_option("--tensor", eval_tensor, "tensor file")->required();
  eval->add_option("--labels", eval_labels, "ground-truth labels (one id per line)");
  eval->add_option("--out", eval_out, "output path prefix")->required();

  std::string r1_input, r1_weight = "1", r1_out;
  std::optional<double> r1_eps;
  std::uint64_t r1_seed = 0;
  int r1_threads = 0;
  auto* rank1 = app.add_subcommand(
      "rank1", "best rank-1 binary approximation of a matrix (tns with l = 1)");
  rank1->add_option("input", r1_input, "matrix as a single-slice tensor")->required();
  rank1->add_option("--weight", r1_weight, "error weight")->default_val("1");
  rank1->add_option("--eps", r1_eps,
                    "use the randomized (1-eps) scheme instead of the "
                    "deterministic approximation");
  rank1->add_option("--seed", r1_seed, "random seed")->default_val(0);
  rank1->add_option("--threads", r1_threads, "worker threads")->default_val(0);
  rank1->add_option("--out", r1_out, "output path prefix")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cluster->parsed()) return run_cluster(cluster_opts, cluster_k, unrestricted);
    if (mdl->parsed()) return run_mdl(mdl_opts, k_min, k_max);
    if (synth->parsed()) return run_synth(synth_cfg, synth_out, synth_threads);
    if (eval->parsed()) return run_eval(eval_model, eval_tensor, eval_labels, eval_out);
    if (rank1->parsed())
      return run_rank1(r1_input, r1_weight, r1_eps, r1_seed, r1_threads, r1_out);
  } catch (const ParseError& e) {
    std::cerr << "error: input: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: io: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: runtime: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "btc/cluster.hpp"
#include "btc/mdl.hpp"
#include "btc/metrics.hpp"
#include "btc/rank1.hpp"
#include "btc/rng.hpp"
#include "btc/synth.hpp"
#include "btc/version.hpp"

using namespace btc;

namespace {

int failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void verdict(int idx, bool pass, const std::string& name,
             const std::string& detail) {
  std::printf("[%2d] %s %s (%s)\n", idx, pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

BinaryMatrix random_matrix(Rng& rng, std::size_t r, std::size_t c,
                           double density) {
  BinaryMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (bernoulli_bit(rng, density)) m.set(i, j);
  return m;
}

BitVector random_vector(Rng& rng, std::size_t n, double density = 0.5) {
  BitVector v(n);
  for (std::size_t i = 0; i < n; ++i)
    if (bernoulli_bit(rng, density)) v.set(i);
  return v;
}

constexpr double kLemma4Ratio = 0.8284271247461903;  // 2*sqrt(2) - 2

// ---------------------------------------------------------------------------
// 1. deterministic approximation never drops below (2*sqrt(2)-2) * optimum:
//    exhaustive over all 3x3 matrices, plus random 4x4 and 5x5 batches
void criterion_1() {
  Timer timer;
  std::int64_t violations = 0;
  std::int64_t checked = 0;

  for (unsigned mask = 0; mask < 512; ++mask) {
    BinaryMatrix x(3, 3);
    for (unsigned p = 0; p < 9; ++p)
      if ((mask >> p) & 1) x.set(p / 3, p % 3);
    const auto approx = rank1_approx(x).sim;
    const auto opt = rank1_brute(x).sim;
    ++checked;
    if (static_cast<double>(approx) < kLemma4Ratio * static_cast<double>(opt))
      ++violations;
  }

  Rng rng(20240101);
  for (int t = 0; t < 2500; ++t) {
    const std::size_t n = (t % 2 == 0) ? 4 : 5;
    const double density = 0.1 + 0.08 * static_cast<double>(t % 10);
    const auto x = random_matrix(rng, n, n, density);
    const auto approx = rank1_approx(x).sim;
    const auto opt = rank1_brute(x).sim;
    ++checked;
    if (static_cast<double>(approx) < kLemma4Ratio * static_cast<double>(opt))
      ++violations;
  }

  const double secs = timer.seconds();
  verdict(1, violations == 0 && secs < 60.0,
          "rank-1 approximation ratio, exhaustive 3x3 + random 4x4/5x5",
          std::to_string(checked) + " instances, " +
              std::to_string(violations) + " violations, " +
              std::to_string(secs) + "s");
}

// ---------------------------------------------------------------------------
// 2. vectorized slices and their reshaped matrices score identically
void criterion_2() {
  Rng rng(20240202);
  std::int64_t mismatches = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const std::size_t n = 1 + uniform_below(rng, 8);
    const std::size_t m = 1 + uniform_below(rng, 8);
    const auto x = random_vector(rng, n * m);
    const auto a = random_vector(rng, n);
    const auto b = random_vector(rng, m);
    if (similarity(x, kronecker(b, a)) !=
        similarity(reshape_col_major(x, n, m), outer(a, b)))
      ++mismatches;
  }
  verdict(2, mismatches == 0, "rank-1 reshaping equivalence",
          std::to_string(trials) + " triples, " + std::to_string(mismatches) +
              " mismatches");
}

// ---------------------------------------------------------------------------
// 3. unfolded product identities and the cluster-assignment product
void criterion_3() {
  Rng rng(20240303);
  std::int64_t mismatches = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const std::size_t n = 1 + uniform_below(rng, 8);
    const std::size_t m = 1 + uniform_below(rng, 8);
    const std::size_t l = 1 + uniform_below(rng, 8);
    const std::size_t k = 1 + uniform_below(rng, 4);
    const FactorTriple f{random_matrix(rng, n, k, 0.5),
                         random_matrix(rng, m, k, 0.5),
                         random_matrix(rng, l, k, 0.5)};
    const auto x = bcp_reconstruct(f);
    if (unfold(x, 1) != boolean_product(f.A, khatri_rao(f.C, f.B).transpose()))
      ++mismatches;
    if (unfold(x, 2) != boolean_product(f.B, khatri_rao(f.C, f.A).transpose()))
      ++mismatches;
    if (unfold(x, 3) != boolean_product(f.C, khatri_rao(f.B, f.A).transpose()))
      ++mismatches;

    // one-nonzero-per-row factor: Boolean product equals integer product
    BinaryMatrix c(l, k);
    for (std::size_t s = 0; s < l; ++s)
      c.set(s, static_cast<std::size_t>(uniform_below(rng, k)));
    const auto y = random_matrix(rng, k, m, 0.5);
    const auto bp = boolean_product(c, y);
    bool bad = false;
    for (std::size_t i = 0; i < l && !bad; ++i)
      for (std::size_t j = 0; j < m && !bad; ++j) {
        int sum = 0;
        for (std::size_t kk = 0; kk < k; ++kk)
          sum += (c.test(i, kk) && y.test(kk, j)) ? 1 : 0;
        if (static_cast<int>(bp.test(i, j)) != sum) bad = true;
      }
    if (bad) ++mismatches;
  }
  verdict(3, mismatches == 0,
          "unfolding identities and assignment-product identity",
          std::to_string(trials) + " factor triples, " +
              std::to_string(mismatches) + " mismatches");
}

// ---------------------------------------------------------------------------
// 4. randomized scheme attains the promised expected fraction of optimum
void criterion_4() {
  Timer timer;
  Rng rng(20240404);
  const double eps = 0.3;
  int bad_matrices = 0;
  double worst = 1.0;
  for (int inst = 0; inst < 50; ++inst) {
    const double density = 0.15 + 0.07 * static_cast<double>(inst % 10);
    const auto x = random_matrix(rng, 5, 5, density);
    const auto opt = rank1_brute(x).sim;
    double mean = 0.0;
    for (int run = 0; run < 100; ++run) {
      PtasOptions opts;
      opts.eps = eps;
      opts.seed = static_cast<std::uint64_t>(inst) * 1000 +
                  static_cast<std::uint64_t>(run);
      mean += static_cast<double>(rank1_ptas(x, opts).sim);
    }
    mean /= 100.0;
    const double frac = mean / static_cast<double>(opt);
    worst = std::min(worst, frac);
    if (mean < (1.0 - eps) * static_cast<double>(opt)) ++bad_matrices;
  }
  verdict(4, bad_matrices == 0, "randomized rank-1 expectation at 1-eps",
          "50 matrices x 100 runs, worst mean/opt = " + std::to_string(worst) +
              ", " + std::to_string(timer.seconds()) + "s");
}

// ---------------------------------------------------------------------------
// 5. scaled synthetic recovery; the runs are reused by criteria 6, 7 and 10
struct RecoveryRun {
  SynthInstance inst;
  ClusterModel model;
};

std::vector<RecoveryRun> recovery_runs() {
  std::vector<RecoveryRun> runs;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SynthConfig cfg;  // 70 x 50 x 20, k = 5, density 0.05, 10% + 10% noise
    cfg.seed = seed;
    RecoveryRun run;
    run.inst = gen_instance(cfg);
    SaboteurOptions opts;
    opts.samples = 20;
    opts.seed = seed;
    run.model = saboteur(run.inst.noisy, 5, opts);
    runs.push_back(std::move(run));
  }
  return runs;
}

void criterion_5(const std::vector<RecoveryRun>& runs, double run_seconds) {
  int sim_ok = 0, kappa_ok = 0;
  std::string detail;
  for (const auto& run : runs) {
    const double rel = relative_similarity(run.inst.clean, run.model);
    const double kap = cohens_kappa(run.model.assignment, run.inst.labels);
    if (rel >= 0.95) ++sim_ok;
    if (kap >= 0.9) ++kappa_ok;
    char buf[64];
    std::snprintf(buf, sizeof buf, " (%.3f,%.2f)", rel, kap);
    detail += buf;
  }
  const bool pass = sim_ok >= 4 && kappa_ok >= 4 && run_seconds < 30.0;
  verdict(5, pass, "synthetic recovery at scaled defaults",
          "rel-sim>=0.95 on " + std::to_string(sim_ok) + "/5, kappa>=0.9 on " +
              std::to_string(kappa_ok) + "/5," + detail + ", " +
              std::to_string(run_seconds) + "s");
}

// ---------------------------------------------------------------------------
// 6. iterative updates never lose similarity and terminate quickly
void criterion_6(const std::vector<RecoveryRun>& runs) {
  bool monotone = true, terminated = true;
  int max_rounds = 0;
  for (const auto& run : runs) {
    int rounds = -1;
    const auto refined =
        iterative_updates(run.model, run.inst.noisy, {}, &rounds);
    if (refined.sim < run.model.sim) monotone = false;
    if (rounds < 0 || rounds >= run.inst.noisy.cell_count()) terminated = false;
    max_rounds = std::max(max_rounds, rounds);
  }
  verdict(6, monotone && terminated && max_rounds < 20,
          "iterative updates monotone and terminating",
          "max accepted rounds = " + std::to_string(max_rounds));
}

// ---------------------------------------------------------------------------
// 7. restriction ordering: training and held-out comparisons
void criterion_7(const std::vector<RecoveryRun>& runs) {
  // paired training runs with shared seeds on the criterion-5 instances
  int unrestricted_wins = 0;
  std::string train_detail;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    SaboteurOptions opts;
    opts.samples = 20;
    opts.seed = static_cast<std::uint64_t>(i + 1);
    const auto unres = unrestricted_btc(runs[i].inst.noisy, 5, opts);
    if (unres.sim >= runs[i].model.sim) ++unrestricted_wins;
    train_detail += " " + std::to_string(unres.sim - runs[i].model.sim);
  }

  // 75/25 split at the heavy-noise regime: rank-1 centroids should
  // generalize at least as well on a majority of seeds
  int restricted_better = 0;
  const std::size_t l = 20, train_l = 15;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SynthConfig cfg;
    cfg.seed = 100 + seed;
    cfg.additive_noise = 0.35;
    cfg.destructive_noise = 0.35;
    const auto inst = gen_instance(cfg);

    Rng split_rng(derive_seed(7777, seed));
    const auto order = sample_distinct(split_rng, l, l);
    BinaryTensor3 train(70, 50, train_l), test(70, 50, l - train_l);
    for (std::size_t s = 0; s < l; ++s) {
      auto& dst = (s < train_l) ? train : test;
      const std::size_t row = (s < train_l) ? s : s - train_l;
      or_into(dst.slice_row_mut(row), inst.noisy.slice_row(order[s]));
    }

    SaboteurOptions opts;
    opts.samples = 20;
    opts.seed = seed;
    opts.iterative_updates = true;
    const auto res = saboteur(train, 5, opts);
    const auto unres = unrestricted_btc(train, 5, opts);
    const auto res_pred = predict(res, test);
    const auto unres_pred = predict(unres, test);
    if (res_pred.sim >= unres_pred.sim) ++restricted_better;
  }

  const bool pass = unrestricted_wins == 5 && restricted_better >= 3;
  verdict(7, pass, "restriction ordering (training and held-out)",
          "unrestricted-minus-restricted train sim:" + train_detail +
              ", restricted >= unrestricted held-out: " +
              std::to_string(restricted_better) + "/5");
}

// ---------------------------------------------------------------------------
// 8. description length sweep recovers the planted cluster count
void criterion_8() {
  int best_in_band = 0;
  int baseline_selected = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SynthConfig cfg;
    cfg.n = 100, cfg.m = 80, cfg.l = 40, cfg.k = 5;
    cfg.target_density = 0.05;
    cfg.additive_noise = 0.05;
    cfg.destructive_noise = 0.05;
    cfg.seed = 200 + seed;
    const auto inst = gen_instance(cfg);
    SaboteurOptions opts;
    opts.samples = 20;
    opts.seed = seed;
    const auto report = select_k(inst.noisy, 1, 12, opts);
    if (report.best_k >= 3 && report.best_k <= 7) ++best_in_band;
    if (report.best_k == 0) ++baseline_selected;
    detail += " " + std::to_string(report.best_k);
  }
  verdict(8, best_in_band >= 3 && baseline_selected == 0,
          "description-length model order",
          "best_k per seed:" + detail + ", baseline picked " +
              std::to_string(baseline_selected) + " times");
}

// ---------------------------------------------------------------------------
// 9. clustering metrics against brute-force oracles
namespace oracle {

double kappa(const std::vector<std::uint32_t>& a,
             const std::vector<std::uint32_t>& b) {
  const auto l = static_cast<double>(a.size());
  std::uint32_t mx = 0;
  for (auto v : a) mx = std::max(mx, v);
  for (auto v : b) mx = std::max(mx, v);
  const std::size_t k = mx + 1;
  std::vector<std::int64_t> fa(k, 0), fb(k, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++fa[a[i]];
    ++fb[b[i]];
  }
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::int64_t best_agree = -1, best_chance = 0;
  do {
    std::int64_t agree = 0, chance = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (perm[b[i]] == a[i]) ++agree;
    for (std::size_t c = 0; c < k; ++c) chance += fa[perm[c]] * fb[c];
    if (agree > best_agree || (agree == best_agree && chance < best_chance)) {
      best_agree = agree;
      best_chance = chance;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  const auto l2 = static_cast<std::int64_t>(l) * static_cast<std::int64_t>(l);
  if (best_chance == l2) return 1.0;
  const double po = static_cast<double>(best_agree) / l;
  const double pe = static_cast<double>(best_chance) / static_cast<double>(l2);
  return (po - pe) / (1.0 - pe);
}

double nmi(const std::vector<std::uint32_t>& a,
           const std::vector<std::uint32_t>& b) {
  const auto l = static_cast<double>(a.size());
  std::uint32_t ma = 0, mb = 0;
  for (auto v : a) ma = std::max(ma, v);
  for (auto v : b) mb = std::max(mb, v);
  std::vector<std::vector<double>> joint(ma + 1,
                                         std::vector<double>(mb + 1, 0.0));
  std::vector<double> pa(ma + 1, 0.0), pb(mb + 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[a[i]][b[i]] += 1.0;
    pa[a[i]] += 1.0;
    pb[b[i]] += 1.0;
  }
  double mi = 0.0, h = 0.0;
  for (std::size_t i = 0; i <= ma; ++i)
    for (std::size_t j = 0; j <= mb; ++j) {
      if (joint[i][j] == 0.0) continue;
      const double pij = joint[i][j] / l;
      mi += pij * std::log(joint[i][j] * l / (pa[i] * pb[j]));
      h -= pij * std::log(pij);
    }
  if (h == 0.0) return 1.0;
  return std::min(1.0, std::max(0.0, mi / h));
}

double min_matching(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = 1e300;
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += cost[i][perm[i]];
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace oracle

void criterion_9() {
  std::int64_t mismatches = 0;
  std::int64_t checked = 0;

  // all pairs of labelings of 6 items over 3 clusters (3^6 = 729 each)
  std::vector<std::vector<std::uint32_t>> labelings;
  for (unsigned code = 0; code < 729; ++code) {
    std::vector<std::uint32_t> lab(6);
    unsigned c = code;
    for (int i = 0; i < 6; ++i) {
      lab[i] = c % 3;
      c /= 3;
    }
    labelings.push_back(std::move(lab));
  }
  for (const auto& a : labelings)
    for (const auto& b : labelings) {
      ++checked;
      if (std::abs(cohens_kappa(a, b) - oracle::kappa(a, b)) > 1e-9)
        ++mismatches;
      if (std::abs(nmi_joint(a, b) - oracle::nmi(a, b)) > 1e-9) ++mismatches;
    }

  // assignment solver against the permutation oracle up to k = 5
  Rng rng(20240909);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 2 + uniform_below(rng, 4);
    std::vector<std::vector<double>> cost(k, std::vector<double>(k));
    for (auto& row : cost)
      for (auto& c : row)
        c = static_cast<double>(uniform_below(rng, 2001)) / 100.0 - 10.0;
    const auto match = hungarian(cost);
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) total += cost[i][match[i]];
    ++checked;
    if (std::abs(total - oracle::min_matching(cost)) > 1e-9) ++mismatches;
  }

  verdict(9, mismatches == 0, "metric oracles (kappa, nmi, matching)",
          std::to_string(checked) + " comparisons, " +
              std::to_string(mismatches) + " mismatches");
}

// ---------------------------------------------------------------------------
// 10. thread-count determinism and the one-bit-per-cell storage bound
void criterion_10() {
  bool deterministic = true;

#ifdef _OPENMP
  const int saved = omp_get_max_threads();
#endif

  for (std::uint64_t seed = 1; seed <= 2; ++seed) {
    SynthConfig cfg;
    cfg.seed = seed;
    const auto inst = gen_instance(cfg);
    SaboteurOptions opts;
    opts.samples = 20;
    opts.seed = seed;

    SynthConfig mdl_cfg;
    mdl_cfg.n = 100, mdl_cfg.m = 80, mdl_cfg.l = 40, mdl_cfg.k = 5;
    mdl_cfg.target_density = 0.05;
    mdl_cfg.additive_noise = 0.05;
    mdl_cfg.destructive_noise = 0.05;
    mdl_cfg.seed = 200 + seed;
    const auto mdl_inst = gen_instance(mdl_cfg);

    auto run_all = [&]() {
      auto model = saboteur(inst.noisy, 5, opts);
      auto refined = iterative_updates(model, inst.noisy);
      auto unres = unrestricted_btc(inst.noisy, 5, opts);
      auto report = select_k(mdl_inst.noisy, 1, 8, opts);
      return std::tuple{std::move(model), std::move(refined), std::move(unres),
                        std::move(report)};
    };

#ifdef _OPENMP
    omp_set_num_threads(1);
#endif
    const auto one = run_all();
#ifdef _OPENMP
    omp_set_num_threads(4);
#endif
    const auto four = run_all();

    if (!(std::get<0>(one) == std::get<0>(four)) ||
        !(std::get<1>(one) == std::get<1>(four)) ||
        !(std::get<2>(one) == std::get<2>(four)))
      deterministic = false;
    const auto& ra = std::get<3>(one).records;
    const auto& rb = std::get<3>(four).records;
    if (ra.size() != rb.size() ||
        std::get<3>(one).best_k != std::get<3>(four).best_k) {
      deterministic = false;
    } else {
      for (std::size_t i = 0; i < ra.size(); ++i)
        if (ra[i].k != rb[i].k || ra[i].total_bits != rb[i].total_bits)
          deterministic = false;
    }
  }

#ifdef _OPENMP
  omp_set_num_threads(saved);
#endif

  // storage accounting: one bit per cell plus word padding per slice row
  bool storage_ok = true;
  const std::size_t probes[][3] = {{70, 50, 20}, {100, 80, 40}, {7, 3, 5},
                                   {64, 64, 64}, {1, 1, 1},     {65, 1, 3}};
  for (const auto& d : probes) {
    const BinaryTensor3 x(d[0], d[1], d[2]);
    const std::size_t cells = d[0] * d[1] * d[2];
    const std::size_t words_per_row = (d[0] * d[1] + 63) / 64;
    if (x.storage_bytes() != d[2] * words_per_row * 8) storage_ok = false;
    if (x.storage_bytes() > (cells + 7) / 8 + d[2] * 8) storage_ok = false;
  }

  verdict(10, deterministic && storage_ok, "determinism and memory bound",
          std::string(deterministic
                          ? "identical models and curves for 1 and 4 threads"
                          : "thread count changed a result") +
              (storage_ok ? ", storage within ceil(nml/8) + row padding"
                          : ", storage bound violated"));
}

}  // namespace

int main() {
  std::printf("acceptance suite (version %s)\n", kVersion);
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();

  Timer run_timer;
  const auto runs = recovery_runs();
  const double run_seconds = run_timer.seconds();
  criterion_5(runs, run_seconds);
  criterion_6(runs);
  criterion_7(runs);
  criterion_8();
  criterion_9();
  criterion_10();

  if (failures == 0)
    std::printf("all criteria passed\n");
  else
    std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}

#include "stabsel/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

#include "stabsel/parallel.hpp"
#include "stabsel/rng.hpp"
#include "stabsel/svm.hpp"

namespace stabsel {

namespace {

constexpr std::uint64_t kCorruptionSalt = 0xc0;
constexpr std::uint64_t kRankingSalt = 0x5e;

void check_truth(const FeatureRanking& ranking, const GroundTruth& truth) {
  if (truth.discriminative.empty()) {
    throw std::invalid_argument("evaluation: empty ground-truth set");
  }
  const auto p = static_cast<std::size_t>(ranking.scores.size());
  if (p < truth.discriminative.size()) {
    throw std::invalid_argument("evaluation: ranking shorter than the truth set");
  }
  if (truth.discriminative.max_index() >= p) {
    throw std::out_of_range("evaluation: truth index out of range");
  }
}

}  // namespace

PRCurve pr_curve(const FeatureRanking& ranking, const GroundTruth& truth, std::size_t stride) {
  check_truth(ranking, truth);
  if (stride == 0) throw std::invalid_argument("pr_curve: stride must be positive");
  const auto p = static_cast<std::size_t>(ranking.scores.size());
  const auto order = ranking_order(ranking.scores);
  const double truth_size = static_cast<double>(truth.discriminative.size());

  PRCurve curve;
  curve.method = ranking.method.name();
  std::size_t hits = 0;
  for (std::size_t i = 0; i < p; ++i) {
    if (truth.discriminative.contains(order[i])) ++hits;
    const std::size_t k = i + 1;
    if (k % stride == 0 || k == p) {
      curve.points.push_back({k, static_cast<double>(hits) / static_cast<double>(k),
                              static_cast<double>(hits) / truth_size});
    }
  }
  return curve;
}

double precision_at_recall(const PRCurve& curve, double target_recall) {
  if (!(target_recall >= 0.0 && target_recall <= 1.0)) {
    throw std::invalid_argument("precision_at_recall: target outside [0, 1]");
  }
  for (const PRPoint& pt : curve.points) {
    if (pt.recall >= target_recall) return pt.precision;
  }
  throw std::invalid_argument("precision_at_recall: curve never reaches the target recall");
}

double selection_accuracy(const FeatureRanking& ranking, const GroundTruth& truth) {
  check_truth(ranking, truth);
  const IndexSet top = rank_top_k(ranking.scores, truth.discriminative.size());
  std::size_t hits = 0;
  for (std::size_t f : top) {
    if (truth.discriminative.contains(f)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.discriminative.size());
}

LoocvResult classify_topk(const Dataset& train, const Dataset& eval,
                          const FeatureRanking& ranking, std::size_t k, double l2_penalty,
                          unsigned jobs) {
  if (train.p() != eval.p() || train.feature_ids() != eval.feature_ids()) {
    throw std::invalid_argument("classify_topk: train and eval must share features");
  }
  if (static_cast<std::size_t>(ranking.scores.size()) != static_cast<std::size_t>(eval.p())) {
    throw std::invalid_argument("classify_topk: ranking length does not match p");
  }
  if (k < 1 || k > static_cast<std::size_t>(eval.p())) {
    throw std::out_of_range("classify_topk: k out of range");
  }
  if (eval.n() < 3) {
    throw std::invalid_argument("classify_topk: eval set too small for LOOCV (n < 3)");
  }
  if (!(l2_penalty > 0.0)) {
    throw std::invalid_argument("classify_topk: l2_penalty must be positive");
  }
  eval.require_both_classes("classify_topk");

  const IndexSet top = rank_top_k(ranking.scores, k);
  std::vector<std::size_t> all_rows(static_cast<std::size_t>(eval.n()));
  std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});
  const Dataset eval_k = slice(eval, all_rows, top);

  SvmConfig svm_cfg;
  svm_cfg.lambda2 = l2_penalty;

  // Warm start for the fold fits; with l2_penalty > 0 each fold's optimum is
  // unique, so this only speeds convergence.
  auto [eval_scaled, eval_stats] = standardize(eval_k);
  const FitResult warm = fit_linear_svm(eval_scaled, svm_cfg);

  const auto n = static_cast<std::size_t>(eval.n());
  Eigen::VectorXd decisions(static_cast<Eigen::Index>(n));
  std::vector<int> predictions(n);

  parallel_for(n, jobs, [&](std::size_t hold_out) {
    std::vector<std::size_t> rows;
    rows.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (i != hold_out) rows.push_back(i);
    }
    const Dataset fold = slice(eval_k, rows, all_features(static_cast<std::size_t>(eval_k.p())));
    auto [scaled, stats] = standardize(fold);
    const FitResult fr = fit_linear_svm(scaled, svm_cfg, &warm);

    double decision = fr.intercept;
    for (Eigen::Index j = 0; j < eval_k.p(); ++j) {
      const double v = eval_k.x()(static_cast<Eigen::Index>(hold_out), j);
      const double scaled_v = stats.stds[j] > 0.0 ? (v - stats.means[j]) / stats.stds[j] : 0.0;
      decision += fr.w[j] * scaled_v;
    }
    decisions[static_cast<Eigen::Index>(hold_out)] = decision;
    predictions[hold_out] = decision > 0.0 ? 1 : 0;
  });

  AccuracyReport report;
  report.k_used = k;
  for (std::size_t i = 0; i < n; ++i) {
    const bool truth1 = eval.y()[static_cast<Eigen::Index>(i)] == 1.0;
    const bool pred1 = predictions[i] == 1;
    if (truth1 && pred1) ++report.tp;
    if (truth1 && !pred1) ++report.fn;
    if (!truth1 && pred1) ++report.fp;
    if (!truth1 && !pred1) ++report.tn;
  }
  report.accuracy = static_cast<double>(report.tp + report.tn) / static_cast<double>(n);
  report.sensitivity = static_cast<double>(report.tp) / static_cast<double>(report.tp + report.fn);
  report.specificity = static_cast<double>(report.tn) / static_cast<double>(report.tn + report.fp);
  return LoocvResult{report, std::move(decisions)};
}

ROCCurve roc_auc(const Eigen::VectorXd& decision_scores, const Eigen::VectorXd& labels) {
  if (decision_scores.size() != labels.size()) {
    throw std::invalid_argument("roc_auc: size mismatch");
  }
  long n_pos = 0, n_neg = 0;
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1.0) {
      ++n_pos;
    } else if (labels[i] == 0.0) {
      ++n_neg;
    } else {
      throw std::invalid_argument("roc_auc: labels must be 0 or 1");
    }
  }
  if (n_pos == 0 || n_neg == 0) {
    throw std::invalid_argument("roc_auc: both classes must be present");
  }

  std::vector<std::size_t> order(static_cast<std::size_t>(decision_scores.size()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double sa = decision_scores[static_cast<Eigen::Index>(a)];
    const double sb = decision_scores[static_cast<Eigen::Index>(b)];
    return sa != sb ? sa > sb : a < b;
  });

  ROCCurve curve;
  curve.points.emplace_back(0.0, 0.0);
  long tp = 0, fp = 0;
  double auc = 0.0;
  double prev_fpr = 0.0, prev_tpr = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    // One step per group of equal scores.
    std::size_t j = i;
    const double score = decision_scores[static_cast<Eigen::Index>(order[i])];
    while (j < order.size() && decision_scores[static_cast<Eigen::Index>(order[j])] == score) {
      if (labels[static_cast<Eigen::Index>(order[j])] == 1.0) {
        ++tp;
      } else {
        ++fp;
      }
      ++j;
    }
    const double fpr = static_cast<double>(fp) / static_cast<double>(n_neg);
    const double tpr = static_cast<double>(tp) / static_cast<double>(n_pos);
    curve.points.emplace_back(fpr, tpr);
    auc += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
    prev_fpr = fpr;
    prev_tpr = tpr;
    i = j;
  }
  curve.auc = auc;
  return curve;
}

std::uint64_t dataset_fingerprint(const Dataset& d) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  auto mix_bytes = [&h](const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ull;
    }
  };
  const std::uint64_t n = static_cast<std::uint64_t>(d.n());
  const std::uint64_t p = static_cast<std::uint64_t>(d.p());
  mix_bytes(&n, sizeof n);
  mix_bytes(&p, sizeof p);
  mix_bytes(d.y().data(), sizeof(double) * static_cast<std::size_t>(d.y().size()));
  mix_bytes(d.x().data(), sizeof(double) * static_cast<std::size_t>(d.x().size()));
  for (const auto& id : d.feature_ids()) mix_bytes(id.data(), id.size());
  return h;
}

std::uint64_t corruption_seed(std::uint64_t data_seed, int flips) {
  return child_seed(child_seed(data_seed, kCorruptionSalt), static_cast<std::uint64_t>(flips));
}

std::uint64_t ranking_seed(std::uint64_t data_seed, int flips) {
  return child_seed(child_seed(data_seed, kRankingSalt), static_cast<std::uint64_t>(flips));
}

namespace {

// Shared cell runner for the sweeps: corrupt, rank, hand back the ranking.
FeatureRanking rank_corrupted(const Dataset& clean, const MethodSpec& method,
                              std::uint64_t data_seed, int flips) {
  Eigen::VectorXd y = flip_labels(clean.y(), static_cast<std::size_t>(flips),
                                  corruption_seed(data_seed, flips));
  const Dataset corrupted(clean.x(), std::move(y), clean.feature_ids());
  MethodSpec resolved = method;
  if (!resolved.has("seed") &&
      (resolved.kind == MethodKind::randomized_l1_logistic ||
       resolved.kind == MethodKind::stability_elastic_net)) {
    resolved.hyperparams["seed"] = static_cast<double>(ranking_seed(data_seed, flips));
  }
  return rank_features(corrupted, resolved, 1);
}

}  // namespace

std::vector<RobustnessRow> robustness_sweep(const SyntheticSpec& spec,
                                            const std::vector<MethodSpec>& methods, int max_flips,
                                            std::span<const std::uint64_t> seeds, unsigned jobs) {
  if (max_flips < 0) throw std::invalid_argument("robustness_sweep: max_flips < 0");
  if (methods.empty() || seeds.empty()) {
    throw std::invalid_argument("robustness_sweep: no methods or seeds");
  }
  struct Cell {
    std::size_t method, seed;
    int flips;
  };
  std::vector<Cell> cells;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (int f = 0; f <= max_flips; ++f) {
      for (std::size_t s = 0; s < seeds.size(); ++s) cells.push_back({m, s, f});
    }
  }

  // Data generation is shared per seed; ranking dominates the cost.
  std::vector<Dataset> data;
  std::vector<GroundTruth> truths;
  for (std::uint64_t seed : seeds) {
    SyntheticSpec s = spec;
    s.noise_seed = seed;
    auto [d, truth] = generate(s);
    data.push_back(std::move(d));
    truths.push_back(std::move(truth));
  }

  std::vector<RobustnessRow> rows(cells.size());
  parallel_for(cells.size(), jobs, [&](std::size_t c) {
    const Cell& cell = cells[c];
    const FeatureRanking ranking =
        rank_corrupted(data[cell.seed], methods[cell.method], seeds[cell.seed], cell.flips);
    rows[c] = RobustnessRow{methods[cell.method].name(), cell.flips, seeds[cell.seed],
                            selection_accuracy(ranking, truths[cell.seed])};
  });
  return rows;
}

std::vector<PrSweepRow> pr_sweep(const SyntheticSpec& spec, const std::vector<MethodSpec>& methods,
                                 int flips, std::span<const std::uint64_t> seeds,
                                 std::size_t stride, unsigned jobs) {
  if (flips < 0) throw std::invalid_argument("pr_sweep: flips < 0");
  if (methods.empty() || seeds.empty()) {
    throw std::invalid_argument("pr_sweep: no methods or seeds");
  }
  struct Cell {
    std::size_t method, seed;
  };
  std::vector<Cell> cells;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (std::size_t s = 0; s < seeds.size(); ++s) cells.push_back({m, s});
  }

  std::vector<Dataset> data;
  std::vector<GroundTruth> truths;
  for (std::uint64_t seed : seeds) {
    SyntheticSpec s = spec;
    s.noise_seed = seed;
    auto [d, truth] = generate(s);
    data.push_back(std::move(d));
    truths.push_back(std::move(truth));
  }

  std::vector<PrSweepRow> rows(cells.size());
  parallel_for(cells.size(), jobs, [&](std::size_t c) {
    const Cell& cell = cells[c];
    const FeatureRanking ranking =
        rank_corrupted(data[cell.seed], methods[cell.method], seeds[cell.seed], flips);
    rows[c] = PrSweepRow{methods[cell.method].name(), seeds[cell.seed],
                         pr_curve(ranking, truths[cell.seed], stride)};
  });
  return rows;
}

TopkExperiment topk_experiment(const Dataset& train, const Dataset& eval,
                               const MethodSpec& ranker, std::span<const std::size_t> ks,
                               double l2_penalty, unsigned jobs) {
  if (ks.empty()) throw std::invalid_argument("topk_experiment: no k values");
  TopkExperiment out;
  out.train_fingerprint = dataset_fingerprint(train);
  out.eval_fingerprint = dataset_fingerprint(eval);
  if (out.train_fingerprint == out.eval_fingerprint) {
    throw std::logic_error(
        "topk_experiment: eval set entered ranking (identical fingerprints); the protocol "
        "requires disjoint centers");
  }
  const FeatureRanking ranking = rank_features(train, ranker, jobs);
  for (std::size_t k : ks) {
    const LoocvResult fold = classify_topk(train, eval, ranking, k, l2_penalty, jobs);
    out.points.push_back({k, fold.report});
  }
  return out;
}

}  // namespace stabsel

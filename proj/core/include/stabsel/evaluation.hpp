#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stabsel/baselines.hpp"
#include "stabsel/dataset.hpp"
#include "stabsel/synthetic.hpp"

namespace stabsel {

struct PRPoint {
  std::size_t k = 0;
  double precision = 0.0;
  double recall = 0.0;
};

struct PRCurve {
  std::vector<PRPoint> points;  // increasing k; recall is non-decreasing
  std::string method;
};

// Precision/recall of the top-k set against truth.discriminative for
// k = stride, 2*stride, ..., always ending at k = p. Top-k uses the
// rank_top_k tie rule (lower index wins).
PRCurve pr_curve(const FeatureRanking& ranking, const GroundTruth& truth, std::size_t stride = 1);

// Precision at the first curve point whose recall reaches `target_recall`.
double precision_at_recall(const PRCurve& curve, double target_recall);

// Recall of the truth set within the top-|truth| ranked features. This is the
// selection-accuracy metric used by every robustness experiment here; it is
// recall at k = |truth|, documented next to each output that reports it.
double selection_accuracy(const FeatureRanking& ranking, const GroundTruth& truth);

struct AccuracyReport {
  double accuracy = 0.0;
  double sensitivity = 0.0;  // tp / (tp + fn)
  double specificity = 0.0;  // tn / (tn + fp)
  std::size_t k_used = 0;
  long tp = 0, fp = 0, tn = 0, fn = 0;
};

struct LoocvResult {
  AccuracyReport report;
  Eigen::VectorXd decision_scores;  // per held-out observation of eval
};

// Cross-center protocol: restrict both sets to the top-k features of
// `ranking` (which must come from `train` only), then leave-one-out
// cross-validate an l2 squared-hinge linear SVM *within* eval. Each fold
// standardizes its own training split and applies those statistics to the
// held-out row. l2_penalty > 0 keeps every fold's optimum unique, so the
// internal warm start cannot change results, only iteration counts.
LoocvResult classify_topk(const Dataset& train, const Dataset& eval,
                          const FeatureRanking& ranking, std::size_t k, double l2_penalty,
                          unsigned jobs = 1);

struct ROCCurve {
  std::vector<std::pair<double, double>> points;  // (fpr, tpr), ascending fpr
  double auc = 0.0;                               // trapezoidal integral of the points
};

// Threshold sweep over the decision scores; equal scores collapse into one
// step, which makes the trapezoidal area equal to the tie-corrected
// Mann-Whitney statistic.
ROCCurve roc_auc(const Eigen::VectorXd& decision_scores, const Eigen::VectorXd& labels);

// Content hash of (n, p, labels, values, feature ids); used by the
// experiment harness to prove the eval set never entered ranking.
std::uint64_t dataset_fingerprint(const Dataset& d);

// Seeds for the label corruption and for ensemble rankings inside the
// sweeps, derived so every (data seed, flip count) cell is deterministic.
std::uint64_t corruption_seed(std::uint64_t data_seed, int flips);
std::uint64_t ranking_seed(std::uint64_t data_seed, int flips);

struct RobustnessRow {
  std::string method;
  int flips = 0;
  std::uint64_t seed = 0;
  double selection_accuracy = 0.0;
};

// For each (method, flip count, data seed): generate the benchmark, flip
// `flips` labels, rank, and score recall at k = |truth|. Cells are
// independent and the row order is fixed (method-major, then flips, then
// seed) regardless of `jobs`.
std::vector<RobustnessRow> robustness_sweep(const SyntheticSpec& spec,
                                            const std::vector<MethodSpec>& methods, int max_flips,
                                            std::span<const std::uint64_t> seeds,
                                            unsigned jobs = 1);

struct PrSweepRow {
  std::string method;
  std::uint64_t seed = 0;
  PRCurve curve;
};

// Per-method precision-recall curves on label-corrupted data.
std::vector<PrSweepRow> pr_sweep(const SyntheticSpec& spec, const std::vector<MethodSpec>& methods,
                                 int flips, std::span<const std::uint64_t> seeds,
                                 std::size_t stride = 1, unsigned jobs = 1);

struct TopkPoint {
  std::size_t k = 0;
  AccuracyReport report;
};

struct TopkExperiment {
  std::vector<TopkPoint> points;
  std::uint64_t train_fingerprint = 0;
  std::uint64_t eval_fingerprint = 0;
};

// Rank on `train`, LOOCV-classify within `eval` for every k in `ks`. Refuses
// to run when the eval set's fingerprint matches the ranking input.
TopkExperiment topk_experiment(const Dataset& train, const Dataset& eval,
                               const MethodSpec& ranker, std::span<const std::size_t> ks,
                               double l2_penalty, unsigned jobs = 1);

}  // namespace stabsel

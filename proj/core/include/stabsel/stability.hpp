#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "stabsel/dataset.hpp"
#include "stabsel/elastic_net.hpp"

namespace stabsel {

// Stability selection with subsampling of both observations and covariates:
// the base learner is refit on N random row/column submatrices and each
// feature is scored by the fraction of resamples that selected it.

struct SubsampleParams {
  double alpha = 0.5;       // row fraction in (0, 1]
  double beta = 0.2;        // column fraction in (0, 1]
  int n_resamples = 200;    // N
  std::uint64_t master_seed = 0;
  // Draw floor(alpha*n_c) rows from each class instead of floor(alpha*n)
  // rows overall, so no resample is single-class. Plans built with labels
  // honor this; plans built without labels always draw uniformly.
  bool stratify = true;
};

struct SubsampleDraw {
  std::vector<std::size_t> rows;  // ascending, no duplicates
  IndexSet cols;
  std::uint64_t fit_seed;  // for stochastic base learners; the built-in
                           // coordinate-descent base is deterministic and
                           // ignores it
};

struct SubsamplePlan {
  std::vector<SubsampleDraw> draws;
};

// Pre-draws all N (row set, column set) pairs. Draw j is generated from a
// child seed derived from (master_seed, j) in counter mode, so the plan is a
// pure function of (n, p, params, labels) and independent of evaluation
// order. Row draws are stratified when `labels` is non-null and
// params.stratify is set; stratified draws have floor(alpha*n0) +
// floor(alpha*n1) rows, which can undershoot floor(alpha*n) by one.
SubsamplePlan make_plan(std::size_t n, std::size_t p, const SubsampleParams& params,
                        const Eigen::VectorXd* labels = nullptr);

struct StabilityResult {
  Eigen::VectorXd scores;  // per original feature, in [0, 1]; score * N is integral
  int n_resamples = 0;
  std::optional<std::vector<IndexSet>> selection_sets;  // original-index space
  SubsampleParams params;
};

// Runs the full procedure: for each draw, restrict the data to the drawn
// rows/columns, re-standardize the submatrix, fit `base`, and record the
// support mapped back to original feature indices. A failing fit aborts the
// run with the draw index attached; skipping draws would bias the scores.
// Deterministic for fixed inputs regardless of `jobs`.
StabilityResult run(const Dataset& d, const SubsampleParams& params, const PenaltyConfig& base,
                    bool keep_sets = false, unsigned jobs = 1);

// Same, with a caller-supplied plan (the plan's row/column indices must fit d).
StabilityResult run_with_plan(const Dataset& d, const SubsamplePlan& plan,
                              const SubsampleParams& params, const PenaltyConfig& base,
                              bool keep_sets = false, unsigned jobs = 1);

// Exact selection frequency per feature: scores[f] = |{j : f in sets[j]}| / N.
Eigen::VectorXd scores_from_sets(const std::vector<IndexSet>& sets, std::size_t p);

// The k highest-scoring features; ties broken toward the lower index.
IndexSet rank_top_k(const Eigen::VectorXd& scores, std::size_t k);

// Feature order used everywhere scores are ranked or serialized:
// descending score, then ascending index.
std::vector<std::size_t> ranking_order(const Eigen::VectorXd& scores);

// CSV with header "feature_id,score", rows in ranking_order.
void write_scores_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& feature_ids, const Eigen::VectorXd& scores);

// One line per draw: the selected original indices, comma-separated.
void write_sets_csv(const std::filesystem::path& path, const std::vector<IndexSet>& sets);

}  // namespace stabsel

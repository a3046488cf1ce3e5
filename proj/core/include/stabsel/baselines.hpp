#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "stabsel/dataset.hpp"
#include "stabsel/stability.hpp"

namespace stabsel {

// Comparator methods, each reduced to one relevance score per feature so the
// evaluation harness treats every method identically.

enum class MethodKind {
  t_test,
  l1_logistic,
  l2_logistic,
  l1_svm,
  l2_svm,
  elastic_net,
  randomized_l1_logistic,
  stability_elastic_net,
};

struct MethodSpec {
  MethodKind kind = MethodKind::stability_elastic_net;
  // Per-kind keys: lambda1 and/or lambda2 for the penalized kinds; the
  // ensemble kinds additionally accept alpha, beta, resamples, seed and
  // stratify (0/1). Unknown keys are rejected.
  std::map<std::string, double> hyperparams;

  static MethodSpec make(MethodKind kind, std::map<std::string, double> hyperparams = {});
  static MethodKind kind_from_name(const std::string& name);
  std::string name() const;
  void validate() const;

  double at(const std::string& key) const;  // throws when missing
  bool has(const std::string& key) const { return hyperparams.count(key) > 0; }
  // Subsample settings for the ensemble kinds, with per-kind resample
  // defaults (200 for stability_elastic_net, 500 for randomized_l1_logistic).
  SubsampleParams subsample_params() const;
};

std::vector<std::string> all_method_names();

struct FeatureRanking {
  Eigen::VectorXd scores;  // higher = more relevant; always length p
  MethodSpec method;
};

struct TTestStats {
  Eigen::VectorXd t;            // signed statistic; +-inf when the pooled
                                // variance is 0 and the means differ
  Eigen::VectorXd p_two_sided;  // under t with n-2 degrees of freedom
};

// Pooled-variance two-sample t statistic per feature (class 1 minus class 0).
// Zero pooled variance with equal means gives t = 0, not NaN.
TTestStats t_test_stats(const Dataset& d);

// |t| as the relevance score. Infinite statistics are mapped to the largest
// finite double so the ranking stays finite while such features still sort
// first.
FeatureRanking t_test_scores(const Dataset& d);

// Fits the designated penalized model once on the full data (standardized
// internally) and scores each feature by |w_j|. Accepts the four single-fit
// kinds l1/l2 logistic, l1/l2 svm, and elastic_net.
FeatureRanking penalized_model_scores(const Dataset& d, MethodKind kind,
                                      const std::map<std::string, double>& hyperparams);

// Classic stability selection: identical machinery to stability run with an
// l1-penalized logistic base (lambda2 = 0).
StabilityResult randomized_l1_logistic(const Dataset& d, const SubsampleParams& params,
                                       double lambda1, bool keep_sets = false, unsigned jobs = 1);

// One entry point for every method. Ensemble kinds honor `jobs`.
FeatureRanking rank_features(const Dataset& d, const MethodSpec& method, unsigned jobs = 1);

// "feature_id,score" files (same schema as write_scores_csv).
void write_ranking_csv(const std::filesystem::path& path, const Dataset& d,
                       const FeatureRanking& ranking);
std::vector<std::pair<std::string, double>> read_ranking_csv(const std::filesystem::path& path);
// Reorders rows read from a ranking file into the dataset's feature order.
Eigen::VectorXd scores_in_feature_order(const std::vector<std::string>& feature_ids,
                                        const std::vector<std::pair<std::string, double>>& rows);

}  // namespace stabsel

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "stabsel/baselines.hpp"
#include "stabsel/dataset.hpp"

namespace stabsel {

// K-fold cross-validated grid search over the penalty weights of one method
// family. Folds are stratified by class after a seeded shuffle; models are
// fit on each training split (standardized, with the split's statistics
// applied to the held-out part) and scored by the method's own loss.

struct CvConfig {
  int n_folds = 5;
  std::uint64_t seed = 0;
  std::vector<double> grid;  // candidate penalty values; empty = default_lambda_grid()
  // CV fits can be looser than final fits; selection only needs loss ordering.
  double fit_tol = 1e-4;
  int fit_max_iter = 1000;
};

// Powers of two from 2^-8 to 2^2.
std::vector<double> default_lambda_grid();

// Returns the winning penalties, keyed like MethodSpec hyperparameters
// ("lambda1" and/or "lambda2" depending on the kind). Ties resolve to the
// earliest grid point (lambda1-major order), so the search is deterministic.
// stability_elastic_net shares the plain elastic_net search, and
// randomized_l1_logistic the l1_logistic one.
std::map<std::string, double> cv_select_hyperparams(const Dataset& d, MethodKind kind,
                                                    const CvConfig& cfg = {});

}  // namespace stabsel

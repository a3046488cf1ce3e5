#pragma once

#include <map>
#include <string>

#include "stabsel/baselines.hpp"

namespace stabsel {

// Penalty settings tuned once (5-fold cross-validation on the bundled
// benchmark at its default size, then fixed) for the synthetic comparison
// experiments. They are starting points for data of roughly n=100, p=4410
// after standardization; for other data pass explicit penalties or use
// cv_select_hyperparams.
inline std::map<std::string, double> synthetic_benchmark_hyperparams(MethodKind kind) {
  switch (kind) {
    case MethodKind::t_test:
      return {};
    case MethodKind::l1_logistic:
      return {{"lambda1", 16.0}};
    case MethodKind::l2_logistic:
      return {{"lambda2", 4.0}};
    case MethodKind::l1_svm:
      return {{"lambda1", 64.0}};
    case MethodKind::l2_svm:
      return {{"lambda2", 4.0}};
    case MethodKind::elastic_net:
      return {{"lambda1", 32.0}, {"lambda2", 32.0}};
    case MethodKind::randomized_l1_logistic:
      return {{"lambda1", 8.0}};
    case MethodKind::stability_elastic_net:
      return {{"lambda1", 16.0}, {"lambda2", 16.0}};
  }
  return {};
}

// l2 weight of the LOOCV squared-hinge classifier in the cross-center
// protocol, fixed once for the train center rather than per fold or per k.
inline double synthetic_benchmark_classifier_l2() { return 1.0; }

}  // namespace stabsel

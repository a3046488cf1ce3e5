#pragma once

#include <Eigen/Dense>

#include "stabsel/dataset.hpp"
#include "stabsel/elastic_net.hpp"

namespace stabsel {

// Linear SVM with squared hinge loss,
//
//     sum_i max(0, 1 - yt_i (x_i' w + b))^2 + lambda1 ||w||_1 + lambda2 ||w||^2
//
// with yt = 2 y - 1. Same penalty conventions as elastic_net.hpp. When
// lambda1 > 0 the solver is accelerated proximal gradient with a fixed step
// from a power-iteration Lipschitz bound; the pure-l2 case uses matrix-free
// Newton-CG, which is orders of magnitude faster on wide ill-conditioned
// designs. Both paths stop on the same subgradient certificate and are
// deterministic.
struct SvmConfig {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  int max_iter = 200000;  // gradient steps / Hessian products
  double tol = 1e-6;
  bool fit_intercept = true;
};

// `warm` optionally seeds (w, intercept) from a previous fit on similar data;
// the result is still a pure function of (d, cfg, warm).
FitResult fit_linear_svm(const Dataset& d, const SvmConfig& cfg, const FitResult* warm = nullptr);

double svm_objective(const Dataset& d, const Eigen::VectorXd& w, double intercept,
                     const SvmConfig& cfg);

// Decision values X w + b.
Eigen::VectorXd svm_decision(const Eigen::MatrixXd& x, const FitResult& fr);

}  // namespace stabsel

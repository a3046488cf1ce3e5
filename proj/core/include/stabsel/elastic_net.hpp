#pragma once

#include <Eigen/Dense>

#include "stabsel/dataset.hpp"

namespace stabsel {

// Penalized linear models minimizing
//
//     L(w, b) + lambda1 * ||w||_1 + lambda2 * ||w||_2^2
//
// where L is the UNSCALED residual sum of squares ||y - X w - b 1||^2 for
// Loss::squared, or sum_i log(1 + exp(-yt_i (x_i' w + b))) with yt = 2 y - 1
// for Loss::logistic. Note the convention: no 1/n or 1/2 factor on the data
// term, and the ridge penalty is lambda2 * ||w||^2, not lambda2/2 * ||w||^2.
// Lambda values from packages that scale differently are not interchangeable
// with these. The intercept is never penalized.
//
// The squared-loss path is cyclic coordinate descent with soft thresholding;
// the logistic path is an outer quadratic majorization (curvature bound 1/4
// per observation, which guarantees descent) around coordinate descent on the
// majorizer. The sweep order is a fixed 0..p-1 cycle so fits are
// bit-reproducible.

enum class Loss { squared, logistic };

struct PenaltyConfig {
  double lambda1 = 0.0;  // l1 weight, >= 0
  double lambda2 = 0.0;  // l2 weight, >= 0
  Loss loss = Loss::squared;
  int max_iter = 10000;  // coordinate-descent sweep budget
  double tol = 1e-6;     // largest absolute coordinate change per sweep
  bool fit_intercept = true;

  // lambda1 + lambda2 == 0 is accepted only when p <= n; the unpenalized
  // problem is ill-posed otherwise.
  void validate(Eigen::Index n, Eigen::Index p) const;
};

struct FitResult {
  Eigen::VectorXd w;
  double intercept = 0.0;
  int iterations = 0;  // coordinate-descent sweeps consumed
  bool converged = false;
  double objective = 0.0;
};

// Minimizes the objective above. The caller is responsible for standardizing
// the data first; the fit never rescales its input. After the per-sweep
// change drops below tol the solver keeps sweeping until the subgradient
// certificate kkt_residual() <= 10*tol holds, so `converged` implies a
// certified solution; hitting max_iter leaves converged false.
FitResult fit(const Dataset& d, const PenaltyConfig& cfg);

double objective_value(const Dataset& d, const Eigen::VectorXd& w, double intercept,
                       const PenaltyConfig& cfg);

// Largest distance from 0 to the objective's subdifferential across the
// coordinates of w: |g_j + 2*lambda2*w_j + lambda1*sign(w_j)| where w_j != 0,
// max(0, |g_j| - lambda1) where w_j == 0, with g the gradient of the smooth
// loss term.
double kkt_residual(const Dataset& d, const FitResult& fr, const PenaltyConfig& cfg);

// Indices with |w_j| > zero_tol. Soft-threshold zeros are exact; the default
// tolerance only guards float dust.
IndexSet support(const FitResult& fr, double zero_tol = 1e-10);

}  // namespace stabsel

#include "stabsel/elastic_net.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace stabsel {

namespace {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

double stable_sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// log(1 + exp(m)) without overflow
double softplus(double m) {
  if (m > 0.0) return m + std::log1p(std::exp(-m));
  return std::log1p(std::exp(m));
}

// One cyclic pass of penalized coordinate descent on
//   quad_weight * ||r||^2 + lambda1 ||w||_1 + lambda2 ||w||^2,
// where `residual` = target - X w - b and is kept in sync. Returns the
// largest absolute coordinate change, intercept included.
double cd_sweep(const Eigen::MatrixXd& x, const Eigen::VectorXd& col_sq, double quad_weight,
                double lambda1, double lambda2, bool fit_intercept, Eigen::VectorXd& w, double& b,
                Eigen::VectorXd& residual) {
  const Eigen::Index p = x.cols();
  double max_delta = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double old = w[j];
    const double rho = x.col(j).dot(residual) + col_sq[j] * old;
    const double denom = 2.0 * quad_weight * col_sq[j] + 2.0 * lambda2;
    double next = 0.0;
    if (denom > 0.0) {
      next = soft_threshold(2.0 * quad_weight * rho, lambda1) / denom;
    }
    if (next != old) {
      residual.noalias() += x.col(j) * (old - next);
      w[j] = next;
      max_delta = std::max(max_delta, std::abs(next - old));
    }
  }
  if (fit_intercept) {
    const double shift = residual.mean();
    if (shift != 0.0) {
      b += shift;
      residual.array() -= shift;
      max_delta = std::max(max_delta, std::abs(shift));
    }
  }
  return max_delta;
}

double penalty_value(const Eigen::VectorXd& w, const PenaltyConfig& cfg) {
  return cfg.lambda1 * w.lpNorm<1>() + cfg.lambda2 * w.squaredNorm();
}

double logistic_loss(const Eigen::VectorXd& yt, const Eigen::VectorXd& z) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) total += softplus(-yt[i] * z[i]);
  return total;
}

// Gradient of the smooth loss term with respect to w, evaluated at (w, b).
Eigen::VectorXd smooth_gradient(const Dataset& d, const Eigen::VectorXd& w, double b,
                                const PenaltyConfig& cfg) {
  if (cfg.loss == Loss::squared) {
    Eigen::VectorXd residual = d.y() - d.x() * w;
    residual.array() -= b;
    return -2.0 * (d.x().transpose() * residual);
  }
  const Eigen::VectorXd yt = 2.0 * d.y().array() - 1.0;
  Eigen::VectorXd z = d.x() * w;
  z.array() += b;
  Eigen::VectorXd dz(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    dz[i] = -yt[i] * stable_sigmoid(-yt[i] * z[i]);
  }
  return d.x().transpose() * dz;
}

double kkt_from_gradient(const Eigen::VectorXd& g, const Eigen::VectorXd& w,
                         const PenaltyConfig& cfg) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    double r;
    if (w[j] != 0.0) {
      r = std::abs(g[j] + 2.0 * cfg.lambda2 * w[j] + cfg.lambda1 * (w[j] > 0.0 ? 1.0 : -1.0));
    } else {
      r = std::max(0.0, std::abs(g[j]) - cfg.lambda1);
    }
    worst = std::max(worst, r);
  }
  return worst;
}

FitResult fit_squared(const Dataset& d, const PenaltyConfig& cfg) {
  const Eigen::Index p = d.p();
  const Eigen::VectorXd col_sq = d.x().colwise().squaredNorm();

  FitResult fr;
  fr.w = Eigen::VectorXd::Zero(p);
  fr.intercept = cfg.fit_intercept ? d.y().mean() : 0.0;
  Eigen::VectorXd residual = d.y().array() - fr.intercept;

#ifndef NDEBUG
  double prev_objective = objective_value(d, fr.w, fr.intercept, cfg);
#endif
  for (int sweep = 1; sweep <= cfg.max_iter; ++sweep) {
    const double delta = cd_sweep(d.x(), col_sq, 1.0, cfg.lambda1, cfg.lambda2, cfg.fit_intercept,
                                  fr.w, fr.intercept, residual);
    fr.iterations = sweep;
#ifndef NDEBUG
    const double obj = objective_value(d, fr.w, fr.intercept, cfg);
    assert(obj <= prev_objective + 1e-9 * (1.0 + std::abs(prev_objective)));
    prev_objective = obj;
#endif
    if (delta <= cfg.tol) {
      const Eigen::VectorXd g = -2.0 * (d.x().transpose() * residual);
      if (kkt_from_gradient(g, fr.w, cfg) <= 10.0 * cfg.tol) {
        fr.converged = true;
        break;
      }
    }
  }
  fr.objective = residual.squaredNorm() + penalty_value(fr.w, cfg);
  if (!std::isfinite(fr.objective)) {
    throw std::runtime_error("elastic net: non-finite objective (data pathology)");
  }
  return fr;
}

FitResult fit_logistic(const Dataset& d, const PenaltyConfig& cfg) {
  const Eigen::Index n = d.n();
  const Eigen::Index p = d.p();
  const Eigen::VectorXd yt = 2.0 * d.y().array() - 1.0;
  const Eigen::VectorXd col_sq = d.x().colwise().squaredNorm();

  FitResult fr;
  fr.w = Eigen::VectorXd::Zero(p);
  fr.intercept = 0.0;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);  // X w + b

  // Majorizer at z0: loss <= const + g'(z - z0) + 1/8 ||z - z0||^2, i.e. a
  // least-squares problem with quadratic weight 1/8 and working response
  // u = z0 - 4 g.
  constexpr double kQuadWeight = 0.125;
  constexpr int kInnerSweepCap = 50;

#ifndef NDEBUG
  double prev_objective = logistic_loss(yt, z) + penalty_value(fr.w, cfg);
#endif
  bool done = false;
  while (!done && fr.iterations < cfg.max_iter) {
    Eigen::VectorXd u(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double g = -yt[i] * stable_sigmoid(-yt[i] * z[i]);
      u[i] = z[i] - 4.0 * g;
    }
    const Eigen::VectorXd w_before = fr.w;
    const double b_before = fr.intercept;

    Eigen::VectorXd residual = u - z;  // u - X w - b
    for (int inner = 0; inner < kInnerSweepCap && fr.iterations < cfg.max_iter; ++inner) {
      const double delta = cd_sweep(d.x(), col_sq, kQuadWeight, cfg.lambda1, cfg.lambda2,
                                    cfg.fit_intercept, fr.w, fr.intercept, residual);
      ++fr.iterations;
      if (delta <= cfg.tol) break;
    }
    z.noalias() = d.x() * fr.w;
    z.array() += fr.intercept;

#ifndef NDEBUG
    const double obj = logistic_loss(yt, z) + penalty_value(fr.w, cfg);
    assert(obj <= prev_objective + 1e-9 * (1.0 + std::abs(prev_objective)));
    prev_objective = obj;
#endif

    const double outer_delta =
        std::max((fr.w - w_before).cwiseAbs().maxCoeff(), std::abs(fr.intercept - b_before));
    if (outer_delta <= cfg.tol) {
      const Eigen::VectorXd g = smooth_gradient(d, fr.w, fr.intercept, cfg);
      if (kkt_from_gradient(g, fr.w, cfg) <= 10.0 * cfg.tol) {
        done = true;
        fr.converged = true;
      }
    }
  }
  fr.objective = logistic_loss(yt, z) + penalty_value(fr.w, cfg);
  if (!std::isfinite(fr.objective)) {
    throw std::runtime_error("elastic net: non-finite objective (data pathology)");
  }
  return fr;
}

}  // namespace

void PenaltyConfig::validate(Eigen::Index n, Eigen::Index p) const {
  if (lambda1 < 0.0 || lambda2 < 0.0) {
    throw std::invalid_argument("PenaltyConfig: penalties must be non-negative");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("PenaltyConfig: tol must be positive");
  if (max_iter <= 0) throw std::invalid_argument("PenaltyConfig: max_iter must be positive");
  if (lambda1 + lambda2 == 0.0 && p > n) {
    throw std::invalid_argument(
        "PenaltyConfig: unpenalized fit requires p <= n; the problem is ill-posed otherwise");
  }
}

FitResult fit(const Dataset& d, const PenaltyConfig& cfg) {
  cfg.validate(d.n(), d.p());
  return cfg.loss == Loss::squared ? fit_squared(d, cfg) : fit_logistic(d, cfg);
}

double objective_value(const Dataset& d, const Eigen::VectorXd& w, double intercept,
                       const PenaltyConfig& cfg) {
  if (w.size() != d.p()) throw std::invalid_argument("objective_value: dimension mismatch");
  double loss;
  if (cfg.loss == Loss::squared) {
    Eigen::VectorXd residual = d.y() - d.x() * w;
    residual.array() -= intercept;
    loss = residual.squaredNorm();
  } else {
    const Eigen::VectorXd yt = 2.0 * d.y().array() - 1.0;
    Eigen::VectorXd z = d.x() * w;
    z.array() += intercept;
    loss = logistic_loss(yt, z);
  }
  return loss + penalty_value(w, cfg);
}

double kkt_residual(const Dataset& d, const FitResult& fr, const PenaltyConfig& cfg) {
  if (fr.w.size() != d.p()) throw std::invalid_argument("kkt_residual: dimension mismatch");
  const Eigen::VectorXd g = smooth_gradient(d, fr.w, fr.intercept, cfg);
  return kkt_from_gradient(g, fr.w, cfg);
}

IndexSet support(const FitResult& fr, double zero_tol) {
  if (zero_tol < 0.0) throw std::invalid_argument("support: zero_tol must be >= 0");
  std::vector<std::size_t> idx;
  for (Eigen::Index j = 0; j < fr.w.size(); ++j) {
    if (std::abs(fr.w[j]) > zero_tol) idx.push_back(static_cast<std::size_t>(j));
  }
  return IndexSet::of(std::move(idx));
}

}  // namespace stabsel

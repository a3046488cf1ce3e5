#include "stabsel/svm.hpp"

#include <cmath>
#include <stdexcept>

namespace stabsel {

namespace {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

// Largest eigenvalue of M'M where M = [X, 1] (intercept column optional),
// by power iteration from a fixed starting vector.
double top_squared_singular_value(const Eigen::MatrixXd& x, bool with_intercept) {
  const Eigen::Index n = x.rows();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(x.cols() + (with_intercept ? 1 : 0));
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXd mv = x * v.head(x.cols());
    if (with_intercept) mv.array() += v[x.cols()];
    Eigen::VectorXd next(v.size());
    next.head(x.cols()).noalias() = x.transpose() * mv;
    if (with_intercept) next[x.cols()] = mv.sum();
    const double norm = next.norm();
    if (norm == 0.0) return static_cast<double>(n);  // degenerate all-zero design
    next /= norm;
    lambda = norm;
    v = next;
  }
  return lambda;
}

double hinge_loss(const Eigen::VectorXd& yt, const Eigen::VectorXd& z) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double m = 1.0 - yt[i] * z[i];
    if (m > 0.0) total += m * m;
  }
  return total;
}

// d(loss)/dz per observation.
void hinge_grad_z(const Eigen::VectorXd& yt, const Eigen::VectorXd& z, Eigen::VectorXd& out) {
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double m = 1.0 - yt[i] * z[i];
    out[i] = m > 0.0 ? -2.0 * yt[i] * m : 0.0;
  }
}

double kkt_residual_svm(const Eigen::VectorXd& g, const Eigen::VectorXd& w, const SvmConfig& cfg) {
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

// Accelerated proximal gradient (FISTA with function-value restart) with a
// fixed step from the power-iteration Lipschitz bound. Handles lambda1 > 0.
FitResult fit_prox(const Dataset& d, const SvmConfig& cfg, const FitResult* warm) {
  const Eigen::Index n = d.n(), p = d.p();
  const Eigen::VectorXd yt = 2.0 * d.y().array() - 1.0;
  const double lip =
      2.0 * 1.02 * top_squared_singular_value(d.x(), cfg.fit_intercept) + 2.0 * cfg.lambda2;
  const double step = 1.0 / lip;

  FitResult fr;
  fr.w = Eigen::VectorXd::Zero(p);
  fr.intercept = 0.0;
  if (warm && warm->w.size() == p) {
    fr.w = warm->w;
    fr.intercept = cfg.fit_intercept ? warm->intercept : 0.0;
  }
  Eigen::VectorXd w_prev = fr.w;
  double b_prev = fr.intercept;
  Eigen::VectorXd extrap_w = fr.w;
  double extrap_b = fr.intercept;
  double momentum = 1.0;

  Eigen::VectorXd z(n), dz(n);
  auto objective_at = [&](const Eigen::VectorXd& w, double b) {
    Eigen::VectorXd margins = d.x() * w;
    margins.array() += b;
    return hinge_loss(yt, margins) + cfg.lambda1 * w.lpNorm<1>() + cfg.lambda2 * w.squaredNorm();
  };
  double last_objective = objective_at(fr.w, fr.intercept);

  for (int it = 1; it <= cfg.max_iter; ++it) {
    z.noalias() = d.x() * extrap_w;
    z.array() += extrap_b;
    hinge_grad_z(yt, z, dz);
    Eigen::VectorXd gw = d.x().transpose() * dz;
    gw.noalias() += 2.0 * cfg.lambda2 * extrap_w;

    Eigen::VectorXd w_next(p);
    for (Eigen::Index j = 0; j < p; ++j) {
      w_next[j] = soft_threshold(extrap_w[j] - step * gw[j], step * cfg.lambda1);
    }
    double b_next = extrap_b;
    if (cfg.fit_intercept) b_next = extrap_b - step * dz.sum();

    const double delta =
        std::max((w_next - fr.w).cwiseAbs().maxCoeff(), std::abs(b_next - fr.intercept));

    // restart the momentum whenever the objective stops decreasing
    const double objective = objective_at(w_next, b_next);
    if (objective > last_objective) {
      momentum = 1.0;
      extrap_w = fr.w;
      extrap_b = fr.intercept;
      fr.iterations = it;
      continue;
    }
    last_objective = objective;

    w_prev = fr.w;
    b_prev = fr.intercept;
    fr.w = w_next;
    fr.intercept = b_next;
    const double momentum_next = (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum)) / 2.0;
    const double mix = (momentum - 1.0) / momentum_next;
    extrap_w = fr.w + mix * (fr.w - w_prev);
    extrap_b = fr.intercept + mix * (fr.intercept - b_prev);
    momentum = momentum_next;
    fr.iterations = it;

    if (delta <= cfg.tol) {
      z.noalias() = d.x() * fr.w;
      z.array() += fr.intercept;
      hinge_grad_z(yt, z, dz);
      const Eigen::VectorXd g = d.x().transpose() * dz;
      const bool intercept_ok =
          !cfg.fit_intercept || std::abs(dz.sum()) <= 10.0 * cfg.tol * lip * 0.5;
      if (kkt_residual_svm(g, fr.w, cfg) <= 10.0 * cfg.tol && intercept_ok) {
        fr.converged = true;
        break;
      }
    }
  }
  fr.objective = objective_at(fr.w, fr.intercept);
  return fr;
}

// Newton-CG for the smooth case lambda1 == 0, lambda2 > 0. The objective is
// convex piecewise quadratic; Hessian-vector products only touch rows with a
// positive margin, so the solve stays matrix-free. Far faster than first-order
// steps when p is large and the design is ill-conditioned.
FitResult fit_newton(const Dataset& d, const SvmConfig& cfg, const FitResult* warm) {
  const Eigen::Index n = d.n(), p = d.p();
  const Eigen::VectorXd yt = 2.0 * d.y().array() - 1.0;
  const bool use_b = cfg.fit_intercept;

  FitResult fr;
  fr.w = Eigen::VectorXd::Zero(p);
  fr.intercept = 0.0;
  if (warm && warm->w.size() == p) {
    fr.w = warm->w;
    fr.intercept = use_b ? warm->intercept : 0.0;
  }

  Eigen::VectorXd z(n), dz(n);
  auto compute_objective = [&](const Eigen::VectorXd& w, double b, Eigen::VectorXd& margins) {
    margins.noalias() = d.x() * w;
    margins.array() += b;
    return hinge_loss(yt, margins) + cfg.lambda2 * w.squaredNorm();
  };
  double objective = compute_objective(fr.w, fr.intercept, z);

  // Newton iterations count toward max_iter together with the CG products.
  int budget = cfg.max_iter;
  while (budget > 0) {
    hinge_grad_z(yt, z, dz);
    Eigen::VectorXd grad_w = d.x().transpose() * dz;
    grad_w.noalias() += 2.0 * cfg.lambda2 * fr.w;
    const double grad_b = use_b ? dz.sum() : 0.0;

    const double residual = std::max(grad_w.cwiseAbs().maxCoeff(), std::abs(grad_b));
    if (residual <= 10.0 * cfg.tol) {
      fr.converged = true;
      break;
    }

    // active rows: margin > 0
    Eigen::VectorXd active(n);
    for (Eigen::Index i = 0; i < n; ++i) active[i] = (1.0 - yt[i] * z[i]) > 0.0 ? 1.0 : 0.0;

    auto hessian_product = [&](const Eigen::VectorXd& vw, double vb, Eigen::VectorXd& out_w,
                               double& out_b) {
      Eigen::VectorXd u = d.x() * vw;
      if (use_b) u.array() += vb;
      u.array() *= active.array();
      out_w.noalias() = 2.0 * (d.x().transpose() * u);
      out_w.noalias() += 2.0 * cfg.lambda2 * vw;
      out_b = use_b ? 2.0 * u.sum() : 0.0;
    };

    // CG on H s = -grad
    Eigen::VectorXd s_w = Eigen::VectorXd::Zero(p);
    double s_b = 0.0;
    Eigen::VectorXd r_w = -grad_w;
    double r_b = -grad_b;
    Eigen::VectorXd d_w = r_w;
    double d_b = r_b;
    double rr = r_w.squaredNorm() + r_b * r_b;
    const double cg_target = std::max(1e-24, rr * 1e-8);
    Eigen::VectorXd h_w(p);
    double h_b = 0.0;
    int cg_iters = 0;
    while (rr > cg_target && cg_iters < 250 && budget > 0) {
      hessian_product(d_w, d_b, h_w, h_b);
      const double dh = d_w.dot(h_w) + d_b * h_b;
      if (dh <= 0.0) break;  // flat direction; fall back to the current s
      const double alpha = rr / dh;
      s_w.noalias() += alpha * d_w;
      s_b += alpha * d_b;
      r_w.noalias() -= alpha * h_w;
      r_b -= alpha * h_b;
      const double rr_next = r_w.squaredNorm() + r_b * r_b;
      d_w = r_w + (rr_next / rr) * d_w;
      d_b = r_b + (rr_next / rr) * d_b;
      rr = rr_next;
      ++cg_iters;
      --budget;
    }
    if (s_w.isZero(0.0) && s_b == 0.0) {
      // gradient direction as a last resort
      s_w = -grad_w;
      s_b = -grad_b;
    }

    // backtracking line search (Armijo)
    const double slope = grad_w.dot(s_w) + grad_b * s_b;
    double t = 1.0;
    Eigen::VectorXd trial_z(n);
    bool stepped = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd w_try = fr.w + t * s_w;
      const double b_try = fr.intercept + t * s_b;
      const double f_try = compute_objective(w_try, b_try, trial_z);
      if (f_try <= objective + 1e-4 * t * slope) {
        fr.w = w_try;
        fr.intercept = b_try;
        z = trial_z;
        objective = f_try;
        stepped = true;
        break;
      }
      t /= 2.0;
    }
    ++fr.iterations;
    --budget;
    if (!stepped) break;  // no descent possible at double precision
  }
  fr.objective = objective + cfg.lambda1 * fr.w.lpNorm<1>();
  return fr;
}

}  // namespace

FitResult fit_linear_svm(const Dataset& d, const SvmConfig& cfg, const FitResult* warm) {
  if (cfg.lambda1 < 0.0 || cfg.lambda2 < 0.0) {
    throw std::invalid_argument("SvmConfig: penalties must be non-negative");
  }
  if (!(cfg.tol > 0.0) || cfg.max_iter <= 0) {
    throw std::invalid_argument("SvmConfig: bad tol or max_iter");
  }
  FitResult fr = (cfg.lambda1 == 0.0 && cfg.lambda2 > 0.0) ? fit_newton(d, cfg, warm)
                                                           : fit_prox(d, cfg, warm);
  if (!std::isfinite(fr.objective)) {
    throw std::runtime_error("svm: non-finite objective (data pathology)");
  }
  return fr;
}

double svm_objective(const Dataset& d, const Eigen::VectorXd& w, double intercept,
                     const SvmConfig& cfg) {
  if (w.size() != d.p()) throw std::invalid_argument("svm_objective: dimension mismatch");
  const Eigen::VectorXd yt = 2.0 * d.y().array() - 1.0;
  Eigen::VectorXd z = d.x() * w;
  z.array() += intercept;
  return hinge_loss(yt, z) + cfg.lambda1 * w.lpNorm<1>() + cfg.lambda2 * w.squaredNorm();
}

Eigen::VectorXd svm_decision(const Eigen::MatrixXd& x, const FitResult& fr) {
  Eigen::VectorXd z = x * fr.w;
  z.array() += fr.intercept;
  return z;
}

}  // namespace stabsel

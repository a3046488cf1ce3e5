#include "stabsel/cross_validation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "stabsel/elastic_net.hpp"
#include "stabsel/rng.hpp"
#include "stabsel/svm.hpp"

namespace stabsel {

namespace {

double softplus(double m) {
  if (m > 0.0) return m + std::log1p(std::exp(-m));
  return std::log1p(std::exp(m));
}

enum class Family { squared_en, logistic_en, squared_hinge_svm };

Family family_of(MethodKind kind) {
  switch (kind) {
    case MethodKind::elastic_net:
    case MethodKind::stability_elastic_net:
      return Family::squared_en;
    case MethodKind::l1_logistic:
    case MethodKind::l2_logistic:
    case MethodKind::randomized_l1_logistic:
      return Family::logistic_en;
    case MethodKind::l1_svm:
    case MethodKind::l2_svm:
      return Family::squared_hinge_svm;
    case MethodKind::t_test:
      break;
  }
  throw std::invalid_argument("cv_select_hyperparams: method has no penalties to tune");
}

// Held-out loss of one candidate on one split. Rows of `val_x` are already
// transformed with the training split's column statistics.
double validation_loss(Family family, const Eigen::VectorXd& w, double intercept,
                       const Eigen::MatrixXd& val_x, const Eigen::VectorXd& val_y) {
  Eigen::VectorXd z = val_x * w;
  z.array() += intercept;
  switch (family) {
    case Family::squared_en:
      return (val_y - z).squaredNorm();
    case Family::logistic_en: {
      double total = 0.0;
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        total += softplus(-(2.0 * val_y[i] - 1.0) * z[i]);
      }
      return total;
    }
    case Family::squared_hinge_svm: {
      double total = 0.0;
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double m = 1.0 - (2.0 * val_y[i] - 1.0) * z[i];
        if (m > 0.0) total += m * m;
      }
      return total;
    }
  }
  return std::numeric_limits<double>::infinity();
}

Eigen::MatrixXd apply_stats(const Eigen::MatrixXd& x, const std::vector<std::size_t>& rows,
                            const ColumnStats& stats) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (std::size_t ii = 0; ii < rows.size(); ++ii) {
      const double v = x(static_cast<Eigen::Index>(rows[ii]), j);
      out(static_cast<Eigen::Index>(ii), j) =
          stats.stds[j] > 0.0 ? (v - stats.means[j]) / stats.stds[j] : 0.0;
    }
  }
  return out;
}

}  // namespace

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int e = -8; e <= 2; ++e) grid.push_back(std::ldexp(1.0, e));
  return grid;
}

std::map<std::string, double> cv_select_hyperparams(const Dataset& d, MethodKind kind,
                                                    const CvConfig& cfg) {
  const Family family = family_of(kind);
  d.require_both_classes("cv_select_hyperparams");
  if (cfg.n_folds < 2) throw std::invalid_argument("cv: need at least 2 folds");
  const std::vector<double> grid = cfg.grid.empty() ? default_lambda_grid() : cfg.grid;

  const bool tune_l1 = kind == MethodKind::l1_logistic || kind == MethodKind::l1_svm ||
                       kind == MethodKind::elastic_net ||
                       kind == MethodKind::randomized_l1_logistic ||
                       kind == MethodKind::stability_elastic_net;
  const bool tune_l2 = kind == MethodKind::l2_logistic || kind == MethodKind::l2_svm ||
                       kind == MethodKind::elastic_net ||
                       kind == MethodKind::stability_elastic_net;

  // Stratified fold assignment: shuffle each class, then deal round-robin.
  std::vector<std::size_t> class0, class1;
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    (d.y()[i] == 1.0 ? class1 : class0).push_back(static_cast<std::size_t>(i));
  }
  if (class0.size() < 2 || class1.size() < 2) {
    throw std::invalid_argument("cv: each class needs at least 2 observations");
  }
  Rng rng(cfg.seed);
  auto shuffle = [&](std::vector<std::size_t>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<std::size_t>(rng.next_below(i))]);
    }
  };
  shuffle(class0);
  shuffle(class1);
  std::vector<int> fold_of(static_cast<std::size_t>(d.n()));
  for (std::size_t i = 0; i < class0.size(); ++i) fold_of[class0[i]] = static_cast<int>(i % cfg.n_folds);
  for (std::size_t i = 0; i < class1.size(); ++i) fold_of[class1[i]] = static_cast<int>(i % cfg.n_folds);

  struct Candidate {
    double l1, l2;
  };
  std::vector<Candidate> candidates;
  if (tune_l1 && tune_l2) {
    for (double l1 : grid) {
      for (double l2 : grid) candidates.push_back({l1, l2});
    }
  } else if (tune_l1) {
    for (double l1 : grid) candidates.push_back({l1, 0.0});
  } else {
    for (double l2 : grid) candidates.push_back({0.0, l2});
  }

  std::vector<double> total_loss(candidates.size(), 0.0);
  for (int fold = 0; fold < cfg.n_folds; ++fold) {
    std::vector<std::size_t> train_rows, val_rows;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
      (fold_of[i] == fold ? val_rows : train_rows).push_back(i);
    }
    if (val_rows.empty() || train_rows.size() < 2) continue;
    const Dataset train = slice(d, train_rows, all_features(static_cast<std::size_t>(d.p())));
    auto [scaled, stats] = standardize(train);
    const Eigen::MatrixXd val_x = apply_stats(d.x(), val_rows, stats);
    Eigen::VectorXd val_y(static_cast<Eigen::Index>(val_rows.size()));
    for (std::size_t ii = 0; ii < val_rows.size(); ++ii) {
      val_y[static_cast<Eigen::Index>(ii)] = d.y()[static_cast<Eigen::Index>(val_rows[ii])];
    }

    for (std::size_t c = 0; c < candidates.size(); ++c) {
      FitResult fr;
      if (family == Family::squared_hinge_svm) {
        SvmConfig svm_cfg;
        svm_cfg.lambda1 = candidates[c].l1;
        svm_cfg.lambda2 = candidates[c].l2;
        svm_cfg.tol = cfg.fit_tol;
        svm_cfg.max_iter = cfg.fit_max_iter;
        fr = fit_linear_svm(scaled, svm_cfg);
      } else {
        PenaltyConfig pen;
        pen.lambda1 = candidates[c].l1;
        pen.lambda2 = candidates[c].l2;
        pen.loss = family == Family::squared_en ? Loss::squared : Loss::logistic;
        pen.tol = cfg.fit_tol;
        pen.max_iter = cfg.fit_max_iter;
        fr = fit(scaled, pen);
      }
      total_loss[c] += validation_loss(family, fr.w, fr.intercept, val_x, val_y);
    }
  }

  std::size_t best = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    if (total_loss[c] < total_loss[best]) best = c;
  }
  std::map<std::string, double> out;
  if (tune_l1) out["lambda1"] = candidates[best].l1;
  if (tune_l2) out["lambda2"] = candidates[best].l2;
  return out;
}

}  // namespace stabsel

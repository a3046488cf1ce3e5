#include "stabsel/stability.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "stabsel/parallel.hpp"
#include "stabsel/rng.hpp"

namespace stabsel {

namespace {

void validate_params(const SubsampleParams& params) {
  if (!(params.alpha > 0.0 && params.alpha <= 1.0)) {
    throw std::invalid_argument("SubsampleParams: alpha must be in (0, 1]");
  }
  if (!(params.beta > 0.0 && params.beta <= 1.0)) {
    throw std::invalid_argument("SubsampleParams: beta must be in (0, 1]");
  }
  if (params.n_resamples <= 0) {
    throw std::invalid_argument("SubsampleParams: n_resamples must be positive");
  }
}

std::size_t scaled_count(double fraction, std::size_t total) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(total)));
}

}  // namespace

SubsamplePlan make_plan(std::size_t n, std::size_t p, const SubsampleParams& params,
                        const Eigen::VectorXd* labels) {
  validate_params(params);
  const std::size_t n_cols = scaled_count(params.beta, p);
  if (n_cols < 1) {
    throw std::invalid_argument("make_plan: floor(beta*p) must be at least 1");
  }

  std::vector<std::size_t> class0, class1;
  const bool stratified = params.stratify && labels != nullptr;
  std::size_t rows_per_class0 = 0, rows_per_class1 = 0;
  if (stratified) {
    if (static_cast<std::size_t>(labels->size()) != n) {
      throw std::invalid_argument("make_plan: label count does not match n");
    }
    for (std::size_t i = 0; i < n; ++i) {
      ((*labels)[static_cast<Eigen::Index>(i)] == 1.0 ? class1 : class0).push_back(i);
    }
    rows_per_class0 = scaled_count(params.alpha, class0.size());
    rows_per_class1 = scaled_count(params.alpha, class1.size());
    if (rows_per_class0 < 1 || rows_per_class1 < 1) {
      throw std::invalid_argument(
          "make_plan: stratified draw needs floor(alpha*n_c) >= 1 for both classes");
    }
    if (rows_per_class0 + rows_per_class1 < 2) {
      throw std::invalid_argument("make_plan: row draw smaller than 2");
    }
  } else {
    if (scaled_count(params.alpha, n) < 2) {
      throw std::invalid_argument("make_plan: floor(alpha*n) must be at least 2");
    }
  }

  SubsamplePlan plan;
  plan.draws.resize(static_cast<std::size_t>(params.n_resamples));
  for (std::size_t j = 0; j < plan.draws.size(); ++j) {
    Rng rng(child_seed(params.master_seed, j));
    SubsampleDraw& draw = plan.draws[j];
    if (stratified) {
      auto pick0 = sample_without_replacement(class0.size(), rows_per_class0, rng);
      auto pick1 = sample_without_replacement(class1.size(), rows_per_class1, rng);
      draw.rows.reserve(rows_per_class0 + rows_per_class1);
      for (std::size_t i : pick0) draw.rows.push_back(class0[i]);
      for (std::size_t i : pick1) draw.rows.push_back(class1[i]);
      std::sort(draw.rows.begin(), draw.rows.end());
    } else {
      draw.rows = sample_without_replacement(n, scaled_count(params.alpha, n), rng);
    }
    draw.cols = IndexSet::of(sample_without_replacement(p, n_cols, rng));
    draw.fit_seed = rng.next_u64();
  }
  return plan;
}

StabilityResult run(const Dataset& d, const SubsampleParams& params, const PenaltyConfig& base,
                    bool keep_sets, unsigned jobs) {
  d.require_both_classes("stability run");
  const SubsamplePlan plan = make_plan(static_cast<std::size_t>(d.n()),
                                       static_cast<std::size_t>(d.p()), params, &d.y());
  return run_with_plan(d, plan, params, base, keep_sets, jobs);
}

StabilityResult run_with_plan(const Dataset& d, const SubsamplePlan& plan,
                              const SubsampleParams& params, const PenaltyConfig& base,
                              bool keep_sets, unsigned jobs) {
  const std::size_t n_draws = plan.draws.size();
  if (n_draws == 0) throw std::invalid_argument("run_with_plan: empty plan");

  std::vector<IndexSet> sets(n_draws);
  parallel_for(n_draws, jobs, [&](std::size_t j) {
    try {
      const SubsampleDraw& draw = plan.draws[j];
      const Dataset sub = slice(d, draw.rows, draw.cols);
      auto [scaled, stats] = standardize(sub);
      const FitResult fr = fit(scaled, base);
      const IndexSet local = support(fr);
      std::vector<std::size_t> original;
      original.reserve(local.size());
      for (std::size_t idx : local) original.push_back(draw.cols[idx]);
      sets[j] = IndexSet::of(std::move(original));
    } catch (const std::exception& e) {
      throw std::runtime_error("stability run: resample " + std::to_string(j) +
                               " failed: " + e.what());
    }
  });

  StabilityResult result;
  result.scores = scores_from_sets(sets, static_cast<std::size_t>(d.p()));
  result.n_resamples = static_cast<int>(n_draws);
  result.params = params;
  if (keep_sets) result.selection_sets = std::move(sets);
  return result;
}

Eigen::VectorXd scores_from_sets(const std::vector<IndexSet>& sets, std::size_t p) {
  if (sets.empty()) throw std::invalid_argument("scores_from_sets: no sets");
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
  for (const IndexSet& s : sets) {
    for (std::size_t f : s) {
      if (f >= p) {
        throw std::out_of_range("scores_from_sets: index " + std::to_string(f) + " out of range");
      }
      counts[static_cast<Eigen::Index>(f)] += 1.0;
    }
  }
  return counts / static_cast<double>(sets.size());
}

std::vector<std::size_t> ranking_order(const Eigen::VectorXd& scores) {
  std::vector<std::size_t> order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[static_cast<Eigen::Index>(a)] > scores[static_cast<Eigen::Index>(b)];
  });
  return order;
}

IndexSet rank_top_k(const Eigen::VectorXd& scores, std::size_t k) {
  const auto p = static_cast<std::size_t>(scores.size());
  if (k < 1 || k > p) throw std::out_of_range("rank_top_k: k must be in [1, p]");
  auto order = ranking_order(scores);
  order.resize(k);
  return IndexSet::of(std::move(order));
}

void write_scores_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& feature_ids, const Eigen::VectorXd& scores) {
  if (feature_ids.size() != static_cast<std::size_t>(scores.size())) {
    throw std::invalid_argument("write_scores_csv: id/score count mismatch");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "feature_id,score\n";
  char buf[32];
  for (std::size_t idx : ranking_order(scores)) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), scores[static_cast<Eigen::Index>(idx)]);
    out << feature_ids[idx] << ',' << std::string_view(buf, ptr) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_sets_csv(const std::filesystem::path& path, const std::vector<IndexSet>& sets) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const IndexSet& s : sets) {
    bool first = true;
    for (std::size_t f : s) {
      if (!first) out << ',';
      out << f;
      first = false;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace stabsel

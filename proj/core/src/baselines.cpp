#include "stabsel/baselines.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

#include "stabsel/elastic_net.hpp"
#include "stabsel/svm.hpp"

namespace stabsel {

namespace {

const std::map<std::string, MethodKind> kNameToKind = {
    {"t_test", MethodKind::t_test},
    {"l1_logistic", MethodKind::l1_logistic},
    {"l2_logistic", MethodKind::l2_logistic},
    {"l1_svm", MethodKind::l1_svm},
    {"l2_svm", MethodKind::l2_svm},
    {"elastic_net", MethodKind::elastic_net},
    {"randomized_l1_logistic", MethodKind::randomized_l1_logistic},
    {"stability_elastic_net", MethodKind::stability_elastic_net},
};

bool uses_lambda1(MethodKind kind) {
  switch (kind) {
    case MethodKind::l1_logistic:
    case MethodKind::l1_svm:
    case MethodKind::elastic_net:
    case MethodKind::randomized_l1_logistic:
    case MethodKind::stability_elastic_net:
      return true;
    default:
      return false;
  }
}

bool uses_lambda2(MethodKind kind) {
  switch (kind) {
    case MethodKind::l2_logistic:
    case MethodKind::l2_svm:
    case MethodKind::elastic_net:
    case MethodKind::stability_elastic_net:
      return true;
    default:
      return false;
  }
}

bool is_ensemble(MethodKind kind) {
  return kind == MethodKind::randomized_l1_logistic ||
         kind == MethodKind::stability_elastic_net;
}

}  // namespace

MethodSpec MethodSpec::make(MethodKind kind, std::map<std::string, double> hyperparams) {
  MethodSpec spec;
  spec.kind = kind;
  spec.hyperparams = std::move(hyperparams);
  spec.validate();
  return spec;
}

MethodKind MethodSpec::kind_from_name(const std::string& name) {
  auto it = kNameToKind.find(name);
  if (it == kNameToKind.end()) throw std::invalid_argument("unknown method: " + name);
  return it->second;
}

std::string MethodSpec::name() const {
  for (const auto& [name, kind] : kNameToKind) {
    if (kind == this->kind) return name;
  }
  return "?";
}

void MethodSpec::validate() const {
  std::set<std::string> allowed;
  if (uses_lambda1(kind)) allowed.insert("lambda1");
  if (uses_lambda2(kind)) allowed.insert("lambda2");
  if (is_ensemble(kind)) {
    allowed.insert({"alpha", "beta", "resamples", "seed", "stratify"});
  }
  for (const auto& [key, value] : hyperparams) {
    if (!allowed.count(key)) {
      throw std::invalid_argument("method " + name() + ": unknown hyperparameter '" + key + "'");
    }
    if ((key == "lambda1" || key == "lambda2") && value < 0.0) {
      throw std::invalid_argument("method " + name() + ": " + key + " must be >= 0");
    }
  }
}

double MethodSpec::at(const std::string& key) const {
  auto it = hyperparams.find(key);
  if (it == hyperparams.end()) {
    throw std::invalid_argument("method " + name() + ": missing hyperparameter '" + key + "'");
  }
  return it->second;
}

SubsampleParams MethodSpec::subsample_params() const {
  SubsampleParams params;
  params.n_resamples = kind == MethodKind::randomized_l1_logistic ? 500 : 200;
  if (has("alpha")) params.alpha = at("alpha");
  if (has("beta")) params.beta = at("beta");
  if (has("resamples")) params.n_resamples = static_cast<int>(at("resamples"));
  if (has("seed")) params.master_seed = static_cast<std::uint64_t>(at("seed"));
  if (has("stratify")) params.stratify = at("stratify") != 0.0;
  return params;
}

std::vector<std::string> all_method_names() {
  std::vector<std::string> names;
  for (const auto& [name, kind] : kNameToKind) names.push_back(name);
  return names;
}

TTestStats t_test_stats(const Dataset& d) {
  d.require_both_classes("t_test");
  const Eigen::Index n = d.n(), p = d.p();
  std::vector<Eigen::Index> idx0, idx1;
  for (Eigen::Index i = 0; i < n; ++i) {
    (d.y()[i] == 1.0 ? idx1 : idx0).push_back(i);
  }
  const auto n0 = static_cast<double>(idx0.size());
  const auto n1 = static_cast<double>(idx1.size());
  if (idx0.size() < 2 || idx1.size() < 2) {
    throw std::invalid_argument("t_test: each class needs at least 2 observations");
  }

  const boost::math::students_t t_dist(static_cast<double>(n) - 2.0);
  TTestStats stats;
  stats.t.resize(p);
  stats.p_two_sided.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double m0 = 0.0, m1 = 0.0;
    for (Eigen::Index i : idx0) m0 += d.x()(i, j);
    for (Eigen::Index i : idx1) m1 += d.x()(i, j);
    m0 /= n0;
    m1 /= n1;
    double ss0 = 0.0, ss1 = 0.0;
    for (Eigen::Index i : idx0) ss0 += (d.x()(i, j) - m0) * (d.x()(i, j) - m0);
    for (Eigen::Index i : idx1) ss1 += (d.x()(i, j) - m1) * (d.x()(i, j) - m1);
    const double pooled_var = (ss0 + ss1) / (n0 + n1 - 2.0);
    const double diff = m1 - m0;
    if (pooled_var == 0.0) {
      if (diff == 0.0) {
        stats.t[j] = 0.0;
        stats.p_two_sided[j] = 1.0;
      } else {
        stats.t[j] = diff > 0.0 ? std::numeric_limits<double>::infinity()
                                : -std::numeric_limits<double>::infinity();
        stats.p_two_sided[j] = 0.0;
      }
      continue;
    }
    const double se = std::sqrt(pooled_var * (1.0 / n0 + 1.0 / n1));
    const double t = diff / se;
    stats.t[j] = t;
    stats.p_two_sided[j] = 2.0 * boost::math::cdf(t_dist, -std::abs(t));
  }
  return stats;
}

FeatureRanking t_test_scores(const Dataset& d) {
  const TTestStats stats = t_test_stats(d);
  FeatureRanking ranking;
  ranking.method = MethodSpec::make(MethodKind::t_test);
  ranking.scores.resize(stats.t.size());
  for (Eigen::Index j = 0; j < stats.t.size(); ++j) {
    const double a = std::abs(stats.t[j]);
    // Rankings stay finite; an infinite statistic still sorts first.
    ranking.scores[j] = std::isinf(a) ? std::numeric_limits<double>::max() : a;
  }
  return ranking;
}

FeatureRanking penalized_model_scores(const Dataset& d, MethodKind kind,
                                      const std::map<std::string, double>& hyperparams) {
  MethodSpec spec = MethodSpec::make(kind, hyperparams);
  d.require_both_classes(spec.name());
  auto [scaled, stats] = standardize(d);

  FitResult fr;
  switch (kind) {
    case MethodKind::l1_logistic:
    case MethodKind::l2_logistic:
    case MethodKind::elastic_net: {
      PenaltyConfig cfg;
      cfg.lambda1 = uses_lambda1(kind) ? spec.at("lambda1") : 0.0;
      cfg.lambda2 = uses_lambda2(kind) ? spec.at("lambda2") : 0.0;
      cfg.loss = kind == MethodKind::elastic_net ? Loss::squared : Loss::logistic;
      fr = fit(scaled, cfg);
      break;
    }
    case MethodKind::l1_svm:
    case MethodKind::l2_svm: {
      SvmConfig cfg;
      cfg.lambda1 = kind == MethodKind::l1_svm ? spec.at("lambda1") : 0.0;
      cfg.lambda2 = kind == MethodKind::l2_svm ? spec.at("lambda2") : 0.0;
      fr = fit_linear_svm(scaled, cfg);
      break;
    }
    default:
      throw std::invalid_argument("penalized_model_scores: " + spec.name() +
                                  " is not a single-fit penalized model");
  }
  if (!fr.converged) {
    throw std::runtime_error(spec.name() + ": solver did not converge after " +
                             std::to_string(fr.iterations) + " iterations");
  }
  FeatureRanking ranking;
  ranking.method = std::move(spec);
  ranking.scores = fr.w.cwiseAbs();
  return ranking;
}

StabilityResult randomized_l1_logistic(const Dataset& d, const SubsampleParams& params,
                                       double lambda1, bool keep_sets, unsigned jobs) {
  PenaltyConfig base;
  base.lambda1 = lambda1;
  base.lambda2 = 0.0;
  base.loss = Loss::logistic;
  return run(d, params, base, keep_sets, jobs);
}

FeatureRanking rank_features(const Dataset& d, const MethodSpec& method, unsigned jobs) {
  method.validate();
  switch (method.kind) {
    case MethodKind::t_test:
      return t_test_scores(d);
    case MethodKind::l1_logistic:
    case MethodKind::l2_logistic:
    case MethodKind::l1_svm:
    case MethodKind::l2_svm:
    case MethodKind::elastic_net:
      return penalized_model_scores(d, method.kind, method.hyperparams);
    case MethodKind::randomized_l1_logistic: {
      const StabilityResult r =
          randomized_l1_logistic(d, method.subsample_params(), method.at("lambda1"), false, jobs);
      return FeatureRanking{r.scores, method};
    }
    case MethodKind::stability_elastic_net: {
      PenaltyConfig base;
      base.lambda1 = method.at("lambda1");
      base.lambda2 = method.at("lambda2");
      base.loss = Loss::squared;
      const StabilityResult r = run(d, method.subsample_params(), base, false, jobs);
      return FeatureRanking{r.scores, method};
    }
  }
  throw std::logic_error("rank_features: unhandled method kind");
}

void write_ranking_csv(const std::filesystem::path& path, const Dataset& d,
                       const FeatureRanking& ranking) {
  write_scores_csv(path, d.feature_ids(), ranking.scores);
}

std::vector<std::pair<std::string, double>> read_ranking_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("ranking csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "feature_id,score") {
    throw std::runtime_error("ranking csv: expected header 'feature_id,score'");
  }
  std::vector<std::pair<std::string, double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("ranking csv: missing comma in: " + line);
    }
    double score = 0.0;
    const char* first = line.data() + comma + 1;
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, score);
    if (ec != std::errc() || ptr != last) {
      throw std::runtime_error("ranking csv: bad score in: " + line);
    }
    rows.emplace_back(line.substr(0, comma), score);
  }
  return rows;
}

Eigen::VectorXd scores_in_feature_order(const std::vector<std::string>& feature_ids,
                                        const std::vector<std::pair<std::string, double>>& rows) {
  if (rows.size() != feature_ids.size()) {
    throw std::invalid_argument("ranking csv: row count does not match feature count");
  }
  std::map<std::string, std::size_t> position;
  for (std::size_t j = 0; j < feature_ids.size(); ++j) position[feature_ids[j]] = j;
  Eigen::VectorXd scores(static_cast<Eigen::Index>(feature_ids.size()));
  scores.setConstant(std::numeric_limits<double>::quiet_NaN());
  for (const auto& [id, score] : rows) {
    auto it = position.find(id);
    if (it == position.end()) {
      throw std::invalid_argument("ranking csv: unknown feature id '" + id + "'");
    }
    scores[static_cast<Eigen::Index>(it->second)] = score;
  }
  if (scores.hasNaN()) throw std::invalid_argument("ranking csv: missing feature ids");
  return scores;
}

}  // namespace stabsel

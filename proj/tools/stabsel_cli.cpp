// Command-line surface for the toolkit. Every subcommand writes its outputs
// into --out together with a config.txt sidecar recording all resolved
// parameters, so any artifact can be regenerated bit-identically from its
// sidecar. All randomness flows from --seed; --jobs never changes results.

#include <CLI11.hpp>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "stabsel/baselines.hpp"
#include "stabsel/benchmark_defaults.hpp"
#include "stabsel/cross_validation.hpp"
#include "stabsel/dataset.hpp"
#include "stabsel/evaluation.hpp"
#include "stabsel/parallel.hpp"
#include "stabsel/stability.hpp"
#include "stabsel/synthetic.hpp"

namespace fs = std::filesystem;
using namespace stabsel;

namespace {

std::string fmt(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

// Sidecar: flat key = value lines grouped into [sections].
class Sidecar {
 public:
  void section(const std::string& name) { lines_.push_back("[" + name + "]"); }
  void set(const std::string& key, const std::string& value) {
    lines_.push_back(key + " = " + value);
  }
  void set(const std::string& key, double value) { set(key, fmt(value)); }
  void set(const std::string& key, std::uint64_t value) { set(key, std::to_string(value)); }
  void set(const std::string& key, int value) { set(key, std::to_string(value)); }

  void write(const fs::path& dir) const {
    std::ofstream out(dir / "config.txt", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / "config.txt").string());
    for (const auto& line : lines_) out << line << '\n';
    if (!out) throw std::runtime_error("write failed for config.txt");
  }

 private:
  std::vector<std::string> lines_;
};

fs::path prepare_out_dir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

MatrixFormat resolve_format(const std::string& requested, const fs::path& path) {
  if (requested == "csv") return MatrixFormat::csv;
  if (requested == "bin") return MatrixFormat::binary_f64;
  return format_from_path(path);
}

std::vector<std::uint64_t> parse_u64_list(const std::string& csv) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoull(item));
  }
  if (out.empty()) throw CLI::ValidationError("expected a comma-separated list of integers");
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& csv) {
  std::vector<std::size_t> out;
  for (std::uint64_t v : parse_u64_list(csv)) out.push_back(static_cast<std::size_t>(v));
  return out;
}

// --hp overrides of the form method.key=value
void apply_hp_overrides(std::map<MethodKind, std::map<std::string, double>>& table,
                        const std::vector<std::string>& overrides) {
  for (const auto& entry : overrides) {
    const auto dot = entry.find('.');
    const auto eq = entry.find('=');
    if (dot == std::string::npos || eq == std::string::npos || eq < dot) {
      throw CLI::ValidationError("--hp expects method.key=value, got '" + entry + "'");
    }
    const MethodKind kind = MethodSpec::kind_from_name(entry.substr(0, dot));
    table[kind][entry.substr(dot + 1, eq - dot - 1)] = std::stod(entry.substr(eq + 1));
  }
}

std::vector<MethodSpec> build_method_specs(const std::vector<std::string>& names,
                                           const std::vector<std::string>& hp_overrides,
                                           std::uint64_t seed) {
  std::map<MethodKind, std::map<std::string, double>> table;
  for (const auto& name : names) {
    const MethodKind kind = MethodSpec::kind_from_name(name);
    table[kind] = synthetic_benchmark_hyperparams(kind);
  }
  apply_hp_overrides(table, hp_overrides);
  std::vector<MethodSpec> specs;
  for (const auto& name : names) {
    const MethodKind kind = MethodSpec::kind_from_name(name);
    auto hp = table[kind];
    if ((kind == MethodKind::randomized_l1_logistic ||
         kind == MethodKind::stability_elastic_net) &&
        !hp.count("seed")) {
      hp["seed"] = static_cast<double>(seed);
    }
    specs.push_back(MethodSpec::make(kind, std::move(hp)));
  }
  return specs;
}

void record_methods(Sidecar& sidecar, const std::vector<MethodSpec>& specs) {
  for (const auto& spec : specs) {
    sidecar.section("method." + spec.name());
    for (const auto& [key, value] : spec.hyperparams) sidecar.set(key, value);
  }
}

// ---------------------------------------------------------------- gen-synth
struct GenSynthArgs {
  std::string out;
  std::string spec_file;
  std::string format = "csv";
  std::uint64_t seed = 0;
  double snr = 1.0;
  int timepoints = 100;
};

void run_gen_synth(const GenSynthArgs& args) {
  SyntheticSpec spec;
  if (!args.spec_file.empty()) spec = load_spec(args.spec_file);
  spec.noise_seed = args.seed;
  spec.snr = args.snr;
  if (args.spec_file.empty()) spec.n_timepoints = args.timepoints;
  spec.validate();

  const fs::path dir = prepare_out_dir(args.out);
  auto [dataset, truth] = generate(spec);
  const MatrixFormat format =
      args.format == "bin" ? MatrixFormat::binary_f64 : MatrixFormat::csv;
  const fs::path data_path = dir / (format == MatrixFormat::csv ? "dataset.csv" : "dataset.bin");
  save_matrix(dataset, data_path, format);
  save_ground_truth_csv(truth, dir / "ground_truth.csv");
  save_spec(spec, dir / "spec.txt");

  Sidecar sidecar;
  sidecar.section("run");
  sidecar.set("command", std::string("gen-synth"));
  sidecar.set("seed", args.seed);
  sidecar.set("snr", spec.snr);
  sidecar.set("timepoints", spec.n_timepoints);
  sidecar.set("format", args.format);
  sidecar.set("dataset", data_path.filename().string());
  sidecar.set("n", static_cast<std::size_t>(dataset.n()));
  sidecar.set("p", static_cast<std::size_t>(dataset.p()));
  sidecar.set("dataset_fingerprint", dataset_fingerprint(dataset));
  sidecar.write(dir);
}

// ------------------------------------------------------------------- select
struct SelectArgs {
  std::string data;
  std::string format = "auto";
  std::string method = "stability_elastic_net";
  std::string out;
  double lambda1 = -1.0;  // <0 = unset
  double lambda2 = -1.0;
  double alpha = 0.5;
  double beta = 0.2;
  int resamples = -1;
  bool no_stratify = false;
  bool keep_sets = false;
  std::uint64_t seed = 0;
  unsigned jobs = default_jobs();
};

void run_select(const SelectArgs& args) {
  const fs::path dir = prepare_out_dir(args.out);
  const Dataset d = load_matrix(args.data, resolve_format(args.format, args.data));
  const MethodKind kind = MethodSpec::kind_from_name(args.method);

  std::map<std::string, double> hp;
  bool used_cv = false;
  const bool needs_l1 = kind == MethodKind::l1_logistic || kind == MethodKind::l1_svm ||
                        kind == MethodKind::elastic_net ||
                        kind == MethodKind::randomized_l1_logistic ||
                        kind == MethodKind::stability_elastic_net;
  const bool needs_l2 = kind == MethodKind::l2_logistic || kind == MethodKind::l2_svm ||
                        kind == MethodKind::elastic_net ||
                        kind == MethodKind::stability_elastic_net;
  if (args.lambda1 >= 0.0) hp["lambda1"] = args.lambda1;
  if (args.lambda2 >= 0.0) hp["lambda2"] = args.lambda2;
  if ((needs_l1 && !hp.count("lambda1")) || (needs_l2 && !hp.count("lambda2"))) {
    // fall back to 5-fold cross-validation for any missing penalty
    CvConfig cv;
    cv.seed = args.seed;
    const auto picked = cv_select_hyperparams(d, kind, cv);
    for (const auto& [key, value] : picked) hp.emplace(key, value);
    used_cv = true;
  }
  if (kind == MethodKind::randomized_l1_logistic || kind == MethodKind::stability_elastic_net) {
    hp["alpha"] = args.alpha;
    hp["beta"] = args.beta;
    if (args.resamples > 0) hp["resamples"] = args.resamples;
    hp["seed"] = static_cast<double>(args.seed);
    hp["stratify"] = args.no_stratify ? 0.0 : 1.0;
  }
  const MethodSpec spec = MethodSpec::make(kind, hp);

  FeatureRanking ranking;
  std::size_t sets_written = 0;
  if (args.keep_sets && (kind == MethodKind::randomized_l1_logistic ||
                         kind == MethodKind::stability_elastic_net)) {
    StabilityResult result;
    if (kind == MethodKind::randomized_l1_logistic) {
      result = randomized_l1_logistic(d, spec.subsample_params(), spec.at("lambda1"), true,
                                      args.jobs);
    } else {
      PenaltyConfig base;
      base.lambda1 = spec.at("lambda1");
      base.lambda2 = spec.at("lambda2");
      result = run(d, spec.subsample_params(), base, true, args.jobs);
    }
    ranking.scores = result.scores;
    ranking.method = spec;
    write_sets_csv(dir / "sets.csv", *result.selection_sets);
    sets_written = result.selection_sets->size();
  } else {
    ranking = rank_features(d, spec, args.jobs);
  }
  write_ranking_csv(dir / "ranking.csv", d, ranking);

  Sidecar sidecar;
  sidecar.section("run");
  sidecar.set("command", std::string("select"));
  sidecar.set("data", fs::absolute(args.data).string());
  sidecar.set("data_fingerprint", dataset_fingerprint(d));
  sidecar.set("method", args.method);
  sidecar.set("seed", args.seed);
  sidecar.set("jobs", static_cast<int>(args.jobs));
  sidecar.set("cv_filled_penalties", used_cv ? 1 : 0);
  if (sets_written > 0) sidecar.set("sets", std::string("sets.csv"));
  sidecar.section("hyperparams");
  for (const auto& [key, value] : spec.hyperparams) sidecar.set(key, value);
  sidecar.write(dir);
}

// ------------------------------------------------------------------ compare
struct CompareArgs {
  std::string experiment;
  std::string out;
  std::string methods =
      "stability_elastic_net,elastic_net,randomized_l1_logistic,l1_logistic,l2_logistic,"
      "l1_svm,l2_svm,t_test";
  std::string seeds;
  int n_seeds = 10;
  int max_flips = 10;
  int flips = 5;
  std::size_t stride = 1;
  double snr = 1.0;
  int timepoints = 100;
  std::string train;
  std::string eval;
  std::string topk_method = "stability_elastic_net";
  std::string ks;
  double l2 = synthetic_benchmark_classifier_l2();
  std::uint64_t seed = 0;
  unsigned jobs = default_jobs();
  std::vector<std::string> hp_overrides;
};

std::vector<std::uint64_t> resolve_seeds(const CompareArgs& args) {
  if (!args.seeds.empty()) return parse_u64_list(args.seeds);
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < args.n_seeds; ++i) seeds.push_back(args.seed + static_cast<std::uint64_t>(i));
  return seeds;
}

std::vector<std::string> split_names(const std::string& csv) {
  std::vector<std::string> names;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) names.push_back(item);
  }
  return names;
}

void run_compare(const CompareArgs& args) {
  const fs::path dir = prepare_out_dir(args.out);
  Sidecar sidecar;
  sidecar.section("run");
  sidecar.set("command", std::string("compare"));
  sidecar.set("experiment", args.experiment);
  sidecar.set("seed", args.seed);
  sidecar.set("jobs", static_cast<int>(args.jobs));

  if (args.experiment == "robustness" || args.experiment == "pr") {
    SyntheticSpec spec;
    spec.snr = args.snr;
    spec.n_timepoints = args.timepoints;
    const auto seeds = resolve_seeds(args);
    const auto specs = build_method_specs(split_names(args.methods), args.hp_overrides, args.seed);
    sidecar.set("snr", args.snr);
    sidecar.set("timepoints", args.timepoints);
    {
      std::string joined;
      for (std::uint64_t s : seeds) joined += (joined.empty() ? "" : ",") + std::to_string(s);
      sidecar.set("seeds", joined);
    }

    if (args.experiment == "robustness") {
      sidecar.set("max_flips", args.max_flips);
      const auto rows = robustness_sweep(spec, specs, args.max_flips, seeds, args.jobs);
      std::ofstream out(dir / "robustness.csv", std::ios::binary);
      if (!out) throw std::runtime_error("cannot write robustness.csv");
      out << "method,flips,seed,metric,value\n";
      for (const auto& row : rows) {
        out << row.method << ',' << row.flips << ',' << row.seed << ",selection_accuracy,"
            << fmt(row.selection_accuracy) << '\n';
      }
    } else {
      sidecar.set("flips", args.flips);
      sidecar.set("stride", args.stride);
      const auto rows = pr_sweep(spec, specs, args.flips, seeds, args.stride, args.jobs);
      std::ofstream out(dir / "pr.csv", std::ios::binary);
      if (!out) throw std::runtime_error("cannot write pr.csv");
      out << "method,seed,k,precision,recall\n";
      for (const auto& row : rows) {
        for (const auto& pt : row.curve.points) {
          out << row.method << ',' << row.seed << ',' << pt.k << ',' << fmt(pt.precision) << ','
              << fmt(pt.recall) << '\n';
        }
      }
    }
    record_methods(sidecar, specs);
    sidecar.write(dir);
    return;
  }

  if (args.experiment == "topk") {
    if (args.train.empty() || args.eval.empty()) {
      throw CLI::ValidationError("--experiment topk requires --train and --eval");
    }
    const Dataset train = load_matrix(args.train, resolve_format("auto", args.train));
    const Dataset eval = load_matrix(args.eval, resolve_format("auto", args.eval));
    const auto specs = build_method_specs({args.topk_method}, args.hp_overrides, args.seed);

    std::vector<std::size_t> ks;
    if (!args.ks.empty()) {
      ks = parse_size_list(args.ks);
    } else {
      const auto p = static_cast<std::size_t>(train.p());
      for (std::size_t k : {25UL, 50UL, 100UL, 147UL, 200UL, 400UL, 800UL, 1600UL}) {
        if (k < p) ks.push_back(k);
      }
      ks.push_back(p);
    }

    const TopkExperiment exp = topk_experiment(train, eval, specs[0], ks, args.l2, args.jobs);
    std::ofstream out(dir / "topk.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write topk.csv");
    out << "method,k,accuracy,sensitivity,specificity\n";
    for (const auto& pt : exp.points) {
      out << specs[0].name() << ',' << pt.k << ',' << fmt(pt.report.accuracy) << ','
          << fmt(pt.report.sensitivity) << ',' << fmt(pt.report.specificity) << '\n';
    }
    sidecar.set("train", fs::absolute(args.train).string());
    sidecar.set("eval", fs::absolute(args.eval).string());
    sidecar.set("l2", args.l2);
    sidecar.set("train_fingerprint", exp.train_fingerprint);
    sidecar.set("eval_fingerprint", exp.eval_fingerprint);
    record_methods(sidecar, specs);
    sidecar.write(dir);
    return;
  }

  throw CLI::ValidationError("unknown experiment '" + args.experiment +
                             "' (expected robustness, pr or topk)");
}

// ------------------------------------------------------------ eval-classify
struct EvalClassifyArgs {
  std::string train;
  std::string eval;
  std::string ranking;
  std::string out;
  std::size_t k = 0;
  double l2 = synthetic_benchmark_classifier_l2();
  unsigned jobs = default_jobs();
};

void run_eval_classify(const EvalClassifyArgs& args) {
  const fs::path dir = prepare_out_dir(args.out);
  const Dataset train = load_matrix(args.train, resolve_format("auto", args.train));
  const Dataset eval = load_matrix(args.eval, resolve_format("auto", args.eval));

  FeatureRanking ranking;
  ranking.scores = scores_in_feature_order(eval.feature_ids(), read_ranking_csv(args.ranking));
  ranking.method = MethodSpec::make(MethodKind::t_test);  // provenance lives in the ranking file

  const LoocvResult result = classify_topk(train, eval, ranking, args.k, args.l2, args.jobs);
  const ROCCurve roc = roc_auc(result.decision_scores, eval.y());

  {
    std::ofstream out(dir / "report.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report.csv");
    out << "k,accuracy,sensitivity,specificity,auc,tp,fp,tn,fn\n";
    out << result.report.k_used << ',' << fmt(result.report.accuracy) << ','
        << fmt(result.report.sensitivity) << ',' << fmt(result.report.specificity) << ','
        << fmt(roc.auc) << ',' << result.report.tp << ',' << result.report.fp << ','
        << result.report.tn << ',' << result.report.fn << '\n';
  }
  {
    std::ofstream out(dir / "roc.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write roc.csv");
    out << "fpr,tpr\n";
    for (const auto& [fpr, tpr] : roc.points) out << fmt(fpr) << ',' << fmt(tpr) << '\n';
  }

  Sidecar sidecar;
  sidecar.section("run");
  sidecar.set("command", std::string("eval-classify"));
  sidecar.set("train", fs::absolute(args.train).string());
  sidecar.set("eval", fs::absolute(args.eval).string());
  sidecar.set("ranking", fs::absolute(args.ranking).string());
  sidecar.set("k", args.k);
  sidecar.set("l2", args.l2);
  sidecar.set("auc", roc.auc);
  sidecar.set("train_fingerprint", dataset_fingerprint(train));
  sidecar.set("eval_fingerprint", dataset_fingerprint(eval));
  sidecar.write(dir);
}

// --------------------------------------------------------------- rank-merge
struct RankMergeArgs {
  std::vector<std::string> inputs;
  std::string out;
};

void run_rank_merge(const RankMergeArgs& args) {
  if (args.inputs.size() < 2) {
    throw CLI::ValidationError("rank-merge needs at least two --inputs files");
  }
  const fs::path dir = prepare_out_dir(args.out);

  std::vector<std::string> ids;
  std::map<std::string, double> totals;
  for (std::size_t i = 0; i < args.inputs.size(); ++i) {
    const auto rows = read_ranking_csv(args.inputs[i]);
    if (i == 0) {
      for (const auto& [id, score] : rows) {
        ids.push_back(id);
        totals[id] = score;
      }
      std::sort(ids.begin(), ids.end());
      continue;
    }
    if (rows.size() != ids.size()) {
      throw std::runtime_error("rank-merge: " + args.inputs[i] + " has a different feature count");
    }
    for (const auto& [id, score] : rows) {
      auto it = totals.find(id);
      if (it == totals.end()) {
        throw std::runtime_error("rank-merge: feature '" + id + "' missing from the first input");
      }
      it->second += score;
    }
  }

  // mean score per feature, written through the shared ranking writer
  std::vector<std::string> ordered_ids = ids;
  Eigen::VectorXd scores(static_cast<Eigen::Index>(ordered_ids.size()));
  for (std::size_t j = 0; j < ordered_ids.size(); ++j) {
    scores[static_cast<Eigen::Index>(j)] =
        totals[ordered_ids[j]] / static_cast<double>(args.inputs.size());
  }
  write_scores_csv(dir / "ranking.csv", ordered_ids, scores);

  Sidecar sidecar;
  sidecar.section("run");
  sidecar.set("command", std::string("rank-merge"));
  for (std::size_t i = 0; i < args.inputs.size(); ++i) {
    sidecar.set("input" + std::to_string(i), fs::absolute(args.inputs[i]).string());
  }
  sidecar.write(dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stabsel: stable feature selection via subsampled elastic nets"};
  app.require_subcommand(1);

  GenSynthArgs gen_args;
  auto* gen = app.add_subcommand("gen-synth", "generate the synthetic benchmark");
  gen->add_option("--out", gen_args.out, "output directory")->required();
  gen->add_option("--seed", gen_args.seed, "noise seed");
  gen->add_option("--snr", gen_args.snr, "signal-to-noise ratio (std ratio)");
  gen->add_option("--timepoints", gen_args.timepoints, "series length T");
  gen->add_option("--format", gen_args.format, "dataset format: csv or bin")
      ->check(CLI::IsMember({"csv", "bin"}));
  gen->add_option("--spec", gen_args.spec_file, "read geometry from a spec.txt file");

  SelectArgs sel_args;
  auto* sel = app.add_subcommand("select", "rank features on a dataset");
  sel->add_option("--data", sel_args.data, "input dataset (csv or binary)")->required();
  sel->add_option("--format", sel_args.format, "input format: auto, csv or bin")
      ->check(CLI::IsMember({"auto", "csv", "bin"}));
  sel->add_option("--method", sel_args.method, "one of: " + [] {
        std::string names;
        for (const auto& n : all_method_names()) names += (names.empty() ? "" : ", ") + n;
        return names;
      }());
  sel->add_option("--out", sel_args.out, "output directory")->required();
  sel->add_option("--lambda1", sel_args.lambda1, "l1 penalty (cross-validated when omitted)");
  sel->add_option("--lambda2", sel_args.lambda2, "l2 penalty (cross-validated when omitted)");
  sel->add_option("--alpha", sel_args.alpha, "row subsample fraction");
  sel->add_option("--beta", sel_args.beta, "column subsample fraction");
  sel->add_option("--resamples", sel_args.resamples, "number of resamples N");
  sel->add_flag("--no-stratify", sel_args.no_stratify, "draw rows without class stratification");
  sel->add_flag("--keep-sets", sel_args.keep_sets, "also write per-resample selection sets");
  sel->add_option("--seed", sel_args.seed, "master seed");
  sel->add_option("--jobs", sel_args.jobs, "worker threads (results are identical for any value)");

  CompareArgs cmp_args;
  auto* cmp = app.add_subcommand("compare", "run the comparison experiments");
  cmp->add_option("--experiment", cmp_args.experiment, "robustness, pr or topk")->required();
  cmp->add_option("--out", cmp_args.out, "output directory")->required();
  cmp->add_option("--methods", cmp_args.methods, "comma-separated method list");
  cmp->add_option("--seeds", cmp_args.seeds, "explicit comma-separated data seeds");
  cmp->add_option("--n-seeds", cmp_args.n_seeds, "number of consecutive seeds from --seed");
  cmp->add_option("--max-flips", cmp_args.max_flips, "robustness: flip counts 0..max");
  cmp->add_option("--flips", cmp_args.flips, "pr: number of flipped labels");
  cmp->add_option("--stride", cmp_args.stride, "pr: k stride for curve points");
  cmp->add_option("--snr", cmp_args.snr, "synthetic snr");
  cmp->add_option("--timepoints", cmp_args.timepoints, "synthetic series length");
  cmp->add_option("--train", cmp_args.train, "topk: ranking-center dataset");
  cmp->add_option("--eval", cmp_args.eval, "topk: held-out-center dataset");
  cmp->add_option("--method", cmp_args.topk_method, "topk: ranking method");
  cmp->add_option("--ks", cmp_args.ks, "topk: comma-separated k values");
  cmp->add_option("--l2", cmp_args.l2, "topk: LOOCV classifier l2 penalty");
  cmp->add_option("--seed", cmp_args.seed, "master seed");
  cmp->add_option("--jobs", cmp_args.jobs, "worker threads");
  cmp->add_option("--hp", cmp_args.hp_overrides, "hyperparameter override method.key=value")
      ->take_all();

  EvalClassifyArgs eval_args;
  auto* evc = app.add_subcommand("eval-classify", "LOOCV-classify a held-out center");
  evc->add_option("--train", eval_args.train, "ranking-center dataset")->required();
  evc->add_option("--eval", eval_args.eval, "held-out-center dataset")->required();
  evc->add_option("--ranking", eval_args.ranking, "ranking csv from select")->required();
  evc->add_option("--k", eval_args.k, "number of top features")->required();
  evc->add_option("--l2", eval_args.l2, "classifier l2 penalty");
  evc->add_option("--out", eval_args.out, "output directory")->required();
  evc->add_option("--jobs", eval_args.jobs, "worker threads");

  RankMergeArgs merge_args;
  auto* merge = app.add_subcommand("rank-merge", "average several ranking files");
  merge->add_option("--inputs", merge_args.inputs, "ranking csv files")->required()->take_all();
  merge->add_option("--out", merge_args.out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) run_gen_synth(gen_args);
    if (sel->parsed()) run_select(sel_args);
    if (cmp->parsed()) run_compare(cmp_args);
    if (evc->parsed()) run_eval_classify(eval_args);
    if (merge->parsed()) run_rank_merge(merge_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

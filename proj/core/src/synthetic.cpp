#include "stabsel/synthetic.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "stabsel/rng.hpp"

namespace stabsel {

namespace {

constexpr std::array<char, 5> kRegionNames = {'A', 'B', 'C', 'D', 'E'};

// Region index -> pattern index (A:0, BCD:1, E:2).
constexpr std::array<int, 5> kRegionPattern = {0, 1, 1, 1, 2};
constexpr int kLabelPattern = 1;

double population_std(const Eigen::VectorXd& v) {
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size()));
}

}  // namespace

void SyntheticSpec::validate() const {
  if (height < 1 || width < 1 || region_size < 1) {
    throw std::invalid_argument("SyntheticSpec: non-positive geometry");
  }
  if (period_rest < 1 || period_task < 1) {
    throw std::invalid_argument("SyntheticSpec: non-positive period");
  }
  if (n_timepoints < period_rest + period_task) {
    throw std::invalid_argument("SyntheticSpec: need at least one full rest+task period");
  }
  if (!(snr > 0.0)) throw std::invalid_argument("SyntheticSpec: snr must be positive");
  for (int delay : pattern_delays) {
    if (delay < 0 || delay >= n_timepoints) {
      throw std::invalid_argument("SyntheticSpec: delay outside [0, T)");
    }
  }
  std::vector<char> cover(static_cast<std::size_t>(height) * width, 0);
  for (std::size_t r = 0; r < anchors.size(); ++r) {
    const auto& a = anchors[r];
    if (a.row < 0 || a.col < 0 || a.row + region_size > height || a.col + region_size > width) {
      throw std::invalid_argument(std::string("SyntheticSpec: region ") + kRegionNames[r] +
                                  " outside the image");
    }
    for (int dr = 0; dr < region_size; ++dr) {
      for (int dc = 0; dc < region_size; ++dc) {
        auto idx = static_cast<std::size_t>((a.row + dr) * width + (a.col + dc));
        if (cover[idx]) {
          throw std::invalid_argument("SyntheticSpec: regions overlap");
        }
        cover[idx] = 1;
      }
    }
  }
  // Every pattern must have both rest and task points, otherwise the labels
  // or a region would be constant.
  for (int delay : pattern_delays) {
    const Eigen::VectorXd b = boxcar(period_rest, period_task, delay, n_timepoints);
    if (population_std(b) == 0.0) {
      throw std::invalid_argument("SyntheticSpec: a pattern is constant over [0, T)");
    }
  }
}

Eigen::VectorXd boxcar(int period_rest, int period_task, int delay, int t_len) {
  if (period_rest < 1 || period_task < 1 || delay < 0 || t_len < period_rest + period_task) {
    throw std::invalid_argument("boxcar: bad parameters");
  }
  const int period = period_rest + period_task;
  Eigen::VectorXd out(t_len);
  for (int t = 0; t < t_len; ++t) {
    out[t] = (t >= delay && ((t - delay) % period) >= period_rest) ? 1.0 : 0.0;
  }
  return out;
}

Eigen::MatrixXd signal_matrix(const SyntheticSpec& spec) {
  spec.validate();
  const int t_len = spec.n_timepoints;

  std::array<Eigen::VectorXd, 3> patterns;
  for (int k = 0; k < 3; ++k) {
    Eigen::VectorXd b = boxcar(spec.period_rest, spec.period_task, spec.pattern_delays[k], t_len);
    const double amplitude =
        std::isinf(spec.snr) ? 1.0 : spec.snr / population_std(b);
    patterns[k] = amplitude * b;
  }

  Eigen::MatrixXd signal = Eigen::MatrixXd::Zero(t_len, spec.n_pixels());
  for (std::size_t r = 0; r < spec.anchors.size(); ++r) {
    const auto& a = spec.anchors[r];
    const Eigen::VectorXd& series = patterns[static_cast<std::size_t>(kRegionPattern[r])];
    for (int dr = 0; dr < spec.region_size; ++dr) {
      for (int dc = 0; dc < spec.region_size; ++dc) {
        signal.col((a.row + dr) * spec.width + (a.col + dc)) = series;
      }
    }
  }
  return signal;
}

std::pair<Dataset, GroundTruth> generate(const SyntheticSpec& spec) {
  spec.validate();
  Eigen::MatrixXd x = signal_matrix(spec);

  if (!std::isinf(spec.snr)) {
    Rng rng(spec.noise_seed);
    // Column-major fill; part of the determinism contract.
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        x(i, j) += rng.next_gaussian();
      }
    }
  }

  Eigen::VectorXd y = boxcar(spec.period_rest, spec.period_task,
                             spec.pattern_delays[kLabelPattern], spec.n_timepoints);

  GroundTruth truth;
  truth.region_of.assign(static_cast<std::size_t>(spec.n_pixels()), '\0');
  std::vector<std::size_t> discriminative, all_active;
  for (std::size_t r = 0; r < spec.anchors.size(); ++r) {
    const auto& a = spec.anchors[r];
    for (int dr = 0; dr < spec.region_size; ++dr) {
      for (int dc = 0; dc < spec.region_size; ++dc) {
        const auto idx = static_cast<std::size_t>((a.row + dr) * spec.width + (a.col + dc));
        truth.region_of[idx] = kRegionNames[r];
        all_active.push_back(idx);
        if (kRegionPattern[r] == kLabelPattern) discriminative.push_back(idx);
      }
    }
  }
  truth.discriminative = IndexSet::of(std::move(discriminative));
  truth.all_active = IndexSet::of(std::move(all_active));
  return {Dataset(std::move(x), std::move(y)), std::move(truth)};
}

Eigen::VectorXd flip_labels(const Eigen::VectorXd& y, std::size_t k, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(y.size());
  if (k > n) throw std::invalid_argument("flip_labels: k exceeds n");
  Eigen::VectorXd out = y;
  if (k == 0) return out;
  Rng rng(seed);
  for (std::size_t i : sample_without_replacement(n, k, rng)) {
    const auto idx = static_cast<Eigen::Index>(i);
    out[idx] = 1.0 - out[idx];
  }
  return out;
}

void save_spec(const SyntheticSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# synthetic benchmark specification\n";
  out << "height = " << spec.height << "\n";
  out << "width = " << spec.width << "\n";
  out << "region_size = " << spec.region_size << "\n";
  out << "# region anchors (top-left row,col); the layout approximates the\n";
  out << "# usual A top-left / B top-right / C center / D bottom-left /\n";
  out << "# E bottom-right figure and is not an exact reproduction\n";
  for (std::size_t r = 0; r < spec.anchors.size(); ++r) {
    out << "anchor_" << static_cast<char>('a' + r) << " = " << spec.anchors[r].row << ","
        << spec.anchors[r].col << "\n";
  }
  out << "period_rest = " << spec.period_rest << "\n";
  out << "period_task = " << spec.period_task << "\n";
  out << "# pattern 1 -> region A, pattern 2 -> B,C,D (labels), pattern 3 -> E\n";
  out << "delay_pattern1 = " << spec.pattern_delays[0] << "\n";
  out << "delay_pattern2 = " << spec.pattern_delays[1] << "\n";
  out << "delay_pattern3 = " << spec.pattern_delays[2] << "\n";
  out << "n_timepoints = " << spec.n_timepoints << "\n";
  out << "snr = ";
  if (std::isinf(spec.snr)) {
    out << "inf";
  } else {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), spec.snr);
    out << std::string_view(buf, ptr);
  }
  out << "\n";
  out << "noise_seed = " << spec.noise_seed << "\n";
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

SyntheticSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("spec file: missing '=' in line: " + line);
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  SyntheticSpec spec;
  auto get_int = [&](const std::string& key, int fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stoi(it->second);
  };
  spec.height = get_int("height", spec.height);
  spec.width = get_int("width", spec.width);
  spec.region_size = get_int("region_size", spec.region_size);
  for (std::size_t r = 0; r < spec.anchors.size(); ++r) {
    auto it = kv.find(std::string("anchor_") + static_cast<char>('a' + r));
    if (it != kv.end()) {
      std::istringstream ss(it->second);
      char comma = 0;
      if (!(ss >> spec.anchors[r].row >> comma >> spec.anchors[r].col) || comma != ',') {
        throw std::runtime_error("spec file: bad anchor value: " + it->second);
      }
    }
  }
  spec.period_rest = get_int("period_rest", spec.period_rest);
  spec.period_task = get_int("period_task", spec.period_task);
  spec.pattern_delays[0] = get_int("delay_pattern1", spec.pattern_delays[0]);
  spec.pattern_delays[1] = get_int("delay_pattern2", spec.pattern_delays[1]);
  spec.pattern_delays[2] = get_int("delay_pattern3", spec.pattern_delays[2]);
  spec.n_timepoints = get_int("n_timepoints", spec.n_timepoints);
  if (auto it = kv.find("snr"); it != kv.end()) {
    spec.snr = it->second == "inf" ? std::numeric_limits<double>::infinity()
                                   : std::stod(it->second);
  }
  if (auto it = kv.find("noise_seed"); it != kv.end()) {
    spec.noise_seed = std::stoull(it->second);
  }
  spec.validate();
  return spec;
}

void save_ground_truth_csv(const GroundTruth& truth, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "pixel_index,region\n";
  for (std::size_t i = 0; i < truth.region_of.size(); ++i) {
    out << i << ',' << (truth.region_of[i] ? std::string(1, truth.region_of[i]) : "none") << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace stabsel

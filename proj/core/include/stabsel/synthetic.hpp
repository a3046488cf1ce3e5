#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <filesystem>
#include <utility>

#include "stabsel/dataset.hpp"

namespace stabsel {

// fMRI-like benchmark image: five square regions on a height x width pixel
// grid, each region's pixels carrying a boxcar time course plus unit
// Gaussian noise. Region labels follow the classic layout:
//
//   A: pattern 1     B, C, D: pattern 2 (the discriminative one)     E: pattern 3
//
// The class labels equal pattern 2's boxcar, so B, C and D are the ground
// truth discriminative pixels. Pattern 3 runs in anti-phase with pattern 2
// (half a period apart): region E separates the two classes in a univariate
// sense even though it carries no pattern-2 signal, which is what makes it a
// deliberate trap for mean-difference tests. Pattern 1 sits a quarter period
// away from pattern 2 and is close to uncorrelated with the labels.

struct RegionAnchor {
  int row = 0;
  int col = 0;  // top-left pixel of a region_size x region_size block
};

struct SyntheticSpec {
  int height = 70;
  int width = 63;
  int region_size = 7;
  // Approximate layout A top-left, B top-right, C center, D bottom-left,
  // E bottom-right.
  std::array<RegionAnchor, 5> anchors = {{{7, 7}, {7, 49}, {31, 28}, {56, 7}, {56, 49}}};
  int period_rest = 10;
  int period_task = 10;
  // Boxcar delays for pattern 1 (region A), pattern 2 (regions B, C, D; also
  // the labels) and pattern 3 (region E). Defaults keep pattern 3 half a
  // period from pattern 2 and pattern 1 a quarter period away.
  std::array<int, 3> pattern_delays = {5, 0, 10};
  int n_timepoints = 100;
  // Signal std / noise std. The boxcar amplitude is scaled so each active
  // pixel's noiseless time series has population std equal to snr while the
  // noise stays N(0, 1). +infinity means "no noise" with unit amplitude.
  double snr = 1.0;
  std::uint64_t noise_seed = 0;

  int n_pixels() const { return height * width; }
  void validate() const;  // regions inside the image and disjoint, usable length
};

struct GroundTruth {
  IndexSet discriminative;          // pixels of B, C, D
  IndexSet all_active;              // pixels of A..E
  std::vector<char> region_of;     // per pixel: 'A'..'E', or '\0' for background
};

// Binary on/off stimulus: entry t is 1 iff ((t - delay) mod period) lands in
// the task half, and 0 for all t < delay (pre-onset is rest).
Eigen::VectorXd boxcar(int period_rest, int period_task, int delay, int t_len);

// Noiseless signal component, T x n_pixels. Independent of the noise seed.
Eigen::MatrixXd signal_matrix(const SyntheticSpec& spec);

// Dataset with n = T observations and p = height*width features (row-major
// pixel flattening), plus the ground-truth sets. Deterministic per spec; two
// specs differing only in noise_seed share the identical signal component.
std::pair<Dataset, GroundTruth> generate(const SyntheticSpec& spec);

// Flips exactly k distinct labels, positions drawn from `seed`.
Eigen::VectorXd flip_labels(const Eigen::VectorXd& y, std::size_t k, std::uint64_t seed);

// Plain-text key=value round trip for the spec.
void save_spec(const SyntheticSpec& spec, const std::filesystem::path& path);
SyntheticSpec load_spec(const std::filesystem::path& path);

// CSV "pixel_index,region" with region one of A..E or none.
void save_ground_truth_csv(const GroundTruth& truth, const std::filesystem::path& path);

}  // namespace stabsel

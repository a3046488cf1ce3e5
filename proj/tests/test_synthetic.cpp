#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "stabsel/synthetic.hpp"

using namespace stabsel;

namespace {

double pop_std(const Eigen::VectorXd& v) {
  const double m = v.mean();
  return std::sqrt((v.array() - m).square().sum() / static_cast<double>(v.size()));
}

double correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double ma = a.mean(), mb = b.mean();
  const double cov = ((a.array() - ma) * (b.array() - mb)).sum();
  return cov / (std::sqrt((a.array() - ma).square().sum()) *
                std::sqrt((b.array() - mb).square().sum()));
}

}  // namespace

TEST_CASE("boxcar produces the documented on/off blocks") {
  const Eigen::VectorXd plain = boxcar(10, 10, 0, 20);
  for (int t = 0; t < 20; ++t) CHECK(plain[t] == (t >= 10 ? 1.0 : 0.0));

  const Eigen::VectorXd delayed = boxcar(10, 10, 5, 20);
  for (int t = 0; t < 20; ++t) CHECK(delayed[t] == (t >= 15 ? 1.0 : 0.0));

  // a full-period delay matches delay 0 from t = period onward
  const Eigen::VectorXd shifted = boxcar(10, 10, 20, 60);
  const Eigen::VectorXd reference = boxcar(10, 10, 0, 60);
  for (int t = 20; t < 60; ++t) CHECK(shifted[t] == reference[t]);
  for (int t = 0; t < 20; ++t) CHECK(shifted[t] == 0.0);

  CHECK_THROWS_AS(boxcar(10, 10, 0, 15), std::invalid_argument);
  CHECK_THROWS_AS(boxcar(0, 10, 0, 20), std::invalid_argument);
}

TEST_CASE("default spec generates the 70x63 benchmark with 147 truth pixels") {
  SyntheticSpec spec;
  auto [d, truth] = generate(spec);
  CHECK(d.n() == 100);
  CHECK(d.p() == 4410);
  CHECK(truth.discriminative.size() == 147);
  CHECK(truth.all_active.size() == 245);
  for (std::size_t f : truth.discriminative) CHECK(truth.all_active.contains(f));

  // labels are pattern 2's boxcar: exactly half the points are task
  CHECK(d.y().sum() == 50.0);

  int per_region[5] = {0, 0, 0, 0, 0};
  for (char r : truth.region_of) {
    if (r) per_region[r - 'A'] += 1;
  }
  for (int c : per_region) CHECK(c == 49);

  // ground truth never depends on the noise seed
  SyntheticSpec other = spec;
  other.noise_seed = 1234;
  auto [d2, truth2] = generate(other);
  CHECK(truth2.discriminative == truth.discriminative);
  CHECK(truth2.all_active == truth.all_active);
}

TEST_CASE("noiseless generation copies the boxcar through pattern-2 pixels") {
  SyntheticSpec spec;
  spec.snr = std::numeric_limits<double>::infinity();
  auto [d, truth] = generate(spec);
  for (std::size_t f : truth.discriminative) {
    CHECK(d.x().col(static_cast<Eigen::Index>(f)) == d.y());
  }
}

TEST_CASE("generation is deterministic and seeds only move the noise") {
  SyntheticSpec spec;
  spec.noise_seed = 9;
  auto [a, ta] = generate(spec);
  auto [b, tb] = generate(spec);
  CHECK(a.x() == b.x());
  CHECK(a.y() == b.y());

  const Eigen::MatrixXd signal = signal_matrix(spec);
  SyntheticSpec other = spec;
  other.noise_seed = 10;
  auto [c, tc] = generate(other);
  CHECK(c.x() != a.x());

  // the signal component is seed-independent: residual noise has mean ~0 and
  // std ~1 for both seeds on an active pixel
  const auto pixel = static_cast<Eigen::Index>(ta.discriminative[0]);
  const Eigen::VectorXd noise_a = a.x().col(pixel) - signal.col(pixel);
  const Eigen::VectorXd noise_c = c.x().col(pixel) - signal.col(pixel);
  CHECK(std::abs(noise_a.mean()) < 0.5);
  CHECK(pop_std(noise_a) == doctest::Approx(1.0).epsilon(0.35));
  CHECK(noise_a != noise_c);
}

TEST_CASE("measured snr over 100 active pixels stays near the requested ratio") {
  SyntheticSpec spec;
  spec.noise_seed = 31;
  const Eigen::MatrixXd signal = signal_matrix(spec);
  auto [d, truth] = generate(spec);
  double total_ratio = 0.0;
  int counted = 0;
  for (std::size_t f : truth.all_active) {
    if (counted == 100) break;
    const auto j = static_cast<Eigen::Index>(f);
    const Eigen::VectorXd noise = d.x().col(j) - signal.col(j);
    total_ratio += pop_std(signal.col(j)) / pop_std(noise);
    ++counted;
  }
  REQUIRE(counted == 100);
  CHECK(total_ratio / 100.0 == doctest::Approx(1.0).epsilon(0.1));

  SyntheticSpec half = spec;
  half.snr = 0.5;
  const Eigen::MatrixXd signal_half = signal_matrix(half);
  for (std::size_t f : truth.all_active) {
    CHECK(pop_std(signal_half.col(static_cast<Eigen::Index>(f))) == doctest::Approx(0.5));
  }
}

TEST_CASE("region A tracks its own pattern but not the labels") {
  SyntheticSpec spec;
  spec.noise_seed = 77;
  auto [d, truth] = generate(spec);
  const Eigen::VectorXd pattern1 =
      boxcar(spec.period_rest, spec.period_task, spec.pattern_delays[0], spec.n_timepoints);
  double own = 0.0, label = 0.0;
  int count = 0;
  for (std::size_t f = 0; f < truth.region_of.size(); ++f) {
    if (truth.region_of[f] != 'A') continue;
    const auto j = static_cast<Eigen::Index>(f);
    own += correlation(d.x().col(j), pattern1);
    label += std::abs(correlation(d.x().col(j), d.y()));
    ++count;
  }
  REQUIRE(count == 49);
  CHECK(own / count > 0.5);
  CHECK(label / count < 0.3);
}

TEST_CASE("region E runs in anti-phase with the labels") {
  SyntheticSpec spec;
  const Eigen::VectorXd pattern3 =
      boxcar(spec.period_rest, spec.period_task, spec.pattern_delays[2], spec.n_timepoints);
  const Eigen::VectorXd y =
      boxcar(spec.period_rest, spec.period_task, spec.pattern_delays[1], spec.n_timepoints);
  CHECK(pattern3.dot(y) == 0.0);       // task blocks never overlap
  CHECK(pattern3.sum() > 0.0);
  CHECK(correlation(pattern3, y) < -0.5);
}

TEST_CASE("mean B/C/D pixel correlation with the labels over 50 seeds") {
  SyntheticSpec spec;
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SyntheticSpec s = spec;
    s.noise_seed = seed;
    auto [d, truth] = generate(s);
    const auto pixel = static_cast<Eigen::Index>(truth.discriminative[seed % 147]);
    total += correlation(d.x().col(pixel), d.y());
  }
  const double mean = total / 50.0;  // theory: snr/sqrt(1+snr^2) = 0.707 at snr 1
  CHECK(mean >= 0.5);
  CHECK(mean <= 0.85);
}

TEST_CASE("flip_labels flips exactly k distinct positions") {
  SyntheticSpec spec;
  auto [d, truth] = generate(spec);

  CHECK(flip_labels(d.y(), 0, 5) == d.y());

  const Eigen::VectorXd all = flip_labels(d.y(), static_cast<std::size_t>(d.n()), 5);
  CHECK((all.array() + d.y().array() - 1.0).matrix().isZero(0.0));

  for (std::size_t k : {1UL, 5UL, 10UL, 37UL}) {
    const Eigen::VectorXd flipped = flip_labels(d.y(), k, 99);
    std::size_t hamming = 0;
    for (Eigen::Index i = 0; i < d.n(); ++i) hamming += flipped[i] != d.y()[i] ? 1 : 0;
    CHECK(hamming == k);
    CHECK(flip_labels(d.y(), k, 99) == flipped);  // deterministic
  }
  CHECK_THROWS_AS(flip_labels(d.y(), static_cast<std::size_t>(d.n()) + 1, 0),
                  std::invalid_argument);
}

TEST_CASE("spec files round trip") {
  testing_helpers::TempDir tmp;
  SyntheticSpec spec;
  spec.snr = 0.62517;
  spec.noise_seed = 424242;
  spec.n_timepoints = 120;
  spec.anchors[2] = {30, 27};
  save_spec(spec, tmp.file("spec.txt"));
  const SyntheticSpec back = load_spec(tmp.file("spec.txt"));
  CHECK(back.height == spec.height);
  CHECK(back.width == spec.width);
  CHECK(back.anchors[2].row == 30);
  CHECK(back.anchors[2].col == 27);
  CHECK(back.pattern_delays == spec.pattern_delays);
  CHECK(back.n_timepoints == 120);
  CHECK(back.snr == spec.snr);
  CHECK(back.noise_seed == spec.noise_seed);

  SyntheticSpec noiseless;
  noiseless.snr = std::numeric_limits<double>::infinity();
  save_spec(noiseless, tmp.file("inf.txt"));
  CHECK(std::isinf(load_spec(tmp.file("inf.txt")).snr));
}

TEST_CASE("invalid specs are rejected") {
  SyntheticSpec outside;
  outside.anchors[0] = {65, 0};  // 65 + 7 > 70
  CHECK_THROWS_AS(outside.validate(), std::invalid_argument);

  SyntheticSpec overlap;
  overlap.anchors[1] = {8, 8};
  CHECK_THROWS_AS(overlap.validate(), std::invalid_argument);

  SyntheticSpec brief;
  brief.n_timepoints = 15;
  CHECK_THROWS_AS(brief.validate(), std::invalid_argument);

  SyntheticSpec bad_snr;
  bad_snr.snr = 0.0;
  CHECK_THROWS_AS(bad_snr.validate(), std::invalid_argument);
}

TEST_CASE("ground truth csv lists every pixel with its region") {
  testing_helpers::TempDir tmp;
  SyntheticSpec spec;
  spec.height = 4;
  spec.width = 5;
  spec.region_size = 1;
  spec.anchors = {{{0, 0}, {0, 2}, {1, 1}, {2, 3}, {3, 4}}};
  spec.n_timepoints = 40;
  auto [d, truth] = generate(spec);
  save_ground_truth_csv(truth, tmp.file("truth.csv"));
  const std::string text = testing_helpers::read_text(tmp.file("truth.csv"));
  CHECK(text.find("pixel_index,region\n0,A\n1,none\n2,B\n") == 0);
}

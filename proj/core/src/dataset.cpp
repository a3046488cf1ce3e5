#include "stabsel/dataset.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string_view>

static_assert(std::endian::native == std::endian::little,
              "binary-f64 matrix format assumes a little-endian host");

namespace stabsel {

IndexSet IndexSet::of(std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    throw std::invalid_argument("IndexSet: duplicate index");
  }
  IndexSet s;
  s.values_ = std::move(indices);
  return s;
}

bool IndexSet::contains(std::size_t value) const {
  return std::binary_search(values_.begin(), values_.end(), value);
}

std::size_t IndexSet::max_index() const {
  if (values_.empty()) throw std::logic_error("IndexSet::max_index on empty set");
  return values_.back();
}

IndexSet all_features(std::size_t p) {
  std::vector<std::size_t> v(p);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return IndexSet::of(std::move(v));
}

Dataset::Dataset(Eigen::MatrixXd x, Eigen::VectorXd y, std::vector<std::string> feature_ids)
    : x_(std::move(x)), y_(std::move(y)), feature_ids_(std::move(feature_ids)) {
  if (x_.rows() < 2) throw std::invalid_argument("Dataset: need at least 2 observations");
  if (x_.cols() < 1) throw std::invalid_argument("Dataset: need at least 1 feature");
  if (y_.size() != x_.rows()) {
    throw std::invalid_argument("Dataset: label count does not match row count");
  }
  for (Eigen::Index i = 0; i < y_.size(); ++i) {
    if (y_[i] != 0.0 && y_[i] != 1.0) {
      throw std::invalid_argument("Dataset: non-binary label at row " + std::to_string(i));
    }
  }
  if (!x_.allFinite()) {
    for (Eigen::Index j = 0; j < x_.cols(); ++j) {
      for (Eigen::Index i = 0; i < x_.rows(); ++i) {
        if (!std::isfinite(x_(i, j))) {
          throw std::invalid_argument("Dataset: non-finite entry at row " + std::to_string(i) +
                                      ", column " + std::to_string(j));
        }
      }
    }
  }
  if (feature_ids_.empty()) {
    feature_ids_.reserve(static_cast<std::size_t>(x_.cols()));
    for (Eigen::Index j = 0; j < x_.cols(); ++j) {
      feature_ids_.push_back("f" + std::to_string(j));
    }
  } else if (feature_ids_.size() != static_cast<std::size_t>(x_.cols())) {
    throw std::invalid_argument("Dataset: feature id count does not match column count");
  }
}

bool Dataset::both_classes_present() const {
  bool has0 = false, has1 = false;
  for (Eigen::Index i = 0; i < y_.size(); ++i) {
    (y_[i] == 1.0 ? has1 : has0) = true;
  }
  return has0 && has1;
}

void Dataset::require_both_classes(const std::string& op) const {
  if (!both_classes_present()) {
    throw std::invalid_argument(op + ": both classes must be present");
  }
}

std::pair<Dataset, ColumnStats> standardize(const Dataset& d) {
  const Eigen::Index n = d.n(), p = d.p();
  ColumnStats stats;
  stats.means.resize(p);
  stats.stds.resize(p);
  Eigen::MatrixXd out(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double mean = d.x().col(j).mean();
    const double var = (d.x().col(j).array() - mean).square().sum() / static_cast<double>(n);
    const double sd = std::sqrt(var);
    stats.means[j] = mean;
    stats.stds[j] = sd;
    if (sd > 0.0) {
      out.col(j) = (d.x().col(j).array() - mean) / sd;
    } else {
      out.col(j).setZero();
    }
  }
  return {Dataset(std::move(out), d.y(), d.feature_ids()), std::move(stats)};
}

Dataset slice(const Dataset& d, std::span<const std::size_t> rows, const IndexSet& cols) {
  if (rows.empty()) throw std::invalid_argument("slice: row selection is empty");
  if (cols.empty()) throw std::invalid_argument("slice: column selection is empty");
  for (std::size_t r : rows) {
    if (r >= static_cast<std::size_t>(d.n())) {
      throw std::out_of_range("slice: row index " + std::to_string(r) + " out of range");
    }
  }
  if (cols.max_index() >= static_cast<std::size_t>(d.p())) {
    throw std::out_of_range("slice: column index " + std::to_string(cols.max_index()) +
                            " out of range");
  }
  Eigen::MatrixXd x(rows.size(), cols.size());
  Eigen::VectorXd y(rows.size());
  std::vector<std::string> ids;
  ids.reserve(cols.size());
  for (std::size_t jj = 0; jj < cols.size(); ++jj) {
    const auto j = static_cast<Eigen::Index>(cols[jj]);
    for (std::size_t ii = 0; ii < rows.size(); ++ii) {
      x(static_cast<Eigen::Index>(ii), static_cast<Eigen::Index>(jj)) =
          d.x()(static_cast<Eigen::Index>(rows[ii]), j);
    }
    ids.push_back(d.feature_ids()[cols[jj]]);
  }
  for (std::size_t ii = 0; ii < rows.size(); ++ii) {
    y[static_cast<Eigen::Index>(ii)] = d.y()[static_cast<Eigen::Index>(rows[ii])];
  }
  return Dataset(std::move(x), std::move(y), std::move(ids));
}

MatrixFormat format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? MatrixFormat::csv : MatrixFormat::binary_f64;
}

namespace {

constexpr char kBinaryMagic[4] = {'S', 'T', 'B', 'L'};
constexpr std::uint32_t kBinaryVersion = 1;

double parse_double(std::string_view field, Eigen::Index row, Eigen::Index col) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw std::runtime_error("csv: malformed value at row " + std::to_string(row) + ", column " +
                             std::to_string(col));
  }
  if (!std::isfinite(value)) {
    throw std::runtime_error("csv: non-finite entry at row " + std::to_string(row) + ", column " +
                             std::to_string(col));
  }
  return value;
}

// Shortest representation that parses back to the same double.
std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty file " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();

  auto header = split_fields(line);
  if (header.empty() || header[0] != "label") {
    throw std::runtime_error("csv: header must start with 'label' in " + path.string());
  }
  const std::size_t p = header.size() - 1;
  if (p == 0) throw std::runtime_error("csv: no feature columns in " + path.string());
  std::vector<std::string> ids(header.begin() + 1, header.end());

  std::vector<double> labels;
  std::vector<double> values;  // row-major
  Eigen::Index row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != p + 1) {
      throw std::runtime_error("csv: row " + std::to_string(row) + " has " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(p + 1));
    }
    double label = parse_double(fields[0], row, 0);
    if (label != 0.0 && label != 1.0) {
      throw std::runtime_error("csv: non-binary label at row " + std::to_string(row));
    }
    labels.push_back(label);
    for (std::size_t j = 0; j < p; ++j) {
      values.push_back(parse_double(fields[j + 1], row, static_cast<Eigen::Index>(j + 1)));
    }
    ++row;
  }
  if (row == 0) throw std::runtime_error("csv: no data rows in " + path.string());

  Eigen::MatrixXd x(row, static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < row; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      x(i, static_cast<Eigen::Index>(j)) = values[static_cast<std::size_t>(i) * p + j];
    }
  }
  Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(labels.data(), row);
  return Dataset(std::move(x), std::move(y), std::move(ids));
}

void save_csv(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary: LF line endings everywhere
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "label";
  for (const auto& id : d.feature_ids()) out << ',' << id;
  out << '\n';
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    out << format_double(d.y()[i]);
    for (Eigen::Index j = 0; j < d.p(); ++j) out << ',' << format_double(d.x()(i, j));
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Dataset load_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t n = 0, p = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&p), sizeof p);
  if (!in || std::memcmp(magic, kBinaryMagic, 4) != 0) {
    throw std::runtime_error("binary-f64: bad magic in " + path.string());
  }
  if (version != kBinaryVersion) {
    throw std::runtime_error("binary-f64: unsupported version " + std::to_string(version));
  }
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  in.read(reinterpret_cast<char*>(y.data()), static_cast<std::streamsize>(n * sizeof(double)));
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  std::vector<double> rowbuf(p);
  for (std::uint64_t i = 0; i < n; ++i) {
    in.read(reinterpret_cast<char*>(rowbuf.data()), static_cast<std::streamsize>(p * sizeof(double)));
    for (std::uint64_t j = 0; j < p; ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rowbuf[j];
    }
  }
  if (!in) throw std::runtime_error("binary-f64: truncated file " + path.string());
  return Dataset(std::move(x), std::move(y));
}

void save_binary(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(kBinaryMagic, 4);
  const std::uint32_t version = kBinaryVersion;
  const std::uint64_t n = static_cast<std::uint64_t>(d.n());
  const std::uint64_t p = static_cast<std::uint64_t>(d.p());
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&p), sizeof p);
  out.write(reinterpret_cast<const char*>(d.y().data()),
            static_cast<std::streamsize>(n * sizeof(double)));
  std::vector<double> rowbuf(p);
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t j = 0; j < p; ++j) {
      rowbuf[j] = d.x()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    out.write(reinterpret_cast<const char*>(rowbuf.data()),
              static_cast<std::streamsize>(p * sizeof(double)));
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

Dataset load_matrix(const std::filesystem::path& path, MatrixFormat format) {
  return format == MatrixFormat::csv ? load_csv(path) : load_binary(path);
}

void save_matrix(const Dataset& d, const std::filesystem::path& path, MatrixFormat format) {
  if (format == MatrixFormat::csv) {
    save_csv(d, path);
  } else {
    save_binary(d, path);
  }
}

}  // namespace stabsel

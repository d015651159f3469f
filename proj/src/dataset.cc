#include "subjfair/dataset.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "subjfair/error.h"

namespace subjfair {
namespace {

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      cells.push_back(Trim(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(Trim(cell));
  return cells;
}

bool ParseDouble(const std::string& text, double* out) {
  if (text.empty()) return false;
  char* end = nullptr;
  *out = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size() && std::isfinite(*out);
}

}  // namespace

Dataset::Dataset(FeatureMatrix features, std::vector<std::uint8_t> labels,
                 std::vector<std::string> feature_names)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)) {
  if (labels_.empty()) throw InvalidArgument("dataset must have n >= 1 rows");
  if (features_.cols() < 1) {
    throw InvalidArgument("dataset must have d >= 1 features");
  }
  if (features_.rows() != static_cast<Eigen::Index>(labels_.size())) {
    throw InvalidArgument("feature rows and labels differ in length");
  }
  if (feature_names_.empty()) {
    for (int f = 0; f < features_.cols(); ++f) {
      feature_names_.push_back("x" + std::to_string(f));
    }
  }
  if (feature_names_.size() != static_cast<std::size_t>(features_.cols())) {
    throw InvalidArgument("feature_names length does not match d");
  }
  for (auto y : labels_) {
    if (y > 1) throw InvalidArgument("invalid label: labels must be 0 or 1");
  }
  if (!features_.allFinite()) {
    throw InvalidArgument("dataset contains non-finite feature values");
  }
}

double Dataset::LabelMean() const {
  double positives = 0;
  for (auto y : labels_) positives += y;
  return positives / static_cast<double>(labels_.size());
}

Dataset LoadDataset(const std::filesystem::path& path,
                    const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw NotFound("cannot open dataset file: " + path.string());

  std::string line;
  if (!std::getline(in, line) || Trim(line).empty()) {
    throw InvalidArgument(path.string() + ": empty table (no header row)");
  }
  const auto header = SplitCsvLine(line);
  int label_index = -1;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == label_column) {
      label_index = static_cast<int>(c);
    } else {
      names.push_back(header[c]);
    }
  }
  if (label_index < 0) {
    throw InvalidArgument(path.string() + ": label column '" + label_column +
                          "' not found in header");
  }

  std::vector<double> values;
  std::vector<std::uint8_t> labels;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto cells = SplitCsvLine(line);
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (cells.size() != header.size()) {
      throw InvalidArgument(where + ": expected " +
                            std::to_string(header.size()) + " cells, got " +
                            std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0;
      if (static_cast<int>(c) == label_index) {
        if (!ParseDouble(cells[c], &v) || (v != 0.0 && v != 1.0)) {
          throw InvalidArgument(where + ": invalid label '" + cells[c] + "'");
        }
        labels.push_back(static_cast<std::uint8_t>(v));
      } else {
        if (!ParseDouble(cells[c], &v)) {
          throw InvalidArgument(where + ": non-numeric feature '" + cells[c] +
                                "' in column '" + header[c] + "'");
        }
        values.push_back(v);
      }
    }
  }
  if (labels.empty()) {
    throw InvalidArgument(path.string() + ": empty table (no data rows)");
  }
  if (names.empty()) {
    throw InvalidArgument(path.string() + ": no feature columns");
  }
  const auto n = static_cast<Eigen::Index>(labels.size());
  const auto d = static_cast<Eigen::Index>(names.size());
  FeatureMatrix features = Eigen::Map<FeatureMatrix>(values.data(), n, d);
  return Dataset(std::move(features), std::move(labels), std::move(names));
}

void SaveDataset(const Dataset& dataset, const std::filesystem::path& path,
                 const std::string& label_column) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write dataset file: " + path.string());
  for (const auto& name : dataset.feature_names()) out << name << ',';
  out << label_column << '\n';
  out << std::setprecision(17);
  for (int i = 0; i < dataset.size(); ++i) {
    for (double v : dataset.row(i)) out << v << ',';
    out << dataset.label(i) << '\n';
  }
}

Dataset MakeSyntheticDataset(int n, int d, std::uint64_t seed,
                             double label_noise) {
  if (n < 1 || d < 1) throw InvalidArgument("synthetic dataset needs n, d >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> direction(d);
  for (auto& v : direction) v = normal(rng);

  FeatureMatrix features(n, d);
  std::vector<std::uint8_t> labels(n);
  for (int i = 0; i < n; ++i) {
    double score = 0.3;
    for (int f = 0; f < d; ++f) {
      features(i, f) = normal(rng);
      score += direction[f] * features(i, f);
    }
    bool y = score >= 0;
    if (unit(rng) < label_noise) y = !y;
    labels[i] = y ? 1 : 0;
  }
  return Dataset(std::move(features), std::move(labels), {});
}

}  // namespace subjfair

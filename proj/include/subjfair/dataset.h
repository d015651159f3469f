#ifndef SUBJFAIR_DATASET_H_
#define SUBJFAIR_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace subjfair {

using FeatureMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// The labelled sample S: n feature rows with binary labels.
//
// Construction validates the invariants (n >= 1, d >= 1, labels in {0,1},
// finite features, one name per column), so a Dataset in hand is always
// well formed.
class Dataset {
 public:
  Dataset(FeatureMatrix features, std::vector<std::uint8_t> labels,
          std::vector<std::string> feature_names);

  int size() const { return static_cast<int>(labels_.size()); }
  int dim() const { return static_cast<int>(features_.cols()); }

  const FeatureMatrix& features() const { return features_; }
  std::span<const double> row(int i) const {
    return {features_.data() + static_cast<std::ptrdiff_t>(i) * dim(),
            static_cast<std::size_t>(dim())};
  }
  const std::vector<std::uint8_t>& labels() const { return labels_; }
  int label(int i) const { return labels_[i]; }
  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }

  double LabelMean() const;

 private:
  FeatureMatrix features_;
  std::vector<std::uint8_t> labels_;
  std::vector<std::string> feature_names_;
};

// Reads a comma-separated file with a header row. Every column other than
// `label_column` must be numeric; the label column must hold 0 or 1.
Dataset LoadDataset(const std::filesystem::path& path,
                    const std::string& label_column);

// Writes the dataset back in the format LoadDataset reads.
void SaveDataset(const Dataset& dataset, const std::filesystem::path& path,
                 const std::string& label_column = "label");

// Synthetic sample used by the examples, tests and benchmarks: standard
// normal features and labels from a noisy linear rule, so the best linear
// threshold has error near `label_noise`.
Dataset MakeSyntheticDataset(int n, int d, std::uint64_t seed,
                             double label_noise = 0.25);

}  // namespace subjfair

#endif  // SUBJFAIR_DATASET_H_

#ifndef SUBJFAIR_CONFIG_H_
#define SUBJFAIR_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subjfair/solver.h"

namespace subjfair {

// Settings shared by the train and sweep commands.
struct RunConfig {
  double gamma = 0.3;
  double eta = 0.0;
  double c_lambda = 10.0;
  double c_tau = 10.0;
  double nu = 0.05;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> t_override;
  std::int64_t trajectory_stride = 100;
  bool early_stop = false;
  std::string oracle = "heuristic";
  std::string label_column = "label";
  std::vector<double> gamma_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> eta_grid = {0.0};
  int threads = 0;

  SolverConfig ToSolverConfig() const;
};

using KeyValues = std::map<std::string, std::string>;

// Flat "key = value" lines; '#' starts a comment. Keys use underscores.
KeyValues ReadKeyValueFile(const std::filesystem::path& path);

// Overwrites the fields named in `values`. Unknown keys and malformed values
// are errors; `source` prefixes the messages.
void ApplyKeyValues(RunConfig& config, const KeyValues& values,
                    const std::string& source);

std::vector<double> ParseGrid(const std::string& text);

}  // namespace subjfair

#endif  // SUBJFAIR_CONFIG_H_

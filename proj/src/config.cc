#include "subjfair/config.h"

#include <charconv>
#include <fstream>

#include "subjfair/error.h"

namespace subjfair {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double ToDouble(const std::string& v, const std::string& where) {
  double out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgument(where + ": expected a number, got '" + v + "'");
  }
  return out;
}

std::int64_t ToInt(const std::string& v, const std::string& where) {
  std::int64_t out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgument(where + ": expected an integer, got '" + v + "'");
  }
  return out;
}

bool ToBool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidArgument(where + ": expected true or false, got '" + v + "'");
}

}  // namespace

SolverConfig RunConfig::ToSolverConfig() const {
  SolverConfig c;
  c.params = {gamma, eta};
  c.budgets = {c_lambda, c_tau, nu};
  c.t_override = t_override;
  c.seed = seed;
  c.trajectory_stride = trajectory_stride;
  c.early_stop = early_stop;
  c.Validate();
  return c;
}

KeyValues ReadKeyValueFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFound("cannot open config " + path.string());
  KeyValues out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (eq == std::string::npos) {
      throw InvalidArgument(where + ": expected key = value");
    }
    const auto key = Trim(line.substr(0, eq));
    if (key.empty()) throw InvalidArgument(where + ": empty key");
    if (out.count(key)) {
      throw InvalidArgument(where + ": duplicate key '" + key + "'");
    }
    out[key] = Trim(line.substr(eq + 1));
  }
  return out;
}

std::vector<double> ParseGrid(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = Trim(text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start));
    if (item.empty()) throw InvalidArgument("empty entry in grid '" + text + "'");
    out.push_back(ToDouble(item, "grid"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void ApplyKeyValues(RunConfig& c, const KeyValues& values,
                    const std::string& source) {
  for (const auto& [key, value] : values) {
    const std::string where = source + ": " + key;
    if (key == "gamma") {
      c.gamma = ToDouble(value, where);
    } else if (key == "eta") {
      c.eta = ToDouble(value, where);
    } else if (key == "c_lambda") {
      c.c_lambda = ToDouble(value, where);
    } else if (key == "c_tau") {
      c.c_tau = ToDouble(value, where);
    } else if (key == "nu") {
      c.nu = ToDouble(value, where);
    } else if (key == "seed") {
      c.seed = static_cast<std::uint64_t>(ToInt(value, where));
    } else if (key == "t_override" || key == "iterations") {
      c.t_override = ToInt(value, where);
    } else if (key == "trajectory_stride") {
      c.trajectory_stride = ToInt(value, where);
    } else if (key == "early_stop") {
      c.early_stop = ToBool(value, where);
    } else if (key == "oracle") {
      c.oracle = value;
    } else if (key == "label_column") {
      c.label_column = value;
    } else if (key == "gamma_grid") {
      c.gamma_grid = ParseGrid(value);
    } else if (key == "eta_grid") {
      c.eta_grid = ParseGrid(value);
    } else if (key == "threads") {
      c.threads = static_cast<int>(ToInt(value, where));
    } else {
      throw InvalidArgument(source + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace subjfair

#ifndef IXY_EXPERIMENT_HPP_
#define IXY_EXPERIMENT_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ixy/model.hpp"

namespace ixy {

inline constexpr const char* kToolVersion = "0.3.0";

enum class Experiment {
  Dispersion,
  ExceptionalPoint,
  EpTable,
  QfiDynamics,
  TimeScaling,
  SizeScaling,
  StationaryScaling,
  Ratio,
  OracleCheck,
};

const std::vector<Experiment>& all_experiments();
std::string to_string(Experiment experiment);
Experiment parse_experiment(const std::string& name);

/// Flat key/value configuration resolved against the experiment defaults.
/// Remembers the source line of every key read from a file so that errors
/// point at it.
class ExperimentConfig {
 public:
  explicit ExperimentConfig(Experiment experiment);

  /// Merges a JSON object from text. Throws ConfigError (with line) on
  /// malformed input or unknown keys.
  void merge_text(const std::string& text);
  void merge_file(const std::filesystem::path& path);
  /// "key=value"; value is parsed as JSON, otherwise taken as a string.
  void apply_override(const std::string& assignment);

  Experiment experiment() const { return experiment_; }
  const nlohmann::json& values() const { return values_; }
  int line_of(const std::string& key) const;

  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<int> get_ints(const std::string& key) const;
  /// Coordination numbers; the string "N/2" is returned as 0.
  std::vector<int> get_z_list(const std::string& key) const;

  /// Model parameters from the flat keys; Z = "N/2" resolves against N.
  ModelParams model() const;
  bool z_is_half_n() const;

  /// Checks every key this experiment reads. Throws ConfigError.
  void validate() const;

 private:
  [[noreturn]] void fail(const std::string& key, const std::string& message) const;
  const nlohmann::json& at(const std::string& key) const;
  void set(const std::string& key, nlohmann::json value, int line);

  Experiment experiment_;
  nlohmann::json values_;
  std::map<std::string, int> lines_;
};

struct RunReport {
  int exit_code = 0;
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;
};

/// Runs the experiment, writing CSV/JSON files and manifest.json into
/// output_dir. Exit codes: 0 success, 2 config error, 3 numerical failure.
RunReport run(const ExperimentConfig& config, std::ostream& log);

/// Formats a double as %.17g.
std::string format_number(double value);

}  // namespace ixy

#endif  // IXY_EXPERIMENT_HPP_

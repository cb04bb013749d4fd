#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace nilergodic::cli {

struct ParamSpec {
  std::string key;
  std::string fallback;
  std::string help;
};

// Resolved experiment parameters. Layers apply in order: declared defaults, config file, --set
// assignments, per-key flags; a later layer overwrites an earlier one. Unknown keys are rejected.
class Params {
 public:
  Params(std::string experiment, const std::vector<ParamSpec>& specs);

  void set(const std::string& key, const std::string& value, const std::string& source);
  void assign(const std::string& assignment, const std::string& source);  // "key=value"
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::string& experiment() const { return experiment_; }
  const std::string& str(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  double real(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<std::int64_t> schedule(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;  // comma list, empty text gives {}

  nlohmann::ordered_json echo() const;

 private:
  std::string experiment_;
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> sources_;
};

// Flat key-value text with [sections]. The [run] section may name the experiment; keys in every other
// section are parameter names, so section headers only group related keys.
struct ConfigFile {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> entries;
};

ConfigFile read_config(const std::string& path);

// Common keys accepted by every experiment.
inline const std::vector<ParamSpec>& common_params() {
  static const std::vector<ParamSpec> specs = {
      {"out", "", "CSV path; '-' writes to stdout; empty selects <experiment>.csv"},
      {"meta", "", "metadata sidecar path; empty selects <out>.meta.json"},
  };
  return specs;
}

}  // namespace nilergodic::cli

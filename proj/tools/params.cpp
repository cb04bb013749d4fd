#include "params.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <filesystem>

#include <nilergodic/errors.hpp>
#include <nilergodic/numerics.hpp>
#include <nilergodic/systems.hpp>

namespace nilergodic::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Params::Params(std::string experiment, const std::vector<ParamSpec>& specs) : experiment_(std::move(experiment)) {
  for (const auto* list : {&common_params(), &specs})
    for (const auto& s : *list) {
      values_[s.key] = s.fallback;
      sources_[s.key] = "default";
    }
}

void Params::set(const std::string& key, const std::string& value, const std::string& source) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("experiment '" + experiment_ + "' has no parameter '" + key + "'");
  it->second = trim(value);
  sources_[key] = source;
}

void Params::assign(const std::string& assignment, const std::string& source) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1), source);
}

const std::string& Params::str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown parameter '" + key + "'");
  return it->second;
}

std::int64_t Params::integer(const std::string& key) const {
  const std::string& s = str(key);
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError("parameter '" + key + "': expected an integer, got '" + s + "'");
  return v;
}

double Params::real(const std::string& key) const {
  try {
    return parse_real(str(key));
  } catch (const ConfigError& e) {
    throw ConfigError("parameter '" + key + "': " + e.what());
  }
}

bool Params::flag(const std::string& key) const {
  const std::string& s = str(key);
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off" || s.empty()) return false;
  throw ConfigError("parameter '" + key + "': expected a boolean, got '" + s + "'");
}

std::vector<std::int64_t> Params::schedule(const std::string& key) const {
  try {
    return parse_schedule(str(key));
  } catch (const ConfigError& e) {
    throw ConfigError("parameter '" + key + "': " + e.what());
  }
}

std::vector<double> Params::reals(const std::string& key) const {
  std::vector<double> out;
  const std::string& s = str(key);
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i < s.size() && s[i] == '(') ++depth;
    if (i < s.size() && s[i] == ')') --depth;
    if (i == s.size() || (s[i] == ',' && depth == 0)) {
      try {
        out.push_back(parse_real(trim(s.substr(start, i - start))));
      } catch (const ConfigError& e) {
        throw ConfigError("parameter '" + key + "': " + e.what());
      }
      start = i + 1;
    }
  }
  return out;
}

nlohmann::ordered_json Params::echo() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : values_) j[k] = {{"value", v}, {"source", sources_.at(k)}};
  return j;
}

ConfigFile read_config(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw ConfigError("config file '" + path + "' not found");
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ConfigFile cfg;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      if (name == "experiment")
        cfg.experiment = trim(node.data());
      else
        cfg.entries.emplace_back(name, node.data());
      continue;
    }
    for (const auto& [key, leaf] : node) {
      if (!leaf.empty()) throw ConfigError("config: nested keys are not supported ('" + name + "." + key + "')");
      if (name == "run" && key == "experiment")
        cfg.experiment = trim(leaf.data());
      else
        cfg.entries.emplace_back(key, leaf.data());
    }
  }
  if (cfg.experiment.empty() && cfg.entries.empty()) throw ConfigError("config file '" + path + "' is empty");
  return cfg;
}

}  // namespace nilergodic::cli

#include <chrono>
#include <iostream>
#include <map>
#include <optional>

#include <nilergodic/errors.hpp>

#include "CLI11.hpp"
#include "experiments.hpp"
#include "json.hpp"

using namespace nilergodic;
using namespace nilergodic::cli;

namespace {

struct Invocation {
  std::string config;
  std::vector<std::string> assignments;
  std::map<std::string, std::string> flags;
};

int error_record(const std::string& type, const std::string& message, int code) {
  nlohmann::ordered_json j;
  j["error"] = {{"type", type}, {"message", message}, {"exit_code", code}};
  std::cerr << j.dump() << "\n";
  return code;
}

int execute(const std::string& requested, const Invocation& inv) {
  std::string name = requested;
  std::optional<ConfigFile> cfg;
  if (!inv.config.empty()) {
    cfg = read_config(inv.config);
    if (name.empty()) name = cfg->experiment;
    if (!cfg->experiment.empty() && cfg->experiment != name)
      throw ConfigError("config names experiment '" + cfg->experiment + "' but '" + name + "' was requested");
  }
  if (name.empty()) throw ConfigError("no experiment named (set experiment in the [run] section)");
  const Experiment* exp = find_experiment(name);
  if (!exp) throw ConfigError("unknown experiment '" + name + "'");

  Params params(exp->name, exp->params);
  if (cfg)
    for (const auto& [k, v] : cfg->entries) params.set(k, v, "config");
  for (const auto& a : inv.assignments) params.assign(a, "set");
  for (const auto& [k, v] : inv.flags) params.set(k, v, "flag");

  const auto t0 = std::chrono::steady_clock::now();
  Result result = exp->run(params);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_outputs(params, result, wall);
  return 0;
}

void add_common(CLI::App* sub, Invocation& inv, const std::vector<ParamSpec>& specs) {
  sub->add_option("--config", inv.config, "experiment config file (key = value with [sections])");
  sub->add_option("--set", inv.assignments, "override a parameter, key=value (repeatable)");
  for (const auto* list : {&common_params(), &specs})
    for (const auto& spec : *list) {
      const std::string key = spec.key;
      std::string help = spec.help;
      if (!spec.fallback.empty()) help += " (default " + spec.fallback + ")";
      sub->add_option_function<std::string>("--" + key, [&inv, key](const std::string& v) { inv.flags[key] = v; },
                                            help);
    }
}

void list_registry(bool as_json) {
  if (as_json) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& e : registry()) {
      nlohmann::ordered_json params = nlohmann::ordered_json::array();
      for (const auto& p : e.params) params.push_back({{"key", p.key}, {"default", p.fallback}, {"help", p.help}});
      j.push_back({{"name", e.name}, {"description", e.description}, {"anchor", e.anchor}, {"params", params}});
    }
    std::cout << j.dump(2) << "\n";
    return;
  }
  for (const auto& e : registry()) std::cout << e.name << "  " << e.description << "  [" << e.anchor << "]\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments for uniform Wiener-Wintner averages along nilsequences", "nilergodic"};
  app.set_version_flag("--version", NILERGODIC_VERSION);
  app.require_subcommand(1);

  bool list_json = false;
  auto* list = app.add_subcommand("list", "print the experiment registry");
  list->add_flag("--json", list_json, "machine-readable registry");

  Invocation inv;
  std::vector<ParamSpec> none;
  auto* run = app.add_subcommand("run", "run the experiment named in a config file");
  add_common(run, inv, none);
  // Every flag of every experiment is valid after 'run'; Params rejects keys the experiment lacks.
  std::map<std::string, ParamSpec> all_keys;
  for (const auto& e : registry())
    for (const auto& p : e.params) all_keys.emplace(p.key, p);
  for (const auto& [key, spec] : all_keys) {
    const std::string k = key;
    run->add_option_function<std::string>("--" + k, [&inv, k](const std::string& v) { inv.flags[k] = v; }, spec.help);
  }

  std::vector<std::pair<CLI::App*, std::string>> subs;
  for (const auto& e : registry()) {
    auto* sub = app.add_subcommand(e.name, e.description);
    add_common(sub, inv, e.params);
    subs.emplace_back(sub, e.name);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (list->parsed()) {
      list_registry(list_json);
      return 0;
    }
    if (run->parsed()) {
      if (inv.config.empty()) throw ConfigError("run: --config is required");
      return execute("", inv);
    }
    for (const auto& [sub, name] : subs)
      if (sub->parsed()) return execute(name, inv);
    throw ConfigError("no subcommand");
  } catch (const ConfigError& e) {
    return error_record("ConfigError", e.what(), 2);
  } catch (const NumericGuardError& e) {
    return error_record("NumericGuardError", e.what(), 3);
  } catch (const RangeError& e) {
    return error_record("RangeError", e.what(), 4);
  } catch (const DomainError& e) {
    // Domain, structural and unsupported errors all originate in the experiment parameters.
    return error_record("DomainError", e.what(), 2);
  } catch (const StructuralError& e) {
    return error_record("StructuralError", e.what(), 2);
  } catch (const UnsupportedError& e) {
    return error_record("UnsupportedError", e.what(), 2);
  } catch (const std::exception& e) {
    return error_record("InternalError", e.what(), 1);
  }
}

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "params.hpp"
#include "report.hpp"

namespace nilergodic::cli {

struct Experiment {
  std::string name;
  std::string description;
  std::string anchor;  // the statement the experiment exercises
  std::vector<ParamSpec> params;
  std::function<Result(const Params&)> run;
};

const std::vector<Experiment>& registry();
const Experiment* find_experiment(const std::string& name);

}  // namespace nilergodic::cli

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nilergodic/numerics.hpp>

#include "json.hpp"
#include "params.hpp"

namespace nilergodic::cli {

// Column names carry their unit in brackets; "[1]" marks a dimensionless quantity.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
};

struct Result {
  Table table;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  std::optional<std::uint64_t> seed;
  std::vector<double> binary;  // raw payload written instead of the CSV when non-empty
};

// Round-trip formatting; identical doubles always give identical text.
std::string num(double x);
std::string num(std::int64_t x);
std::string num(std::size_t x);

std::string csv_text(const Table& t);

struct OutputPaths {
  std::string data;  // "-" for stdout
  std::string meta;
};

OutputPaths output_paths(const Params& p, bool binary);

void write_outputs(const Params& p, const Result& r, double wall_seconds);

}  // namespace nilergodic::cli

#include "report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>

#include <nilergodic/errors.hpp>
#include <nilergodic/parallel.hpp>

namespace nilergodic::cli {

void Table::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw StructuralError("table row has the wrong number of cells");
  rows.push_back(std::move(row));
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string num(std::int64_t x) { return std::to_string(x); }
std::string num(std::size_t x) { return std::to_string(x); }

namespace {

std::string cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  os << bytes;
  if (!os) throw ConfigError("write to '" + path + "' failed");
}

}  // namespace

std::string csv_text(const Table& t) {
  std::string s;
  for (std::size_t c = 0; c < t.columns.size(); ++c) s += (c ? "," : "") + cell(t.columns[c]);
  s += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) s += (c ? "," : "") + cell(row[c]);
    s += '\n';
  }
  return s;
}

OutputPaths output_paths(const Params& p, bool binary) {
  OutputPaths o;
  o.data = p.str("out");
  if (o.data.empty()) o.data = p.experiment() + (binary ? ".bin" : ".csv");
  o.meta = p.str("meta");
  if (o.meta.empty()) o.meta = o.data == "-" ? p.experiment() + ".meta.json" : o.data + ".meta.json";
  if (binary && o.data == "-") throw ConfigError("binary output needs a file path in 'out'");
  return o;
}

void write_outputs(const Params& p, const Result& r, double wall_seconds) {
  const bool binary = !r.binary.empty();
  const OutputPaths paths = output_paths(p, binary);
  if (binary) {
    const auto* bytes = reinterpret_cast<const char*>(r.binary.data());
    write_file(paths.data, std::string(bytes, bytes + r.binary.size() * sizeof(double)));
  } else if (paths.data == "-") {
    std::cout << csv_text(r.table) << std::flush;
  } else {
    write_file(paths.data, csv_text(r.table));
  }

  nlohmann::ordered_json meta;
  meta["experiment"] = p.experiment();
  meta["version"] = NILERGODIC_VERSION;
  meta["config"] = p.echo();
  meta["seed"] = r.seed ? nlohmann::ordered_json(*r.seed) : nlohmann::ordered_json(nullptr);
  meta["rng_algorithm"] = kRngAlgorithm;
  meta["threads"] = thread_count();
  meta["wall_time_s"] = wall_seconds;
  meta["timestamp"] = utc_timestamp();
  meta["output"] = {{"path", paths.data}, {"format", binary ? "float64-le" : "csv"}};
  if (binary) {
    meta["output"]["values"] = r.binary.size();
  } else {
    meta["output"]["columns"] = r.table.columns;
    meta["output"]["rows"] = r.table.rows.size();
  }
  meta["summary"] = r.summary;
  write_file(paths.meta, meta.dump(2) + "\n");
}

}  // namespace nilergodic::cli

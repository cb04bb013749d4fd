#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out, err;
};

struct ScratchDir {
  fs::path path;
  ScratchDir() : path(fs::temp_directory_path() / ("nilergodic_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

fs::path workdir() {
  static const ScratchDir dir;
  return dir.path;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome cli(const std::string& args) {
  const fs::path d = workdir();
  const std::string cmd = "cd '" + d.string() + "' && '" NILERGODIC_CLI_PATH "' " + args + " > stdout.txt 2> stderr.txt";
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = slurp(d / "stdout.txt");
  o.err = slurp(d / "stderr.txt");
  return o;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::stringstream ss(s);
  for (std::string l; std::getline(ss, l);) v.push_back(l);
  return v;
}

std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> v;
  std::stringstream ss(line);
  for (std::string c; std::getline(ss, c, ',');) v.push_back(c);
  return v;
}

void write(const std::string& name, const std::string& text) { std::ofstream(workdir() / name) << text; }

}  // namespace

TEST_CASE("registry listing") {
  auto o = cli("list");
  REQUIRE(o.code == 0);
  for (const char* name : {"ww-run", "ww-sup", "vdc-check", "gowers", "bessel-check", "sobolev", "counterexample",
                           "multi-avg"})
    CHECK(o.out.find(std::string(name) + "  ") != std::string::npos);
  auto j = cli("list --json");
  REQUIRE(j.code == 0);
  auto reg = nlohmann::json::parse(j.out);
  REQUIRE(reg.is_array());
  CHECK(reg.size() >= 8);
  for (const auto& e : reg) {
    CHECK(!e["description"].get<std::string>().empty());
    CHECK(!e["anchor"].get<std::string>().empty());
  }
}

TEST_CASE("usage and exit codes") {
  auto u = cli("frobnicate");
  CHECK(u.code == 2);
  CHECK(u.err.find("Usage") != std::string::npos);
  CHECK(cli("").code == 2);

  write("empty.ini", "");
  auto e = cli("run --config empty.ini");
  CHECK(e.code == 2);
  auto rec = nlohmann::json::parse(e.err);
  CHECK(rec["error"]["type"] == "ConfigError");
  CHECK(rec["error"]["exit_code"] == 2);
  CHECK(cli("run").code == 2);
  CHECK(cli("vdc-check --bogus 3").code == 2);
  CHECK(cli("vdc-check --set bogus=3").code == 2);
  CHECK(cli("ww-sup --system 'spiral(1)'").code == 2);

  auto guard = cli("ww-sup --system 'rotation(0.1)' --observable 'char(1)' --family 'orbit(rotation(0.1);const(0))' "
                   "--schedule 64:128:x2 --out g.csv");
  CHECK(guard.code == 3);
  CHECK(nlohmann::json::parse(guard.err)["error"]["type"] == "NumericGuardError");
  auto range = cli("gowers --n 100 --K 60 --out r.csv");
  CHECK(range.code == 4);
  CHECK(nlohmann::json::parse(range.err)["error"]["type"] == "RangeError");
}

TEST_CASE("vdc-check table, sidecar and reproducibility") {
  auto o = cli("vdc-check --n 10000 --k 50 --trials 100 --out vdc.csv");
  REQUIRE(o.code == 0);
  const std::string first = slurp(workdir() / "vdc.csv");
  auto rows = lines(first);
  REQUIRE(rows.size() == 101);
  CHECK(rows[0] == "trial [index],shape [name],lhs [1],rhs_main [1],remainder [1],slack [1]");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(cells(rows[i]).back()) >= 0.0);

  auto meta = nlohmann::json::parse(slurp(workdir() / "vdc.csv.meta.json"));
  CHECK(meta["experiment"] == "vdc-check");
  CHECK(meta["seed"] == 1);
  CHECK(meta["config"]["trials"]["value"] == "100");
  CHECK(meta["config"]["trials"]["source"] == "flag");
  CHECK(meta["wall_time_s"].get<double>() >= 0.0);
  CHECK(!meta["version"].get<std::string>().empty());
  CHECK(!meta["rng_algorithm"].get<std::string>().empty());
  CHECK(meta["summary"]["violations"] == 0);

  REQUIRE(cli("vdc-check --n 10000 --k 50 --trials 100 --out vdc.csv").code == 0);
  CHECK(slurp(workdir() / "vdc.csv") == first);
  REQUIRE(cli("vdc-check --n 10000 --k 50 --trials 100 --seed 2 --out vdc2.csv").code == 0);
  CHECK(slurp(workdir() / "vdc2.csv") != first);
}

TEST_CASE("config layering") {
  write("vdc.ini", "[run]\nexperiment = vdc-check\n\n[window]\nn = 2000\nk = 20\ntrials = 6\n");
  auto o = cli("run --config vdc.ini --set trials=5 --set k=10 --trials 3 --out layered.csv");
  REQUIRE(o.code == 0);
  CHECK(lines(slurp(workdir() / "layered.csv")).size() == 4);
  auto meta = nlohmann::json::parse(slurp(workdir() / "layered.csv.meta.json"));
  CHECK(meta["config"]["n"]["source"] == "config");
  CHECK(meta["config"]["k"]["value"] == "10");
  CHECK(meta["config"]["k"]["source"] == "set");
  CHECK(meta["config"]["trials"]["source"] == "flag");
  CHECK(cli("counterexample --config vdc.ini").code == 2);
  write("bad.ini", "[run]\nexperiment = vdc-check\n[x]\nwidth = 3\n");
  CHECK(cli("run --config bad.ini").code == 2);
}

TEST_CASE("counterexample growth table and stdout output") {
  auto o = cli("counterexample --n-schedule 256:1024:x2 --seeds 3 --out -");
  REQUIRE(o.code == 0);
  auto rows = lines(o.out);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == "N [terms],seed [index],l2sq [1],u2 [1],sup [1],ratio [1]");
  CHECK(cells(rows[1])[0] == "256");
  CHECK(cells(rows[9])[1] == "3");
  auto meta = nlohmann::json::parse(slurp(workdir() / "counterexample.meta.json"));
  CHECK(meta["summary"]["median_ratio"].size() == 3);
}

TEST_CASE("remaining experiments run") {
  CHECK(cli("ww-run --schedule 256:1024:x2 --out a.csv").code == 0);
  CHECK(lines(slurp(workdir() / "a.csv")).size() == 4);
  CHECK(cli("ww-sup --schedule 1024:4096:x2 --out b.csv").code == 0);
  CHECK(cli("ww-sup --system 'rotation(sqrt(2)-1)' --observable 'char(1)' --family 'circle(0.1,sqrt(2)-1)' "
            "--schedule 512:1024:x2 --rows members --out c.csv")
            .code == 0);
  CHECK(lines(slurp(workdir() / "c.csv")).size() == 5);
  CHECK(cli("gowers --n 4096 --trace 2 --out d.csv").code == 0);
  CHECK(cli("gowers --n 64 --k 3 --gowers-method brute --out e.csv").code == 0);
  CHECK(cli("bessel-check --trials 2 --p 2,4 --grid 12 --out f.csv").code == 0);
  CHECK(lines(slurp(workdir() / "f.csv")).size() == 5);
  CHECK(cli("sobolev --grid 8 --out g.csv").code == 0);
  CHECK(lines(slurp(workdir() / "g.csv")).size() == 6);
  CHECK(cli("multi-avg --schedule 256:2048:x2 --grid 64 --out h.csv").code == 0);
  CHECK(cli("main-ratio --schedule 4096:8192:x2 --out i.csv").code == 0);
  CHECK(cli("tempered --schedule 1:64:x2 --out j.csv").code == 0);
  REQUIRE(cli("orbit --n1 10 --format bin --out k.bin").code == 0);
  CHECK(fs::file_size(workdir() / "k.bin") == 10 * 2 * sizeof(double));
  REQUIRE(cli("orbit --n1 10 --out k.csv").code == 0);
  CHECK(lines(slurp(workdir() / "k.csv")).size() == 11);
}

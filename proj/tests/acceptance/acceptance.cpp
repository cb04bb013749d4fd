// One PASS/FAIL line per acceptance criterion; exit status 1 if any criterion fails.

#include <nilergodic/counterexample.hpp>
#include <nilergodic/malcev.hpp>
#include <nilergodic/sobolev.hpp>
#include <nilergodic/systems.hpp>
#include <nilergodic/uniformity.hpp>
#include <nilergodic/ww.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

using namespace nilergodic;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit;  // seconds; 0 when the criterion states none
  std::function<Verdict()> run;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::vector<FilteredGroup> group_kinds() {
  return {FilteredGroup::abelian(1, 1),
          FilteredGroup::abelian(2, 1),
          FilteredGroup::abelian(1, 3),
          FilteredGroup::heisenberg3(),
          FilteredGroup::direct_square(FilteredGroup::heisenberg3()),
          FilteredGroup::direct_square(FilteredGroup::abelian(1, 2)),
          FilteredGroup::cube(FilteredGroup::abelian(1, 2)),
          FilteredGroup::cube(FilteredGroup::heisenberg3()),
          FilteredGroup::cube(FilteredGroup::cube(FilteredGroup::heisenberg3()))};
}

FiniteSequence cyclic(std::vector<cplx> v) { return {std::move(v), Interpretation::CyclicZN}; }

FiniteSequence random_complex(std::mt19937_64& rng, std::size_t N) {
  std::vector<cplx> v(N);
  for (auto& z : v) z = {2.0 * unit_double(rng()) - 1.0, 2.0 * unit_double(rng()) - 1.0};
  return cyclic(std::move(v));
}

const double kAlpha = std::sqrt(2.0) - 1.0;

// ---------------------------------------------------------------------------------------------

Verdict exact_algebra() {
  const double tol = 1e-12;
  double assoc = 0.0;
  long failures = 0, samples = 0;
  for (const auto& G : group_kinds()) {
    std::mt19937_64 rng(1000 + G.dim());
    const int l = G.length();
    for (int t = 0; t < 1000; ++t, ++samples) {
      GroupElement a = random_in_subgroup(G, 1, rng), b = random_in_subgroup(G, 1, rng),
                   c = random_in_subgroup(G, 1, rng);
      assoc = std::max(assoc, max_abs_difference((a * b) * c, a * (b * c)));
      GroupElement p = random_lattice_point(G, rng, 9), q = random_lattice_point(G, rng, 9);
      if (!is_lattice_point(p * q) || !is_lattice_point(inverse(p)) || !is_lattice_point(power(p, -7))) ++failures;
      const int i = static_cast<int>(rng() % (l + 1)), j = static_cast<int>(rng() % (l + 1));
      GroupElement x = random_in_subgroup(G, i, rng), y = random_in_subgroup(G, j, rng);
      if (!in_subgroup(commutator(x, y), i + j, tol)) ++failures;
    }
    const auto Q = cube_filtration(G);
    for (int t = 0; t < 1000; ++t, ++samples) {
      const int i = 1 + static_cast<int>(rng() % Q.length()), j = 1 + static_cast<int>(rng() % Q.length());
      GroupElement x = random_in_subgroup(Q, i, rng), y = random_in_subgroup(Q, j, rng);
      GroupElement c = commutator(x, y);
      if (!in_subgroup(c, i + j, tol) || !in_cube_subgroup(to_pair(c), i + j, tol)) ++failures;
    }
  }
  return {assoc <= tol && failures == 0, std::to_string(group_kinds().size()) + " kinds, " +
                                             std::to_string(samples) + " samples, associativity " +
                                             fmt("%.2e", assoc) + ", failures " + std::to_string(failures)};
}

Verdict derivative_identity() {
  double worst = 0.0;
  const std::vector<std::int64_t> ks = {0, 1, -1, 7, -7, 50, -50};
  const auto circle = FilteredGroup::abelian(1, 1), circle2 = FilteredGroup::abelian(1, 2);
  const auto H = FilteredGroup::heisenberg3();
  std::mt19937_64 rng(2);
  std::vector<std::pair<std::shared_ptr<const LiftedFunction>, PolySeq>> matrix;
  auto chi = std::make_shared<const NilFunction>(NilFunction::torus_character(circle, {1}));
  matrix.push_back({chi, PolySeq::linear(GroupElement(circle, {kAlpha}))});
  auto chi3 = std::make_shared<const NilFunction>(NilFunction::torus_character(circle2, {3}));
  matrix.push_back({chi3, PolySeq(circle2, {GroupElement(circle2, {0.1}), GroupElement(circle2, {kAlpha}),
                                            GroupElement(circle2, {std::sqrt(3.0) - 1.0})})});
  for (int t = 0; t < 2; ++t) {
    auto F = std::make_shared<const NilFunction>(random_heisenberg_function(rng, 2, 2));
    matrix.push_back({F, PolySeq::linear(GroupElement(H, {kAlpha, std::sqrt(3.0) - 1.0, 0.1 * (t + 1)}))});
    matrix.push_back({F, PolySeq(H, {random_in_subgroup(H, 0, rng), random_in_subgroup(H, 1, rng),
                                     random_in_subgroup(H, 2, rng)})});
  }
  for (const auto& [F, g] : matrix)
    for (auto k : ks) worst = std::max(worst, derivative_identity_check(F, g, k, 0, 200));
  return {worst <= 1e-9, std::to_string(matrix.size()) + " (F, g) pairs x 7 shifts, max error " + fmt("%.2e", worst)};
}

Verdict van_der_corput() {
  const std::int64_t N = 10000, K = 50;
  std::mt19937_64 rng(1);
  int violations = 0;
  double min_slack = 1e300, max_lhs = 0.0;
  for (int t = 0; t < 100; ++t) {
    auto u = random_bounded_sequence(rng, N + K - 1, t % 4);
    auto r = van_der_corput_check(u, 0, N, K, 1.0);
    if (r.slack < 0.0) ++violations;
    min_slack = std::min(min_slack, r.slack);
    max_lhs = std::max(max_lhs, r.lhs);
  }
  return {violations == 0, "100 sequences, violations " + std::to_string(violations) + ", min slack " +
                               fmt("%.3e", min_slack) + ", max lhs " + fmt("%.3f", max_lhs)};
}

Verdict bessel() {
  std::mt19937_64 rng(4);
  double excess = -1e300, eq2 = 0.0;
  int violations = 0;
  for (int t = 0; t < 50; ++t) {
    auto F = random_heisenberg_function(rng, 3, 3);
    for (double p : {2.0, 4.0, 8.0}) {
      auto b = bessel_check(F, p);
      excess = std::max(excess, b.lhs - b.rhs);
      if (b.lhs > b.rhs + 1e-9) ++violations;
      if (p == 2.0) eq2 = std::max(eq2, std::abs(b.lhs - b.rhs));
    }
  }
  return {violations == 0 && eq2 <= 1e-8, "50 functions, max(lhs - rhs) " + fmt("%.2e", excess) +
                                              ", p = 2 equality gap " + fmt("%.2e", eq2)};
}

Verdict gowers_oracles() {
  std::mt19937_64 rng(5);
  double u2 = 0.0, u3 = 0.0, inv = 0.0;
  for (std::size_t N : {2, 3, 8, 17, 32, 64, 100, 128, 200, 256}) {
    auto f = random_complex(rng, N);
    u2 = std::max(u2, std::abs(gowers_u2_fft(f).value - gowers_norm_cyclic(f, 2, GowersMethod::BruteForce).value));
  }
  for (std::size_t N : {4, 8, 13, 16, 24, 32}) {
    auto f = random_complex(rng, N);
    u3 = std::max(u3, std::abs(gowers_norm_cyclic(f, 3, GowersMethod::Recursive).value -
                               gowers_norm_cyclic(f, 3, GowersMethod::BruteForce).value));
  }
  for (std::size_t N : {32, 64}) {
    auto f = random_complex(rng, N);
    std::vector<cplx> lin(N), quad(N), shifted(N);
    for (std::size_t n = 0; n < N; ++n) {
      lin[n] = f.values[n] * e(frac(5.0 * n / N));
      quad[n] = f.values[n] * e(frac(7.0 * static_cast<double>(n * n % N) / N));
      shifted[n] = f.values[(n + 11) % N];
    }
    for (int k = 2; k <= 3; ++k)
      inv = std::max(inv, std::abs(gowers_norm_cyclic(cyclic(lin), k).value - gowers_norm_cyclic(f, k).value));
    inv = std::max(inv, std::abs(gowers_norm_cyclic(cyclic(quad), 3).value - gowers_norm_cyclic(f, 3).value));
    for (int k = 1; k <= 3; ++k)
      inv = std::max(inv, std::abs(gowers_norm_cyclic(cyclic(shifted), k).value - gowers_norm_cyclic(f, k).value));
  }
  return {u2 <= 1e-9 && u3 <= 1e-9 && inv <= 1e-9, "U2 fft/brute " + fmt("%.2e", u2) + ", U3 recursive/brute " +
                                                       fmt("%.2e", u3) + ", invariances " + fmt("%.2e", inv)};
}

Verdict u_by_l() {
  std::mt19937_64 rng(6);
  int violations = 0;
  double margin = 1e300;
  for (int t = 0; t < 200; ++t) {
    auto f = random_complex(rng, 64);
    for (int l : {1, 2}) {
      auto r = u_vs_lp_check(f, l);
      if (r.u > r.lp + 1e-9) ++violations;
      margin = std::min(margin, r.lp - r.u);
    }
  }
  return {violations == 0, "400 comparisons, violations " + std::to_string(violations) + ", min margin " +
                               fmt("%.3e", margin)};
}

Verdict uniform_decay() {
  const std::int64_t Nmax = 1 << 17;
  auto skew = orbit(DynSystem::anzai(kAlpha), {0.0, 0.0}, Observable::character({0, 1}), 0, Nmax);
  auto phi = FolnerSeq::intervals(parse_schedule("8192:131072:x2"));
  auto s = uniform_sup_linear(skew, 0, phi);
  const double first = s.values.front(), last = s.values.back();
  bool monotone = true;
  for (std::size_t j = 1; j < s.values.size(); ++j) monotone = monotone && s.values[j] < s.values[j - 1];

  // Resonant control: the rotation eigenfunction against the full linear family attains 1 at lambda = -alpha.
  auto rot = orbit(DynSystem::rotation({kAlpha}), {0.0}, Observable::character({1}), 0, Nmax);
  auto c = uniform_sup_linear(rot, 0, phi);
  auto direct = weighted_average(rot, WeightFamily::linear_phases({-kAlpha}).sequence(0, 0, Nmax), 0, phi);
  double control = 0.0;
  for (std::size_t j = 0; j < phi.size(); ++j)
    control = std::max({control, std::abs(c.values[j] - 1.0), std::abs(direct.values[j] - 1.0)});
  const bool ok = last < 0.15 && last < 0.5 * first && control <= 1e-9;
  return {ok, "skew sup " + fmt("%.4f", first) + " at 2^13 -> " + fmt("%.4f", last) + " at 2^17" +
                  (monotone ? " (monotone)" : " (not monotone)") + ", resonant control |sup - 1| " +
                  fmt("%.2e", control)};
}

Verdict ghk_orbit() {
  const std::int64_t N = 100000;
  OrbitEstimateOptions o;
  o.K = 316;
  auto rot = orbit(DynSystem::rotation({kAlpha}), {0.0}, Observable::character({1}), 0, N);
  auto skew = orbit(DynSystem::anzai(kAlpha), {0.0, 0.0}, Observable::character({0, 1}), 0, N);
  auto r2 = ghk_orbit_estimate(rot, 2, o);
  auto s2 = ghk_orbit_estimate(skew, 2, o);
  auto s3 = ghk_orbit_estimate(skew, 3, o);
  // The smoothed average estimates ||f||_{U^2}^4; its k = 0 lag alone contributes 1/K, so the fourth
  // root cannot fall below K^{-1/4} ~ 0.24 at K = 316 even for an f orthogonal to the Kronecker factor.
  const bool ok = r2.value >= 0.95 && r2.value <= 1.05 && s2.power < 0.05 && s3.value >= 0.9 && s3.value <= 1.1;
  return {ok, "rotation U2 " + fmt("%.4f", r2.value) + ", skew U2 power " + fmt("%.4f", s2.power) + " (root " +
                  fmt("%.4f", s2.value) + "), skew U3 " + fmt("%.4f", s3.value)};
}

Verdict main_ratio() {
  const std::int64_t Nmax = 1 << 17;
  auto phi1 = FolnerSeq::intervals({1 << 16});
  auto phi2 = FolnerSeq::intervals({1 << 17});
  auto skew = orbit(DynSystem::anzai(kAlpha), {0.0, 0.0}, Observable::character({0, 1}), 0, Nmax);
  auto rot = orbit(DynSystem::rotation({kAlpha}), {0.0}, Observable::character({1}), 0, Nmax);
  struct Row {
    std::string name;
    const FiniteSequence* f;
    WeightFamily family;
    int l;
  };
  std::vector<Row> matrix = {
      {"skew/all-linear/l=1", &skew, WeightFamily::all_linear_phases(), 1},
      {"rotation/resonant/l=1", &rot, WeightFamily::linear_phases({-kAlpha, 0.25, 0.5}), 1},
      {"skew/quadratic/l=2", &skew,
       WeightFamily::polynomial_phases({{0.0, 0.5 * kAlpha, -0.5 * kAlpha}, {0.0, 0.0, kAlpha}}), 2},
  };
  double c16 = 0.0, c17 = 0.0;
  std::string detail;
  for (const auto& row : matrix) {
    auto a = main_estimate_ratio(*row.f, 0, phi1, row.family, row.l);
    auto b = main_estimate_ratio(*row.f, 0, phi2, row.family, row.l);
    c16 = std::max(c16, a.ceiling);
    c17 = std::max(c17, b.ceiling);
    detail += row.name + " " + fmt("%.4f", a.ceiling) + "->" + fmt("%.4f", b.ceiling) + "; ";
  }
  detail += "ceiling " + fmt("%.4f", c16) + " -> " + fmt("%.4f", c17);
  return {c17 <= 1.1 * c16, detail};
}

Verdict sobolev_orders() {
  const int a = sobolev_order(FilteredGroup::trivial()), b = sobolev_order(FilteredGroup::abelian(1, 1)),
            c = sobolev_order(FilteredGroup::heisenberg3());
  return {a == 0 && b == 1 && c == 4,
          "trivial " + std::to_string(a) + ", circle " + std::to_string(b) + ", Heisenberg " + std::to_string(c)};
}

Verdict counterexample() {
  std::vector<std::int64_t> schedule;
  for (std::int64_t N = 1 << 10; N <= (1 << 16); N *= 2) schedule.push_back(N);
  auto rep = growth_experiment(schedule, 8);
  double l2err = 0.0;
  for (const auto& row : rep.rows) {
    long double exact = 0.0L;
    for (std::int64_t n = 2; n <= row.N; ++n) exact += std::log(static_cast<long double>(n)) / n;
    exact *= 0.5L;
    l2err = std::max(l2err, static_cast<double>(std::abs(row.norms.l2sq - exact) / exact));
  }
  std::string trace;
  for (double m : rep.median_ratio) trace += fmt("%.3f ", m);
  const bool ok = rep.strictly_increasing && rep.growth > 1.5 && l2err <= 1e-12;
  return {ok, "median rho " + trace + (rep.strictly_increasing ? "(increasing)" : "(not increasing)") +
                  ", growth " + fmt("%.3f", rep.growth) + " (need > 1.5), l2sq rel. error " + fmt("%.1e", l2err)};
}

Verdict multiple_average() {
  auto phi = FolnerSeq::intervals(parse_schedule("256:65536:x2"));
  auto w = orbit(DynSystem::rotation({kAlpha}), {0.0}, Observable::character({1}), 0, phi.hi()).values;
  auto rep = weighted_multiple_average(w, DynSystem::rotation({std::sqrt(3.0) - 1.0}),
                                       {parse_int_poly("n"), parse_int_poly("n^2")},
                                       {Observable::character({1}), Observable::character({1})}, phi);
  const double last = rep.cauchy.back();
  return {rep.decreasing && last < 0.05, "Cauchy " + fmt("%.4f", rep.cauchy.front()) + " -> " + fmt("%.5f", last) +
                                             ", log-log slope " + fmt("%.3f", rep.slope)};
}

Verdict temperedness() {
  auto phi = FolnerSeq::intervals(parse_schedule("1:65536:x2"));
  auto r = temperedness_check(phi, phi.size());
  bool counts = r.union_sizes.size() + 1 == phi.size();
  for (std::size_t n = 0; n < r.union_sizes.size(); ++n)
    counts = counts && r.union_sizes[n] == phi.lengths[n] + phi.lengths[n + 1] - 1;
  auto lin = FolnerSeq::intervals(parse_schedule("3:300:+3"));
  auto q = temperedness_check(lin, lin.size());
  for (std::size_t n = 0; n < q.union_sizes.size(); ++n)
    counts = counts && q.union_sizes[n] == lin.lengths[n] + lin.lengths[n + 1] - 1;
  const bool ok = r.ok && r.C_estimate <= 2.0 && q.C_estimate <= 2.0 && counts;
  return {ok, "doubling C " + fmt("%.6f", r.C_estimate) + ", arithmetic C " + fmt("%.6f", q.C_estimate) +
                  (counts ? ", union counts exact" : ", union count mismatch")};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Verdict reproducibility() {
  std::string detail;
  bool ok = true;
  // Library level: repeated calls give bit-identical numbers.
  auto a = growth_experiment({1024, 4096}, 4), b = growth_experiment({1024, 4096}, 4);
  for (std::size_t i = 0; i < a.rows.size(); ++i) ok = ok && a.rows[i].ratio == b.rows[i].ratio;
  std::mt19937_64 r1(9), r2(9);
  ok = ok && random_bounded_sequence(r1, 5000, 3) == random_bounded_sequence(r2, 5000, 3);
  detail = ok ? "library reruns identical" : "library reruns differ";
#ifdef NILERGODIC_CLI_PATH
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("nilergodic_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::string> runs = {
      "vdc-check --n 10000 --k 50 --trials 100 --seed 3",
      "counterexample --n-schedule 1024:8192:x2 --seeds 4",
      "ww-sup --schedule 8192:32768:x2",
      "multi-avg --schedule 256:16384:x2",
      "gowers --n 20000 --k 3",
      "bessel-check --trials 3 --grid 12 --seed 3",
  };
  int identical = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::string body[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = dir / ("run" + std::to_string(i) + "_" + std::to_string(rep) + ".csv");
      const std::string cmd =
          std::string("'") + NILERGODIC_CLI_PATH + "' " + runs[i] + " --out '" + out.string() + "' 2>/dev/null";
      if (std::system(cmd.c_str()) != 0) ok = false;
      body[rep] = slurp(out);
    }
    if (!body[0].empty() && body[0] == body[1]) ++identical;
  }
  ok = ok && identical == static_cast<int>(runs.size());
  detail += ", CLI " + std::to_string(identical) + "/" + std::to_string(runs.size()) + " CSV bodies byte-identical";
  std::error_code ec;
  fs::remove_all(dir, ec);
#endif
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments select criteria by number.
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const std::vector<Criterion> criteria = {
      {1, "exact algebra", 10, exact_algebra},
      {2, "derivative identity", 30, derivative_identity},
      {3, "van der Corput finite inequality", 20, van_der_corput},
      {4, "Bessel inequality", 60, bessel},
      {5, "Gowers oracles", 60, gowers_oracles},
      {6, "U^{l+1} <= L^{2^l}", 0, u_by_l},
      {7, "uniform Wiener-Wintner decay", 120, uniform_decay},
      {8, "orbit seminorm estimates", 120, ghk_orbit},
      {9, "main-estimate ratio ceiling", 0, main_ratio},
      {10, "Sobolev order", 0, sobolev_orders},
      {11, "sup-norm counterexample growth", 180, counterexample},
      {12, "weighted multiple averages", 180, multiple_average},
      {13, "temperedness", 0, temperedness},
      {14, "reproducibility", 0, reproducibility},
  };
  int failed = 0;
  int ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = v.ok;
    std::string timing = fmt("%.2f s", secs);
    if (c.time_limit > 0) {
      timing += fmt(" / %.0f s", c.time_limit);
      ok = ok && secs < c.time_limit;
    }
    if (!ok) ++failed;
    std::printf("%s  [%2d] %s: %s (%s)\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(), v.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}

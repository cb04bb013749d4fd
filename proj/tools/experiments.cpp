#include "experiments.hpp"

#include <algorithm>
#include <optional>
#include <random>

#include <nilergodic/counterexample.hpp>
#include <nilergodic/errors.hpp>
#include <nilergodic/sobolev.hpp>
#include <nilergodic/systems.hpp>
#include <nilergodic/uniformity.hpp>
#include <nilergodic/ww.hpp>

namespace nilergodic::cli {

namespace {

using json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

// Splits at separators outside parentheses.
std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i < s.size() && s[i] == '(') ++depth;
    if (i < s.size() && s[i] == ')') --depth;
    if (i == s.size() || (s[i] == sep && depth == 0)) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

std::optional<std::string> wrapped(const std::string& s, const std::string& name) {
  const std::string t = trim(s);
  if (t.size() < name.size() + 2 || t.compare(0, name.size() + 1, name + "(") != 0 || t.back() != ')')
    return std::nullopt;
  return t.substr(name.size() + 1, t.size() - name.size() - 2);
}

std::vector<double> real_list(const std::string& s) {
  std::vector<double> v;
  if (trim(s).empty()) return v;
  for (const auto& part : split_top(s, ',')) v.push_back(parse_real(part));
  return v;
}

std::int64_t positive(const Params& p, const std::string& key) {
  const auto v = p.integer(key);
  if (v < 1) throw ConfigError("parameter '" + key + "' must be positive");
  return v;
}

Point start_point(const Params& p, const DynSystem& sys, const std::string& key = "x0") {
  auto v = p.reals(key);
  if (v.empty()) return sys.origin();
  if (static_cast<int>(v.size()) != sys.dim())
    throw ConfigError("parameter '" + key + "' must have " + std::to_string(sys.dim()) + " coordinates");
  return v;
}

OrbitMode orbit_mode(const Params& p) {
  const auto& m = p.str("orbit-mode");
  if (m == "iterate") return OrbitMode::Iterate;
  if (m == "closed") return OrbitMode::ClosedForm;
  throw ConfigError("orbit-mode must be iterate or closed");
}

// Weight family descriptors: all | linear(t,..) | poly(c0,c1,..;..) | bracket(a,b) | orbit(system;observable)
// | circle(t,..) | heisenberg(count).
WeightFamily parse_family(const std::string& text, std::uint64_t seed) {
  const std::string d = trim(text);
  if (d == "all") return WeightFamily::all_linear_phases();
  if (auto b = wrapped(d, "linear")) {
    auto t = real_list(*b);
    if (t.empty()) throw ConfigError("linear(): needs at least one frequency");
    return WeightFamily::linear_phases(std::move(t));
  }
  if (auto b = wrapped(d, "poly")) {
    std::vector<std::vector<double>> members;
    for (const auto& m : split_top(*b, ';')) members.push_back(real_list(m));
    return WeightFamily::polynomial_phases(std::move(members));
  }
  if (auto b = wrapped(d, "bracket")) {
    auto v = real_list(*b);
    if (v.size() != 2) throw ConfigError("bracket(): expected alpha,beta");
    return WeightFamily::bracket(v[0], v[1]);
  }
  if (auto b = wrapped(d, "orbit")) {
    auto parts = split_top(*b, ';');
    if (parts.size() != 2) throw ConfigError("orbit(): expected system;observable");
    auto sys = DynSystem::parse(parts[0]);
    return WeightFamily::orbit_weights(sys, sys.origin(), Observable::parse(parts[1], sys.dim()));
  }
  if (auto b = wrapped(d, "circle")) {
    const auto circle = FilteredGroup::abelian(1, 1);
    auto F = std::make_shared<NilFunction>(NilFunction::torus_character(circle, {1}));
    std::vector<NilWeight> members;
    for (double t : real_list(*b)) members.push_back({PolySeq::linear(GroupElement(circle, {t})), F});
    if (members.empty()) throw ConfigError("circle(): needs at least one frequency");
    return WeightFamily::nilsequences(std::move(members));
  }
  if (auto b = wrapped(d, "heisenberg")) {
    const auto count = static_cast<int>(parse_real(*b));
    if (count < 1) throw ConfigError("heisenberg(): count must be positive");
    std::mt19937_64 rng(seed);
    std::vector<NilWeight> members;
    const auto H = FilteredGroup::heisenberg3();
    for (int i = 0; i < count; ++i) {
      auto F = std::make_shared<NilFunction>(random_heisenberg_function(rng, 2, 2));
      GroupElement a(H, {unit_double(rng()), unit_double(rng()), unit_double(rng())});
      members.push_back({PolySeq::linear(a), F});
    }
    return WeightFamily::nilsequences(std::move(members));
  }
  throw ConfigError("weight family: cannot parse '" + d + "'");
}

// ---------------------------------------------------------------- ww-run

Result run_ww(const Params& p) {
  auto sys = DynSystem::parse(p.str("system"));
  auto f = Observable::parse(p.str("observable"), sys.dim());
  auto phi = FolnerSeq::intervals(p.schedule("schedule"));
  auto family = parse_family(p.str("weight"), static_cast<std::uint64_t>(p.integer("seed")));
  if (family.is_full_linear() || family.size() != 1) throw ConfigError("ww-run: weight must be a single sequence");
  auto sample = orbit(sys, start_point(p, sys), f, 0, phi.hi(), orbit_mode(p));
  auto rep = weighted_average(sample, family.sequence(0, 0, phi.hi()), 0, phi);
  Result r;
  r.table.columns = {"N [samples]", "re [1]", "im [1]", "abs [1]"};
  for (std::size_t j = 0; j < rep.N.size(); ++j)
    r.table.add({num(rep.N[j]), num(rep.averages[j].real()), num(rep.averages[j].imag()), num(rep.values[j])});
  r.summary = {{"weight", family.descriptor()}, {"system", sys.descriptor()}, {"final", rep.values.back()}};
  return r;
}

// ---------------------------------------------------------------- ww-sup

Result run_ww_sup(const Params& p) {
  auto sys = DynSystem::parse(p.str("system"));
  auto f = Observable::parse(p.str("observable"), sys.dim());
  auto phi = FolnerSeq::intervals(p.schedule("schedule"));
  const auto seed = static_cast<std::uint64_t>(p.integer("seed"));
  auto family = parse_family(p.str("family"), seed);
  auto sample = orbit(sys, start_point(p, sys), f, 0, phi.hi(), orbit_mode(p));
  WeightedAverageReport rep;
  if (family.is_full_linear())
    rep = uniform_sup_linear(sample, 0, phi, static_cast<int>(positive(p, "padding")));
  else if (family.kind() == WeightKind::Nilsequences)
    rep = uniform_sup_nilsequence(sample, 0, phi, family);
  else
    rep = family_sup(sample, 0, phi, family);

  Result r;
  if (p.str("rows") == "members") {
    if (rep.members.empty()) throw ConfigError("ww-sup: rows=members needs an explicit family");
    r.table.columns = {"N [samples]", "member [index]", "label [text]", "value [1]"};
    for (std::size_t j = 0; j < rep.N.size(); ++j)
      for (std::size_t i = 0; i < rep.members[j].size(); ++i)
        r.table.add({num(rep.N[j]), num(i), family.label(i), num(rep.members[j][i])});
  } else if (p.str("rows") == "sup") {
    r.table.columns = {"N [samples]", "sup [1]", "offgrid_bound [1]", "argmax [text]"};
    for (std::size_t j = 0; j < rep.N.size(); ++j) {
      const std::string bound = rep.offgrid_bound.empty() ? "" : num(rep.offgrid_bound[j]);
      const std::string arg = rep.argmax.empty() ? "" : family.label(rep.argmax[j]);
      r.table.add({num(rep.N[j]), num(rep.values[j]), bound, arg});
    }
  } else {
    throw ConfigError("rows must be sup or members");
  }
  r.summary = {{"family", rep.family}, {"normalization", rep.normalization}, {"final", rep.values.back()},
               {"first", rep.values.front()}};
  if (family.kind() == WeightKind::Nilsequences) r.seed = seed;
  return r;
}

// ---------------------------------------------------------------- vdc-check

Result run_vdc(const Params& p) {
  const auto N = positive(p, "n"), K = positive(p, "k"), trials = positive(p, "trials");
  const auto seed = static_cast<std::uint64_t>(p.integer("seed"));
  std::mt19937_64 rng(seed);
  Result r;
  r.seed = seed;
  r.table.columns = {"trial [index]", "shape [name]", "lhs [1]", "rhs_main [1]", "remainder [1]", "slack [1]"};
  std::int64_t violations = 0;
  double min_slack = 0.0;
  for (std::int64_t t = 0; t < trials; ++t) {
    const int shape = static_cast<int>(t % 4);
    auto u = random_bounded_sequence(rng, N + K - 1, shape);
    auto rep = van_der_corput_check(u, 0, N, K, 1.0);
    if (rep.slack < 0.0) ++violations;
    min_slack = t == 0 ? rep.slack : std::min(min_slack, rep.slack);
    r.table.add({num(t), bounded_sequence_shape(shape), num(rep.lhs), num(rep.rhs_main), num(rep.remainder),
                 num(rep.slack)});
  }
  r.summary = {{"violations", violations}, {"min_slack", min_slack}};
  return r;
}

// ---------------------------------------------------------------- gowers

Result run_gowers(const Params& p) {
  auto sys = DynSystem::parse(p.str("system"));
  auto f = Observable::parse(p.str("observable"), sys.dim());
  const auto N = positive(p, "n");
  const int k = static_cast<int>(p.integer("k"));
  auto sample = orbit(sys, start_point(p, sys), f, 0, N, orbit_mode(p));
  const std::string method = p.str("gowers-method");
  std::vector<UniformityEstimate> rows;
  if (method == "orbit") {
    OrbitEstimateOptions opts;
    opts.K = p.integer("K");
    opts.trace_levels = static_cast<int>(p.integer("trace"));
    rows.push_back(ghk_orbit_estimate(sample, k, opts));
  } else {
    sample.interpretation = Interpretation::CyclicZN;
    rows.push_back(gowers_norm_cyclic(sample, k, parse_gowers_method(method)));
  }
  Result r;
  r.table.columns = {"method [name]", "k [level]", "N [samples]", "K [lags]", "value [1]"};
  const auto& est = rows.back();
  for (std::size_t i = 0; i + 1 < est.trace.size(); ++i)
    r.table.add({to_string(est.method), num(static_cast<std::int64_t>(k)), num(est.trace_n[i]), num(est.K),
                 num(est.trace[i])});
  r.table.add({to_string(est.method), num(static_cast<std::int64_t>(k)), num(est.N), num(est.K), num(est.value)});
  r.summary = {{"value", est.value}, {"power", est.power}, {"N", est.N}, {"K", est.K}};
  return r;
}

// ---------------------------------------------------------------- bessel-check

Result run_bessel(const Params& p) {
  const auto trials = positive(p, "trials");
  const auto seed = static_cast<std::uint64_t>(p.integer("seed"));
  const int modes = static_cast<int>(positive(p, "modes")), max_mode = static_cast<int>(positive(p, "max-mode"));
  auto ps = p.reals("p");
  if (ps.empty()) throw ConfigError("bessel-check: p list is empty");
  QuadratureOptions q;
  q.grid = static_cast<int>(p.integer("grid"));
  std::mt19937_64 rng(seed);
  std::vector<NilFunction> fs;
  for (std::int64_t t = 0; t < trials; ++t) fs.push_back(random_heisenberg_function(rng, modes, max_mode));
  Result r;
  r.seed = seed;
  r.table.columns = {"trial [index]", "p [1]", "lhs [1]", "rhs [1]", "slack [1]"};
  double worst = 0.0;
  for (std::int64_t t = 0; t < trials; ++t)
    for (double pv : ps) {
      auto b = bessel_check(fs[t], pv, q);
      worst = std::max(worst, b.lhs - b.rhs);
      r.table.add({num(t), num(pv), num(b.lhs), num(b.rhs), num(b.rhs - b.lhs)});
    }
  r.summary = {{"max_excess", worst}};
  return r;
}

// ---------------------------------------------------------------- sobolev

Result run_sobolev(const Params& p) {
  auto G = FilteredGroup::parse(p.str("group"));
  const auto seed = static_cast<std::uint64_t>(p.integer("seed"));
  std::shared_ptr<const NilFunction> F;
  const std::string fn = p.str("function");
  std::mt19937_64 rng(seed);
  if (fn == "random") {
    if (G.kind() == GroupKind::Heisenberg3)
      F = std::make_shared<NilFunction>(random_heisenberg_function(rng, static_cast<int>(positive(p, "modes")), 2));
    else
      F = std::make_shared<NilFunction>(random_torus_function(G, rng, static_cast<int>(positive(p, "modes")), 2));
  } else if (auto b = wrapped(fn, "char")) {
    std::vector<int> m;
    for (double v : real_list(*b)) m.push_back(static_cast<int>(v));
    F = std::make_shared<NilFunction>(NilFunction::torus_character(G, m));
  } else {
    throw ConfigError("function must be random or char(m,..)");
  }
  const int order = sobolev_order(G);
  const int j = p.str("j") == "auto" ? order : static_cast<int>(p.integer("j"));
  QuadratureOptions q;
  q.grid = static_cast<int>(p.integer("grid"));
  auto s = sobolev_norm(*F, j, p.real("p"), q);
  Result r;
  r.seed = seed;
  r.table.columns = {"order [derivatives]", "sum [1]"};
  for (std::size_t a = 0; a < s.order_sums.size(); ++a) r.table.add({num(a), num(s.order_sums[a])});
  r.summary = {{"group", G.descriptor()}, {"sobolev_order", order}, {"j", j}, {"p", s.p}, {"norm", s.value},
               {"grid", s.grid}};
  return r;
}

// ---------------------------------------------------------------- counterexample

Result run_counterexample(const Params& p) {
  auto rep = growth_experiment(p.schedule("n-schedule"), static_cast<int>(positive(p, "seeds")),
                               parse_profile(p.str("profile")));
  Result r;
  r.table.columns = {"N [terms]", "seed [index]", "l2sq [1]", "u2 [1]", "sup [1]", "ratio [1]"};
  for (const auto& row : rep.rows)
    r.table.add({num(row.N), num(static_cast<std::int64_t>(row.seed)), num(row.norms.l2sq), num(row.norms.u2),
                 num(row.norms.sup), num(row.ratio)});
  r.summary = {{"N", rep.N},
               {"median_ratio", rep.median_ratio},
               {"strictly_increasing", rep.strictly_increasing},
               {"growth", rep.growth}};
  return r;
}

// ---------------------------------------------------------------- multi-avg

Result run_multi(const Params& p) {
  auto wsys = DynSystem::parse(p.str("weight-system"));
  auto wobs = Observable::parse(p.str("weight-observable"), wsys.dim());
  auto target = DynSystem::parse(p.str("target"));
  auto phi = FolnerSeq::intervals(p.schedule("schedule"));
  std::vector<IntPoly> polys;
  for (const auto& s : split_top(p.str("polys"), ';')) polys.push_back(parse_int_poly(s));
  std::vector<Observable> obs;
  for (const auto& s : split_top(p.str("observables"), ';')) obs.push_back(Observable::parse(s, target.dim()));
  auto w = orbit(wsys, start_point(p, wsys), wobs, 0, phi.hi(), orbit_mode(p)).values;
  auto rep = weighted_multiple_average(w, target, polys, obs, phi, static_cast<int>(positive(p, "grid")), p.real("tol"));
  Result r;
  r.table.columns = {"N [samples]", "norm [1]", "cauchy [1]", "cauchy_exact [1]"};
  for (std::size_t j = 0; j < rep.N.size(); ++j)
    r.table.add({num(rep.N[j]), num(rep.norms[j]), j ? num(rep.cauchy[j - 1]) : std::string(),
                 j ? num(rep.cauchy_exact[j - 1]) : std::string()});
  r.summary = {{"slope", rep.slope}, {"decreasing", rep.decreasing}};
  if (!rep.cauchy.empty()) r.summary["final"] = rep.cauchy.back();
  return r;
}

// ---------------------------------------------------------------- main-ratio

Result run_main_ratio(const Params& p) {
  auto sys = DynSystem::parse(p.str("system"));
  auto f = Observable::parse(p.str("observable"), sys.dim());
  auto phi = FolnerSeq::intervals(p.schedule("schedule"));
  const auto seed = static_cast<std::uint64_t>(p.integer("seed"));
  auto family = parse_family(p.str("family"), seed);
  auto sample = orbit(sys, start_point(p, sys), f, 0, phi.hi(), orbit_mode(p));
  OrbitEstimateOptions ghk;
  ghk.K = p.integer("K");
  auto rep = main_estimate_ratio(sample, 0, phi, family, static_cast<int>(positive(p, "l")), p.real("eps"), ghk);
  Result r;
  r.table.columns = {"N [samples]", "numerator [1]", "uniformity [1]", "ratio [1]"};
  for (std::size_t j = 0; j < rep.N.size(); ++j)
    r.table.add({num(rep.N[j]), num(rep.numerator[j]), num(rep.uniformity[j]), num(rep.ratio[j])});
  r.summary = {{"ceiling", rep.ceiling}, {"eps", rep.eps}, {"l", rep.l}, {"family", family.descriptor()}};
  return r;
}

// ---------------------------------------------------------------- tempered

Result run_tempered(const Params& p) {
  auto lengths = p.schedule("schedule");
  auto starts = p.reals("starts");
  FolnerSeq phi;
  if (starts.empty()) {
    phi = FolnerSeq::intervals(lengths);
  } else {
    std::vector<std::int64_t> s;
    for (double v : starts) s.push_back(static_cast<std::int64_t>(v));
    phi = FolnerSeq::shifted(std::move(s), lengths);
  }
  const auto upto = p.integer("upto") > 0 ? static_cast<std::size_t>(p.integer("upto")) : phi.size();
  auto rep = temperedness_check(phi, upto, p.real("C"));
  Result r;
  r.table.columns = {"n [index]", "union [elements]", "ratio [1]"};
  for (std::size_t i = 0; i < rep.ratios.size(); ++i)
    r.table.add({num(i), num(rep.union_sizes[i]), num(rep.ratios[i])});
  r.summary = {{"C_estimate", rep.C_estimate}, {"declared_C", rep.declared_C}, {"ok", rep.ok}};
  return r;
}

// ---------------------------------------------------------------- orbit

Result run_orbit(const Params& p) {
  auto sys = DynSystem::parse(p.str("system"));
  const auto n0 = p.integer("n0"), n1 = p.integer("n1");
  if (n1 <= n0) throw ConfigError("orbit: need n1 > n0");
  auto pts = orbit_points(sys, start_point(p, sys), n0, n1, orbit_mode(p));
  Result r;
  const std::string format = p.str("format");
  if (format == "bin") {
    for (const auto& x : pts) r.binary.insert(r.binary.end(), x.begin(), x.end());
  } else if (format == "csv") {
    r.table.columns = {"n [step]"};
    for (int c = 0; c < sys.dim(); ++c) r.table.columns.push_back("x" + std::to_string(c) + " [1]");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::vector<std::string> row{num(n0 + static_cast<std::int64_t>(i))};
      for (double v : pts[i]) row.push_back(num(v));
      r.table.add(std::move(row));
    }
  } else {
    throw ConfigError("format must be csv or bin");
  }
  r.summary = {{"system", sys.descriptor()}, {"dim", sys.dim()}, {"points", pts.size()}};
  return r;
}

const ParamSpec kSystem{"system", "anzai(sqrt(2)-1)", "system descriptor"};
const ParamSpec kObservable{"observable", "char(0,1)", "observable descriptor"};
const ParamSpec kX0{"x0", "", "start point, comma separated; empty selects the origin"};
const ParamSpec kMode{"orbit-mode", "iterate", "iterate | closed"};
const ParamSpec kSeed{"seed", "1", "generator seed"};

std::vector<Experiment> build_registry() {
  return {
      {"ww-run", "weighted ergodic average of one weight along a Folner schedule",
       "Wiener-Wintner theorem (single weight)",
       {kSystem, kObservable, kX0, kMode, kSeed,
        {"weight", "linear(0.25)", "single weight: linear(t) | poly(c..) | bracket(a,b) | orbit(sys;obs)"},
        {"schedule", "1024:131072:x2", "window lengths"}},
       run_ww},
      {"ww-sup", "sup over a weight family of normalized weighted averages",
       "uniform Wiener-Wintner theorem for nilsequences",
       {kSystem, kObservable, kX0, kMode, kSeed,
        {"family", "all", "all | linear(..) | poly(..;..) | bracket(a,b) | circle(..) | heisenberg(count)"},
        {"schedule", "8192:131072:x2", "window lengths"},
        {"padding", "4", "FFT zero-padding factor for family=all"},
        {"rows", "sup", "sup | members"}},
       run_ww_sup},
      {"vdc-check", "finite van der Corput inequality on random bounded sequences", "van der Corput lemma",
       {kSeed, {"n", "10000", "window length N"}, {"k", "50", "differencing length K"},
        {"trials", "100", "number of sequences"}},
       run_vdc},
      {"gowers", "cyclic Gowers norms or the smoothed orbit estimator of an observable",
       "Gowers-Host-Kra seminorms",
       {{"system", "rotation(sqrt(2)-1)", "system descriptor"}, {"observable", "char(1)", "observable descriptor"},
        kX0, kMode, {"n", "100000", "orbit length"}, {"k", "2", "level"},
        {"gowers-method", "orbit", "brute | recursive | fft | orbit"}, {"K", "0", "smoothing length, 0 = floor(sqrt N)"},
        {"trace", "4", "prefix levels reported by the orbit estimator"}},
       run_gowers},
      {"bessel-check", "Bessel inequality over vertical modes of random Heisenberg functions",
       "Bessel inequality for vertical Fourier series",
       {kSeed, {"trials", "50", "number of functions"}, {"p", "2,4,8", "exponents"},
        {"modes", "3", "vertical modes per function"}, {"max-mode", "3", "largest vertical frequency"},
        {"grid", "0", "quadrature midpoints per dimension, 0 = default"}},
       run_bessel},
      {"sobolev", "Sobolev norm of a smooth function on a nilmanifold with per-order sums",
       "Sobolev order in the uniform Wiener-Wintner theorem",
       {kSeed, {"group", "heisenberg3", "group descriptor"}, {"function", "random", "random | char(m,..)"},
        {"modes", "2", "modes of the random function"}, {"j", "auto", "derivative order; auto selects the theorem's order"},
        {"p", "2", "exponent"}, {"grid", "0", "quadrature midpoints per dimension, 0 = default"}},
       run_sobolev},
      {"counterexample", "random trigonometric polynomials defeating a sup-norm bound",
       "counterexample to the sup-norm estimate",
       {{"n-schedule", "1024:65536:x2", "degrees N"}, {"seeds", "8", "seeds 1..S per degree"},
        {"profile", "log", "log | flat coefficient profile"}},
       run_counterexample},
      {"multi-avg", "Cauchy trace of weighted polynomial multiple averages in L2", "weighted multiple averages",
       {kX0, kMode, {"weight-system", "rotation(sqrt(2)-1)", "system generating the weight"},
        {"weight-observable", "char(1)", "observable generating the weight"},
        {"target", "rotation(sqrt(3)-1)", "target system"}, {"polys", "n;n^2", "integer polynomials"},
        {"observables", "char(1);char(1)", "one observable per polynomial"},
        {"schedule", "256:65536:x2", "window lengths"}, {"grid", "512", "L2 grid points per dimension"},
        {"tol", "0.05", "final Cauchy tolerance"}},
       run_multi},
      {"main-ratio", "weighted average over a family divided by the orbit uniformity seminorm",
       "control by uniformity seminorms",
       {kSystem, kObservable, kX0, kMode, kSeed, {"family", "all", "weight family, as for ww-sup"},
        {"schedule", "65536:131072:x2", "window lengths"}, {"l", "1", "seminorm level l (U^{l+1})"},
        {"eps", "0.05", "additive epsilon"}, {"K", "0", "smoothing length, 0 = floor(sqrt N)"}},
       run_main_ratio},
      {"tempered", "Tempelman ratio of a Folner schedule", "tempered Folner sequences",
       {{"schedule", "1:1024:x2", "lengths"}, {"starts", "", "start points; empty selects intervals at 0"},
        {"C", "2", "declared constant"}, {"upto", "0", "windows inspected, 0 = all"}},
       run_tempered},
      {"orbit", "orbit dump of a system", "orbit of a measure-preserving system",
       {kSystem, kX0, kMode, {"n0", "0", "first step"}, {"n1", "1000", "one past the last step"},
        {"format", "csv", "csv | bin (little-endian float64, row-major)"}},
       run_orbit},
  };
}

}  // namespace

const std::vector<Experiment>& registry() {
  static const std::vector<Experiment> r = build_registry();
  return r;
}

const Experiment* find_experiment(const std::string& name) {
  for (const auto& e : registry())
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace nilergodic::cli

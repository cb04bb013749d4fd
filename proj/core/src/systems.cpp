#include "nilergodic/systems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string_view>

#include "nilergodic/parallel.hpp"
#include "nilergodic/sobolev.hpp"

namespace nilergodic {

namespace {

std::string fmt_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Body of "name(...)" when the descriptor has that outer form.
std::optional<std::string_view> wrapped(std::string_view s, std::string_view name) {
  s = trim(s);
  if (s.size() < name.size() + 2 || s.substr(0, name.size()) != name) return std::nullopt;
  std::string_view rest = trim(s.substr(name.size()));
  if (rest.size() < 2 || rest.front() != '(' || rest.back() != ')') return std::nullopt;
  return rest.substr(1, rest.size() - 2);
}

// Splits at separators outside parentheses.
std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == sep && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

std::vector<double> parse_reals(std::string_view body) {
  std::vector<double> v;
  for (auto part : split_top(body, ',')) v.push_back(parse_real(part));
  return v;
}

double frac_sum(double a, double b) { return frac(a + b); }

void check_point(const DynSystem& s, const Point& x) {
  if (static_cast<int>(x.size()) != s.dim()) throw StructuralError("system: point has wrong dimension");
}

}  // namespace

DynSystem DynSystem::rotation(std::vector<double> alpha) {
  if (alpha.empty()) throw DomainError("rotation: need at least one angle");
  for (double a : alpha)
    if (!std::isfinite(a)) throw DomainError("rotation: non-finite angle");
  DynSystem s;
  s.kind_ = SystemKind::Rotation;
  s.dim_ = static_cast<int>(alpha.size());
  s.alpha_ = std::move(alpha);
  return s;
}

DynSystem DynSystem::anzai(double alpha) {
  if (!std::isfinite(alpha)) throw DomainError("anzai: non-finite angle");
  DynSystem s;
  s.kind_ = SystemKind::AnzaiSkew;
  s.dim_ = 2;
  s.alpha_ = {alpha};
  return s;
}

DynSystem DynSystem::heisenberg(const GroupElement& a) {
  if (a.group().kind() != GroupKind::Heisenberg3) throw StructuralError("heisenberg system: element must lie in H3");
  DynSystem s;
  s.kind_ = SystemKind::HeisenbergNil;
  s.dim_ = 3;
  s.alpha_.assign(a.coords().begin(), a.coords().end());
  s.a_ = a;
  return s;
}

DynSystem DynSystem::product(std::vector<DynSystem> parts) {
  if (parts.empty()) throw DomainError("product: need at least one factor");
  DynSystem s;
  s.kind_ = SystemKind::Product;
  for (const auto& p : parts) s.dim_ += p.dim();
  s.parts_ = std::move(parts);
  return s;
}

DynSystem DynSystem::parse(const std::string& descriptor) {
  if (auto b = wrapped(descriptor, "rotation")) return rotation(parse_reals(*b));
  if (auto b = wrapped(descriptor, "anzai")) {
    auto v = parse_reals(*b);
    if (v.size() != 1) throw ConfigError("anzai: expected one angle");
    return anzai(v[0]);
  }
  if (auto b = wrapped(descriptor, "heisenberg")) {
    auto v = parse_reals(*b);
    if (v.size() != 3) throw ConfigError("heisenberg: expected three coordinates");
    return heisenberg(GroupElement(FilteredGroup::heisenberg3(), v));
  }
  if (auto b = wrapped(descriptor, "product")) {
    std::vector<DynSystem> parts;
    for (auto part : split_top(*b, ';')) parts.push_back(parse(std::string(part)));
    return product(std::move(parts));
  }
  throw ConfigError("system descriptor: cannot parse '" + descriptor + "'");
}

std::string DynSystem::descriptor() const {
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt_real(v[i]);
    return s;
  };
  switch (kind_) {
    case SystemKind::Rotation:
      return "rotation(" + list(alpha_) + ")";
    case SystemKind::AnzaiSkew:
      return "anzai(" + list(alpha_) + ")";
    case SystemKind::HeisenbergNil:
      return "heisenberg(" + list(alpha_) + ")";
    case SystemKind::Product: {
      std::string s = "product(";
      for (std::size_t i = 0; i < parts_.size(); ++i) s += (i ? ";" : "") + parts_[i].descriptor();
      return s + ")";
    }
  }
  return {};
}

Point DynSystem::reduce(const Point& x) const {
  check_point(*this, x);
  if (kind_ == SystemKind::HeisenbergNil) {
    const FilteredGroup& G = a_.group();
    double k[3], gamma[3];
    G.reduce<double>(x.data(), k, gamma);
    return {k[0], k[1], k[2]};
  }
  if (kind_ == SystemKind::Product) {
    Point out;
    int off = 0;
    for (const auto& p : parts_) {
      Point sub(x.begin() + off, x.begin() + off + p.dim());
      Point r = p.reduce(sub);
      out.insert(out.end(), r.begin(), r.end());
      off += p.dim();
    }
    return out;
  }
  Point out(x.size());
  for (std::size_t c = 0; c < x.size(); ++c) out[c] = frac(x[c]);
  return out;
}

Point DynSystem::step(const Point& x) const {
  check_point(*this, x);
  switch (kind_) {
    case SystemKind::Rotation: {
      Point out(dim_);
      for (int c = 0; c < dim_; ++c) out[c] = frac_sum(x[c], alpha_[c]);
      return out;
    }
    case SystemKind::AnzaiSkew:
      return {frac_sum(x[0], alpha_[0]), frac_sum(x[1], x[0])};
    case SystemKind::HeisenbergNil: {
      double g[3], k[3], gamma[3];
      a_.group().multiply<double>(a_.coords().data(), x.data(), g);
      a_.group().reduce<double>(g, k, gamma);
      return {k[0], k[1], k[2]};
    }
    case SystemKind::Product: {
      Point out;
      int off = 0;
      for (const auto& p : parts_) {
        Point r = p.step(Point(x.begin() + off, x.begin() + off + p.dim()));
        out.insert(out.end(), r.begin(), r.end());
        off += p.dim();
      }
      return out;
    }
  }
  return {};
}

Point DynSystem::inverse_step(const Point& x) const {
  check_point(*this, x);
  switch (kind_) {
    case SystemKind::Rotation: {
      Point out(dim_);
      for (int c = 0; c < dim_; ++c) out[c] = frac(x[c] - alpha_[c]);
      return out;
    }
    case SystemKind::AnzaiSkew: {
      const double x0 = frac(x[0] - alpha_[0]);
      return {x0, frac(x[1] - x0)};
    }
    case SystemKind::HeisenbergNil: {
      double ainv[3], g[3], k[3], gamma[3];
      a_.group().inverse<double>(a_.coords().data(), ainv);
      a_.group().multiply<double>(ainv, x.data(), g);
      a_.group().reduce<double>(g, k, gamma);
      return {k[0], k[1], k[2]};
    }
    case SystemKind::Product: {
      Point out;
      int off = 0;
      for (const auto& p : parts_) {
        Point r = p.inverse_step(Point(x.begin() + off, x.begin() + off + p.dim()));
        out.insert(out.end(), r.begin(), r.end());
        off += p.dim();
      }
      return out;
    }
  }
  return {};
}

Point DynSystem::power(const Point& x, std::int64_t n) const {
  check_point(*this, x);
  switch (kind_) {
    case SystemKind::Rotation: {
      Point out(dim_);
      for (int c = 0; c < dim_; ++c) out[c] = frac_sum(x[c], frac_product(n, alpha_[c]));
      return out;
    }
    case SystemKind::AnzaiSkew: {
      // T^n(x, y) = (x + n alpha, y + n x + C(n,2) alpha).
      const int128 c2 = static_cast<int128>(n) * (n - 1) / 2;
      const double px = frac_sum(x[0], frac_product(n, alpha_[0]));
      const double py = frac(x[1] + frac_product(n, x[0]) + frac_product(c2, alpha_[0]));
      return {px, py};
    }
    case SystemKind::HeisenbergNil: {
      const FilteredGroup& G = a_.group();
      long double a[3], an[3], g[3], k[3], gamma[3];
      long double xl[3] = {x[0], x[1], x[2]};
      for (int c = 0; c < 3; ++c) a[c] = a_[c];
      G.power<long double>(a, n, an);
      G.multiply<long double>(an, xl, g);
      G.reduce<long double>(g, k, gamma);
      Point out{static_cast<double>(k[0]), static_cast<double>(k[1]), static_cast<double>(k[2])};
      for (auto& v : out)
        if (v >= 1.0) v = 0.0;
      return out;
    }
    case SystemKind::Product: {
      Point out;
      int off = 0;
      for (const auto& p : parts_) {
        Point r = p.power(Point(x.begin() + off, x.begin() + off + p.dim()), n);
        out.insert(out.end(), r.begin(), r.end());
        off += p.dim();
      }
      return out;
    }
  }
  return {};
}

Observable Observable::character(std::vector<int> m, cplx c) {
  Observable f;
  f.m_ = std::move(m);
  f.c_ = c;
  return f;
}

Observable Observable::constant(int dim, cplx c) { return character(std::vector<int>(dim, 0), c); }

Observable Observable::nil(std::shared_ptr<const LiftedFunction> fn) {
  if (!fn) throw DomainError("observable: null function");
  Observable f;
  f.m_.assign(fn->group().dim(), 0);
  f.nil_ = std::move(fn);
  return f;
}

Observable Observable::parse(const std::string& descriptor, int dim) {
  if (auto b = wrapped(descriptor, "char")) {
    std::vector<int> m;
    for (double v : parse_reals(*b)) {
      if (v != std::round(v)) throw ConfigError("char: frequencies must be integers");
      m.push_back(static_cast<int>(v));
    }
    if (static_cast<int>(m.size()) != dim) throw ConfigError("char: frequency count must match the system dimension");
    return character(std::move(m));
  }
  if (auto b = wrapped(descriptor, "const")) {
    auto v = parse_reals(*b);
    if (v.size() != 1) throw ConfigError("const: expected one value");
    return constant(dim, v[0]);
  }
  throw ConfigError("observable descriptor: cannot parse '" + descriptor + "'");
}

cplx Observable::operator()(const Point& x) const {
  if (nil_) return nil_->lifted(std::span<const double>(x.data(), x.size()));
  if (x.size() != m_.size()) throw StructuralError("observable: point has wrong dimension");
  double phase = 0.0;
  for (std::size_t c = 0; c < m_.size(); ++c)
    if (m_[c] != 0) phase += m_[c] * x[c];
  return c_ * e(frac(phase));
}

cplx Observable::integral() const {
  if (nil_) return haar_integral(*nil_);
  for (int v : m_)
    if (v != 0) return 0.0;
  return c_;
}

double Observable::l1_norm() const { return nil_ ? lp_norm(*nil_, 1.0) : std::abs(c_); }

double Observable::sup() const { return nil_ ? sup_norm(*nil_) : std::abs(c_); }

std::string Observable::descriptor() const {
  if (nil_) return "nil";
  std::string s = "char(";
  for (std::size_t i = 0; i < m_.size(); ++i) s += (i ? "," : "") + std::to_string(m_[i]);
  s += ")";
  if (c_ != cplx(1.0)) s += "*(" + fmt_real(c_.real()) + (c_.imag() < 0 ? "" : "+") + fmt_real(c_.imag()) + "i)";
  return s;
}

FolnerSeq FolnerSeq::intervals(std::vector<std::int64_t> lengths) {
  std::vector<std::int64_t> starts(lengths.size(), 0);
  return shifted(std::move(starts), std::move(lengths));
}

FolnerSeq FolnerSeq::shifted(std::vector<std::int64_t> starts, std::vector<std::int64_t> lengths) {
  if (starts.size() != lengths.size()) throw StructuralError("Folner sequence: starts and lengths differ in size");
  if (lengths.empty()) throw DomainError("Folner sequence: empty");
  for (auto n : lengths)
    if (n <= 0) throw DomainError("Folner sequence: lengths must be positive");
  FolnerSeq phi;
  phi.kind = std::all_of(starts.begin(), starts.end(), [](std::int64_t b) { return b == 0; })
                 ? FolnerKind::Intervals
                 : FolnerKind::ShiftedIntervals;
  phi.starts = std::move(starts);
  phi.lengths = std::move(lengths);
  return phi;
}

std::int64_t FolnerSeq::lo() const { return *std::min_element(starts.begin(), starts.end()); }

std::int64_t FolnerSeq::hi() const {
  std::int64_t h = starts[0] + lengths[0];
  for (std::size_t j = 1; j < size(); ++j) h = std::max(h, starts[j] + lengths[j]);
  return h;
}

std::vector<std::int64_t> parse_schedule(const std::string& text) {
  auto parts = split_top(text, ':');
  std::vector<std::int64_t> out;
  auto integer = [&](std::string_view s) {
    const double v = parse_real(s);
    if (v != std::round(v) || std::fabs(v) > 9e15) throw ConfigError("schedule: '" + std::string(s) + "' is not an integer");
    return static_cast<std::int64_t>(v);
  };
  if (parts.size() == 3) {
    const std::int64_t a = integer(parts[0]), b = integer(parts[1]);
    std::string_view step = parts[2];
    if (step.size() < 2 || (step[0] != 'x' && step[0] != '+'))
      throw ConfigError("schedule: step must be xF or +D");
    if (step[0] == 'x') {
      const double f = parse_real(step.substr(1));
      if (!(f > 1.0)) throw ConfigError("schedule: factor must exceed 1");
      for (double v = static_cast<double>(a); v <= static_cast<double>(b) * (1 + 1e-12); v *= f) {
        const auto n = static_cast<std::int64_t>(std::llround(v));
        if (out.empty() || n > out.back()) out.push_back(n);
      }
    } else {
      const std::int64_t d = integer(step.substr(1));
      if (d <= 0) throw ConfigError("schedule: increment must be positive");
      for (std::int64_t v = a; v <= b; v += d) out.push_back(v);
    }
  } else if (parts.size() == 1) {
    for (auto p : split_top(parts[0], ',')) out.push_back(integer(p));
  } else {
    throw ConfigError("schedule: cannot parse '" + text + "'");
  }
  if (out.empty()) throw ConfigError("schedule: empty");
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i] <= out[i - 1]) throw ConfigError("schedule: values must increase");
  return out;
}

std::vector<Point> orbit_points(const DynSystem& sys, const Point& x0, std::int64_t n0, std::int64_t n1,
                                OrbitMode mode) {
  if (n1 < n0) throw DomainError("orbit: n1 < n0");
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(n1 - n0));
  if (mode == OrbitMode::ClosedForm) {
    for (std::int64_t n = n0; n < n1; ++n) out.push_back(sys.power(x0, n));
    return out;
  }
  if (n1 == n0) return out;
  Point x = sys.power(sys.reduce(x0), n0);
  out.push_back(x);
  for (std::int64_t n = n0 + 1; n < n1; ++n) {
    x = sys.step(x);
    out.push_back(x);
  }
  return out;
}

FiniteSequence orbit(const DynSystem& sys, const Point& x0, const Observable& f, std::int64_t n0, std::int64_t n1,
                     OrbitMode mode) {
  if (n1 < n0) throw DomainError("orbit: n1 < n0");
  FiniteSequence s;
  s.interpretation = Interpretation::OrbitSample;
  s.values.reserve(static_cast<std::size_t>(n1 - n0));
  if (mode == OrbitMode::ClosedForm) {
    for (std::int64_t n = n0; n < n1; ++n) s.values.push_back(f(sys.power(x0, n)));
    return s;
  }
  if (n1 == n0) return s;
  Point x = sys.power(sys.reduce(x0), n0);
  s.values.push_back(f(x));
  for (std::int64_t n = n0 + 1; n < n1; ++n) {
    x = sys.step(x);
    s.values.push_back(f(x));
  }
  return s;
}

TemperednessReport temperedness_check(const FolnerSeq& phi, std::size_t upto, double declared_C) {
  if (upto > phi.size()) throw RangeError("temperedness_check: upto exceeds the sequence length");
  if (upto < 2) throw DomainError("temperedness_check: need at least two sets");
  TemperednessReport r;
  r.declared_C = declared_C;
  // Phi_k^{-1} Phi_{n+1} = {b - a : a in Phi_k, b in Phi_{n+1}} is an interval.
  for (std::size_t n = 1; n < upto; ++n) {
    const std::int64_t bn = phi.starts[n], Nn = phi.lengths[n];
    std::vector<std::pair<std::int64_t, std::int64_t>> iv;
    iv.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
      iv.emplace_back(bn - (phi.starts[k] + phi.lengths[k] - 1), bn + Nn - 1 - phi.starts[k]);
    std::sort(iv.begin(), iv.end());
    std::int64_t total = 0, cur_lo = iv[0].first, cur_hi = iv[0].second;
    for (std::size_t i = 1; i < iv.size(); ++i) {
      if (iv[i].first <= cur_hi + 1) {
        cur_hi = std::max(cur_hi, iv[i].second);
      } else {
        total += cur_hi - cur_lo + 1;
        cur_lo = iv[i].first;
        cur_hi = iv[i].second;
      }
    }
    total += cur_hi - cur_lo + 1;
    r.union_sizes.push_back(total);
    const double ratio = static_cast<double>(total) / static_cast<double>(Nn);
    r.ratios.push_back(ratio);
    r.C_estimate = std::max(r.C_estimate, ratio);
  }
  r.ok = r.C_estimate <= declared_C;
  return r;
}

AverageReport window_averages(const FiniteSequence& values, std::int64_t origin, const FolnerSeq& phi) {
  AverageReport r;
  const auto len = static_cast<std::int64_t>(values.size());
  for (std::size_t j = 0; j < phi.size(); ++j) {
    const std::int64_t a = phi.starts[j] - origin, b = a + phi.lengths[j];
    if (a < 0 || b > len) throw RangeError("window_averages: window outside the sample");
    CompensatedComplexSum s;
    for (std::int64_t n = a; n < b; ++n) s.add(values.values[n]);
    r.N.push_back(phi.lengths[j]);
    r.averages.push_back(s.value() / static_cast<double>(phi.lengths[j]));
  }
  return r;
}

AverageReport birkhoff_average(const DynSystem& sys, const Point& x0, const Observable& f, const FolnerSeq& phi) {
  const std::int64_t lo = phi.lo();
  AverageReport r = window_averages(orbit(sys, x0, f, lo, phi.hi()), lo, phi);
  r.reference = f.integral();
  return r;
}

MaximalTail maximal_function_diagnostic(const DynSystem& sys, const Observable& f, const FolnerSeq& phi,
                                        const std::vector<Point>& x0s, const std::vector<double>& lambdas) {
  if (x0s.empty()) throw DomainError("maximal_function_diagnostic: no starting points");
  for (double l : lambdas)
    if (!(l > 0.0)) throw DomainError("maximal_function_diagnostic: lambda must be positive");
  std::vector<double> maxima(x0s.size());
  const std::int64_t lo = phi.lo(), hi = phi.hi();
  parallel_for(x0s.size(), [&](std::size_t i) {
    AverageReport r = window_averages(orbit(sys, x0s[i], f, lo, hi), lo, phi);
    double m = 0.0;
    for (const auto& a : r.averages) m = std::max(m, std::abs(a));
    maxima[i] = m;
  });
  const double l1 = f.l1_norm();
  MaximalTail out;
  for (double l : lambdas) {
    const auto count = std::count_if(maxima.begin(), maxima.end(), [&](double m) { return m > l; });
    out.lambda.push_back(l);
    out.tail.push_back(static_cast<double>(count) / static_cast<double>(maxima.size()));
    out.bound.push_back(l1 / l);
  }
  return out;
}

std::vector<Point> uniform_sample(const DynSystem& sys, std::mt19937_64& rng, std::size_t count) {
  // Haar on the nilmanifold is Lebesgue on the fundamental box, so every supported system samples the unit cube.
  std::vector<Point> out(count, Point(sys.dim()));
  for (auto& p : out)
    for (auto& v : p) v = unit_double(rng());
  return out;
}

double measure_preservation_defect(const DynSystem& sys, const std::vector<Point>& sample, int max_freq) {
  if (sample.empty()) throw DomainError("measure_preservation_defect: empty sample");
  if (max_freq < 0) throw DomainError("measure_preservation_defect: negative frequency bound");
  const int D = sys.dim();
  std::vector<Point> image(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) image[i] = sys.step(sample[i]);
  const int W = 2 * max_freq + 1;
  long total = 1;
  for (int c = 0; c < D; ++c) total *= W;
  std::vector<double> defect(static_cast<std::size_t>(total), 0.0);
  parallel_for(defect.size(), [&](std::size_t idx) {
    std::vector<int> m(D);
    long t = static_cast<long>(idx);
    bool zero = true;
    for (int c = 0; c < D; ++c) {
      m[c] = static_cast<int>(t % W) - max_freq;
      zero = zero && m[c] == 0;
      t /= W;
    }
    if (zero) return;  // the m = 0 moment is 1 on both sides
    CompensatedComplexSum a;
    for (const auto& y : image) {
      double phase = 0.0;
      for (int c = 0; c < D; ++c) phase += m[c] * y[c];
      a.add(e(frac(phase)));
    }
    defect[idx] = std::abs(a.value()) / static_cast<double>(image.size());
  });
  return *std::max_element(defect.begin(), defect.end());
}

}  // namespace nilergodic

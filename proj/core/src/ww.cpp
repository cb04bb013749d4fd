#include "nilergodic/ww.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_map>

#include "nilergodic/fft.hpp"
#include "nilergodic/parallel.hpp"

namespace nilergodic {

namespace {

std::string fmt_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int128 ipow128(std::int64_t n, int j) {
  int128 r = 1;
  for (int i = 0; i < j; ++i) r *= n;
  return r;
}

int128 eval_poly(const IntPoly& p, std::int64_t n) {
  int128 r = 0;
  for (std::size_t j = p.size(); j-- > 0;) r = r * n + p[j];
  return r;
}

void check_window(const FolnerSeq& phi, std::size_t j, std::int64_t origin, std::size_t len) {
  const std::int64_t a = phi.starts[j] - origin;
  if (a < 0 || a + phi.lengths[j] > static_cast<std::int64_t>(len))
    throw RangeError("window [" + std::to_string(phi.starts[j]) + ", " + std::to_string(phi.starts[j] + phi.lengths[j]) +
                     ") is not covered by the orbit sample");
}

// |(1/N) sum_{n<N} v_n e(n (c + s))| with a resynchronized phase recurrence; c is a grid frequency and
// s a small offset, kept apart so that n s carries no cancellation.
double modulus_at(const cplx* v, std::int64_t N, double c, double s) {
  const cplx z = e(frac(c + s));
  cplx acc = 0.0, w = 1.0;
  for (std::int64_t n = 0; n < N; ++n) {
    if ((n & 1023) == 0) w = e(frac(frac_product(n, c) + static_cast<double>(n) * s));
    acc += v[n] * w;
    w *= z;
  }
  return std::abs(acc) / static_cast<double>(N);
}

struct FftSup {
  double grid_max = 0.0;
  double refined = 0.0;
  double bound = 0.0;
};

FftSup fft_sup(const cplx* v, std::int64_t N, int padding) {
  const std::int64_t L = padding * N;
  std::vector<cplx> in(static_cast<std::size_t>(L), 0.0);
  double fmax = 0.0;
  for (std::int64_t n = 0; n < N; ++n) {
    in[n] = v[n];
    fmax = std::max(fmax, std::abs(v[n]));
  }
  const auto out = dft(in, FftSign::Positive);
  std::vector<std::size_t> order(out.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t top = std::min<std::size_t>(8, order.size());
  std::partial_sort(order.begin(), order.begin() + top, order.end(),
                    [&](std::size_t a, std::size_t b) { return std::abs(out[a]) > std::abs(out[b]); });
  FftSup r;
  r.grid_max = std::abs(out[order[0]]) / static_cast<double>(N);
  r.refined = r.grid_max;
  r.bound = static_cast<double>(N) * (1.0 / static_cast<double>(L)) * kPi * fmax;
  const double h = 1.0 / static_cast<double>(L);
  for (std::size_t t = 0; t < top; ++t) {
    const double c = static_cast<double>(order[t]) * h;
    // Brent's tolerance has an absolute floor, so search in units of the grid spacing.
    auto neg = [&](double u) { return -modulus_at(v, N, c, u * h); };
    auto best = boost::math::tools::brent_find_minima(neg, -1.0, 1.0, 26);
    r.refined = std::max(r.refined, -best.second);
  }
  return r;
}

std::vector<cplx> slice(const FiniteSequence& f, std::int64_t a, std::int64_t N) {
  return {f.values.begin() + a, f.values.begin() + a + N};
}

}  // namespace

int sobolev_order(const FilteredGroup& G) {
  const auto& d = G.dims();
  const int l = static_cast<int>(d.size());
  int k = 0;
  for (int r = 1; r <= l; ++r) {
    const int next = r < l ? d[r] : 0;
    k += (d[r - 1] - next) * static_cast<int>(binomial64(l, r - 1));
  }
  return k;
}

std::string to_string(WeightKind k) {
  switch (k) {
    case WeightKind::LinearPhases:
      return "linear-phases";
    case WeightKind::PolynomialPhases:
      return "polynomial-phases";
    case WeightKind::Nilsequences:
      return "nilsequences";
    case WeightKind::BracketPolynomial:
      return "bracket";
    case WeightKind::OrbitWeights:
      return "orbit";
  }
  return {};
}

std::string to_string(Normalization n) { return n == Normalization::SupNorm ? "sup" : "sobolev"; }

WeightFamily WeightFamily::linear_phases(std::vector<double> thetas) {
  WeightFamily w;
  w.kind_ = WeightKind::LinearPhases;
  w.thetas_ = std::move(thetas);
  return w;
}

WeightFamily WeightFamily::polynomial_phases(std::vector<std::vector<double>> coefficients) {
  if (coefficients.empty()) throw DomainError("polynomial phases: empty family");
  for (const auto& c : coefficients)
    if (c.size() > 5) throw UnsupportedError("polynomial phases: degree above 4");
  WeightFamily w;
  w.kind_ = WeightKind::PolynomialPhases;
  w.poly_ = std::move(coefficients);
  return w;
}

WeightFamily WeightFamily::nilsequences(std::vector<NilWeight> members, int declared_k,
                                        const QuadratureOptions& quadrature) {
  if (members.empty()) throw DomainError("nilsequence family: empty");
  const FilteredGroup G = members[0].g.group();
  for (const auto& m : members) {
    if (!m.F) throw DomainError("nilsequence family: null function");
    if (!(m.g.group() == G) || !(m.F->group() == G))
      throw StructuralError("nilsequence family: members must share one group");
  }
  const int k = sobolev_order(G);
  if (declared_k >= 0 && declared_k != k)
    throw ConfigError("nilsequence family: declared Sobolev order " + std::to_string(declared_k) +
                      " differs from the group's order " + std::to_string(k));
  WeightFamily w;
  w.kind_ = WeightKind::Nilsequences;
  w.normalization_ = Normalization::Sobolev;
  w.k_ = k;
  w.p_ = 1 << G.length();
  w.nil_ = std::move(members);
  w.norms_ = std::make_shared<std::vector<double>>(w.nil_.size());
  for (std::size_t i = 0; i < w.nil_.size(); ++i)
    (*w.norms_)[i] = sobolev_norm(*w.nil_[i].F, k, w.p_, quadrature).value;
  return w;
}

WeightFamily WeightFamily::bracket(double alpha, double beta) {
  WeightFamily w;
  w.kind_ = WeightKind::BracketPolynomial;
  w.alpha_ = alpha;
  w.beta_ = beta;
  return w;
}

WeightFamily WeightFamily::orbit_weights(const DynSystem& sys, const Point& x0, const Observable& phi) {
  WeightFamily w;
  w.kind_ = WeightKind::OrbitWeights;
  w.sys_ = sys;
  w.x0_ = x0;
  w.phi_ = phi;
  return w;
}

std::size_t WeightFamily::size() const {
  switch (kind_) {
    case WeightKind::LinearPhases:
      return thetas_.size();
    case WeightKind::PolynomialPhases:
      return poly_.size();
    case WeightKind::Nilsequences:
      return nil_.size();
    default:
      return 1;
  }
}

std::string WeightFamily::label(std::size_t i) const {
  switch (kind_) {
    case WeightKind::LinearPhases:
      return "e(n*" + fmt_real(thetas_.at(i)) + ")";
    case WeightKind::PolynomialPhases: {
      std::string s = "e(";
      for (std::size_t j = 0; j < poly_.at(i).size(); ++j)
        s += (j ? "+" : "") + fmt_real(poly_[i][j]) + "*n^" + std::to_string(j);
      return s + ")";
    }
    case WeightKind::Nilsequences:
      return "nil#" + std::to_string(i);
    case WeightKind::BracketPolynomial:
      return "e([n*" + fmt_real(alpha_) + "]*n*" + fmt_real(beta_) + ")";
    case WeightKind::OrbitWeights:
      return phi_->descriptor() + "@" + sys_->descriptor();
  }
  return {};
}

std::string WeightFamily::descriptor() const {
  if (is_full_linear()) return "linear-phases(all)";
  std::string s = to_string(kind_) + "[";
  for (std::size_t i = 0; i < size(); ++i) s += (i ? ";" : "") + label(i);
  return s + "]";
}

std::vector<cplx> WeightFamily::sequence(std::size_t i, std::int64_t n0, std::int64_t n1) const {
  if (n1 < n0) throw DomainError("weight sequence: n1 < n0");
  if (i >= size()) throw DomainError("weight sequence: member out of range");
  std::vector<cplx> w;
  w.reserve(static_cast<std::size_t>(n1 - n0));
  switch (kind_) {
    case WeightKind::LinearPhases:
      for (std::int64_t n = n0; n < n1; ++n) w.push_back(e(frac_product(n, thetas_[i])));
      break;
    case WeightKind::PolynomialPhases:
      for (std::int64_t n = n0; n < n1; ++n) {
        double ph = 0.0;
        for (std::size_t j = 0; j < poly_[i].size(); ++j) ph += frac_product(ipow128(n, static_cast<int>(j)), poly_[i][j]);
        w.push_back(e(frac(ph)));
      }
      break;
    case WeightKind::Nilsequences: {
      const auto& m = nil_[i];
      for (std::int64_t n = n0; n < n1; ++n) w.push_back(m.F->lifted(m.g.evaluate_reduced(n).coords()));
      break;
    }
    case WeightKind::BracketPolynomial:
      for (std::int64_t n = n0; n < n1; ++n) {
        // [n alpha] = n alpha - {n alpha}, with the fractional part from exact phase arithmetic.
        const long double t = static_cast<long double>(n) * alpha_;
        const auto fl = static_cast<int128>(std::llroundl(t - static_cast<long double>(frac_product(n, alpha_))));
        w.push_back(e(frac_product(fl * n, beta_)));
      }
      break;
    case WeightKind::OrbitWeights:
      w = orbit(*sys_, x0_, *phi_, n0, n1).values;
      break;
  }
  return w;
}

double WeightFamily::norm(std::size_t i) const {
  if (i >= size()) throw DomainError("weight norm: member out of range");
  if (kind_ == WeightKind::Nilsequences) return (*norms_)[i];
  if (kind_ == WeightKind::OrbitWeights) return phi_->sup();
  return 1.0;
}

WeightedAverageReport weighted_average(const FiniteSequence& f_orbit, const std::vector<cplx>& w, std::int64_t origin,
                                       const FolnerSeq& phi) {
  if (w.size() != f_orbit.size()) throw StructuralError("weighted_average: weight and orbit lengths differ");
  WeightedAverageReport r;
  for (std::size_t j = 0; j < phi.size(); ++j) {
    check_window(phi, j, origin, f_orbit.size());
    const std::int64_t a = phi.starts[j] - origin;
    CompensatedComplexSum s;
    for (std::int64_t n = a; n < a + phi.lengths[j]; ++n) s.add(w[n] * f_orbit.values[n]);
    const cplx avg = s.value() / static_cast<double>(phi.lengths[j]);
    r.N.push_back(phi.lengths[j]);
    r.averages.push_back(avg);
    r.values.push_back(std::abs(avg));
  }
  r.normalization = "none";
  r.family = "single";
  return r;
}

WeightedAverageReport uniform_sup_linear(const FiniteSequence& f_orbit, std::int64_t origin, const FolnerSeq& phi,
                                          int padding) {
  if (padding < 1) throw DomainError("uniform_sup_linear: padding must be >= 1");
  WeightedAverageReport r;
  r.values.resize(phi.size());
  r.offgrid_bound.resize(phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j) check_window(phi, j, origin, f_orbit.size());
  parallel_for(phi.size(), [&](std::size_t j) {
    const auto s = fft_sup(f_orbit.values.data() + (phi.starts[j] - origin), phi.lengths[j], padding);
    r.values[j] = s.refined;
    r.offgrid_bound[j] = s.bound;
  });
  r.N = phi.lengths;
  r.normalization = "sup";
  r.family = "linear-phases(all)";
  return r;
}

WeightedAverageReport family_sup(const FiniteSequence& f_orbit, std::int64_t origin, const FolnerSeq& phi,
                                 const WeightFamily& family) {
  if (family.is_full_linear()) return uniform_sup_linear(f_orbit, origin, phi);
  for (std::size_t j = 0; j < phi.size(); ++j) check_window(phi, j, origin, f_orbit.size());
  const std::int64_t lo = phi.lo(), hi = phi.hi();
  const std::size_t M = family.size();
  std::vector<std::vector<double>> members(M, std::vector<double>(phi.size()));
  parallel_for(M, [&](std::size_t i) {
    const auto w = family.sequence(i, lo, hi);
    const double norm = family.norm(i);
    if (!(norm > 0.0)) throw NumericGuardError("family_sup: member " + family.label(i) + " has zero norm");
    for (std::size_t j = 0; j < phi.size(); ++j) {
      const std::int64_t a = phi.starts[j];
      CompensatedComplexSum s;
      for (std::int64_t n = a; n < a + phi.lengths[j]; ++n) s.add(w[n - lo] * f_orbit.values[n - origin]);
      members[i][j] = std::abs(s.value()) / static_cast<double>(phi.lengths[j]) / norm;
    }
  });
  WeightedAverageReport r;
  r.N = phi.lengths;
  r.values.assign(phi.size(), 0.0);
  r.argmax.assign(phi.size(), 0);
  for (std::size_t j = 0; j < phi.size(); ++j)
    for (std::size_t i = 0; i < M; ++i)
      if (members[i][j] > r.values[j]) {
        r.values[j] = members[i][j];
        r.argmax[j] = i;
      }
  r.members = std::move(members);
  r.normalization = family.normalization() == Normalization::Sobolev
                        ? "W^{" + std::to_string(family.order()) + "," + std::to_string(family.exponent()) + "}"
                        : "sup";
  r.family = family.descriptor();
  return r;
}

WeightedAverageReport uniform_sup_nilsequence(const FiniteSequence& f_orbit, std::int64_t origin, const FolnerSeq& phi,
                                              const WeightFamily& family) {
  if (family.kind() != WeightKind::Nilsequences)
    throw ConfigError("uniform_sup_nilsequence: family must consist of nilsequences");
  return family_sup(f_orbit, origin, phi, family);
}

VdcReport van_der_corput_check(const std::vector<std::vector<cplx>>& u, std::int64_t n0, std::int64_t N,
                               std::int64_t K, double C) {
  if (N <= 0 || K <= 0) throw DomainError("van_der_corput_check: N and K must be positive");
  if (n0 < 0 || n0 + N + K - 1 > static_cast<std::int64_t>(u.size()))
    throw RangeError("van_der_corput_check: the window needs a margin of K - 1 terms after it");
  const std::size_t m = u[n0].size();
  for (std::int64_t n = n0; n < n0 + N + K - 1; ++n) {
    if (u[n].size() != m) throw StructuralError("van_der_corput_check: vectors of different dimension");
    double sq = 0.0;
    for (const auto& c : u[n]) sq += std::norm(c);
    if (std::sqrt(sq) > C * (1.0 + 1e-12)) throw DomainError("van_der_corput_check: |u_n| exceeds the declared bound");
  }
  auto inner = [&](std::int64_t a, std::int64_t b) {
    cplx s = 0.0;
    for (std::size_t c = 0; c < m; ++c) s += u[a][c] * std::conj(u[b][c]);
    return s;
  };
  VdcReport r;
  std::vector<CompensatedComplexSum> mean(m);
  for (std::int64_t n = n0; n < n0 + N; ++n)
    for (std::size_t c = 0; c < m; ++c) mean[c].add(u[n][c]);
  for (auto& s : mean) r.lhs += std::norm(s.value() / static_cast<double>(N));

  std::vector<cplx> corr(static_cast<std::size_t>(K));
  parallel_for(corr.size(), [&](std::size_t h) {
    CompensatedComplexSum s;
    for (std::int64_t n = n0; n < n0 + N; ++n) s.add(inner(n, n + static_cast<std::int64_t>(h)));
    corr[h] = s.value() / static_cast<double>(N);
  });
  // Negative shifts pair as conjugates of positive ones.
  double S = static_cast<double>(K) * corr[0].real();
  for (std::int64_t h = 1; h < K; ++h) S += 2.0 * static_cast<double>(K - h) * corr[h].real();
  r.rhs_main = std::abs(S) / static_cast<double>(K * K);

  // e1: |A - B| for B the K-smoothed mean; e2: shifting each pair (k, k') back by min(k, k').
  const double Kd = static_cast<double>(K), Nd = static_cast<double>(N);
  const double e1 = C * (Kd - 1.0) / Nd;
  double min_sum = 0.0;
  for (std::int64_t t = 0; t < K; ++t) min_sum += static_cast<double>(t) * static_cast<double>(2 * (K - 1 - t) + 1);
  const double e2 = 2.0 * C * C * min_sum / (Nd * Kd * Kd);
  r.remainder = 2.0 * e2 + 2.0 * e1 * e1;
  r.slack = 2.0 * r.rhs_main + r.remainder - r.lhs;
  return r;
}

VdcReport van_der_corput_check(const std::vector<cplx>& u, std::int64_t n0, std::int64_t N, std::int64_t K, double C) {
  std::vector<std::vector<cplx>> v(u.size());
  for (std::size_t n = 0; n < u.size(); ++n) v[n] = {u[n]};
  return van_der_corput_check(v, n0, N, K, C);
}

std::string bounded_sequence_shape(int shape) {
  static const char* names[] = {"noise", "character", "quadratic", "mixed"};
  return names[((shape % 4) + 4) % 4];
}

std::vector<cplx> random_bounded_sequence(std::mt19937_64& rng, std::int64_t length, int shape) {
  if (length < 1) throw DomainError("random_bounded_sequence: length must be positive");
  auto disk = [&] {
    const double r = std::sqrt(unit_double(rng())), t = unit_double(rng());
    return r * e(t);
  };
  const double L = static_cast<double>(length);
  const double theta = (2.0 * unit_double(rng()) - 1.0) * 2.0 / L;
  const double beta = unit_double(rng());
  const double phase = unit_double(rng());
  std::vector<cplx> u(length);
  for (std::int64_t n = 0; n < length; ++n) {
    switch (((shape % 4) + 4) % 4) {
      case 0:
        u[n] = disk();
        break;
      case 1:
        u[n] = e(frac(phase + frac_product(n, theta)));
        break;
      case 2:
        u[n] = e(frac(phase + frac_product(static_cast<int128>(n) * n, beta)));
        break;
      default:
        u[n] = 0.5 * e(frac(phase + frac_product(n, theta))) + 0.5 * disk();
        break;
    }
  }
  return u;
}

MainEstimateReport main_estimate_ratio(const FiniteSequence& f_orbit, std::int64_t origin, const FolnerSeq& phi,
                                       const WeightFamily& family, int l, double eps, const OrbitEstimateOptions& ghk) {
  if (l < 1 || l > 3) throw DomainError("main_estimate_ratio: l must lie in 1..3");
  if (!(eps > 0.0)) throw DomainError("main_estimate_ratio: eps must be positive");
  const auto num = family_sup(f_orbit, origin, phi, family);
  MainEstimateReport r;
  r.eps = eps;
  r.l = l;
  r.N = phi.lengths;
  r.numerator = num.values;
  for (std::size_t j = 0; j < phi.size(); ++j) {
    FiniteSequence window{slice(f_orbit, phi.starts[j] - origin, phi.lengths[j]), Interpretation::OrbitSample};
    const double u = ghk_orbit_estimate(window, l + 1, ghk).value;
    r.uniformity.push_back(u);
    r.ratio.push_back(num.values[j] / (u + eps));
    r.ceiling = std::max(r.ceiling, r.ratio.back());
  }
  return r;
}

IntPoly parse_int_poly(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ConfigError("polynomial: empty");
  IntPoly p;
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      if (s[i] == '-') sign = -1;
      ++i;
    } else if (i != 0) {
      throw ConfigError("polynomial: cannot parse '" + text + "'");
    }
    std::int64_t coef = 1;
    bool have_coef = false;
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) {
      coef = std::stoll(s.substr(i, j - i));
      have_coef = true;
      i = j;
      if (i < s.size() && s[i] == '*') ++i;
    }
    int power = 0;
    if (i < s.size() && s[i] == 'n') {
      power = 1;
      ++i;
      if (i < s.size() && s[i] == '^') {
        std::size_t k = ++i;
        while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
        if (k == i) throw ConfigError("polynomial: missing exponent in '" + text + "'");
        power = std::stoi(s.substr(i, k - i));
        i = k;
      }
    } else if (!have_coef) {
      throw ConfigError("polynomial: cannot parse '" + text + "'");
    }
    if (power > 4) throw UnsupportedError("polynomial: degree above 4");
    if (static_cast<int>(p.size()) <= power) p.resize(power + 1, 0);
    p[power] += sign * coef;
  }
  return p;
}

std::string to_string(const IntPoly& p) {
  std::string s;
  for (std::size_t j = p.size(); j-- > 0;) {
    if (p[j] == 0) continue;
    const std::int64_t c = p[j];
    if (!s.empty()) s += c < 0 ? "-" : "+";
    else if (c < 0) s += "-";
    const std::int64_t a = c < 0 ? -c : c;
    if (j == 0 || a != 1) s += std::to_string(a);
    if (j >= 1) s += "n";
    if (j >= 2) s += "^" + std::to_string(j);
  }
  return s.empty() ? "0" : s;
}

namespace {

struct FreqKey {
  int128 a = 0, b = 0;
  bool operator==(const FreqKey&) const = default;
};

struct FreqHash {
  std::size_t operator()(const FreqKey& k) const {
    auto mix = [](std::uint64_t x) {
      x ^= x >> 33;
      x *= 0xff51afd7ed558ccdULL;
      x ^= x >> 33;
      return x;
    };
    const auto lo = [](int128 v) { return static_cast<std::uint64_t>(static_cast<unsigned __int128>(v)); };
    const auto hi = [](int128 v) { return static_cast<std::uint64_t>(static_cast<unsigned __int128>(v) >> 64); };
    return mix(lo(k.a) ^ mix(hi(k.a) ^ mix(lo(k.b) ^ mix(hi(k.b)))));
  }
};

using Spectrum = std::unordered_map<FreqKey, cplx, FreqHash>;

std::int64_t mod_grid(int128 q, int M) {
  int128 r = q % M;
  if (r < 0) r += M;
  return static_cast<std::int64_t>(r);
}

}  // namespace

MultipleAverageReport weighted_multiple_average(const std::vector<cplx>& w, const DynSystem& target,
                                                const std::vector<IntPoly>& polys,
                                                const std::vector<Observable>& observables, const FolnerSeq& phi,
                                                int grid, double tol) {
  const std::size_t k = polys.size();
  if (k == 0 || k != observables.size()) throw StructuralError("weighted_multiple_average: need one polynomial per observable");
  if (k > 3) throw UnsupportedError("weighted_multiple_average: at most 3 factors");
  for (const auto& p : polys)
    if (p.size() > 5) throw UnsupportedError("weighted_multiple_average: degree above 4");
  const bool anzai = target.kind() == SystemKind::AnzaiSkew;
  if (!anzai && !(target.kind() == SystemKind::Rotation && target.dim() <= 2))
    throw UnsupportedError("weighted_multiple_average: target must be a rotation of dimension <= 2 or the Anzai skew");
  const int D = target.dim();
  for (const auto& f : observables)
    if (!f.is_character() || static_cast<int>(f.frequency().size()) != D)
      throw DomainError("weighted_multiple_average: observables must be characters of the target");
  if (grid < 1) throw DomainError("weighted_multiple_average: grid must be positive");
  if (phi.lo() < 0 || phi.hi() > static_cast<std::int64_t>(w.size()))
    throw RangeError("weighted_multiple_average: weights do not cover the windows");
  cplx c_prod = 1.0;
  for (const auto& f : observables) c_prod *= f.coefficient();
  const auto& alpha = target.alpha();

  auto spectrum = [&](std::size_t j) {
    Spectrum spec;
    for (std::int64_t n = phi.starts[j]; n < phi.starts[j] + phi.lengths[j]; ++n) {
      FreqKey q;
      double phase = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        const int128 p = eval_poly(polys[i], n);
        const auto& m = observables[i].frequency();
        if (anzai) {
          // e(a x + b y) o S^p = e((a + b p) x + b y) e((a p + b C(p,2)) alpha).
          if (p > (int128(1) << 60) || p < -(int128(1) << 60) || std::abs(m[1]) > 8)
            throw RangeError("weighted_multiple_average: polynomial values too large for exact phases");
          const int128 c2 = p * (p - 1) / 2;
          q.a += m[0] + static_cast<int128>(m[1]) * p;
          q.b += m[1];
          phase += frac_product(static_cast<int128>(m[0]) * p, alpha[0]) + frac_product(m[1] * c2, alpha[0]);
        } else {
          q.a += m[0];
          if (D == 2) q.b += m[1];
          for (int c = 0; c < D; ++c) phase += frac_product(static_cast<int128>(m[c]) * p, alpha[c]);
        }
      }
      spec[q] += w[n] * e(frac(phase));
    }
    const double inv = 1.0 / static_cast<double>(phi.lengths[j]);
    for (auto& [key, v] : spec) v *= c_prod * inv;
    return spec;
  };

  const std::size_t cells = D == 2 ? static_cast<std::size_t>(grid) * grid : static_cast<std::size_t>(grid);
  auto buckets = [&](const Spectrum& s) {
    std::vector<cplx> b(cells, 0.0);
    for (const auto& [key, v] : s) {
      std::size_t idx = mod_grid(key.a, grid);
      if (D == 2) idx = idx * grid + mod_grid(key.b, grid);
      b[idx] += v;
    }
    return b;
  };

  std::vector<Spectrum> specs(phi.size());
  parallel_for(phi.size(), [&](std::size_t j) { specs[j] = spectrum(j); });

  MultipleAverageReport r;
  r.grid = grid;
  r.N = phi.lengths;
  std::vector<cplx> prev;
  for (std::size_t j = 0; j < phi.size(); ++j) {
    auto b = buckets(specs[j]);
    double sq = 0.0;
    for (const auto& v : b) sq += std::norm(v);
    r.norms.push_back(std::sqrt(sq));
    if (j > 0) {
      double d = 0.0;
      for (std::size_t c = 0; c < cells; ++c) d += std::norm(b[c] - prev[c]);
      r.cauchy.push_back(std::sqrt(d));
      double ex = 0.0;
      for (const auto& [key, v] : specs[j]) {
        auto it = specs[j - 1].find(key);
        ex += std::norm(it == specs[j - 1].end() ? v : v - it->second);
      }
      for (const auto& [key, v] : specs[j - 1])
        if (!specs[j].count(key)) ex += std::norm(v);
      r.cauchy_exact.push_back(std::sqrt(ex));
    }
    prev = std::move(b);
  }

  std::vector<double> xs, ys;
  for (std::size_t j = 0; j < r.cauchy.size(); ++j)
    if (r.cauchy[j] > 0.0) {
      xs.push_back(std::log(static_cast<double>(r.N[j + 1])));
      ys.push_back(std::log(r.cauchy[j]));
    }
  if (xs.size() >= 2) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    r.slope = sxy / sxx;
    r.decreasing = r.slope < 0.0 && r.cauchy.back() < r.cauchy.front() && r.cauchy.back() < tol;
  }
  return r;
}

}  // namespace nilergodic

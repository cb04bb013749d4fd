#include "nilergodic/counterexample.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numeric>
#include <random>

#include "nilergodic/errors.hpp"
#include "nilergodic/fft.hpp"
#include "nilergodic/numerics.hpp"
#include "nilergodic/parallel.hpp"

namespace nilergodic {

namespace {

// |q(s)| maximized over |s| <= d for q(s) = p0 + p1 s + p2 s^2 / 2.
double quadratic_max(double p0, double p1, double p2, double d) {
  auto q = [&](double s) { return std::fabs(p0 + p1 * s + 0.5 * p2 * s * s); };
  double m = std::max({std::fabs(p0), q(d), q(-d)});
  if (p2 != 0.0) {
    const double v = -p1 / p2;
    if (std::fabs(v) <= d) m = std::max(m, q(v));
  }
  return m;
}

}  // namespace

std::string to_string(CoefficientProfile p) { return p == CoefficientProfile::LogOverN ? "log" : "flat"; }

CoefficientProfile parse_profile(const std::string& name) {
  if (name == "log") return CoefficientProfile::LogOverN;
  if (name == "flat") return CoefficientProfile::Flat;
  throw ConfigError("unknown coefficient profile '" + name + "' (expected log or flat)");
}

double RandomTrigPoly::operator()(double t) const {
  // Chebyshev-style recurrence for cos(n t); resynchronized to bound drift.
  double s = 0.0, c_prev = 1.0, c = std::cos(t);
  const double two_c = 2.0 * std::cos(t);
  for (std::int64_t n = 1; n <= N; ++n) {
    if ((n & 255) == 0) {
      c = std::cos(static_cast<double>(n) * t);
      c_prev = std::cos(static_cast<double>(n - 1) * t);
    }
    s += r[n] * a[n] * c;
    const double next = two_c * c - c_prev;
    c_prev = c;
    c = next;
  }
  return s;
}

RandomTrigPoly build(std::int64_t N, std::uint64_t seed, CoefficientProfile profile) {
  if (N < 2) throw DomainError("build: N must be at least 2");
  RandomTrigPoly P;
  P.N = N;
  P.seed = seed;
  P.a.assign(N + 1, 0.0);
  P.r.assign(N + 1, 0);
  std::mt19937_64 rng(seed);
  for (std::int64_t n = 1; n <= N; ++n) {
    const double x = static_cast<double>(n);
    P.a[n] = profile == CoefficientProfile::LogOverN ? std::sqrt(std::log(x) / x) : 1.0 / std::sqrt(static_cast<double>(N));
    P.r[n] = (rng() >> 63) ? 1 : -1;
  }
  return P;
}

RandomTrigPoly from_coefficients(std::vector<double> a, std::vector<int> r) {
  if (a.size() != r.size() || a.size() < 2) throw StructuralError("from_coefficients: need matching vectors with N >= 1");
  for (std::size_t n = 1; n < a.size(); ++n) {
    if (a[n] < 0.0) throw DomainError("from_coefficients: coefficients must be non-negative");
    if (r[n] != 1 && r[n] != -1) throw DomainError("from_coefficients: signs must be +-1");
  }
  RandomTrigPoly P;
  P.N = static_cast<std::int64_t>(a.size()) - 1;
  a[0] = 0.0;
  r[0] = 0;
  P.a = std::move(a);
  P.r = std::move(r);
  return P;
}

TrigNorms norms(const RandomTrigPoly& P, int oversampling) {
  if (oversampling < 4) throw DomainError("norms: oversampling must be at least 4");
  const std::int64_t N = P.N;
  TrigNorms out;
  CompensatedSum s2, s4, sn;
  for (std::int64_t n = 1; n <= N; ++n) {
    const double a2 = P.a[n] * P.a[n];
    s2.add(a2);
    s4.add(a2 * a2);
    sn.add(static_cast<double>(n) * P.a[n]);
  }
  out.l2sq = 0.5 * s2.value();
  out.u2 = std::pow(s4.value() / 8.0, 0.25);
  if (s2.value() == 0.0) return out;

  const std::int64_t M = oversampling * N;
  std::vector<cplx> c0(M, 0.0), c1(M, 0.0), c2(M, 0.0);
  for (std::int64_t n = 1; n <= N; ++n) {
    const double v = P.r[n] * P.a[n], x = static_cast<double>(n);
    c0[n] = v;
    c1[n] = cplx(0.0, x * v);
    c2[n] = -x * x * v;
  }
  // Real parts of sum c_n e(n k / M) are P, P', P'' at t_k = 2 pi k / M.
  const auto p0 = dft(c0, FftSign::Positive), p1 = dft(c1, FftSign::Positive), p2 = dft(c2, FftSign::Positive);
  const double d = kPi / static_cast<double>(M);
  double qmax = 0.0;
  std::vector<std::int64_t> order(M);
  std::iota(order.begin(), order.end(), 0);
  for (std::int64_t k = 0; k < M; ++k) qmax = std::max(qmax, quadratic_max(p0[k].real(), p1[k].real(), p2[k].real(), d));
  const std::size_t top = std::min<std::size_t>(16, order.size());
  std::partial_sort(order.begin(), order.begin() + top, order.end(),
                    [&](std::int64_t x, std::int64_t y) { return std::fabs(p0[x].real()) > std::fabs(p0[y].real()); });
  out.grid_max = std::fabs(p0[order[0]].real());
  out.sup = out.grid_max;
  const double h = 2.0 * kPi / static_cast<double>(M);
  for (std::size_t i = 0; i < top; ++i) {
    const double t0 = h * static_cast<double>(order[i]);
    // Brent's tolerance has an absolute floor, so search in units of the grid spacing.
    auto neg = [&](double u) { return -std::fabs(P(t0 + u * h)); };
    const auto best = boost::math::tools::brent_find_minima(neg, -1.0, 1.0, 26);
    out.sup = std::max(out.sup, -best.second);
  }
  const double nd = static_cast<double>(N) * d;
  const double shrink = 1.0 - nd * nd * nd / 6.0;
  out.sup_upper = std::max(out.sup, qmax / shrink);
  out.sup_error = out.sup_upper - out.sup;
  out.naive_error = sn.value() * h / 2.0;
  return out;
}

GrowthReport growth_experiment(const std::vector<std::int64_t>& schedule, int seeds, CoefficientProfile profile) {
  if (schedule.empty()) throw DomainError("growth_experiment: empty schedule");
  if (seeds < 1) throw DomainError("growth_experiment: need at least one seed");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1]) throw ConfigError("growth_experiment: schedule must increase");
  const std::size_t S = static_cast<std::size_t>(seeds);
  GrowthReport rep;
  rep.rows.resize(schedule.size() * S);
  parallel_for(rep.rows.size(), [&](std::size_t idx) {
    GrowthRow& row = rep.rows[idx];
    row.N = schedule[idx / S];
    row.seed = idx % S + 1;
    row.norms = norms(build(row.N, row.seed, profile));
    row.ratio = row.norms.l2sq / (row.norms.sup * row.norms.u2);
  });
  rep.N = schedule;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    std::vector<double> v(S);
    for (std::size_t s = 0; s < S; ++s) v[s] = rep.rows[i * S + s].ratio;
    std::sort(v.begin(), v.end());
    rep.median_ratio.push_back(S % 2 ? v[S / 2] : 0.5 * (v[S / 2 - 1] + v[S / 2]));
  }
  rep.strictly_increasing = true;
  for (std::size_t i = 1; i < rep.median_ratio.size(); ++i)
    if (!(rep.median_ratio[i] > rep.median_ratio[i - 1])) rep.strictly_increasing = false;
  rep.growth = rep.median_ratio.back() / rep.median_ratio.front();
  return rep;
}

}  // namespace nilergodic

#include "nilergodic/uniformity.hpp"

#include <algorithm>
#include <cmath>

#include "nilergodic/errors.hpp"
#include "nilergodic/fft.hpp"
#include "nilergodic/parallel.hpp"

namespace nilergodic {

namespace {

void require_cyclic(const FiniteSequence& f, const char* op) {
  if (f.values.empty()) throw DomainError(std::string(op) + ": empty sequence");
  if (f.interpretation != Interpretation::CyclicZN)
    throw DomainError(std::string(op) + ": requires a cyclic (Z_N) sequence");
}

double root(double power, int k) { return std::pow(std::max(power, 0.0), 1.0 / static_cast<double>(1 << k)); }

double u2_power_fft(const std::vector<cplx>& f) {
  auto hat = dft(f, FftSign::Negative);
  const double inv = 1.0 / static_cast<double>(f.size());
  double s = 0.0;
  for (const auto& z : hat) {
    const double a = std::norm(z * inv);
    s += a * a;
  }
  return s;
}

double cyclic_power(const std::vector<cplx>& f, int k, bool fft_base) {
  const std::size_t N = f.size();
  if (k == 1) {
    cplx m = 0.0;
    for (const auto& z : f) m += z;
    return std::norm(m / static_cast<double>(N));
  }
  if (k == 2 && fft_base) return u2_power_fft(f);
  std::vector<cplx> d(N);
  double s = 0.0;
  for (std::size_t h = 0; h < N; ++h) {
    for (std::size_t n = 0; n < N; ++n) d[n] = f[(n + h) % N] * std::conj(f[n]);
    s += cyclic_power(d, k - 1, fft_base);
  }
  return s / static_cast<double>(N);
}

double brute_power(const std::vector<cplx>& f, int k) {
  const std::size_t N = f.size();
  if (std::pow(static_cast<double>(N), k + 1) * (1 << k) > 4e9)
    throw UnsupportedError("gowers brute force: N^{k+1} 2^k exceeds the cost guard");
  std::vector<std::size_t> h(k, 0);
  const std::size_t corners = std::size_t{1} << k;
  cplx total = 0.0;
  for (std::size_t x = 0; x < N; ++x) {
    std::fill(h.begin(), h.end(), 0);
    while (true) {
      cplx prod = 1.0;
      for (std::size_t w = 0; w < corners; ++w) {
        std::size_t idx = x;
        int parity = 0;
        for (int b = 0; b < k; ++b)
          if (w >> b & 1) {
            idx += h[b];
            ++parity;
          }
        cplx v = f[idx % N];
        prod *= parity % 2 ? std::conj(v) : v;
      }
      total += prod;
      int b = 0;
      while (b < k && ++h[b] == N) h[b++] = 0;
      if (b == k) break;
    }
  }
  return total.real() / std::pow(static_cast<double>(N), k + 1);
}

// Box sums: P_1 over [w0, w1), needs g on [w0, w1 + K - 1).
double fejer_p1(const cplx* g, std::int64_t w0, std::int64_t w1, std::int64_t K) {
  cplx box = 0.0;
  for (std::int64_t a = 0; a < K; ++a) box += g[w0 + a];
  double s = 0.0;
  for (std::int64_t n = w0; n < w1; ++n) {
    s += std::norm(box);
    if (n + 1 < w1) box += g[n + K] - g[n];
  }
  const double kk = static_cast<double>(K);
  return s / (kk * kk * static_cast<double>(w1 - w0));
}

double level_power(const std::vector<cplx>& g, int k, std::int64_t w0, std::int64_t w1, std::int64_t K,
                   bool parallel) {
  if (k == 1) return fejer_p1(g.data(), w0, w1, K);
  if (k == 2) return detail::fejer_p2(g.data(), w0, w1, K);
  const auto N = static_cast<std::int64_t>(g.size());
  const std::int64_t shifts = 2 * K - 1;
  std::vector<double> slot(shifts, 0.0);
  auto body = [&](std::size_t t) {
    const std::int64_t j = static_cast<std::int64_t>(t) - (K - 1);
    std::vector<cplx> d(g.size(), 0.0);
    const std::int64_t lo = std::max<std::int64_t>(0, -j), hi = std::min<std::int64_t>(N, N - j);
    for (std::int64_t n = lo; n < hi; ++n) d[n] = g[n + j] * std::conj(g[n]);
    slot[t] = static_cast<double>(K - std::abs(j)) * level_power(d, k - 1, w0, w1, K, false);
  };
  if (parallel)
    parallel_for(static_cast<std::size_t>(shifts), body);
  else
    for (std::int64_t t = 0; t < shifts; ++t) body(static_cast<std::size_t>(t));
  double s = 0.0;
  for (double v : slot) s += v;
  const double kk = static_cast<double>(K);
  return s / (kk * kk);
}

UniformityEstimate orbit_estimate_prefix(const std::vector<cplx>& g, int k, std::int64_t K) {
  const auto N = static_cast<std::int64_t>(g.size());
  if (2 * K >= N) throw RangeError("ghk_orbit_estimate: K must be below N/2");
  const std::int64_t w0 = k * K, w1 = N - k * K;
  if (w1 <= w0) throw RangeError("ghk_orbit_estimate: window [kK, N - kK) is empty");
  UniformityEstimate out;
  out.k = k;
  out.method = GowersMethod::OrbitRecursive;
  out.N = N;
  out.K = K;
  out.power = level_power(g, k, w0, w1, K, true);
  if (!std::isfinite(out.power)) throw NumericGuardError("ghk_orbit_estimate: non-finite estimate");
  out.value = root(out.power, k);
  return out;
}

}  // namespace

std::string to_string(GowersMethod m) {
  switch (m) {
    case GowersMethod::BruteForce:
      return "brute";
    case GowersMethod::Recursive:
      return "recursive";
    case GowersMethod::FFT:
      return "fft";
    case GowersMethod::OrbitRecursive:
      return "orbit";
  }
  return "?";
}

GowersMethod parse_gowers_method(const std::string& name) {
  if (name == "brute") return GowersMethod::BruteForce;
  if (name == "recursive") return GowersMethod::Recursive;
  if (name == "fft") return GowersMethod::FFT;
  if (name == "orbit") return GowersMethod::OrbitRecursive;
  throw ConfigError("unknown gowers method '" + name + "' (expected brute, fft, recursive or orbit)");
}

namespace detail {

namespace {
// acc += |S|^2, then S += a c1 - b c0 for one step of the sliding window.
void slide_step(double* __restrict sr, double* __restrict si, double* __restrict acc, const double* __restrict ar,
                const double* __restrict ai, const double* __restrict br, const double* __restrict bi,
                const double* c, std::int64_t width) {
  const double c1r = c[0], c1i = c[1], c0r = c[2], c0i = c[3];
  for (std::int64_t t = 0; t < width; ++t) {
    const double r = sr[t], i = si[t];
    acc[t] += r * r + i * i;
    sr[t] = r + (ar[t] * c1r - ai[t] * c1i) - (br[t] * c0r - bi[t] * c0i);
    si[t] = i + (ar[t] * c1i + ai[t] * c1r) - (br[t] * c0i + bi[t] * c0r);
  }
}
}  // namespace

double fejer_p2(const cplx* h, std::int64_t w0, std::int64_t w1, std::int64_t K) {
  // S_j(n) = sum_{a<K} h(n+a+j) conj h(n+a) for |j| < K, slid along n with a rank-2 update.
  const std::int64_t width = 2 * K - 1;
  const std::int64_t lo = w0 - K + 1, hi = w1 + 2 * K - 2;
  const std::int64_t len = hi - lo;
  std::vector<double> hr(len), hi_(len);
  for (std::int64_t i = 0; i < len; ++i) {
    hr[i] = h[lo + i].real();
    hi_[i] = h[lo + i].imag();
  }
  std::vector<double> sr(width), si(width), acc(width, 0.0);
  auto resync = [&](std::int64_t n) {
    for (std::int64_t t = 0; t < width; ++t) {
      const std::int64_t j = t - (K - 1);
      cplx s = 0.0;
      for (std::int64_t a = 0; a < K; ++a) s += h[n + a + j] * std::conj(h[n + a]);
      sr[t] = s.real();
      si[t] = s.imag();
    }
  };
  constexpr std::int64_t kResync = 8192;
  for (std::int64_t n = w0; n < w1; ++n) {
    if ((n - w0) % kResync == 0) resync(n);
    if (n + 1 == w1) {
      for (std::int64_t t = 0; t < width; ++t) acc[t] += sr[t] * sr[t] + si[t] * si[t];
      break;
    }
    // S_j(n+1) = S_j(n) + h(n+K+j) conj h(n+K) - h(n+j) conj h(n); index n+K+j = n+1+t, n+j = n-K+1+t.
    const double c[4] = {h[n + K].real(), -h[n + K].imag(), h[n].real(), -h[n].imag()};
    slide_step(sr.data(), si.data(), acc.data(), hr.data() + (n + 1 - lo), hi_.data() + (n + 1 - lo),
               hr.data() + (n - K + 1 - lo), hi_.data() + (n - K + 1 - lo), c, width);
  }
  double s = 0.0;
  for (std::int64_t t = 0; t < width; ++t) s += static_cast<double>(K - std::abs(t - (K - 1))) * acc[t];
  const double kk = static_cast<double>(K);
  return s / (kk * kk * kk * kk * static_cast<double>(w1 - w0));
}

double fejer_p2_direct(const cplx* h, std::int64_t w0, std::int64_t w1, std::int64_t K) {
  double s = 0.0;
  for (std::int64_t j = -(K - 1); j <= K - 1; ++j) {
    double inner = 0.0;
    for (std::int64_t n = w0; n < w1; ++n) {
      cplx box = 0.0;
      for (std::int64_t a = 0; a < K; ++a) box += h[n + a + j] * std::conj(h[n + a]);
      inner += std::norm(box);
    }
    s += static_cast<double>(K - std::abs(j)) * inner;
  }
  const double kk = static_cast<double>(K);
  return s / (kk * kk * kk * kk * static_cast<double>(w1 - w0));
}

}  // namespace detail

cplx mean(const FiniteSequence& f) {
  if (f.values.empty()) throw DomainError("mean: empty sequence");
  CompensatedComplexSum s;
  for (const auto& z : f.values) s.add(z);
  return s.value() / static_cast<double>(f.values.size());
}

UniformityEstimate gowers_norm_cyclic(const FiniteSequence& f, int k, GowersMethod method) {
  if (k == 0) throw DomainError("gowers_norm_cyclic: k = 0 is the mean; call mean()");
  if (k < 1 || k > 4) throw DomainError("gowers_norm_cyclic: k must lie in [1, 4]");
  require_cyclic(f, "gowers_norm_cyclic");
  UniformityEstimate out;
  out.k = k;
  out.method = method;
  out.N = static_cast<std::int64_t>(f.size());
  switch (method) {
    case GowersMethod::BruteForce:
      out.power = brute_power(f.values, k);
      break;
    case GowersMethod::Recursive:
      out.power = cyclic_power(f.values, k, false);
      break;
    case GowersMethod::FFT:
      out.power = cyclic_power(f.values, k, true);
      break;
    case GowersMethod::OrbitRecursive:
      throw DomainError("gowers_norm_cyclic: the orbit estimator is ghk_orbit_estimate");
  }
  out.value = root(out.power, k);
  return out;
}

UniformityEstimate gowers_u2_fft(const FiniteSequence& f) {
  require_cyclic(f, "gowers_u2_fft");
  UniformityEstimate out;
  out.k = 2;
  out.method = GowersMethod::FFT;
  out.N = static_cast<std::int64_t>(f.size());
  out.power = u2_power_fft(f.values);
  out.value = root(out.power, 2);
  return out;
}

UniformityEstimate ghk_orbit_estimate(const FiniteSequence& f, int k, const OrbitEstimateOptions& opts) {
  if (k < 1 || k > 4) throw DomainError("ghk_orbit_estimate: k must lie in [1, 4]");
  if (f.values.empty()) throw DomainError("ghk_orbit_estimate: empty orbit");
  const auto N = static_cast<std::int64_t>(f.size());
  const std::int64_t K = opts.K > 0 ? opts.K : static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(N))));
  std::vector<std::int64_t> prefixes;
  for (int t = opts.trace_levels; t >= 1; --t) prefixes.push_back(N >> t);
  prefixes.push_back(N);
  std::vector<double> trace;
  std::vector<std::int64_t> trace_n;
  UniformityEstimate out;
  for (std::int64_t n : prefixes) {
    std::vector<cplx> g(f.values.begin(), f.values.begin() + n);
    out = orbit_estimate_prefix(g, k, K);
    trace.push_back(out.value);
    trace_n.push_back(n);
  }
  out.trace = std::move(trace);
  out.trace_n = std::move(trace_n);
  return out;
}

NormComparison u_vs_lp_check(const FiniteSequence& f, int l) {
  if (l < 0 || l > 3) throw DomainError("u_vs_lp_check: l must lie in [0, 3]");
  require_cyclic(f, "u_vs_lp_check");
  NormComparison out;
  out.u = gowers_norm_cyclic(f, l + 1, GowersMethod::Recursive).value;
  const double q = static_cast<double>(1 << l);
  double s = 0.0;
  for (const auto& z : f.values) s += std::pow(std::abs(z), q);
  out.lp = std::pow(s / static_cast<double>(f.size()), 1.0 / q);
  return out;
}

}  // namespace nilergodic

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nilergodic/errors.hpp"
#include "nilergodic/numerics.hpp"

namespace nilergodic {

enum class Interpretation { CyclicZN, OrbitSample };

struct FiniteSequence {
  std::vector<cplx> values;
  Interpretation interpretation = Interpretation::CyclicZN;

  std::size_t size() const { return values.size(); }
};

enum class GowersMethod {
  BruteForce,      // direct average over the k-dimensional cube, O(N^{k+1} 2^k)
  Recursive,       // ||f||_{U^k}^{2^k} = E_h ||f(.+h) conj f||_{U^{k-1}}^{2^{k-1}} down to |E f|^2
  FFT,             // the same recursion with the U^2 level by sum |f^|^4
  OrbitRecursive,  // Fejer-smoothed orbit estimator
};

std::string to_string(GowersMethod m);
GowersMethod parse_gowers_method(const std::string& name);

struct UniformityEstimate {
  int k = 1;
  double power = 0.0;  // estimate of ||f||_{U^k}^{2^k}
  double value = 0.0;  // power^{1/2^k}
  GowersMethod method = GowersMethod::Recursive;
  std::int64_t N = 0;
  std::int64_t K = 0;           // smoothing length; 0 for cyclic norms
  std::vector<double> trace;    // orbit estimator: value on nested prefixes, last = full window
  std::vector<std::int64_t> trace_n;
};

/// The U^0 functional: plain average.
cplx mean(const FiniteSequence& f);

/// Gowers norm on Z_N for 1 <= k <= 4.
UniformityEstimate gowers_norm_cyclic(const FiniteSequence& f, int k, GowersMethod method = GowersMethod::Recursive);

/// ||f||_{U^2}^4 = sum_xi |f^(xi)|^4 with f^(xi) = N^{-1} sum_n f(n) e(-n xi / N).
UniformityEstimate gowers_u2_fft(const FiniteSequence& f);

struct OrbitEstimateOptions {
  std::int64_t K = 0;       // 0 selects floor(sqrt N)
  int trace_levels = 0;     // also evaluate on prefixes N / 2^t, t = trace_levels..1
};

/// Fejer-smoothed estimator on an orbit sample g(0..N-1), base window W = [kK, N - kK):
///   P_1(g) = (K^2 |W|)^{-1} sum_{n in W} |sum_{a<K} g(n+a)|^2,
///   P_{l+1}(g) = K^{-2} sum_{|j|<K} (K - |j|) P_l(g(.+j) conj g).
/// P_0 is the mean over W. Errors with RangeError when K >= N/2 or the window is empty.
UniformityEstimate ghk_orbit_estimate(const FiniteSequence& f, int k, const OrbitEstimateOptions& opts = {});

struct NormComparison {
  double u = 0.0;   // ||f||_{U^{l+1}(Z_N)}
  double lp = 0.0;  // (E |f|^{2^l})^{2^{-l}}
};
NormComparison u_vs_lp_check(const FiniteSequence& f, int l);

namespace detail {
/// P_2 over window [w0, w1) of h indexed absolutely; needs h on [w0 - K + 1, w1 + 2K - 2).
double fejer_p2(const cplx* h, std::int64_t w0, std::int64_t w1, std::int64_t K);
/// Same quantity by the direct O(K^2 |W|) double sum.
double fejer_p2_direct(const cplx* h, std::int64_t w0, std::int64_t w1, std::int64_t K);
}  // namespace detail

}  // namespace nilergodic

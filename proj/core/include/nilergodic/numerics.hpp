#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace nilergodic {

using cplx = std::complex<double>;
using int128 = __int128;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;

/// Fractional part in [0, 1). Guards the rounding case x = -tiny.
inline double frac(double x) {
  double f = x - std::floor(x);
  return f < 1.0 ? f : 0.0;
}
inline long double frac(long double x) {
  long double f = x - std::floor(x);
  return f < 1.0L ? f : 0.0L;
}

inline double value_of(double x) { return x; }

/// e(x) = exp(2 pi i x), argument reduced mod 1 first.
inline cplx e(double x) {
  double r = x - std::nearbyint(x);
  return {std::cos(kTwoPi * r), std::sin(kTwoPi * r)};
}
inline cplx e(long double x) {
  long double r = x - std::nearbyint(x);
  return {static_cast<double>(std::cos(2.0L * 3.14159265358979323846264338327950288L * r)),
          static_cast<double>(std::sin(2.0L * 3.14159265358979323846264338327950288L * r))};
}

/// Binomial coefficient C(n, j) for any integer n, exact. Throws on overflow.
int128 binomial(int128 n, int j);
std::int64_t binomial64(std::int64_t n, int j);

/// frac(c * alpha) computed exactly from the binary expansion of alpha,
/// accurate to one rounding of the final result for any 128-bit c.
double frac_product(int128 c, double alpha);

/// frac(sum_i c_i * alpha_i), each term exact.
double frac_dot(std::span<const int128> c, std::span<const double> alpha);

/// Real literal with + - * / ( ), sqrt(), pi: "sqrt(2)-1", "0.5", "pi/4". ConfigError on bad input.
double parse_real(std::string_view text);

/// Kahan-Babuska compensated sum in a fixed order.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(cplx z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_, im_;
};

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
inline double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

/// Order of the Rademacher/uniform generator, recorded in metadata.
inline constexpr const char* kRngAlgorithm = "std::mt19937_64; u = (x >> 11) * 2^-53; sign = top bit";

}  // namespace nilergodic

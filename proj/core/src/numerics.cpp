#include "nilergodic/numerics.hpp"

#include <cctype>
#include <cstdlib>
#include <limits>
#include <string>

#include "nilergodic/errors.hpp"

namespace nilergodic {

int128 binomial(int128 n, int j) {
  if (j < 0) throw DomainError("binomial: negative lower index");
  int128 r = 1;
  // r_i = C(n, i) and C(n, i) * (n - i) = C(n, i + 1) * (i + 1), so each division is exact.
  for (int i = 0; i < j; ++i) {
    int128 t;
    if (__builtin_mul_overflow(r, n - i, &t)) throw NumericGuardError("binomial: 128-bit overflow");
    r = t / (i + 1);
  }
  return r;
}

std::int64_t binomial64(std::int64_t n, int j) {
  int128 r = binomial(n, j);
  if (r > std::numeric_limits<std::int64_t>::max() || r < std::numeric_limits<std::int64_t>::min())
    throw NumericGuardError("binomial: 64-bit overflow");
  return static_cast<std::int64_t>(r);
}

double frac_product(int128 c, double alpha) {
  if (c == 0 || alpha == 0.0) return 0.0;
  if (!std::isfinite(alpha)) throw DomainError("frac_product: non-finite alpha");
  int ex = 0;
  double f = std::frexp(alpha, &ex);
  auto m = static_cast<std::int64_t>(std::ldexp(f, 53));
  int s = 53 - ex;  // alpha = m * 2^-s exactly
  if (s <= 0) return 0.0;
  bool negative = (m < 0) != (c < 0);
  using u128 = unsigned __int128;
  u128 cu = c < 0 ? u128(0) - static_cast<u128>(c) : static_cast<u128>(c);
  auto mu = static_cast<std::uint64_t>(m < 0 ? -m : m);

  // 192-bit product cu * mu as words w2:w1:w0.
  u128 p0 = static_cast<u128>(static_cast<std::uint64_t>(cu)) * mu;
  u128 p1 = static_cast<u128>(static_cast<std::uint64_t>(cu >> 64)) * mu;
  u128 t = p1 + (p0 >> 64);
  std::uint64_t w[3] = {static_cast<std::uint64_t>(p0), static_cast<std::uint64_t>(t),
                        static_cast<std::uint64_t>(t >> 64)};
  // Keep the bits below 2^s: the fractional part of the product is (value mod 2^s) / 2^s.
  for (int k = 0; k < 3; ++k) {
    int lo = 64 * k;
    if (s <= lo)
      w[k] = 0;
    else if (s < lo + 64)
      w[k] &= (std::uint64_t{1} << (s - lo)) - 1;
  }
  double r = std::ldexp(static_cast<double>(w[2]), 128 - s) +
             std::ldexp(static_cast<double>(w[1]), 64 - s) + std::ldexp(static_cast<double>(w[0]), -s);
  if (negative && r != 0.0) r = 1.0 - r;
  return r < 1.0 ? r : 0.0;
}

double frac_dot(std::span<const int128> c, std::span<const double> alpha) {
  if (c.size() != alpha.size()) throw StructuralError("frac_dot: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) acc += frac_product(c[i], alpha[i]);
  return frac(acc);
}

}  // namespace nilergodic

namespace nilergodic {

namespace {

class RealParser {
 public:
  explicit RealParser(std::string_view s) : s_(s) {}

  double parse() {
    double v = sum();
    skip();
    if (pos_ != s_.size()) fail();
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail() const { throw ConfigError("cannot parse real number '" + std::string(s_) + "'"); }

  double sum() {
    double v = product();
    while (true) {
      if (eat('+'))
        v += product();
      else if (eat('-'))
        v -= product();
      else
        return v;
    }
  }
  double product() {
    double v = unary();
    while (true) {
      if (eat('*'))
        v *= unary();
      else if (eat('/'))
        v /= unary();
      else
        return v;
    }
  }
  double unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return atom();
  }
  double atom() {
    skip();
    if (eat('(')) {
      double v = sum();
      if (!eat(')')) fail();
      return v;
    }
    if (s_.substr(pos_, 4) == "sqrt") {
      pos_ += 4;
      if (!eat('(')) fail();
      double v = sum();
      if (!eat(')')) fail();
      return std::sqrt(v);
    }
    if (s_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      return kPi;
    }
    const char* begin = s_.data() + pos_;
    char* end = nullptr;
    std::string buf(begin, s_.size() - pos_);
    double v = std::strtod(buf.c_str(), &end);
    if (end == buf.c_str()) fail();
    pos_ += static_cast<std::size_t>(end - buf.c_str());
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

double parse_real(std::string_view text) {
  double v = RealParser(text).parse();
  if (!std::isfinite(v)) throw ConfigError("real number '" + std::string(text) + "' is not finite");
  return v;
}

}  // namespace nilergodic

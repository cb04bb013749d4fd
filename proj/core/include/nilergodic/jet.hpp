#pragma once

#include <array>
#include <cassert>

namespace nilergodic {

/// Multilinear jet: a polynomial in infinitesimals s_1..s_a with s_i^2 = 0,
/// coefficients indexed by subset bitmask. X_{b_1}...X_{b_a} F is the top
/// coefficient of F evaluated along exp(s_a X_{b_a})...exp(s_1 X_{b_1}) g.
class Jet {
 public:
  static constexpr int kMaxOrder = 4;
  static constexpr int kCapacity = 1 << kMaxOrder;

  Jet() = default;
  Jet(double v) { c_[0] = v; }  // NOLINT: constants promote implicitly

  static Jet variable(int order, int index, double value) {
    Jet j(value);
    j.order_ = order;
    j.c_[1u << index] = 1.0;
    return j;
  }

  int order() const { return order_; }
  unsigned size() const { return 1u << order_; }
  double value() const { return c_[0]; }
  double top() const { return c_[size() - 1]; }
  double operator[](unsigned mask) const { return c_[mask]; }
  double& operator[](unsigned mask) { return c_[mask]; }

  Jet& operator+=(const Jet& o) {
    widen(o.order_);
    for (unsigned s = 0; s < o.size(); ++s) c_[s] += o.c_[s];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    widen(o.order_);
    for (unsigned s = 0; s < o.size(); ++s) c_[s] -= o.c_[s];
    return *this;
  }
  Jet& operator*=(double k) {
    for (unsigned s = 0; s < size(); ++s) c_[s] *= k;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator*(Jet a, double k) { return a *= k; }
  friend Jet operator*(double k, Jet a) { return a *= k; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    if (a.order_ == 0) return b * a.c_[0];
    if (b.order_ == 0) return a * b.c_[0];
    Jet r;
    r.order_ = a.order_ > b.order_ ? a.order_ : b.order_;
    for (unsigned s = 0; s < r.size(); ++s) {
      double acc = a.c_[0] * b.c_[s];
      for (unsigned t = s; t != 0; t = (t - 1) & s) acc += a.c_[t] * b.c_[s ^ t];
      r.c_[s] = acc;
    }
    return r;
  }

 private:
  void widen(int order) {
    if (order > order_) order_ = order;
  }

  int order_ = 0;
  std::array<double, kCapacity> c_{};
};

inline double value_of(const Jet& x) { return x.value(); }

}  // namespace nilergodic

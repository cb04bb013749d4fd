#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "nilergodic/errors.hpp"
#include "nilergodic/jet.hpp"
#include "nilergodic/numerics.hpp"

namespace nilergodic {

/// Monomial bookkeeping for polynomials in `vars` variables truncated at
/// total degree `degree`. Monomials are graded: index 0 is the constant.
struct TaylorLayout {
  struct Term {
    int i, j, k;  // monomial_i * monomial_j = monomial_k
  };
  int vars = 0;
  int degree = 0;
  int size = 0;
  std::vector<std::array<int, 4>> exponents;
  std::vector<int> total_degree;
  std::vector<int> parent;      // monomial k = parent[k] * x_{parent_var[k]}
  std::vector<int> parent_var;
  std::vector<int> variable;    // index of the monomial x_v
  std::vector<Term> product;

  static constexpr int kMaxVars = 4;
  static constexpr int kMaxDegree = 4;
  static const TaylorLayout& get(int vars, int degree);
};

/// Truncated multivariate Taylor polynomial. Coefficient of x^alpha is
/// d^alpha f / alpha!. A null layout denotes a constant.
template <class T>
class Taylor {
 public:
  static constexpr int kCapacity = 70;  // C(4 + 4, 4)

  Taylor() = default;
  Taylor(double v) { c_[0] = T(v); }  // NOLINT
  Taylor(T v) requires(!std::is_same_v<T, double>) { c_[0] = v; }  // NOLINT

  static Taylor variable(const TaylorLayout& L, int v, double value) {
    Taylor t(value);
    t.layout_ = &L;
    t.c_[L.variable[v]] = T(1.0);
    return t;
  }
  static Taylor zero(const TaylorLayout& L) {
    Taylor t;
    t.layout_ = &L;
    return t;
  }

  const TaylorLayout* layout() const { return layout_; }
  int size() const { return layout_ ? layout_->size : 1; }
  T value() const { return c_[0]; }
  const T& operator[](int k) const { return c_[k]; }
  T& operator[](int k) { return c_[k]; }

  Taylor& operator+=(const Taylor& o) {
    adopt(o);
    for (int k = 0; k < o.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    adopt(o);
    for (int k = 0; k < o.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Taylor& operator*=(T k) {
    for (int i = 0; i < size(); ++i) c_[i] *= k;
    return *this;
  }
  Taylor& operator*=(double k) requires(!std::is_same_v<T, double>) {
    for (int i = 0; i < size(); ++i) c_[i] *= k;
    return *this;
  }
  Taylor& operator+=(T k) {
    c_[0] += k;
    return *this;
  }

  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend Taylor operator-(Taylor a) { return a *= T(-1.0); }
  friend Taylor operator*(Taylor a, T k) { return a *= k; }
  friend Taylor operator*(T k, Taylor a) { return a *= k; }
  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    if (!a.layout_) return b * a.c_[0];
    if (!b.layout_) return a * b.c_[0];
    if (a.layout_ != b.layout_) throw StructuralError("Taylor: layout mismatch");
    Taylor r = zero(*a.layout_);
    for (const auto& t : a.layout_->product) r.c_[t.k] += a.c_[t.i] * b.c_[t.j];
    return r;
  }

  /// exp(a) = e^{a_0} * sum_{r <= degree} n^r / r! with n = a - a_0 nilpotent.
  friend Taylor exp(const Taylor& a) {
    T base = std::exp(a.c_[0]);
    if (!a.layout_) return Taylor(base);
    Taylor n = a;
    n.c_[0] = T(0.0);
    Taylor sum(T(1.0));
    Taylor term(T(1.0));
    for (int r = 1; r <= a.layout_->degree; ++r) {
      term = term * n;
      term *= T(1.0 / r);
      sum += term;
    }
    return sum * base;
  }

 private:
  void adopt(const Taylor& o) {
    if (!o.layout_) return;
    if (!layout_) {
      T v = c_[0];
      *this = zero(*o.layout_);
      c_[0] = v;
    } else if (layout_ != o.layout_) {
      throw StructuralError("Taylor: layout mismatch");
    }
  }

  const TaylorLayout* layout_ = nullptr;
  std::array<T, kCapacity> c_{};
};

using RealTaylor = Taylor<double>;
using ComplexTaylor = Taylor<cplx>;

ComplexTaylor to_complex(const RealTaylor& x);
ComplexTaylor conj(const ComplexTaylor& x);

/// e(x) = exp(2 pi i x) for a real Taylor argument.
ComplexTaylor cis2pi(const RealTaylor& x);

inline double value_of(const RealTaylor& x) { return x.value(); }

/// Top multilinear coefficient of F(g + delta(s)) where `f` is the Taylor
/// expansion of F at g and delta are jets without constant term.
cplx compose_top(const ComplexTaylor& f, std::span<const Jet> delta);

}  // namespace nilergodic

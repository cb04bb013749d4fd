#pragma once

#include <boost/container/static_vector.hpp>
#include <cmath>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nilergodic/errors.hpp"
#include "nilergodic/numerics.hpp"

namespace nilergodic {

enum class GroupKind { Abelian, Heisenberg3, DirectSquare, Cube };

inline constexpr int kMaxDim = 16;
template <class R>
using Coords = boost::container::static_vector<R, kMaxDim>;

namespace detail {

struct GroupImpl {
  GroupKind kind = GroupKind::Abelian;
  int abelian_d = 0;
  int abelian_l = 0;
  std::shared_ptr<const GroupImpl> inner;
  std::vector<int> dims;  // d_1 >= ... >= d_l > 0
  int dim = 0;
  // DirectSquare: pos0[c], pos1[c] = slot of inner coordinate c of factor 0 / 1.
  // Cube: pos0[c] = slot of g0 coordinate c; pos1[c] = slot of h = g0^{-1} g1
  // coordinate c, or -1 when c lies outside G_2.
  std::vector<int> pos0, pos1;
};

template <class R>
R from_integer(int128 n) {
  if constexpr (std::is_same_v<R, long double>)
    return static_cast<long double>(n);
  else
    return R(static_cast<double>(n));
}

template <class R>
void multiply(const GroupImpl& G, const R* a, const R* b, R* out);
template <class R>
void inverse(const GroupImpl& G, const R* a, R* out);

// Cube coordinates -> pair (g0, g1) with g1 = g0 * h.
template <class R>
void cube_split(const GroupImpl& G, const R* u, R* g0, R* g1) {
  const GroupImpl& I = *G.inner;
  Coords<R> h(I.dim, R(0.0));
  for (int c = 0; c < I.dim; ++c) {
    g0[c] = u[G.pos0[c]];
    if (G.pos1[c] >= 0) h[c] = u[G.pos1[c]];
  }
  multiply<R>(I, g0, h.data(), g1);
}

template <class R>
void cube_merge(const GroupImpl& G, const R* g0, const R* g1, R* u) {
  const GroupImpl& I = *G.inner;
  Coords<R> inv(I.dim), h(I.dim);
  inverse<R>(I, g0, inv.data());
  multiply<R>(I, inv.data(), g1, h.data());
  for (int c = 0; c < I.dim; ++c) {
    u[G.pos0[c]] = g0[c];
    if (G.pos1[c] >= 0) u[G.pos1[c]] = h[c];
  }
}

template <class R>
void multiply(const GroupImpl& G, const R* a, const R* b, R* out) {
  switch (G.kind) {
    case GroupKind::Abelian:
      for (int c = 0; c < G.dim; ++c) out[c] = a[c] + b[c];
      return;
    case GroupKind::Heisenberg3: {
      R z = a[2] + b[2] + a[0] * b[1];
      out[0] = a[0] + b[0];
      out[1] = a[1] + b[1];
      out[2] = z;
      return;
    }
    case GroupKind::DirectSquare: {
      const GroupImpl& I = *G.inner;
      Coords<R> a0(I.dim), a1(I.dim), b0(I.dim), b1(I.dim), c0(I.dim), c1(I.dim);
      for (int c = 0; c < I.dim; ++c) {
        a0[c] = a[G.pos0[c]];
        a1[c] = a[G.pos1[c]];
        b0[c] = b[G.pos0[c]];
        b1[c] = b[G.pos1[c]];
      }
      multiply<R>(I, a0.data(), b0.data(), c0.data());
      multiply<R>(I, a1.data(), b1.data(), c1.data());
      for (int c = 0; c < I.dim; ++c) {
        out[G.pos0[c]] = c0[c];
        out[G.pos1[c]] = c1[c];
      }
      return;
    }
    case GroupKind::Cube: {
      const GroupImpl& I = *G.inner;
      Coords<R> a0(I.dim), a1(I.dim), b0(I.dim), b1(I.dim), c0(I.dim), c1(I.dim);
      cube_split<R>(G, a, a0.data(), a1.data());
      cube_split<R>(G, b, b0.data(), b1.data());
      multiply<R>(I, a0.data(), b0.data(), c0.data());
      multiply<R>(I, a1.data(), b1.data(), c1.data());
      cube_merge<R>(G, c0.data(), c1.data(), out);
      return;
    }
  }
}

template <class R>
void inverse(const GroupImpl& G, const R* a, R* out) {
  switch (G.kind) {
    case GroupKind::Abelian:
      for (int c = 0; c < G.dim; ++c) out[c] = -a[c];
      return;
    case GroupKind::Heisenberg3: {
      R z = a[0] * a[1] - a[2];
      out[0] = -a[0];
      out[1] = -a[1];
      out[2] = z;
      return;
    }
    case GroupKind::DirectSquare: {
      const GroupImpl& I = *G.inner;
      Coords<R> a0(I.dim), a1(I.dim), c0(I.dim), c1(I.dim);
      for (int c = 0; c < I.dim; ++c) {
        a0[c] = a[G.pos0[c]];
        a1[c] = a[G.pos1[c]];
      }
      inverse<R>(I, a0.data(), c0.data());
      inverse<R>(I, a1.data(), c1.data());
      for (int c = 0; c < I.dim; ++c) {
        out[G.pos0[c]] = c0[c];
        out[G.pos1[c]] = c1[c];
      }
      return;
    }
    case GroupKind::Cube: {
      const GroupImpl& I = *G.inner;
      Coords<R> a0(I.dim), a1(I.dim), c0(I.dim), c1(I.dim);
      cube_split<R>(G, a, a0.data(), a1.data());
      inverse<R>(I, a0.data(), c0.data());
      inverse<R>(I, a1.data(), c1.data());
      cube_merge<R>(G, c0.data(), c1.data(), out);
      return;
    }
  }
}

/// a^n by closed forms; Heisenberg3: (nx, ny, nz + C(n,2) xy).
template <class R>
void power(const GroupImpl& G, const R* a, int128 n, R* out) {
  switch (G.kind) {
    case GroupKind::Abelian: {
      R k = from_integer<R>(n);
      for (int c = 0; c < G.dim; ++c) out[c] = k * a[c];
      return;
    }
    case GroupKind::Heisenberg3: {
      R k = from_integer<R>(n);
      R k2 = from_integer<R>(n * (n - 1) / 2);
      R z = k * a[2] + k2 * (a[0] * a[1]);
      out[0] = k * a[0];
      out[1] = k * a[1];
      out[2] = z;
      return;
    }
    case GroupKind::DirectSquare: {
      const GroupImpl& I = *G.inner;
      Coords<R> a0(I.dim), a1(I.dim), c0(I.dim), c1(I.dim);
      for (int c = 0; c < I.dim; ++c) {
        a0[c] = a[G.pos0[c]];
        a1[c] = a[G.pos1[c]];
      }
      power<R>(I, a0.data(), n, c0.data());
      power<R>(I, a1.data(), n, c1.data());
      for (int c = 0; c < I.dim; ++c) {
        out[G.pos0[c]] = c0[c];
        out[G.pos1[c]] = c1[c];
      }
      return;
    }
    case GroupKind::Cube: {
      const GroupImpl& I = *G.inner;
      Coords<R> a0(I.dim), a1(I.dim), c0(I.dim), c1(I.dim);
      cube_split<R>(G, a, a0.data(), a1.data());
      power<R>(I, a0.data(), n, c0.data());
      power<R>(I, a1.data(), n, c1.data());
      cube_merge<R>(G, c0.data(), c1.data(), out);
      return;
    }
  }
}

/// g = k * gamma with k in the half-open unit box and gamma integral.
/// Every G_i is mapped into itself.
template <class R>
void reduce(const GroupImpl& G, const R* g, R* k, R* gamma) {
  switch (G.kind) {
    case GroupKind::Abelian:
      for (int c = 0; c < G.dim; ++c) {
        R f = std::floor(g[c]);
        R r = g[c] - f;
        if (r >= R(1)) {
          r = R(0);
          f += R(1);
        }
        k[c] = r;
        gamma[c] = f;
      }
      return;
    case GroupKind::Heisenberg3: {
      R a = std::floor(g[0]), b = std::floor(g[1]);
      R kx = g[0] - a, ky = g[1] - b;
      if (kx >= R(1)) kx = R(0), a += R(1);
      if (ky >= R(1)) ky = R(0), b += R(1);
      R w = g[2] - kx * b;
      R c = std::floor(w);
      R kz = w - c;
      if (kz >= R(1)) kz = R(0), c += R(1);
      k[0] = kx, k[1] = ky, k[2] = kz;
      gamma[0] = a, gamma[1] = b, gamma[2] = c;
      return;
    }
    case GroupKind::DirectSquare: {
      const GroupImpl& I = *G.inner;
      Coords<R> a0(I.dim), a1(I.dim), k0(I.dim), k1(I.dim), y0(I.dim), y1(I.dim);
      for (int c = 0; c < I.dim; ++c) {
        a0[c] = g[G.pos0[c]];
        a1[c] = g[G.pos1[c]];
      }
      reduce<R>(I, a0.data(), k0.data(), y0.data());
      reduce<R>(I, a1.data(), k1.data(), y1.data());
      for (int c = 0; c < I.dim; ++c) {
        k[G.pos0[c]] = k0[c];
        k[G.pos1[c]] = k1[c];
        gamma[G.pos0[c]] = y0[c];
        gamma[G.pos1[c]] = y1[c];
      }
      return;
    }
    case GroupKind::Cube: {
      // (g0, g0 h) = (k0, k0 kh)(y0, y0 yh): reduce g0, then h' = y0 h y0^{-1} in G_2,
      // h' = kh * delta, yh = y0^{-1} delta y0.
      const GroupImpl& I = *G.inner;
      Coords<R> g0(I.dim), h(I.dim, R(0)), k0(I.dim), y0(I.dim), y0i(I.dim), t(I.dim), hp(I.dim),
          kh(I.dim), delta(I.dim), yh(I.dim);
      for (int c = 0; c < I.dim; ++c) {
        g0[c] = g[G.pos0[c]];
        if (G.pos1[c] >= 0) h[c] = g[G.pos1[c]];
      }
      reduce<R>(I, g0.data(), k0.data(), y0.data());
      inverse<R>(I, y0.data(), y0i.data());
      multiply<R>(I, y0.data(), h.data(), t.data());
      multiply<R>(I, t.data(), y0i.data(), hp.data());
      for (int c = 0; c < I.dim; ++c)
        if (G.pos1[c] < 0) hp[c] = R(0);
      reduce<R>(I, hp.data(), kh.data(), delta.data());
      multiply<R>(I, y0i.data(), delta.data(), t.data());
      multiply<R>(I, t.data(), y0.data(), yh.data());
      for (int c = 0; c < I.dim; ++c) {
        k[G.pos0[c]] = k0[c];
        gamma[G.pos0[c]] = y0[c];
        if (G.pos1[c] >= 0) {
          k[G.pos1[c]] = kh[c];
          gamma[G.pos1[c]] = std::nearbyint(yh[c]);
        }
      }
      return;
    }
  }
}

}  // namespace detail

/// Filtered nilpotent group with the lattice of integer Mal'cev coordinates.
/// G_i occupies the last d_i coordinates. Cheap to copy (shared descriptor).
class FilteredGroup {
 public:
  FilteredGroup();  // trivial group
  static FilteredGroup trivial();
  static FilteredGroup abelian(int d, int l);
  static FilteredGroup heisenberg3();
  static FilteredGroup direct_square(const FilteredGroup& inner);
  static FilteredGroup cube(const FilteredGroup& inner);
  /// "trivial", "abelian(d,l)", "heisenberg3", "square(<g>)", "cube(<g>)".
  static FilteredGroup parse(std::string_view descriptor);

  GroupKind kind() const { return impl_->kind; }
  int dim() const { return impl_->dim; }
  int length() const { return static_cast<int>(impl_->dims.size()); }
  /// d_i with d_0 = d_1 and d_i = 0 for i > l.
  int dim_at(int i) const;
  const std::vector<int>& dims() const { return impl_->dims; }
  FilteredGroup inner() const;
  std::string descriptor() const;
  const detail::GroupImpl& impl() const { return *impl_; }

  friend bool operator==(const FilteredGroup& a, const FilteredGroup& b);

  template <class R>
  void multiply(const R* a, const R* b, R* out) const {
    detail::multiply<R>(*impl_, a, b, out);
  }
  template <class R>
  void inverse(const R* a, R* out) const {
    detail::inverse<R>(*impl_, a, out);
  }
  template <class R>
  void power(const R* a, int128 n, R* out) const {
    detail::power<R>(*impl_, a, n, out);
  }
  template <class R>
  void reduce(const R* g, R* k, R* gamma) const {
    detail::reduce<R>(*impl_, g, k, gamma);
  }

 private:
  explicit FilteredGroup(std::shared_ptr<const detail::GroupImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const detail::GroupImpl> impl_;
};

class GroupElement {
 public:
  GroupElement() = default;
  GroupElement(FilteredGroup group, std::span<const double> coords);
  GroupElement(FilteredGroup group, std::initializer_list<double> coords);
  GroupElement(FilteredGroup group, const Coords<double>& coords)
      : GroupElement(std::move(group), std::span<const double>(coords.data(), coords.size())) {}

  const FilteredGroup& group() const { return group_; }
  std::span<const double> coords() const { return {coords_.data(), coords_.size()}; }
  double operator[](int i) const { return coords_[i]; }
  int dim() const { return static_cast<int>(coords_.size()); }

 private:
  FilteredGroup group_;
  Coords<double> coords_;
};

GroupElement identity(const FilteredGroup& group);
GroupElement multiply(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& a);
GroupElement power(const GroupElement& a, int128 n);
/// [a, b] = a^{-1} b^{-1} a b.
GroupElement commutator(const GroupElement& a, const GroupElement& b);
inline GroupElement operator*(const GroupElement& a, const GroupElement& b) { return multiply(a, b); }

/// First d_1 - d_i coordinates vanish (|t| <= tol).
bool in_subgroup(const GroupElement& g, int i, double tol = 0.0);
bool is_lattice_point(const GroupElement& g, double tol = 0.0);
double max_abs_difference(const GroupElement& a, const GroupElement& b);

struct FundamentalDomainSplit {
  GroupElement k;      // {g}, coordinates in [0,1)
  GroupElement gamma;  // integral
};
FundamentalDomainSplit reduce_to_fundamental_domain(const GroupElement& g);

/// exp(s X_b): the b-th coordinate axis is a one-parameter subgroup in every supported group.
GroupElement one_parameter(const FilteredGroup& group, int b, double s);

/// Uniform coordinates in [-scale, scale] on the last d_i slots; zero elsewhere.
GroupElement random_in_subgroup(const FilteredGroup& group, int i, std::mt19937_64& rng, double scale = 1.0);
/// Integer coordinates in [-bound, bound].
GroupElement random_lattice_point(const FilteredGroup& group, std::mt19937_64& rng, int bound);

FilteredGroup cube_filtration(const FilteredGroup& group);

struct CubeElement {
  GroupElement g0, g1;
};
/// Pair view of an element of cube_filtration(G).
CubeElement to_pair(const GroupElement& u);
GroupElement from_pair(const FilteredGroup& cube_group, const CubeElement& p);
/// g0, g1 in G_i and g0^{-1} g1 in G_{i+1}.
bool in_cube_subgroup(const CubeElement& p, int i, double tol = 0.0);

}  // namespace nilergodic

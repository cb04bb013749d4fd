#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "nilergodic/malcev.hpp"
#include "nilergodic/taylor.hpp"

namespace nilergodic {

/// A smooth Gamma-invariant function on G given by a formula valid on all of G
/// (no fundamental-domain reduction), so it can be differentiated along flows.
class LiftedFunction {
 public:
  virtual ~LiftedFunction() = default;
  virtual const FilteredGroup& group() const = 0;
  virtual cplx lifted(std::span<const double> x) const = 0;
  virtual ComplexTaylor lifted(std::span<const RealTaylor> x) const = 0;

  /// Reduce to the fundamental domain, then evaluate.
  cplx evaluate(const GroupElement& g) const;
};

/// psi(x, y) = c e(jx + ky) exp(-(y - y0)^2 / (2 sigma^2)); sigma = 0 means the
/// pure Fourier term c e(jx + ky), allowed only in the m = 0 mode.
struct HorizontalTerm {
  int j = 0;
  int k = 0;
  cplx c = 1.0;
  double y0 = 0.5;
  double sigma = 0.0;
};

/// One vertical mode. Tori: F_m(x) = coefficient * e(m.x). Heisenberg3:
/// F_m(x,y,z) = e(mz) sum_n sum_terms psi(x, y+n) e(mnx), the Gamma-periodization.
struct ModeFunction {
  std::vector<int> m;
  cplx coefficient = 0.0;
  std::vector<HorizontalTerm> terms;
};

/// Finite sum of vertical-character modes on a torus Abelian(d,l) (fiber = T^d)
/// or on the Heisenberg nilmanifold (fiber = the central circle).
class NilFunction final : public LiftedFunction {
 public:
  explicit NilFunction(FilteredGroup group = FilteredGroup::trivial());
  static NilFunction constant(const FilteredGroup& group, cplx c);
  static NilFunction torus_character(const FilteredGroup& group, std::vector<int> m, cplx c = 1.0);
  static NilFunction heisenberg_mode(int m, std::vector<HorizontalTerm> terms);

  /// Adds a mode, merging with an existing mode of the same frequency.
  NilFunction& add(const ModeFunction& mode);
  NilFunction& add(const NilFunction& other);
  NilFunction scaled(cplx c) const;

  const FilteredGroup& group() const override { return group_; }
  const std::vector<ModeFunction>& modes() const { return modes_; }
  /// Exact vertical component F_m (zero function if absent).
  NilFunction mode(const std::vector<int>& m) const;
  bool is_vertical_character() const { return modes_.size() <= 1; }
  /// Dimension of the vertical torus G_l / Gamma_l.
  int vertical_dim() const;
  /// Largest |m_c| over all modes and coordinates.
  int band_limit() const;

  cplx lifted(std::span<const double> x) const override;
  ComplexTaylor lifted(std::span<const RealTaylor> x) const override;

  static constexpr double kGaussianCutoff = 9.0;  // terms beyond 9 sigma are < 3e-18

 private:
  template <class R>
  auto eval(std::span<const R> x) const;

  FilteredGroup group_;
  std::vector<ModeFunction> modes_;
};

/// Fiberwise projection F_m(y) = Q^{-d_l} sum_t F(exp(t) y) e(-m.t) over t in (Z/Q)^{d_l}.
class FiberProjection final : public LiftedFunction {
 public:
  FiberProjection(std::shared_ptr<const LiftedFunction> f, std::vector<int> m, int samples);
  const FilteredGroup& group() const override { return f_->group(); }
  cplx lifted(std::span<const double> x) const override;
  ComplexTaylor lifted(std::span<const RealTaylor> x) const override;

 private:
  template <class R, class C>
  C eval(std::span<const R> x) const;

  std::shared_ptr<const LiftedFunction> f_;
  std::vector<int> m_;
  int samples_;
  int fiber_dim_;
};

struct VerticalCoefficient {
  std::shared_ptr<const FiberProjection> function;
  /// Another known mode aliases onto m at this sample count (only decidable for NilFunction input).
  bool aliasing_warning = false;
};

/// Numerical fiber integral; exact when no other mode is congruent to m mod Q.
VerticalCoefficient vertical_coefficient(std::shared_ptr<const LiftedFunction> f, const std::vector<int>& m,
                                         int samples = 128);

/// F~(u0, u1) = F(a u0) conj(F(b u1)) on the cube nilmanifold, with (u0, u1) the
/// pair view of u; a = {g(k)}, b = {g(0)} gives the derivative-identity function.
class CubeTensorFunction final : public LiftedFunction {
 public:
  CubeTensorFunction(std::shared_ptr<const LiftedFunction> f, GroupElement a, GroupElement b);
  const FilteredGroup& group() const override { return cube_; }
  cplx lifted(std::span<const double> x) const override;
  ComplexTaylor lifted(std::span<const RealTaylor> x) const override;

 private:
  template <class R, class C>
  C eval(std::span<const R> x) const;

  std::shared_ptr<const LiftedFunction> f_;
  GroupElement a_, b_;
  FilteredGroup cube_;
};

/// Pointwise complex scaling of another function.
class ScaledFunction final : public LiftedFunction {
 public:
  ScaledFunction(std::shared_ptr<const LiftedFunction> f, cplx c) : f_(std::move(f)), c_(c) {}
  const FilteredGroup& group() const override { return f_->group(); }
  cplx lifted(std::span<const double> x) const override { return c_ * f_->lifted(x); }
  ComplexTaylor lifted(std::span<const RealTaylor> x) const override { return f_->lifted(x) * c_; }

 private:
  std::shared_ptr<const LiftedFunction> f_;
  cplx c_;
};

/// Random band-limited Heisenberg function with modes m in [-max_mode, max_mode].
NilFunction random_heisenberg_function(std::mt19937_64& rng, int modes, int max_mode, int terms_per_mode = 2);
/// Random trigonometric polynomial on the torus of `group`, frequencies in [-max_freq, max_freq]^d.
NilFunction random_torus_function(const FilteredGroup& group, std::mt19937_64& rng, int modes, int max_freq);

}  // namespace nilergodic

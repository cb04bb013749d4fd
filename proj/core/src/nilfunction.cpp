#include "nilergodic/nilfunction.hpp"

#include <algorithm>
#include <cmath>

namespace nilergodic {

namespace {

inline cplx cis(double t) { return e(t); }
inline ComplexTaylor cis(const RealTaylor& t) { return cis2pi(t); }
inline double gaussian(double u, double inv2s2) { return std::exp(-u * u * inv2s2); }
inline RealTaylor gaussian(const RealTaylor& u, double inv2s2) { return exp(u * u * (-inv2s2)); }
inline cplx promote(double v) { return v; }
inline ComplexTaylor promote(const RealTaylor& v) { return to_complex(v); }
inline cplx conjugate(const cplx& z) { return std::conj(z); }
inline ComplexTaylor conjugate(const ComplexTaylor& z) { return conj(z); }

template <class R>
struct ComplexOf;
template <>
struct ComplexOf<double> {
  using type = cplx;
};
template <>
struct ComplexOf<RealTaylor> {
  using type = ComplexTaylor;
};

void check_supported(const FilteredGroup& g) {
  if (g.dim() == 0 || g.kind() == GroupKind::Abelian || g.kind() == GroupKind::Heisenberg3) return;
  throw UnsupportedError("NilFunction: only tori and heisenberg3 are supported, got " + g.descriptor());
}

}  // namespace

cplx LiftedFunction::evaluate(const GroupElement& g) const {
  if (!(g.group() == group())) throw StructuralError("evaluate: element over the wrong group");
  auto split = reduce_to_fundamental_domain(g);
  return lifted(split.k.coords());
}

NilFunction::NilFunction(FilteredGroup group) : group_(std::move(group)) { check_supported(group_); }

NilFunction NilFunction::constant(const FilteredGroup& group, cplx c) {
  NilFunction f(group);
  ModeFunction mode;
  mode.m.assign(f.vertical_dim(), 0);
  if (group.kind() == GroupKind::Heisenberg3 && group.dim() > 0)
    mode.terms.push_back({0, 0, c, 0.5, 0.0});
  else
    mode.coefficient = c;
  return f.add(mode);
}

NilFunction NilFunction::torus_character(const FilteredGroup& group, std::vector<int> m, cplx c) {
  if (group.kind() != GroupKind::Abelian) throw DomainError("torus_character: group is not a torus");
  NilFunction f(group);
  if (static_cast<int>(m.size()) != f.vertical_dim()) throw DomainError("torus_character: frequency has wrong length");
  ModeFunction mode;
  mode.m = std::move(m);
  mode.coefficient = c;
  return f.add(mode);
}

NilFunction NilFunction::heisenberg_mode(int m, std::vector<HorizontalTerm> terms) {
  NilFunction f(FilteredGroup::heisenberg3());
  ModeFunction mode;
  mode.m = {m};
  mode.terms = std::move(terms);
  return f.add(mode);
}

NilFunction& NilFunction::add(const ModeFunction& mode) {
  if (static_cast<int>(mode.m.size()) != vertical_dim()) throw DomainError("NilFunction: mode has wrong length");
  const bool heis = group_.kind() == GroupKind::Heisenberg3 && group_.dim() > 0;
  if (heis) {
    for (const auto& t : mode.terms) {
      if (t.sigma < 0.0 || !std::isfinite(t.sigma)) throw DomainError("NilFunction: sigma must be >= 0");
      if (t.sigma == 0.0 && mode.m[0] != 0)
        throw DomainError("NilFunction: pure Fourier terms are Gamma-invariant only in the m = 0 mode");
    }
  }
  for (auto& existing : modes_)
    if (existing.m == mode.m) {
      existing.coefficient += mode.coefficient;
      existing.terms.insert(existing.terms.end(), mode.terms.begin(), mode.terms.end());
      return *this;
    }
  modes_.push_back(mode);
  std::sort(modes_.begin(), modes_.end(), [](const ModeFunction& a, const ModeFunction& b) { return a.m < b.m; });
  return *this;
}

NilFunction& NilFunction::add(const NilFunction& other) {
  if (!(other.group_ == group_)) throw StructuralError("NilFunction: sum over different groups");
  for (const auto& mode : other.modes_) add(mode);
  return *this;
}

NilFunction NilFunction::scaled(cplx c) const {
  NilFunction f = *this;
  for (auto& mode : f.modes_) {
    mode.coefficient *= c;
    for (auto& t : mode.terms) t.c *= c;
  }
  return f;
}

NilFunction NilFunction::mode(const std::vector<int>& m) const {
  NilFunction f(group_);
  for (const auto& mode : modes_)
    if (mode.m == m) f.modes_.push_back(mode);
  return f;
}

int NilFunction::vertical_dim() const {
  if (group_.dim() == 0) return 0;
  return group_.kind() == GroupKind::Heisenberg3 ? 1 : group_.dim();
}

int NilFunction::band_limit() const {
  int b = 0;
  for (const auto& mode : modes_)
    for (int c : mode.m) b = std::max(b, std::abs(c));
  return b;
}

template <class R>
auto NilFunction::eval(std::span<const R> x) const {
  using C = typename ComplexOf<R>::type;
  C total(0.0);
  if (group_.dim() == 0) {
    for (const auto& mode : modes_) total += C(mode.coefficient);
    return total;
  }
  if (group_.kind() == GroupKind::Abelian) {
    for (const auto& mode : modes_) {
      R theta(0.0);
      for (std::size_t c = 0; c < mode.m.size(); ++c)
        if (mode.m[c] != 0) theta += static_cast<double>(mode.m[c]) * x[c];
      total += cis(theta) * mode.coefficient;
    }
    return total;
  }
  // Heisenberg: e(mz) sum_n psi(x, y + n) e(mnx); the n-range is fixed by the value of y.
  const double yv = value_of(x[1]);
  for (const auto& mode : modes_) {
    const int m = mode.m[0];
    C phi(0.0);
    for (const auto& t : mode.terms) {
      if (t.sigma == 0.0) {
        phi += cis(static_cast<double>(t.j) * x[0] + static_cast<double>(t.k) * x[1]) * t.c;
        continue;
      }
      const double reach = kGaussianCutoff * t.sigma;
      const auto n_lo = static_cast<long>(std::ceil(t.y0 - yv - reach));
      const auto n_hi = static_cast<long>(std::floor(t.y0 - yv + reach));
      const double inv = 1.0 / (2.0 * t.sigma * t.sigma);
      for (long n = n_lo; n <= n_hi; ++n) {
        R u = x[1] + (static_cast<double>(n) - t.y0);
        C phase = cis(static_cast<double>(t.j + m * n) * x[0] + static_cast<double>(t.k) * x[1]);
        phi += phase * promote(gaussian(u, inv)) * t.c;
      }
    }
    total += m == 0 ? phi : cis(static_cast<double>(m) * x[2]) * phi;
  }
  return total;
}

cplx NilFunction::lifted(std::span<const double> x) const { return eval<double>(x); }
ComplexTaylor NilFunction::lifted(std::span<const RealTaylor> x) const { return eval<RealTaylor>(x); }

FiberProjection::FiberProjection(std::shared_ptr<const LiftedFunction> f, std::vector<int> m, int samples)
    : f_(std::move(f)), m_(std::move(m)), samples_(samples) {
  if (samples_ < 1) throw DomainError("vertical_coefficient: need at least one fiber sample");
  const FilteredGroup& G = f_->group();
  fiber_dim_ = G.dim() == 0 ? 0 : G.dim_at(G.length());
  if (static_cast<int>(m_.size()) != fiber_dim_) throw DomainError("vertical_coefficient: frequency has wrong length");
}

template <class R, class C>
C FiberProjection::eval(std::span<const R> x) const {
  const FilteredGroup& G = f_->group();
  const int D = G.dim();
  long count = 1;
  for (int c = 0; c < fiber_dim_; ++c) count *= samples_;
  C total(0.0);
  Coords<R> shift(D, R(0.0)), moved(D);
  std::vector<int> idx(fiber_dim_, 0);
  for (long s = 0; s < count; ++s) {
    long rest = s;
    double phase = 0.0;
    for (int c = 0; c < fiber_dim_; ++c) {
      idx[c] = static_cast<int>(rest % samples_);
      rest /= samples_;
      const double t = static_cast<double>(idx[c]) / samples_;
      shift[D - fiber_dim_ + c] = R(t);
      phase -= static_cast<double>(m_[c]) * t;
    }
    G.multiply<R>(shift.data(), x.data(), moved.data());
    total += f_->lifted(std::span<const R>(moved.data(), moved.size())) * e(phase);
  }
  return total * cplx(1.0 / static_cast<double>(count));
}

cplx FiberProjection::lifted(std::span<const double> x) const { return eval<double, cplx>(x); }
ComplexTaylor FiberProjection::lifted(std::span<const RealTaylor> x) const {
  return eval<RealTaylor, ComplexTaylor>(x);
}

VerticalCoefficient vertical_coefficient(std::shared_ptr<const LiftedFunction> f, const std::vector<int>& m,
                                         int samples) {
  VerticalCoefficient out;
  if (auto nil = std::dynamic_pointer_cast<const NilFunction>(f)) {
    for (const auto& mode : nil->modes()) {
      if (mode.m == m) continue;
      bool congruent = true;
      for (std::size_t c = 0; c < m.size(); ++c)
        if ((mode.m[c] - m[c]) % samples != 0) congruent = false;
      if (congruent) out.aliasing_warning = true;
    }
  }
  out.function = std::make_shared<const FiberProjection>(std::move(f), m, samples);
  return out;
}

CubeTensorFunction::CubeTensorFunction(std::shared_ptr<const LiftedFunction> f, GroupElement a, GroupElement b)
    : f_(std::move(f)), a_(std::move(a)), b_(std::move(b)), cube_(FilteredGroup::cube(f_->group())) {
  if (!(a_.group() == f_->group()) || !(b_.group() == f_->group()))
    throw StructuralError("CubeTensorFunction: shifts over the wrong group");
}

template <class R, class C>
C CubeTensorFunction::eval(std::span<const R> x) const {
  const FilteredGroup& G = f_->group();
  const int d = G.dim();
  if (d == 0) {
    C v = f_->lifted(std::span<const R>());
    return v * conjugate(v);
  }
  Coords<R> u0(d), u1(d), a(d), b(d), p(d), q(d);
  detail::cube_split<R>(cube_.impl(), x.data(), u0.data(), u1.data());
  for (int c = 0; c < d; ++c) {
    a[c] = R(a_[c]);
    b[c] = R(b_[c]);
  }
  G.multiply<R>(a.data(), u0.data(), p.data());
  G.multiply<R>(b.data(), u1.data(), q.data());
  C fp = f_->lifted(std::span<const R>(p.data(), p.size()));
  C fq = f_->lifted(std::span<const R>(q.data(), q.size()));
  return fp * conjugate(fq);
}

cplx CubeTensorFunction::lifted(std::span<const double> x) const { return eval<double, cplx>(x); }
ComplexTaylor CubeTensorFunction::lifted(std::span<const RealTaylor> x) const {
  return eval<RealTaylor, ComplexTaylor>(x);
}

namespace {
double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit_double(rng()); }
int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}
}  // namespace

NilFunction random_heisenberg_function(std::mt19937_64& rng, int modes, int max_mode, int terms_per_mode) {
  if (modes > 2 * max_mode + 1) throw DomainError("random_heisenberg_function: more modes than frequencies");
  NilFunction f(FilteredGroup::heisenberg3());
  std::vector<int> pool;
  for (int m = -max_mode; m <= max_mode; ++m) pool.push_back(m);
  std::shuffle(pool.begin(), pool.end(), rng);
  for (int i = 0; i < modes; ++i) {
    ModeFunction mode;
    mode.m = {pool[i]};
    for (int t = 0; t < terms_per_mode; ++t) {
      HorizontalTerm term;
      term.j = uniform_int(rng, -2, 2);
      term.k = uniform_int(rng, -2, 2);
      term.c = {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
      term.y0 = uniform(rng, 0.0, 1.0);
      term.sigma = uniform(rng, 0.2, 0.35);
      mode.terms.push_back(term);
    }
    f.add(mode);
  }
  return f;
}

NilFunction random_torus_function(const FilteredGroup& group, std::mt19937_64& rng, int modes, int max_freq) {
  NilFunction f(group);
  for (int i = 0; i < modes; ++i) {
    ModeFunction mode;
    for (int c = 0; c < f.vertical_dim(); ++c) mode.m.push_back(uniform_int(rng, -max_freq, max_freq));
    mode.coefficient = {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
    f.add(mode);
  }
  return f;
}

}  // namespace nilergodic

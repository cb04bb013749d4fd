#include "nilergodic/sobolev.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>

#include "nilergodic/parallel.hpp"

namespace nilergodic {

namespace {

constexpr std::size_t kChunk = 128;

double abs_pow(cplx v, double p) { return p == 2.0 ? std::norm(v) : std::pow(std::abs(v), p); }

bool use_taylor(DerivativeMethod m, int dim, int order) {
  const bool fits = dim <= TaylorLayout::kMaxVars && order <= TaylorLayout::kMaxDegree;
  if (m == DerivativeMethod::Taylor && !fits)
    throw UnsupportedError("Taylor derivatives support at most 4 coordinates and order 4");
  return m == DerivativeMethod::Taylor || (m == DerivativeMethod::Automatic && fits);
}

// Flow jets of exp(s_a X_{w_a}) ... exp(s_1 X_{w_1}) g minus g.
void flow_delta(const FilteredGroup& G, std::span<const double> g, std::span<const int> word, Jet* delta) {
  const int D = G.dim();
  const int a = static_cast<int>(word.size());
  Coords<Jet> pt(D), next(D), step(D);
  for (int c = 0; c < D; ++c) pt[c] = Jet(g[c]);
  for (int i = 0; i < a; ++i) {
    for (int c = 0; c < D; ++c) step[c] = Jet(0.0);
    step[word[i]] = Jet::variable(a, i, 0.0);
    G.multiply<Jet>(step.data(), pt.data(), next.data());
    pt = next;
  }
  for (int c = 0; c < D; ++c) {
    delta[c] = pt[c];
    delta[c][0] = 0.0;
  }
}

ComplexTaylor expansion(const LiftedFunction& f, std::span<const double> g, int degree) {
  const int D = static_cast<int>(g.size());
  const TaylorLayout& L = TaylorLayout::get(D, degree);
  Coords<RealTaylor> vars(D);
  for (int c = 0; c < D; ++c) vars[c] = RealTaylor::variable(L, c, g[c]);
  return f.lifted(std::span<const RealTaylor>(vars.data(), vars.size()));
}

cplx central_difference(const LiftedFunction& f, const Coords<double>& g, std::span<const int> word, std::size_t i,
                        double h) {
  if (i == word.size()) return f.lifted(std::span<const double>(g.data(), g.size()));
  const FilteredGroup& G = f.group();
  auto shifted = [&](double s) {
    Coords<double> e(G.dim(), 0.0), out(G.dim());
    e[word[i]] = s;
    G.multiply<double>(e.data(), g.data(), out.data());
    return central_difference(f, out, word, i + 1, h);
  };
  const cplx d1 = (shifted(h) - shifted(-h)) / (2.0 * h);
  const cplx d2 = (shifted(0.5 * h) - shifted(-0.5 * h)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

std::vector<int> word_of(long index, int a, int D) {
  std::vector<int> w(a);
  for (int i = 0; i < a; ++i) {
    w[i] = static_cast<int>(index % D);
    index /= D;
  }
  return w;
}

long ipow(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

void grid_point(long idx, int M, int D, double* x) {
  for (int c = 0; c < D; ++c) {
    x[c] = (static_cast<double>(idx % M) + 0.5) / M;
    idx /= M;
  }
}

}  // namespace

int default_grid(int dim) {
  switch (dim) {
    case 0:
      return 1;
    case 1:
      return 64;
    case 2:
      return 48;
    case 3:
      return 24;
    case 4:
      return 12;
    default:
      return std::max(3, static_cast<int>(std::pow(2.0e4, 1.0 / dim)));
  }
}

cplx word_derivative(const LiftedFunction& f, std::span<const double> g, std::span<const int> word,
                     DerivativeMethod method, double step) {
  const FilteredGroup& G = f.group();
  if (static_cast<int>(g.size()) != G.dim()) throw StructuralError("word_derivative: wrong coordinate count");
  for (int b : word)
    if (b < 0 || b >= G.dim()) throw DomainError("word_derivative: letter out of range");
  const int a = static_cast<int>(word.size());
  if (a == 0) return f.lifted(g);
  if (use_taylor(method, G.dim(), a)) {
    ComplexTaylor T = expansion(f, g, a);
    std::vector<Jet> delta(G.dim());
    flow_delta(G, g, word, delta.data());
    return compose_top(T, delta);
  }
  if (!(step > 0.0)) throw DomainError("word_derivative: step must be positive");
  Coords<double> start(g.begin(), g.end());
  return central_difference(f, start, word, 0, step);
}

SobolevNorm sobolev_norm(const LiftedFunction& f, int j, double p, const QuadratureOptions& opts) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("sobolev_norm: p must lie in [1, inf)");
  if (j < 0) throw DomainError("sobolev_norm: order must be >= 0");
  const FilteredGroup& G = f.group();
  const int D = G.dim();
  const int M = opts.grid > 0 ? opts.grid : default_grid(D);
  if (D == 0) j = 0;
  const bool taylor = j > 0 && use_taylor(opts.method, D, j);
  if (!taylor && j > 0 && !(opts.step > 0.0)) throw DomainError("sobolev_norm: step must be positive");

  std::vector<std::vector<std::vector<int>>> words(j + 1);
  for (int a = 1; a <= j; ++a)
    for (long w = 0; w < ipow(D, a); ++w) words[a].push_back(word_of(w, a, D));

  const long points = ipow(M, D);
  const std::size_t chunks = (static_cast<std::size_t>(points) + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> partial(chunks);
  parallel_for(chunks, [&](std::size_t chunk) {
    std::vector<double> sums(j + 1, 0.0);
    std::vector<Jet> delta(D);
    std::vector<double> x(D);
    const long lo = static_cast<long>(chunk * kChunk);
    const long hi = std::min<long>(points, lo + static_cast<long>(kChunk));
    for (long idx = lo; idx < hi; ++idx) {
      grid_point(idx, M, D, x.data());
      std::span<const double> g(x.data(), x.size());
      if (taylor) {
        ComplexTaylor T = expansion(f, g, j);
        sums[0] += abs_pow(T.value(), p);
        for (int a = 1; a <= j; ++a)
          for (const auto& w : words[a]) {
            flow_delta(G, g, w, delta.data());
            sums[a] += abs_pow(compose_top(T, delta), p);
          }
      } else {
        sums[0] += abs_pow(f.lifted(g), p);
        Coords<double> start(x.begin(), x.end());
        for (int a = 1; a <= j; ++a)
          for (const auto& w : words[a]) sums[a] += abs_pow(central_difference(f, start, w, 0, opts.step), p);
      }
    }
    partial[chunk] = std::move(sums);
  });

  SobolevNorm out;
  out.j = j;
  out.p = p;
  out.grid = M;
  out.order_sums.assign(j + 1, 0.0);
  for (const auto& s : partial)
    for (int a = 0; a <= j; ++a) out.order_sums[a] += s[a];
  double total = 0.0;
  for (auto& s : out.order_sums) {
    s /= static_cast<double>(points);
    total += s;
  }
  out.value = std::pow(total, 1.0 / p);
  if (!std::isfinite(out.value)) throw NumericGuardError("sobolev_norm: non-finite result");
  return out;
}

double lp_norm(const LiftedFunction& f, double p, const QuadratureOptions& opts) {
  return sobolev_norm(f, 0, p, opts).value;
}

cplx haar_integral(const LiftedFunction& f, const QuadratureOptions& opts) {
  const int D = f.group().dim();
  const int M = opts.grid > 0 ? opts.grid : default_grid(D);
  const long points = ipow(M, D);
  const std::size_t chunks = (static_cast<std::size_t>(points) + kChunk - 1) / kChunk;
  std::vector<cplx> partial(chunks);
  parallel_for(chunks, [&](std::size_t chunk) {
    double x[kMaxDim];
    cplx s = 0.0;
    const long lo = static_cast<long>(chunk * kChunk);
    const long hi = std::min<long>(points, lo + static_cast<long>(kChunk));
    for (long idx = lo; idx < hi; ++idx) {
      grid_point(idx, M, D, x);
      s += f.lifted(std::span<const double>(x, D));
    }
    partial[chunk] = s;
  });
  cplx total = 0.0;
  for (const auto& s : partial) total += s;
  return total / static_cast<double>(points);
}

double sup_norm(const LiftedFunction& f, const QuadratureOptions& opts) {
  const int D = f.group().dim();
  if (D == 0) return std::abs(f.lifted(std::span<const double>()));
  const int M = opts.grid > 0 ? opts.grid : default_grid(D);
  const long points = ipow(M, D);
  std::vector<double> mags(points);
  parallel_for(static_cast<std::size_t>(points), [&](std::size_t idx) {
    double x[kMaxDim];
    grid_point(static_cast<long>(idx), M, D, x);
    mags[idx] = std::abs(f.lifted(std::span<const double>(x, D)));
  });
  std::vector<long> order(points);
  for (long i = 0; i < points; ++i) order[i] = i;
  const long top = std::min<long>(8, points);
  std::partial_sort(order.begin(), order.begin() + top, order.end(),
                    [&](long a, long b) { return mags[a] > mags[b] || (mags[a] == mags[b] && a < b); });
  double best = mags[order[0]];
  const double h = 1.0 / M;
  for (long t = 0; t < top; ++t) {
    std::vector<double> x(D);
    grid_point(order[t], M, D, x.data());
    for (int sweep = 0; sweep < 3; ++sweep)
      for (int c = 0; c < D; ++c) {
        auto neg = [&](double s) {
          std::vector<double> y = x;
          y[c] = s;
          return -std::abs(f.lifted(std::span<const double>(y)));
        };
        auto r = boost::math::tools::brent_find_minima(neg, x[c] - h, x[c] + h, 40);
        if (-r.second > -neg(x[c])) x[c] = r.first;
      }
    best = std::max(best, std::abs(f.lifted(std::span<const double>(x))));
  }
  return best;
}

BoundCheck bessel_check(const NilFunction& f, double p, const QuadratureOptions& opts) {
  if (!(p >= 2.0)) throw DomainError("bessel_check: requires p >= 2");
  BoundCheck out;
  for (const auto& mode : f.modes()) out.lhs += std::pow(lp_norm(f.mode(mode.m), p, opts), p);
  out.rhs = std::pow(lp_norm(f, p, opts), p);
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
  return out;
}

BoundCheck vertical_series_sobolev_check(const NilFunction& f, int j, double p, const QuadratureOptions& opts) {
  if (!(p >= 2.0)) throw DomainError("vertical_series_sobolev_check: requires p >= 2");
  BoundCheck out;
  for (const auto& mode : f.modes()) out.lhs += sobolev_norm(f.mode(mode.m), j, p, opts).value;
  out.rhs = sobolev_norm(f, j + f.vertical_dim(), p, opts).value;
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
  return out;
}

EmbeddingCheck sobolev_embedding_check(const NilFunction& f, double p, const QuadratureOptions& opts) {
  if (!f.is_vertical_character()) throw DomainError("sobolev_embedding_check: input must be a single vertical mode");
  EmbeddingCheck out;
  out.order = f.group().dim() - f.vertical_dim();
  out.sup = sup_norm(f, opts);
  out.norm = sobolev_norm(f, out.order, p, opts).value;
  out.ratio = out.norm > 0.0 ? out.sup / out.norm : 0.0;
  return out;
}

std::shared_ptr<const CubeTensorFunction> derivative_tensor(std::shared_ptr<const LiftedFunction> f,
                                                            const PolySeq& g, std::int64_t k) {
  if (!(g.group() == f->group())) throw StructuralError("derivative_tensor: sequence over the wrong group");
  return std::make_shared<const CubeTensorFunction>(std::move(f), g.evaluate_reduced(k), g.evaluate_reduced(0));
}

double derivative_identity_check(std::shared_ptr<const LiftedFunction> f, const PolySeq& g, std::int64_t k,
                                 std::int64_t n0, std::int64_t n1) {
  auto tensor = derivative_tensor(f, g, k);
  double worst = 0.0;
  for (std::int64_t n = n0; n <= n1; ++n) {
    const cplx lhs = f->lifted(g.evaluate_reduced(n + k).coords()) * std::conj(f->lifted(g.evaluate_reduced(n).coords()));
    const cplx rhs = tensor->evaluate(cube_sequence_element(g, k, n));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

BoundCheck tensor_sobolev_check(std::shared_ptr<const LiftedFunction> f, const PolySeq& g, std::int64_t k, int j,
                                double p, const QuadratureOptions& opts) {
  BoundCheck out;
  const double base = sobolev_norm(*f, j, 2.0 * p, opts).value;
  out.lhs = sobolev_norm(*derivative_tensor(f, g, k), j, p, opts).value;
  out.rhs = base * base;
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
  return out;
}

}  // namespace nilergodic

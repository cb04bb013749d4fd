#include "nilergodic/taylor.hpp"

#include <map>
#include <memory>

namespace nilergodic {

namespace {

std::unique_ptr<TaylorLayout> build_layout(int vars, int degree) {
  auto L = std::make_unique<TaylorLayout>();
  L->vars = vars;
  L->degree = degree;
  std::map<std::array<int, 4>, int> index;
  // Graded enumeration: all monomials of total degree t, lexicographic within t.
  for (int t = 0; t <= degree; ++t) {
    std::array<int, 4> e{};
    auto rec = [&](auto&& self, int v, int left) -> void {
      if (v == vars - 1 || vars == 0) {
        if (vars > 0) e[v] = left;
        if (vars == 0 && left != 0) return;
        index[e] = static_cast<int>(L->exponents.size());
        L->exponents.push_back(e);
        L->total_degree.push_back(t);
        if (vars > 0) e[v] = 0;
        return;
      }
      for (int x = left; x >= 0; --x) {
        e[v] = x;
        self(self, v + 1, left - x);
      }
      e[v] = 0;
    };
    rec(rec, 0, t);
  }
  L->size = static_cast<int>(L->exponents.size());
  L->parent.assign(L->size, -1);
  L->parent_var.assign(L->size, -1);
  L->variable.assign(vars, -1);
  for (int k = 1; k < L->size; ++k) {
    auto e = L->exponents[k];
    int v = 0;
    while (e[v] == 0) ++v;
    e[v] -= 1;
    L->parent[k] = index.at(e);
    L->parent_var[k] = v;
    if (L->total_degree[k] == 1) L->variable[v] = k;
  }
  for (int i = 0; i < L->size; ++i)
    for (int j = 0; j < L->size; ++j) {
      if (L->total_degree[i] + L->total_degree[j] > degree) continue;
      std::array<int, 4> e{};
      for (int v = 0; v < 4; ++v) e[v] = L->exponents[i][v] + L->exponents[j][v];
      L->product.push_back({i, j, index.at(e)});
    }
  return L;
}

}  // namespace

const TaylorLayout& TaylorLayout::get(int vars, int degree) {
  if (vars < 0 || vars > kMaxVars || degree < 0 || degree > kMaxDegree)
    throw UnsupportedError("Taylor layout limited to 4 variables and degree 4");
  static const auto table = [] {
    std::array<std::array<std::unique_ptr<TaylorLayout>, kMaxDegree + 1>, kMaxVars + 1> t;
    for (int v = 0; v <= kMaxVars; ++v)
      for (int d = 0; d <= kMaxDegree; ++d) t[v][d] = build_layout(v, d);
    return t;
  }();
  return *table[vars][degree];
}

ComplexTaylor to_complex(const RealTaylor& x) {
  ComplexTaylor r(cplx(x.value()));
  if (!x.layout()) return r;
  r = ComplexTaylor::zero(*x.layout());
  for (int k = 0; k < x.size(); ++k) r[k] = x[k];
  return r;
}

ComplexTaylor conj(const ComplexTaylor& x) {
  ComplexTaylor r = x;
  for (int k = 0; k < x.size(); ++k) r[k] = std::conj(x[k]);
  return r;
}

ComplexTaylor cis2pi(const RealTaylor& x) {
  cplx base = e(x.value());
  if (!x.layout()) return ComplexTaylor(base);
  ComplexTaylor n = to_complex(x);
  n[0] = 0.0;
  n *= cplx(0.0, kTwoPi);
  n[0] = 0.0;
  ComplexTaylor r = exp(n);
  return r * base;
}

cplx compose_top(const ComplexTaylor& f, std::span<const Jet> delta) {
  int order = 0;
  for (const Jet& d : delta) order = std::max(order, d.order());
  if (order == 0 || !f.layout()) return order == 0 ? f.value() : cplx(0.0);
  const TaylorLayout& L = *f.layout();
  if (static_cast<int>(delta.size()) != L.vars) throw StructuralError("compose_top: variable count mismatch");
  if (order > L.degree) throw DomainError("compose_top: Taylor degree below derivative order");
  const unsigned full = (1u << order) - 1;
  std::array<Jet, Taylor<cplx>::kCapacity> P;
  P[0] = Jet(1.0);
  cplx acc = 0.0;
  for (int k = 1; k < L.size; ++k) {
    if (L.total_degree[k] > order) break;
    P[k] = P[L.parent[k]] * delta[L.parent_var[k]];
    acc += f[k] * P[k][full];
  }
  return acc;
}

}  // namespace nilergodic

#include "nilergodic/polyseq.hpp"

#include <algorithm>

namespace nilergodic {

namespace {

using LCoords = Coords<long double>;

LCoords extend(const GroupElement& g) { return LCoords(g.coords().begin(), g.coords().end()); }

GroupElement narrow(const FilteredGroup& G, const LCoords& c) {
  Coords<double> d(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) d[i] = static_cast<double>(c[i]);
  return {G, d};
}

LCoords lmul(const FilteredGroup& G, const LCoords& a, const LCoords& b) {
  LCoords out(a.size());
  G.multiply<long double>(a.data(), b.data(), out.data());
  return out;
}

LCoords linv(const FilteredGroup& G, const LCoords& a) {
  LCoords out(a.size());
  G.inverse<long double>(a.data(), out.data());
  return out;
}

LCoords lreduce(const FilteredGroup& G, const LCoords& a) {
  LCoords k(a.size()), gamma(a.size());
  G.reduce<long double>(a.data(), k.data(), gamma.data());
  return k;
}

std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

PolySeq::PolySeq(FilteredGroup group, std::vector<GroupElement> taylor_coeffs)
    : group_(std::move(group)), coeffs_(std::move(taylor_coeffs)) {
  if (static_cast<int>(coeffs_.size()) > group_.length() + 1)
    throw DomainError("PolySeq: more Taylor coefficients than the filtration length allows");
  while (static_cast<int>(coeffs_.size()) < group_.length() + 1) coeffs_.push_back(identity(group_));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (!(coeffs_[i].group() == group_)) throw StructuralError("PolySeq: coefficient over a different group");
    if (!in_subgroup(coeffs_[i], static_cast<int>(i)))
      throw DomainError("PolySeq: coefficient a_" + std::to_string(i) + " is not in G_" + std::to_string(i));
  }
}

PolySeq PolySeq::constant(const GroupElement& c) { return PolySeq(c.group(), {c}); }

PolySeq PolySeq::linear(const GroupElement& a) {
  if (a.group().length() == 0) return constant(a);
  return PolySeq(a.group(), {identity(a.group()), a});
}

Coords<long double> PolySeq::evaluate_extended(std::int64_t n) const {
  LCoords acc = extend(coeffs_.front());
  LCoords term(acc.size());
  for (std::size_t j = 1; j < coeffs_.size(); ++j) {
    int128 c = binomial(n, static_cast<int>(j));
    if (c == 0) continue;
    LCoords a = extend(coeffs_[j]);
    group_.power<long double>(a.data(), c, term.data());
    acc = lmul(group_, acc, term);
  }
  return acc;
}

GroupElement PolySeq::evaluate(std::int64_t n) const { return narrow(group_, evaluate_extended(n)); }

GroupElement PolySeq::evaluate_reduced(std::int64_t n) const {
  return narrow(group_, lreduce(group_, evaluate_extended(n)));
}

PolySeq PolySeq::left_multiply(const GroupElement& c) const {
  std::vector<GroupElement> a = coeffs_;
  a.front() = c * a.front();
  return PolySeq(group_, std::move(a));
}

Sequence as_sequence(const PolySeq& g) {
  return [g](std::int64_t n) { return g.evaluate(n); };
}

Sequence discrete_derivative(Sequence g, std::int64_t k) {
  return [g = std::move(g), k](std::int64_t n) { return inverse(g(n)) * g(n + k); };
}

Sequence discrete_derivative(const PolySeq& g, std::int64_t k) { return discrete_derivative(as_sequence(g), k); }

PolynomialityReport check_polynomiality(const Sequence& g, const FilteredGroup& group, int samples,
                                        std::mt19937_64& rng, std::int64_t range, std::int64_t kmax, double tol) {
  PolynomialityReport r;
  const int l = group.length();
  for (int s = 0; s < samples; ++s) {
    std::int64_t n = uniform_int(rng, -range, range);
    Sequence d = g;
    for (int j = 1; j <= l + 1; ++j) {
      d = discrete_derivative(d, uniform_int(rng, -kmax, kmax));
      GroupElement v = d(n);
      const int lead = group.dim() - group.dim_at(j);
      for (int c = 0; c < lead; ++c) {
        double a = std::fabs(v[c]);
        if (j <= l)
          r.worst_membership = std::max(r.worst_membership, a);
        else
          r.worst_identity = std::max(r.worst_identity, a);
      }
    }
  }
  r.polynomial = r.worst_membership <= tol && r.worst_identity <= tol;
  return r;
}

CubeElement cube_sequence_pair(const PolySeq& g, std::int64_t k, std::int64_t n) {
  const FilteredGroup& G = g.group();
  auto component = [&](std::int64_t base, std::int64_t m) {
    LCoords gb = g.evaluate_extended(base);
    LCoords fb = lreduce(G, gb);
    LCoords v = lmul(G, lmul(G, linv(G, fb), g.evaluate_extended(m)), lmul(G, linv(G, gb), fb));
    return narrow(G, v);
  };
  return {component(k, n + k), component(0, n)};
}

GroupElement cube_sequence_element(const PolySeq& g, std::int64_t k, std::int64_t n) {
  return from_pair(cube_filtration(g.group()), cube_sequence_pair(g, k, n));
}

std::function<CubeElement(std::int64_t)> cube_sequence(const PolySeq& g, std::int64_t k) {
  return [g, k](std::int64_t n) { return cube_sequence_pair(g, k, n); };
}

Sequence cube_sequence_as_sequence(const PolySeq& g, std::int64_t k) {
  return [g, k](std::int64_t n) { return cube_sequence_element(g, k, n); };
}

}  // namespace nilergodic

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "nilergodic/malcev.hpp"

namespace nilergodic {

/// g(n) = a_0 * a_1^{C(n,1)} * ... * a_l^{C(n,l)} with a_i in G_i.
class PolySeq {
 public:
  PolySeq() = default;
  /// Missing trailing coefficients are the identity; more than l+1 is an error.
  PolySeq(FilteredGroup group, std::vector<GroupElement> taylor_coeffs);
  static PolySeq constant(const GroupElement& c);
  /// n -> a^n.
  static PolySeq linear(const GroupElement& a);

  const FilteredGroup& group() const { return group_; }
  const std::vector<GroupElement>& taylor_coeffs() const { return coeffs_; }

  GroupElement evaluate(std::int64_t n) const;
  /// Left-to-right product in extended precision, then {g(n)}.
  GroupElement evaluate_reduced(std::int64_t n) const;
  Coords<long double> evaluate_extended(std::int64_t n) const;

  /// n -> c * g(n), again in Taylor form.
  PolySeq left_multiply(const GroupElement& c) const;

 private:
  FilteredGroup group_;
  std::vector<GroupElement> coeffs_;
};

using Sequence = std::function<GroupElement(std::int64_t)>;

Sequence as_sequence(const PolySeq& g);
/// n -> g(n)^{-1} g(n+k).
Sequence discrete_derivative(Sequence g, std::int64_t k);
Sequence discrete_derivative(const PolySeq& g, std::int64_t k);

struct PolynomialityReport {
  bool polynomial = true;
  double worst_membership = 0.0;  // max |leading coordinate| of the j-th derivative outside G_j
  double worst_identity = 0.0;    // max |coordinate| of the (l+1)-th derivative
};

/// Samples n in [-range, range] and shifts k_1..k_{l+1} in [-kmax, kmax]; the
/// j-th iterated derivative must lie in G_j and the (l+1)-th must be the identity.
PolynomialityReport check_polynomiality(const Sequence& g, const FilteredGroup& group, int samples,
                                        std::mt19937_64& rng, std::int64_t range = 100, std::int64_t kmax = 20,
                                        double tol = 1e-9);

/// The conjugated cube sequence, computed verbatim:
/// ({g(k)}^{-1} g(n+k) g(k)^{-1} {g(k)}, {g(0)}^{-1} g(n) g(0)^{-1} {g(0)}).
CubeElement cube_sequence_pair(const PolySeq& g, std::int64_t k, std::int64_t n);
/// Same point in Mal'cev coordinates of cube_filtration(G) (the G_2 defect of
/// g0^{-1} g1, pure rounding noise, is projected away).
GroupElement cube_sequence_element(const PolySeq& g, std::int64_t k, std::int64_t n);
std::function<CubeElement(std::int64_t)> cube_sequence(const PolySeq& g, std::int64_t k);
/// The cube sequence itself as a polynomial sequence on cube_filtration(G), for the witness test.
Sequence cube_sequence_as_sequence(const PolySeq& g, std::int64_t k);

}  // namespace nilergodic

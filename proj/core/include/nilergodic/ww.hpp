#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nilergodic/polyseq.hpp"
#include "nilergodic/sobolev.hpp"
#include "nilergodic/systems.hpp"
#include "nilergodic/uniformity.hpp"

namespace nilergodic {

/// k = sum_{r=1}^{l} (d_r - d_{r+1}) C(l, r-1) with d_{l+1} = 0.
int sobolev_order(const FilteredGroup& G);

enum class WeightKind { LinearPhases, PolynomialPhases, Nilsequences, BracketPolynomial, OrbitWeights };
enum class Normalization { SupNorm, Sobolev };

std::string to_string(WeightKind k);
std::string to_string(Normalization n);

struct NilWeight {
  PolySeq g;
  std::shared_ptr<const LiftedFunction> F;
};

/// A finite, declared family of bounded weight sequences w_i(n).
class WeightFamily {
 public:
  /// w_i(n) = e(n theta_i). An empty list means every lambda on the circle (FFT sup).
  static WeightFamily linear_phases(std::vector<double> thetas);
  static WeightFamily all_linear_phases() { return linear_phases({}); }
  /// w_i(n) = e(sum_j c_ij n^j), coefficients listed from the constant term up.
  static WeightFamily polynomial_phases(std::vector<std::vector<double>> coefficients);
  /// w_i(n) = F_i(g_i(n) Gamma), normalized by ||F_i||_{W^{k, 2^l}} of the common group.
  /// declared_k < 0 takes k from sobolev_order; any other mismatch is a ConfigError.
  static WeightFamily nilsequences(std::vector<NilWeight> members, int declared_k = -1,
                                   const QuadratureOptions& quadrature = {});
  /// w(n) = e([n alpha] n beta).
  static WeightFamily bracket(double alpha, double beta);
  /// w(n) = phi(T^n x0).
  static WeightFamily orbit_weights(const DynSystem& sys, const Point& x0, const Observable& phi);

  WeightKind kind() const { return kind_; }
  Normalization normalization() const { return normalization_; }
  bool is_full_linear() const { return kind_ == WeightKind::LinearPhases && thetas_.empty(); }
  std::size_t size() const;
  std::string label(std::size_t i) const;
  std::string descriptor() const;
  /// w_i(n) for n in [n0, n1).
  std::vector<cplx> sequence(std::size_t i, std::int64_t n0, std::int64_t n1) const;
  /// Divisor of member i: sup |w_i| or the Sobolev norm of F_i (cached).
  double norm(std::size_t i) const;
  int order() const { return k_; }
  int exponent() const { return p_; }
  const std::vector<NilWeight>& nil_members() const { return nil_; }

 private:
  WeightKind kind_ = WeightKind::LinearPhases;
  Normalization normalization_ = Normalization::SupNorm;
  std::vector<double> thetas_;
  std::vector<std::vector<double>> poly_;
  std::vector<NilWeight> nil_;
  int k_ = 0;
  int p_ = 2;
  std::shared_ptr<std::vector<double>> norms_;
  double alpha_ = 0.0, beta_ = 0.0;
  std::optional<DynSystem> sys_;
  Point x0_;
  std::optional<Observable> phi_;
};

/// Per-window values; `members[i][j]` is member i at window j when reported.
struct WeightedAverageReport {
  std::vector<std::int64_t> N;
  std::vector<double> values;
  std::vector<cplx> averages;                 // single-weight runs
  std::vector<double> offgrid_bound;          // FFT sup runs
  std::vector<std::vector<double>> members;   // family runs, normalized
  std::vector<std::size_t> argmax;
  std::string normalization;
  std::string family;
};

/// (1/|Phi_j|) sum_{n in Phi_j} w(n) f(n); both sequences have index 0 at time `origin`.
WeightedAverageReport weighted_average(const FiniteSequence& f_orbit, const std::vector<cplx>& w, std::int64_t origin,
                                       const FolnerSeq& phi);

/// sup over all lambda of |(1/N) sum_{n<N} f(b+n) lambda^n| per interval window: the maximum of a
/// zero-padded DFT (length padding*N) refined by Brent steps; off-grid bound N (1/(padding N)) pi ||f||_inf.
WeightedAverageReport uniform_sup_linear(const FiniteSequence& f_orbit, std::int64_t origin, const FolnerSeq& phi,
                                          int padding = 4);

/// max over the family of |weighted average| / norm(i), per window.
WeightedAverageReport family_sup(const FiniteSequence& f_orbit, std::int64_t origin, const FolnerSeq& phi,
                                 const WeightFamily& family);
/// family_sup for a nilsequence family (Sobolev normalization).
WeightedAverageReport uniform_sup_nilsequence(const FiniteSequence& f_orbit, std::int64_t origin, const FolnerSeq& phi,
                                              const WeightFamily& family);

struct VdcReport {
  double lhs = 0.0;        // |(1/N) sum_{n in W} u_n|^2
  double rhs_main = 0.0;   // |(1/K^2) sum_{|h|<K} (K-|h|) (1/N) sum_{n in W} <u_n, u_{n+h}>|
  double remainder = 0.0;  // 2 e2 + 2 e1^2 with e1 = C(K-1)/N, e2 = C^2(K-1)/N
  double slack = 0.0;      // 2 rhs_main + remainder - lhs
};

/// Finite van der Corput inequality on the window [n0, n0 + N) of a C^m-valued sequence
/// (u[n] is the vector at time n). Needs u on [n0, n0 + N + K - 1) and |u_n| <= C.
VdcReport van_der_corput_check(const std::vector<std::vector<cplx>>& u, std::int64_t n0, std::int64_t N,
                               std::int64_t K, double C);
VdcReport van_der_corput_check(const std::vector<cplx>& u, std::int64_t n0, std::int64_t N, std::int64_t K, double C);

/// Test inputs with |u_n| <= 1, cycling by index through four shapes: uniform noise in the unit disk,
/// a near-resonant character e(n theta) with |theta| < 2/length, a quadratic phase, and an even mix of
/// character and noise. Only successive draws of rng are used.
std::vector<cplx> random_bounded_sequence(std::mt19937_64& rng, std::int64_t length, int shape);
std::string bounded_sequence_shape(int shape);

struct MainEstimateReport {
  std::vector<std::int64_t> N;
  std::vector<double> numerator;    // sup-normalized weighted average
  std::vector<double> uniformity;   // orbit U^{l+1} estimate on the window
  std::vector<double> ratio;        // numerator / (uniformity + eps)
  double eps = 0.05;
  int l = 1;
  double ceiling = 0.0;             // max ratio
};

/// Windows must be intervals [b, b + N) inside the sample.
MainEstimateReport main_estimate_ratio(const FiniteSequence& f_orbit, std::int64_t origin, const FolnerSeq& phi,
                                       const WeightFamily& family, int l, double eps = 0.05,
                                       const OrbitEstimateOptions& ghk = {});

/// Integer polynomial p(n) = sum_j c_j n^j, coefficients from the constant term up.
using IntPoly = std::vector<std::int64_t>;
IntPoly parse_int_poly(const std::string& text);  // "n^2+3n-1", "2*n", "n^3"
std::string to_string(const IntPoly& p);

struct MultipleAverageReport {
  std::vector<std::int64_t> N;
  std::vector<double> norms;         // ||A_N||_{L^2(grid)}
  std::vector<double> cauchy;        // ||A_{N_{j+1}} - A_{N_j}||, grid L^2
  std::vector<double> cauchy_exact;  // same difference in L^2(Y) by Parseval
  double slope = 0.0;                // least-squares slope of log cauchy against log N
  bool decreasing = false;           // slope < 0, last < first, last < tol
  int grid = 512;
};

/// A_N(y) = (1/|Phi_N|) sum_{n in Phi_N} w(n) prod_i f_i(S^{p_i(n)} y) on a rotation (dim <= 2) or
/// Anzai target; f_i are characters, w has index 0 at time 0. Degree > 4 or more than 3 factors is unsupported.
MultipleAverageReport weighted_multiple_average(const std::vector<cplx>& w, const DynSystem& target,
                                                const std::vector<IntPoly>& polys,
                                                const std::vector<Observable>& observables, const FolnerSeq& phi,
                                                int grid = 512, double tol = 0.05);

}  // namespace nilergodic

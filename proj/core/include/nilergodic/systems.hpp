#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "nilergodic/malcev.hpp"
#include "nilergodic/nilfunction.hpp"
#include "nilergodic/uniformity.hpp"

namespace nilergodic {

using Point = std::vector<double>;

enum class SystemKind { Rotation, AnzaiSkew, HeisenbergNil, Product };

/// Invertible Haar-preserving map on a torus or the Heisenberg nilmanifold.
/// Points are coordinates in [0,1) (fundamental-domain coordinates for nilsystems).
class DynSystem {
 public:
  static DynSystem rotation(std::vector<double> alpha);
  static DynSystem anzai(double alpha);  // (x, y) -> (x + alpha, y + x)
  static DynSystem heisenberg(const GroupElement& a);  // g Gamma -> a g Gamma
  static DynSystem product(std::vector<DynSystem> parts);
  /// "rotation(a,...)", "anzai(a)", "heisenberg(x,y,z)", "product(s1;s2;...)"; reals accept sqrt() and pi.
  static DynSystem parse(const std::string& descriptor);

  SystemKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::vector<double>& alpha() const { return alpha_; }
  const std::vector<DynSystem>& parts() const { return parts_; }
  std::string descriptor() const;

  Point reduce(const Point& x) const;
  Point step(const Point& x) const;
  Point inverse_step(const Point& x) const;
  /// T^n x by closed forms; exact phase arithmetic on tori, long double on the nilmanifold.
  Point power(const Point& x, std::int64_t n) const;
  Point origin() const { return Point(dim_, 0.0); }

 private:
  SystemKind kind_ = SystemKind::Rotation;
  int dim_ = 0;
  std::vector<double> alpha_;
  GroupElement a_;
  std::vector<DynSystem> parts_;
};

/// f(x) = c e(m . x) on the coordinates of the state, or a lifted function of the
/// nilmanifold coordinates (the state of a HeisenbergNil system).
class Observable {
 public:
  static Observable character(std::vector<int> m, cplx c = 1.0);
  static Observable constant(int dim, cplx c);
  static Observable nil(std::shared_ptr<const LiftedFunction> f);
  /// "char(m1,m2,...)" or "const(c)"; frequencies index the state coordinates.
  static Observable parse(const std::string& descriptor, int dim);

  cplx operator()(const Point& x) const;
  bool is_character() const { return !nil_; }
  const std::vector<int>& frequency() const { return m_; }
  cplx coefficient() const { return c_; }
  /// Space mean: exact for characters, grid quadrature for lifted functions.
  cplx integral() const;
  /// Sup of |f|: exact for characters, refined grid maximum otherwise.
  double sup() const;
  double l1_norm() const;
  std::string descriptor() const;

 private:
  std::vector<int> m_;
  cplx c_ = 1.0;
  std::shared_ptr<const LiftedFunction> nil_;
};

enum class FolnerKind { Intervals, ShiftedIntervals };

/// Windows [b_j, b_j + N_j) in Z.
struct FolnerSeq {
  FolnerKind kind = FolnerKind::Intervals;
  std::vector<std::int64_t> starts;
  std::vector<std::int64_t> lengths;

  static FolnerSeq intervals(std::vector<std::int64_t> lengths);
  static FolnerSeq shifted(std::vector<std::int64_t> starts, std::vector<std::int64_t> lengths);
  std::size_t size() const { return lengths.size(); }
  std::int64_t lo() const;  // min start
  std::int64_t hi() const;  // max end
};

/// "a:b:x2" (geometric, factor 2), "a:b:+d" (arithmetic) or "n1,n2,...". Must be increasing.
std::vector<std::int64_t> parse_schedule(const std::string& text);

enum class OrbitMode { Iterate, ClosedForm };

std::vector<Point> orbit_points(const DynSystem& sys, const Point& x0, std::int64_t n0, std::int64_t n1,
                                OrbitMode mode = OrbitMode::Iterate);
/// f(T^n x0) for n in [n0, n1), an OrbitSample sequence (index 0 is n0).
FiniteSequence orbit(const DynSystem& sys, const Point& x0, const Observable& f, std::int64_t n0, std::int64_t n1,
                     OrbitMode mode = OrbitMode::Iterate);

struct TemperednessReport {
  std::vector<double> ratios;            // ratios[n] = |U_{k<=n+1} Phi_k^{-1} Phi_{n+2}| / |Phi_{n+2}| (0-based)
  std::vector<std::int64_t> union_sizes;
  double C_estimate = 0.0;               // running max
  double declared_C = 2.0;
  bool ok = true;
};
/// Exact union cardinalities of the difference intervals, prefixes up to `upto` sets.
TemperednessReport temperedness_check(const FolnerSeq& phi, std::size_t upto, double declared_C = 2.0);

struct AverageReport {
  std::vector<std::int64_t> N;
  std::vector<cplx> averages;
  cplx reference = 0.0;
};

/// Averages of `values` (index 0 = time `origin`) over each window of phi.
AverageReport window_averages(const FiniteSequence& values, std::int64_t origin, const FolnerSeq& phi);
AverageReport birkhoff_average(const DynSystem& sys, const Point& x0, const Observable& f, const FolnerSeq& phi);

struct MaximalTail {
  std::vector<double> lambda;
  std::vector<double> tail;   // fraction of x0 with max_j |avg_j| > lambda
  std::vector<double> bound;  // ||f||_1 / lambda
};
MaximalTail maximal_function_diagnostic(const DynSystem& sys, const Observable& f, const FolnerSeq& phi,
                                        const std::vector<Point>& x0s, const std::vector<double>& lambdas);

std::vector<Point> uniform_sample(const DynSystem& sys, std::mt19937_64& rng, std::size_t count);

/// max over 0 < |m|_inf <= max_freq of |mean_i e(m . T x_i)|; the Haar moments vanish, so this is
/// the push-forward defect, of order 1/sqrt(sample size) for a preserving map.
double measure_preservation_defect(const DynSystem& sys, const std::vector<Point>& sample, int max_freq = 3);

}  // namespace nilergodic

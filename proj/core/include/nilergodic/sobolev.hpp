#pragma once

#include <memory>
#include <span>
#include <vector>

#include "nilergodic/nilfunction.hpp"
#include "nilergodic/polyseq.hpp"

namespace nilergodic {

enum class DerivativeMethod {
  Automatic,          // Taylor when dim <= 4 and order <= 4, else central differences
  Taylor,             // exact: jets of the flow composed with the Taylor expansion of F
  CentralDifference,  // nested central differences, one Richardson level
};

struct QuadratureOptions {
  int grid = 0;  // midpoints per dimension; 0 selects default_grid(dim)
  DerivativeMethod method = DerivativeMethod::Automatic;
  double step = 1e-4;
};

/// Midpoints per dimension used when QuadratureOptions::grid is 0.
int default_grid(int dim);

struct SobolevNorm {
  int j = 0;
  double p = 2.0;
  double value = 0.0;
  /// order_sums[a] = sum over words w of length a of ||X_w F||_p^p.
  std::vector<double> order_sums;
  int grid = 0;
};

/// ||F||_{W^{j,p}} = (sum_{a <= j} sum_{|w| = a} ||X_w F||_p^p)^{1/p}, with X_b the
/// right-invariant field of the b-th coordinate axis and Haar = Lebesgue on [0,1)^d.
SobolevNorm sobolev_norm(const LiftedFunction& f, int j, double p, const QuadratureOptions& opts = {});
double lp_norm(const LiftedFunction& f, double p, const QuadratureOptions& opts = {});
/// Midpoint-rule Haar integral over the fundamental domain.
cplx haar_integral(const LiftedFunction& f, const QuadratureOptions& opts = {});

/// X_{w_1} ... X_{w_a} F at lifted coordinates g, i.e. the mixed derivative
/// d^a/ds_1..ds_a of F(exp(s_a X_{w_a}) ... exp(s_1 X_{w_1}) g) at s = 0.
cplx word_derivative(const LiftedFunction& f, std::span<const double> g, std::span<const int> word,
                     DerivativeMethod method = DerivativeMethod::Automatic, double step = 1e-4);

/// Grid maximum of |F| followed by coordinate-wise Brent refinement at the best grid points.
double sup_norm(const LiftedFunction& f, const QuadratureOptions& opts = {});

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// lhs = sum_m ||F_m||_p^p, rhs = ||F||_p^p. Requires p >= 2.
BoundCheck bessel_check(const NilFunction& f, double p, const QuadratureOptions& opts = {});

/// lhs = sum_m ||F_m||_{W^{j,p}}, rhs = ||F||_{W^{j + d_l, p}}. Requires p >= 2.
BoundCheck vertical_series_sobolev_check(const NilFunction& f, int j, double p, const QuadratureOptions& opts = {});

struct EmbeddingCheck {
  double sup = 0.0;
  double norm = 0.0;  // ||F||_{W^{d - d_l, p}}
  int order = 0;      // d - d_l
  double ratio = 0.0;
};
/// ||F||_inf / ||F||_{W^{d - d_l, p}} for a single vertical mode.
EmbeddingCheck sobolev_embedding_check(const NilFunction& f, double p, const QuadratureOptions& opts = {});

/// F~_k = {g(k)}F (x) conj({g(0)}F) on the cube nilmanifold.
std::shared_ptr<const CubeTensorFunction> derivative_tensor(std::shared_ptr<const LiftedFunction> f,
                                                            const PolySeq& g, std::int64_t k);

/// max over n in [n0, n1] of |a_{n+k} conj(a_n) - F~_k(g~_k(n))| with a_n = F(g(n)).
double derivative_identity_check(std::shared_ptr<const LiftedFunction> f, const PolySeq& g, std::int64_t k,
                                 std::int64_t n0, std::int64_t n1);

/// lhs = ||F~_k||_{W^{j,p}} on the cube nilmanifold, rhs = ||F||_{W^{j,2p}}^2.
BoundCheck tensor_sobolev_check(std::shared_ptr<const LiftedFunction> f, const PolySeq& g, std::int64_t k, int j,
                                double p, const QuadratureOptions& opts = {});

}  // namespace nilergodic

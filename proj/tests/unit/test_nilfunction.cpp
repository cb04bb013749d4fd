#include <nilergodic/sobolev.hpp>

#include "doctest.h"
#include "test_support.hpp"

using namespace nilergodic;

namespace {

const FilteredGroup kCircle = FilteredGroup::abelian(1, 1);
const FilteredGroup kHeis = FilteredGroup::heisenberg3();

// Oracle: the periodization written out with a wide, fixed n-range.
cplx brute_heisenberg(const NilFunction& f, double x, double y, double z) {
  cplx total = 0.0;
  for (const auto& mode : f.modes()) {
    const int m = mode.m[0];
    cplx phi = 0.0;
    for (const auto& t : mode.terms)
      for (int n = -40; n <= 40; ++n) {
        if (t.sigma == 0.0) {
          if (n == 0) phi += t.c * std::exp(cplx(0, kTwoPi * (t.j * x + t.k * y)));
          continue;
        }
        const double u = y + n - t.y0;
        phi += t.c * std::exp(cplx(0, kTwoPi * (t.j * x + t.k * (y + n)))) * std::exp(-u * u / (2 * t.sigma * t.sigma)) *
               std::exp(cplx(0, kTwoPi * m * n * x));
      }
    total += std::exp(cplx(0, kTwoPi * m * z)) * phi;
  }
  return total;
}

NilFunction two_mode() {
  NilFunction f = NilFunction::heisenberg_mode(1, {{1, 0, {0.8, 0.1}, 0.3, 0.25}, {0, 2, {-0.2, 0.5}, 0.7, 0.3}});
  f.add(NilFunction::heisenberg_mode(-2, {{0, -1, {0.4, -0.3}, 0.55, 0.22}}));
  return f;
}

std::vector<double> random_point(std::mt19937_64& rng, int d, double scale) {
  std::vector<double> x(d);
  for (auto& t : x) t = scale * (2.0 * unit_double(rng()) - 1.0);
  return x;
}

QuadratureOptions grid(int m) {
  QuadratureOptions o;
  o.grid = m;
  return o;
}

}  // namespace

TEST_CASE("evaluate examples") {
  CHECK(std::abs(NilFunction::constant(kHeis, 1.0).evaluate(GroupElement(kHeis, {3.3, -2.1, 7.9})) - 1.0) < 1e-15);
  cplx v = NilFunction::torus_character(kCircle, {1}).evaluate(GroupElement(kCircle, {0.25}));
  CHECK(std::abs(v - cplx(0, 1)) < 1e-15);
  CHECK(std::abs(NilFunction::torus_character(kCircle, {1}).evaluate(GroupElement(kCircle, {-3.75})) - cplx(0, 1)) <
        1e-14);
}

TEST_CASE("heisenberg modes match the brute periodization oracle") {
  NilFunction f = two_mode();
  f.add(NilFunction::heisenberg_mode(0, {{1, -1, 0.3, 0.5, 0.0}}));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    auto x = random_point(rng, 3, 2.0);
    CHECK(std::abs(f.lifted(std::span<const double>(x)) - brute_heisenberg(f, x[0], x[1], x[2])) < 1e-12);
  }
}

TEST_CASE("Gamma invariance and vertical-character law") {
  NilFunction f = two_mode();
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    GroupElement g = random_in_subgroup(kHeis, 0, rng, 3.0);
    GroupElement gamma = random_lattice_point(kHeis, rng, 4);
    GroupElement gg = g * gamma;
    CHECK(std::abs(f.lifted(g.coords()) - f.lifted(gg.coords())) < 1e-9);
    CHECK(std::abs(f.evaluate(g) - f.lifted(g.coords())) < 1e-9);
    for (int m : {1, -2}) {
      NilFunction fm = f.mode({m});
      const double t = unit_double(rng());
      GroupElement shifted = GroupElement(kHeis, {0.0, 0.0, t}) * g;
      CHECK(std::abs(fm.lifted(shifted.coords()) - e(m * t) * fm.lifted(g.coords())) < 1e-9);
    }
  }
  NilFunction torus = random_torus_function(FilteredGroup::abelian(2, 1), rng, 4, 3);
  for (int i = 0; i < 100; ++i) {
    GroupElement g = random_in_subgroup(torus.group(), 0, rng, 3.0);
    GroupElement gamma = random_lattice_point(torus.group(), rng, 5);
    CHECK(std::abs(torus.lifted(g.coords()) - torus.lifted((g * gamma).coords())) < 1e-9);
  }
}

TEST_CASE("vertical coefficients: orthogonality, recovery, reconstruction") {
  auto f = std::make_shared<const NilFunction>(two_mode());
  std::mt19937_64 rng(11);
  auto pure = std::make_shared<const NilFunction>(f->mode({1}));
  auto zero_part = vertical_coefficient(pure, {3});
  auto same_part = vertical_coefficient(pure, {1});
  CHECK_FALSE(zero_part.aliasing_warning);
  double total_err = 0.0;
  for (int i = 0; i < 100; ++i) {
    auto x = random_point(rng, 3, 1.0);
    std::span<const double> s(x);
    CHECK(std::abs(zero_part.function->lifted(s)) < 1e-12);
    CHECK(std::abs(same_part.function->lifted(s) - pure->lifted(s)) < 1e-12);
    cplx sum = 0.0;
    for (int m = -4; m <= 4; ++m) {
      cplx fm = vertical_coefficient(f, {m}, 16).function->lifted(s);
      CHECK(std::abs(fm - f->mode({m}).lifted(s)) < 1e-12);
      sum += fm;
    }
    total_err = std::max(total_err, std::abs(sum - f->lifted(s)));
  }
  CHECK(total_err < 1e-9);
  CHECK(vertical_coefficient(f, {1}, 3).aliasing_warning);
}

TEST_CASE("Sobolev norm examples") {
  for (int j = 0; j <= 3; ++j)
    for (double p : {1.0, 2.0, 3.5}) {
      CHECK(sobolev_norm(NilFunction::constant(kHeis, {0.6, -0.8}), j, p, grid(8)).value ==
            doctest::Approx(1.0).epsilon(1e-12));
      CHECK(sobolev_norm(NilFunction::constant(kCircle, 2.5), j, p).value == doctest::Approx(2.5).epsilon(1e-12));
    }
  auto chi = NilFunction::torus_character(kCircle, {1});
  CHECK(sobolev_norm(chi, 1, 2.0).value == doctest::Approx(std::sqrt(1.0 + kTwoPi * kTwoPi)).epsilon(1e-12));
  // Characters e(kx): X^a has modulus (2 pi k)^a, so the W^{j,p} power is sum_a (2 pi |k|)^{ap}.
  for (int k : {-3, 2})
    for (double p : {1.0, 3.0})
      for (int j = 0; j <= 4; ++j) {
        double power = 0.0;
        for (int a = 0; a <= j; ++a) power += std::pow(kTwoPi * std::abs(k), a * p);
        auto f = NilFunction::torus_character(kCircle, {k});
        CHECK(sobolev_norm(f, j, p).value == doctest::Approx(std::pow(power, 1.0 / p)).epsilon(1e-11));
      }
  CHECK_THROWS_AS(sobolev_norm(chi, 1, 0.5), DomainError);
}

TEST_CASE("torus derivatives of every order are exact products of frequencies") {
  const auto T3 = FilteredGroup::abelian(3, 1);
  auto f = NilFunction::torus_character(T3, {2, -1, 3}, {0.3, 0.4});
  const int m[3] = {2, -1, 3};
  std::mt19937_64 rng(5);
  for (int a = 1; a <= 4; ++a) {
    auto x = random_point(rng, 3, 1.0);
    std::vector<int> w(a);
    for (auto& b : w) b = static_cast<int>(rng() % 3);
    cplx expect = f.lifted(std::span<const double>(x));
    for (int b : w) expect *= cplx(0, kTwoPi * m[b]);
    CHECK(std::abs(word_derivative(f, x, w, DerivativeMethod::Taylor) - expect) < 1e-9 * std::abs(expect));
  }
}

TEST_CASE("Taylor derivatives agree with central differences up to order 2") {
  NilFunction f = two_mode();
  std::mt19937_64 rng(13);
  for (int i = 0; i < 40; ++i) {
    auto x = random_point(rng, 3, 1.5);
    for (int a = 1; a <= 2; ++a) {
      std::vector<int> w(a);
      for (auto& b : w) b = static_cast<int>(rng() % 3);
      cplx exact = word_derivative(f, x, w, DerivativeMethod::Taylor);
      cplx fd = word_derivative(f, x, w, DerivativeMethod::CentralDifference, 1e-3);
      INFO("a=" << a << " exact=" << exact << " fd=" << fd);
      CHECK(std::abs(exact - fd) < (a == 1 ? 1e-8 : 1e-5) * (1.0 + std::abs(exact)));
    }
  }
}

TEST_CASE("commutator identity X_1 X_0 - X_0 X_1 = X_2 holds inside words of length 3 and 4") {
  NilFunction f = two_mode();
  std::mt19937_64 rng(17);
  for (int i = 0; i < 30; ++i) {
    auto x = random_point(rng, 3, 1.0);
    const int pre = static_cast<int>(rng() % 3), post = static_cast<int>(rng() % 3);
    std::vector<int> a = {pre, 1, 0, post}, b = {pre, 0, 1, post}, c = {pre, 2, post};
    cplx lhs = word_derivative(f, x, a) - word_derivative(f, x, b);
    cplx rhs = word_derivative(f, x, c);
    CHECK(std::abs(lhs - rhs) < 1e-9 * (1.0 + std::abs(rhs)));
    std::vector<int> a3 = {1, 0, post}, b3 = {0, 1, post}, c3 = {2, post};
    CHECK(std::abs(word_derivative(f, x, a3) - word_derivative(f, x, b3) - word_derivative(f, x, c3)) <
          1e-9 * (1.0 + std::abs(word_derivative(f, x, c3))));
  }
}

TEST_CASE("norms are homogeneous and monotone in the order") {
  NilFunction f = two_mode();
  const cplx c(-1.5, 2.0);
  NilFunction cf = f.scaled(c);
  double prev = 0.0;
  for (int j = 0; j <= 3; ++j) {
    double v = sobolev_norm(f, j, 2.0, grid(12)).value;
    CHECK(sobolev_norm(cf, j, 2.0, grid(12)).value == doctest::Approx(std::abs(c) * v).epsilon(1e-12));
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("quadrature doubling changes norms by less than 1e-6") {
  std::mt19937_64 rng(23);
  NilFunction f = random_heisenberg_function(rng, 3, 3);
  for (double p : {2.0, 4.0}) {
    double a = sobolev_norm(f, 1, p, grid(24)).value;
    double b = sobolev_norm(f, 1, p, grid(48)).value;
    CHECK(std::abs(a - b) < 1e-6 * a);
  }
  NilFunction t = random_torus_function(FilteredGroup::abelian(2, 1), rng, 5, 4);
  CHECK(std::abs(sobolev_norm(t, 2, 4.0, grid(48)).value - sobolev_norm(t, 2, 4.0, grid(96)).value) < 1e-6);
  // Odd p: |F|^p has kinks at zeros of F, so only relative agreement is expected.
  const double odd = sobolev_norm(t, 2, 3.0, grid(96)).value;
  CHECK(std::abs(sobolev_norm(t, 2, 3.0, grid(48)).value - odd) < 1e-6 * odd);
}

TEST_CASE("Bessel inequality") {
  auto single = NilFunction::heisenberg_mode(2, {{1, 1, 1.0, 0.4, 0.3}});
  auto s = bessel_check(single, 4.0, grid(16));
  CHECK(s.lhs == doctest::Approx(s.rhs).epsilon(1e-13));
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 3; ++trial) {
    NilFunction f = random_heisenberg_function(rng, 5, 5);
    auto eq = bessel_check(f, 2.0, grid(24));
    CHECK(std::abs(eq.lhs - eq.rhs) < 1e-9 * eq.rhs);
    for (double p : {4.0, 8.0}) {
      auto r = bessel_check(f, p, grid(24));
      CHECK(r.lhs <= r.rhs + 1e-9);
      CHECK(r.lhs < 0.999 * r.rhs);
    }
  }
  CHECK_THROWS_AS(bessel_check(single, 1.5), DomainError);
}

TEST_CASE("vertical Fourier series is controlled by a higher Sobolev norm") {
  std::mt19937_64 rng(31);
  auto zero_mode = NilFunction::heisenberg_mode(0, {{1, 0, 1.0, 0.5, 0.3}});
  auto z = vertical_series_sobolev_check(zero_mode, 1, 2.0, grid(12));
  CHECK(z.lhs <= z.rhs);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    NilFunction f = random_torus_function(kCircle, rng, 3, 6);
    auto r = vertical_series_sobolev_check(f, 1, 2.0);
    worst = std::max(worst, r.ratio);
  }
  CHECK(worst < 2.0);
  NilFunction sym = NilFunction::torus_character(kCircle, {3}, 0.7);
  sym.add(NilFunction::torus_character(kCircle, {-3}, {0.0, 0.7}));
  NilFunction mirrored = NilFunction::torus_character(kCircle, {-3}, 0.7);
  mirrored.add(NilFunction::torus_character(kCircle, {3}, {0.0, 0.7}));
  CHECK(vertical_series_sobolev_check(sym, 2, 3.0).lhs ==
        doctest::Approx(vertical_series_sobolev_check(mirrored, 2, 3.0).lhs).epsilon(1e-13));
}

TEST_CASE("Sobolev embedding ratios") {
  auto c = sobolev_embedding_check(NilFunction::constant(kHeis, 1.0), 2.0, grid(8));
  CHECK(c.ratio == doctest::Approx(1.0).epsilon(1e-12));
  for (int k : {1, 4, -7}) {
    auto r = sobolev_embedding_check(NilFunction::torus_character(kCircle, {k}), 3.0);
    CHECK(r.order == 0);
    CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-12));
  }
  double lo = 1e300, hi = 0.0;
  for (int m = 1; m <= 5; ++m) {
    auto f = NilFunction::heisenberg_mode(m, {{0, 1, 1.0, 0.5, 0.25}});
    auto r = sobolev_embedding_check(f, 2.0, grid(16));
    CHECK(r.order == 2);
    CHECK(r.sup > 0.9);
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  CHECK(hi < 1.0);
  CHECK(lo > 0.0);
  CHECK_THROWS_AS(sobolev_embedding_check(two_mode(), 2.0), DomainError);
}

TEST_CASE("derivative identity") {
  auto f = std::make_shared<const NilFunction>(NilFunction::heisenberg_mode(1, {{1, 0, 1.0, 0.4, 0.3}}));
  PolySeq constant = PolySeq::constant(GroupElement(kHeis, {0.3, 1.7, -0.2}));
  for (std::int64_t k : {-4, 0, 9}) CHECK(derivative_identity_check(f, constant, k, -10, 10) < 1e-12);
  PolySeq lin = PolySeq::linear(GroupElement(kHeis, {std::sqrt(2.0) - 1, std::sqrt(3.0) - 1, 0.1}));
  for (std::int64_t k : {0, 1, 7, -25, 50}) {
    INFO("k=" << k);
    CHECK(derivative_identity_check(f, lin, k, 0, 200) < 1e-9);
  }
  std::mt19937_64 rng(37);
  PolySeq quad(kHeis, {random_in_subgroup(kHeis, 0, rng), random_in_subgroup(kHeis, 1, rng),
                       random_in_subgroup(kHeis, 2, rng)});
  auto g2 = std::make_shared<const NilFunction>(random_heisenberg_function(rng, 1, 3));
  for (std::int64_t k : {3, -11}) CHECK(derivative_identity_check(g2, quad, k, -50, 50) < 1e-9);
  auto chi = std::make_shared<const NilFunction>(NilFunction::torus_character(FilteredGroup::abelian(1, 2), {2}));
  PolySeq poly(FilteredGroup::abelian(1, 2),
               {GroupElement(FilteredGroup::abelian(1, 2), {0.1}), GroupElement(FilteredGroup::abelian(1, 2), {0.37}),
                GroupElement(FilteredGroup::abelian(1, 2), {0.21})});
  CHECK(derivative_identity_check(chi, poly, 13, 0, 100) < 1e-9);
}

TEST_CASE("tensor Sobolev bound") {
  PolySeq lin = PolySeq::linear(GroupElement(kCircle, {std::sqrt(2.0) - 1}));
  auto one = std::make_shared<const NilFunction>(NilFunction::constant(kCircle, 1.0));
  auto t1 = tensor_sobolev_check(one, lin, 5, 2, 2.0);
  CHECK(t1.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t1.rhs == doctest::Approx(1.0).epsilon(1e-12));
  auto chi = std::make_shared<const NilFunction>(NilFunction::torus_character(kCircle, {1}));
  auto chi2 = std::make_shared<const NilFunction>(NilFunction::torus_character(kCircle, {1}, 2.0));
  double lo = 1e300, hi = 0.0;
  for (std::int64_t k : {0, 10, -10, 50, -50}) {
    auto r = tensor_sobolev_check(chi, lin, k, 1, 2.0);
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
    auto r2 = tensor_sobolev_check(chi2, lin, k, 1, 2.0);
    CHECK(r2.lhs == doctest::Approx(4.0 * r.lhs).epsilon(1e-12));
    CHECK(r2.ratio == doctest::Approx(r.ratio).epsilon(1e-12));
  }
  CHECK(hi / lo < 1.0 + 1e-9);
  auto f = std::make_shared<const NilFunction>(NilFunction::heisenberg_mode(1, {{0, 1, 1.0, 0.5, 0.3}}));
  PolySeq hlin = PolySeq::linear(GroupElement(kHeis, {0.41, 0.73, 0.0}));
  double hlo = 1e300, hhi = 0.0;
  for (std::int64_t k : {0, 3, -20}) {
    auto r = tensor_sobolev_check(f, hlin, k, 1, 2.0, grid(8));
    hlo = std::min(hlo, r.ratio);
    hhi = std::max(hhi, r.ratio);
  }
  CHECK(hhi < 10.0 * hlo);
}

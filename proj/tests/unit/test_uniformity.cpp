#include <nilergodic/uniformity.hpp>

#include <random>

#include "doctest.h"

using namespace nilergodic;

namespace {

FiniteSequence cyclic(std::vector<cplx> v) { return {std::move(v), Interpretation::CyclicZN}; }

FiniteSequence random_complex(std::mt19937_64& rng, std::size_t N) {
  std::vector<cplx> v(N);
  for (auto& z : v) z = {2.0 * unit_double(rng()) - 1.0, 2.0 * unit_double(rng()) - 1.0};
  return cyclic(v);
}

FiniteSequence random_signs(std::mt19937_64& rng, std::size_t N) {
  std::vector<cplx> v(N);
  for (auto& z : v) z = (rng() >> 63) ? 1.0 : -1.0;
  return cyclic(v);
}

FiniteSequence rotation_orbit(double alpha, std::int64_t N) {
  std::vector<cplx> v(N);
  for (std::int64_t n = 0; n < N; ++n) v[n] = e(frac_product(n, alpha));
  return {v, Interpretation::OrbitSample};
}

FiniteSequence anzai_orbit(double alpha, std::int64_t N) {
  std::vector<cplx> v(N);
  for (std::int64_t n = 0; n < N; ++n) v[n] = e(frac_product(static_cast<int128>(n) * (n - 1) / 2, alpha));
  return {v, Interpretation::OrbitSample};
}

}  // namespace

TEST_CASE("cyclic Gowers examples") {
  for (int k = 1; k <= 4; ++k)
    for (auto m : {GowersMethod::BruteForce, GowersMethod::Recursive, GowersMethod::FFT})
      CHECK(gowers_norm_cyclic(cyclic(std::vector<cplx>(8, 1.0)), k, m).value == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t N : {16, 32}) {
    std::vector<cplx> chi(N);
    for (std::size_t n = 0; n < N; ++n) chi[n] = e(3.0 * n / N);
    CHECK(gowers_norm_cyclic(cyclic(chi), 2, GowersMethod::BruteForce).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gowers_u2_fft(cyclic(chi)).value == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (std::size_t N : {8, 16}) {
    std::vector<cplx> delta(N, 0.0);
    delta[0] = 1.0;
    const double expect = std::pow(static_cast<double>(N), -0.75);
    CHECK(gowers_norm_cyclic(cyclic(delta), 2, GowersMethod::BruteForce).value == doctest::Approx(expect).epsilon(1e-12));
    CHECK(gowers_norm_cyclic(cyclic(delta), 2).value == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gowers_norm_cyclic(cyclic({1.0}), 0), DomainError);
  CHECK(mean(cyclic({1.0, 2.0, cplx(0, 3)})) == cplx(1.0, 1.0));
}

TEST_CASE("FFT U2 agrees with brute force for N <= 256") {
  std::mt19937_64 rng(1);
  for (std::size_t N : {2, 7, 64, 128, 256}) {
    auto f = random_complex(rng, N);
    auto g = random_signs(rng, N);
    for (const auto& s : {f, g}) {
      const double brute = gowers_norm_cyclic(s, 2, GowersMethod::BruteForce).value;
      CHECK(std::abs(gowers_u2_fft(s).value - brute) < 1e-9);
      CHECK(std::abs(gowers_norm_cyclic(s, 2, GowersMethod::Recursive).value - brute) < 1e-9);
    }
  }
}

TEST_CASE("recursive U3 and U4 agree with brute force") {
  std::mt19937_64 rng(2);
  for (std::size_t N : {5, 16, 32}) {
    auto f = random_complex(rng, N);
    const double brute = gowers_norm_cyclic(f, 3, GowersMethod::BruteForce).value;
    CHECK(std::abs(gowers_norm_cyclic(f, 3, GowersMethod::Recursive).value - brute) < 1e-9);
    CHECK(std::abs(gowers_norm_cyclic(f, 3, GowersMethod::FFT).value - brute) < 1e-9);
  }
  auto f = random_complex(rng, 12);
  CHECK(std::abs(gowers_norm_cyclic(f, 4, GowersMethod::Recursive).value -
                 gowers_norm_cyclic(f, 4, GowersMethod::BruteForce).value) < 1e-9);
  CHECK_THROWS_AS(gowers_norm_cyclic(random_complex(rng, 512), 4, GowersMethod::BruteForce), UnsupportedError);
}

TEST_CASE("modulation, shift and scaling invariances") {
  std::mt19937_64 rng(3);
  const std::size_t N = 32;
  auto f = random_complex(rng, N);
  std::vector<cplx> lin(N), quad(N), shifted(N), scaled(N);
  const cplx c(0.3, -1.2);
  for (std::size_t n = 0; n < N; ++n) {
    lin[n] = f.values[n] * e(5.0 * n / N);
    quad[n] = f.values[n] * e(7.0 * n * n / N);
    shifted[n] = f.values[(n + 11) % N];
    scaled[n] = c * f.values[n];
  }
  for (int k = 2; k <= 3; ++k)
    CHECK(std::abs(gowers_norm_cyclic(cyclic(lin), k).value - gowers_norm_cyclic(f, k).value) < 1e-9);
  CHECK(std::abs(gowers_norm_cyclic(cyclic(quad), 3).value - gowers_norm_cyclic(f, 3).value) < 1e-9);
  for (int k = 1; k <= 3; ++k) {
    CHECK(std::abs(gowers_norm_cyclic(cyclic(shifted), k).value - gowers_norm_cyclic(f, k).value) < 1e-12);
    CHECK(gowers_norm_cyclic(cyclic(scaled), k).value ==
          doctest::Approx(std::abs(c) * gowers_norm_cyclic(f, k).value).epsilon(1e-12));
  }
}

TEST_CASE("U^{l+1} is dominated by L^{2^l}") {
  auto one = u_vs_lp_check(cyclic(std::vector<cplx>(16, cplx(0.6, 0.8) * 2.0)), 1);
  CHECK(one.u == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(one.lp == doctest::Approx(2.0).epsilon(1e-12));
  std::vector<cplx> delta(16, 0.0);
  delta[0] = 1.0;
  auto d = u_vs_lp_check(cyclic(delta), 1);
  CHECK(d.u == doctest::Approx(std::pow(16.0, -0.75)).epsilon(1e-12));
  CHECK(d.lp == doctest::Approx(0.25).epsilon(1e-12));
  std::mt19937_64 rng(4);
  int violations = 0;
  for (int i = 0; i < 200; ++i) {
    auto f = random_complex(rng, 64);
    for (int l : {1, 2}) {
      auto r = u_vs_lp_check(f, l);
      if (r.u > r.lp + 1e-9) ++violations;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("fast P2 kernel matches the direct double sum") {
  std::mt19937_64 rng(5);
  const std::int64_t K = 9, N = 20000;
  auto f = random_complex(rng, N);
  const std::int64_t w0 = 2 * K, w1 = N - 2 * K;
  const double fast = detail::fejer_p2(f.values.data(), w0, w1, K);
  const double slow = detail::fejer_p2_direct(f.values.data(), w0, w1, K);
  CHECK(fast == doctest::Approx(slow).epsilon(1e-11));
}

TEST_CASE("orbit estimator examples") {
  FiniteSequence ones{std::vector<cplx>(2000, 1.0), Interpretation::OrbitSample};
  for (int k = 1; k <= 3; ++k) CHECK(ghk_orbit_estimate(ones, k, {20}).value == doctest::Approx(1.0).epsilon(1e-12));
  const double alpha = std::sqrt(2.0) - 1.0;
  auto rot = rotation_orbit(alpha, 100000);
  auto u2 = ghk_orbit_estimate(rot, 2, {100});
  CHECK(std::abs(u2.value - 1.0) < 0.05);
  CHECK(u2.K == 100);
  CHECK(ghk_orbit_estimate(rot, 2).K == 316);
  auto skew = anzai_orbit(alpha, 100000);
  auto s2 = ghk_orbit_estimate(skew, 2, {100});
  CHECK(s2.power < 0.05);
  // Oracle: each differenced sequence is the linear phase e(j alpha n) up to a constant, so P_1 of it
  // is the Fejer kernel |K^{-1} sum_{a<K} e(a j alpha)|^2 and the j = 0 term contributes 1/K.
  const std::int64_t K = 100;
  double fejer = 0.0;
  for (std::int64_t j = -(K - 1); j <= K - 1; ++j) {
    cplx g = 0.0;
    for (std::int64_t a = 0; a < K; ++a) g += e(frac_product(a * j, alpha));
    fejer += static_cast<double>(K - std::abs(j)) * std::norm(g / static_cast<double>(K));
  }
  CHECK(s2.power == doctest::Approx(fejer / (K * K)).epsilon(1e-9));
  CHECK(ghk_orbit_estimate(anzai_orbit(alpha, 20000), 3, {40}).value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("orbit estimator window stability and errors") {
  const double alpha = std::sqrt(2.0) - 1.0;
  auto a = ghk_orbit_estimate(rotation_orbit(alpha, 50000), 2, {100});
  auto b = ghk_orbit_estimate(rotation_orbit(alpha, 100000), 2, {100, 2});
  CHECK(std::abs(a.value - b.value) < 0.02);
  REQUIRE(b.trace.size() == 3);
  CHECK(b.trace_n.front() == 25000);
  CHECK(b.trace.back() == b.value);
  FiniteSequence small{std::vector<cplx>(100, 1.0), Interpretation::OrbitSample};
  CHECK_THROWS_AS(ghk_orbit_estimate(small, 2, {50}), RangeError);
  CHECK_THROWS_AS(ghk_orbit_estimate(small, 3, {20}), RangeError);
}

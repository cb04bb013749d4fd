#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nilergodic/errors.hpp"

namespace nilergodic {

enum class CoefficientProfile {
  LogOverN,  // a_n = sqrt(log n / n), so a_1 = 0
  Flat,      // a_n = 1 / sqrt(N)
};

std::string to_string(CoefficientProfile p);
CoefficientProfile parse_profile(const std::string& name);

/// P(t) = sum_{n=1}^{N} r_n a_n cos(n t); index 0 of both vectors is unused and zero.
struct RandomTrigPoly {
  std::int64_t N = 0;
  std::uint64_t seed = 0;
  std::vector<double> a;
  std::vector<int> r;

  double operator()(double t) const;
};

/// Signs r_n are the top bits of successive mt19937_64(seed) draws, n = 1..N.
RandomTrigPoly build(std::int64_t N, std::uint64_t seed, CoefficientProfile profile = CoefficientProfile::LogOverN);
RandomTrigPoly from_coefficients(std::vector<double> a, std::vector<int> r);

struct TrigNorms {
  double l2sq = 0.0;        // (1/2) sum a_n^2
  double u2 = 0.0;          // (sum a_n^4 / 8)^{1/4}
  double sup = 0.0;         // refined maximum of |P|, a lower bound for ||P||_inf
  double grid_max = 0.0;    // maximum over the 16N-point grid
  double sup_upper = 0.0;   // certified upper bound for ||P||_inf
  double sup_error = 0.0;   // sup_upper - sup
  double naive_error = 0.0; // (sum n a_n) * spacing / 2
};

/// The upper bound: on each grid cell |t - t0| <= pi/M, |P| is at most the exact maximum of the
/// degree-2 Taylor polynomial at t0 plus N^3 ||P||_inf (pi/M)^3 / 6 (Bernstein), solved for ||P||_inf.
TrigNorms norms(const RandomTrigPoly& P, int oversampling = 16);

struct GrowthRow {
  std::int64_t N = 0;
  std::uint64_t seed = 0;
  TrigNorms norms;
  double ratio = 0.0;  // l2sq / (sup * u2)
};

struct GrowthReport {
  std::vector<GrowthRow> rows;  // N-major, seeds ascending
  std::vector<std::int64_t> N;
  std::vector<double> median_ratio;
  bool strictly_increasing = false;
  double growth = 0.0;  // median_ratio.back() / median_ratio.front()
};

/// Seeds 1..seeds for every N in the schedule.
GrowthReport growth_experiment(const std::vector<std::int64_t>& schedule, int seeds,
                               CoefficientProfile profile = CoefficientProfile::LogOverN);

}  // namespace nilergodic

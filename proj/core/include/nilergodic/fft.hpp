#pragma once

#include <span>
#include <vector>

#include "nilergodic/numerics.hpp"

namespace nilergodic {

enum class FftSign {
  Negative,  // out_k = sum_n in_n e(-nk/L)
  Positive,  // out_k = sum_n in_n e(+nk/L)
};

/// Unnormalized DFT of arbitrary length. Deterministic (FFTW_ESTIMATE plans).
std::vector<cplx> dft(std::span<const cplx> in, FftSign sign);

}  // namespace nilergodic

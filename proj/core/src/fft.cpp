#include "nilergodic/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

#include "nilergodic/errors.hpp"

namespace nilergodic {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

std::vector<cplx> dft(std::span<const cplx> in, FftSign sign) {
  const std::size_t n = in.size();
  std::vector<cplx> out(n);
  if (n == 0) return out;
  auto* buf_in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  auto* buf_out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (!buf_in || !buf_out) {
    fftw_free(buf_in);
    fftw_free(buf_out);
    throw NumericGuardError("dft: allocation failed");
  }
  std::memcpy(buf_in, in.data(), sizeof(fftw_complex) * n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), buf_in, buf_out,
                            sign == FftSign::Negative ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::memcpy(static_cast<void*>(out.data()), buf_out, sizeof(fftw_complex) * n);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf_in);
  fftw_free(buf_out);
  return out;
}

}  // namespace nilergodic

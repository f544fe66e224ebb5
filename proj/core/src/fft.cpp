#include "fft_internal.hpp"

#include <fftw3.h>

#include <limits>
#include <mutex>
#include <stdexcept>

namespace rsflat::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

void inverse_dft_inplace(std::vector<std::complex<double>>& buf) {
  if (buf.empty()) return;
  if (buf.size() > static_cast<std::size_t>(std::numeric_limits<int>::max()))
    throw std::length_error("inverse_dft_inplace: grid exceeds fftw int size");

  auto* data = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan plan;
  {
    // The FFTW planner is not thread-safe; execution on distinct plans is.
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(buf.size()), data, data,
                            FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw std::runtime_error("fftw_plan_dft_1d failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
}

}  // namespace rsflat::detail

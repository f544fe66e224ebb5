#pragma once

#include <complex>
#include <vector>

namespace rsflat::detail {

// Unnormalized backward DFT in place: buf[j] <- sum_k buf[k] e^{+2pi i k j / m}.
// FFTW plan creation is serialized internally; concurrent calls are safe.
void inverse_dft_inplace(std::vector<std::complex<double>>& buf);

}  // namespace rsflat::detail

#pragma once

#include <span>
#include <vector>

#include "opuc/error.hpp"

namespace opuc::detail {

// Unnormalized DFTs: forward uses exp(-2 pi i jk/n), backward exp(+2 pi i jk/n).
std::vector<cplx> fft(std::span<const cplx> x);
std::vector<cplx> ifft(std::span<const cplx> x);
std::vector<cplx> fft_real(std::span<const double> x);

}  // namespace opuc::detail

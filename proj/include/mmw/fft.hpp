// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "mmw/types.hpp"

// Thin wrapper over FFTW. Plans are created once per (size, direction) and
// shared; execution always goes through aligned scratch buffers so results
// do not depend on the caller's buffer alignment or on the calling thread.
namespace mmw::dsp {

/// Unnormalized forward DFT: out[k] = sum_n in[n] e^{-j2pi kn/N}.
void fft(std::span<const cplx> in, std::span<cplx> out);
/// Unnormalized inverse DFT: out[n] = sum_k in[k] e^{+j2pi kn/N}.
void ifft(std::span<const cplx> in, std::span<cplx> out);

/// Forward/inverse DFT scaled by 1/sqrt(N).
void unitary_fft(std::span<const cplx> in, std::span<cplx> out);
void unitary_ifft(std::span<const cplx> in, std::span<cplx> out);

inline CVec fft(std::span<const cplx> in) {
  CVec out(in.size());
  fft(in, out);
  return out;
}
inline CVec ifft(std::span<const cplx> in) {
  CVec out(in.size());
  ifft(in, out);
  return out;
}

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

}  // namespace mmw::dsp

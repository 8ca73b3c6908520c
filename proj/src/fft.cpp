// SPDX-License-Identifier: Apache-2.0
#include "mmw/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <utility>

namespace mmw::dsp {
namespace {

struct AlignedBuffer {
  fftw_complex* data = nullptr;
  std::size_t size = 0;

  AlignedBuffer() = default;
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  ~AlignedBuffer() {
    if (data) fftw_free(data);
  }
  void ensure(std::size_t n) {
    if (n <= size) return;
    if (data) fftw_free(data);
    data = fftw_alloc_complex(n);
    if (!data) throw RuntimeError("fftw_alloc_complex failed");
    size = n;
  }
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  // The planner is not thread safe; executing an existing plan on new
  // (equally aligned) arrays is.
  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    fftw_complex* in = fftw_alloc_complex(n);
    fftw_complex* out = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    if (!plan) throw RuntimeError("fftw planner failed for size " + std::to_string(n));
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void execute(std::span<const cplx> in, std::span<cplx> out, int sign) {
  if (in.size() != out.size()) throw ConfigError("fft: input and output sizes differ");
  const std::size_t n = in.size();
  if (n == 0) return;
  thread_local AlignedBuffer src;
  thread_local AlignedBuffer dst;
  src.ensure(n);
  dst.ensure(n);
  std::memcpy(src.data, in.data(), n * sizeof(cplx));
  fftw_execute_dft(plan_cache().get(n, sign), src.data, dst.data);
  std::memcpy(out.data(), dst.data, n * sizeof(cplx));
}

void scale(std::span<cplx> v, double s) {
  for (auto& x : v) x *= s;
}

}  // namespace

void fft(std::span<const cplx> in, std::span<cplx> out) { execute(in, out, FFTW_FORWARD); }
void ifft(std::span<const cplx> in, std::span<cplx> out) { execute(in, out, FFTW_BACKWARD); }

void unitary_fft(std::span<const cplx> in, std::span<cplx> out) {
  execute(in, out, FFTW_FORWARD);
  scale(out, 1.0 / std::sqrt(static_cast<double>(in.size())));
}

void unitary_ifft(std::span<const cplx> in, std::span<cplx> out) {
  execute(in, out, FFTW_BACKWARD);
  scale(out, 1.0 / std::sqrt(static_cast<double>(in.size())));
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace mmw::dsp

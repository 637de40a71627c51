// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#include "fft.hpp"

#include <map>
#include <mutex>
#include <new>

namespace squeezetrack::detail {

namespace {

// FFTW planning is not thread safe, execution on fresh arrays is.
class PlanCache {
 public:
  fftw_plan get(std::size_t n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    FftBuffer in = fft_alloc(n);
    FftBuffer out = fft_alloc(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in.get(), out.get(), FFTW_FORWARD,
                                      FFTW_ESTIMATE);
    plans_.emplace(n, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [n, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

FftBuffer fft_alloc(std::size_t n) {
  auto* p = fftw_alloc_complex(n);
  if (p == nullptr) throw std::bad_alloc();
  return FftBuffer(p);
}

void fft_forward(std::size_t n, fftw_complex* in, fftw_complex* out) {
  fftw_execute_dft(plan_cache().get(n), in, out);
}

}  // namespace squeezetrack::detail

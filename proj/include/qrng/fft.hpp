#pragma once

// Real-input DFT of arbitrary length, backed by FFTW. Plans are created
// once per length under a global lock and then executed through FFTW's
// new-array interface, which is safe to call from several threads as long
// as each thread owns its buffers.

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>

#include "qrng/error.hpp"

namespace qrng::fft {

namespace detail {

template <typename T>
struct FftwFree {
  void operator()(T* p) const noexcept { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree<T>>;

inline FftwBuffer<double> alloc_real(std::size_t n) {
  return FftwBuffer<double>(fftw_alloc_real(n));
}

inline FftwBuffer<fftw_complex> alloc_complex(std::size_t n) {
  return FftwBuffer<fftw_complex>(fftw_alloc_complex(n));
}

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

/// Plans live for the life of the process; one pair per length.
inline PlanPair plans_for(std::size_t n) {
  std::lock_guard lock(planner_mutex());
  static std::map<std::size_t, PlanPair> cache;
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  auto in = alloc_real(n);
  auto out = alloc_complex(n / 2 + 1);
  const int len = static_cast<int>(n);
  PlanPair p;
  p.forward = fftw_plan_dft_r2c_1d(len, in.get(), out.get(), FFTW_ESTIMATE);
  p.inverse = fftw_plan_dft_c2r_1d(len, out.get(), in.get(), FFTW_ESTIMATE);
  if (!p.forward || !p.inverse) throw std::runtime_error("fftw planning failed");
  cache.emplace(n, p);
  return p;
}

}  // namespace detail

/// Smallest 2^a 3^b 5^c 7^d >= n. FFTW runs fastest on these lengths.
inline std::size_t good_size(std::size_t n) {
  if (n <= 1) return 1;
  std::size_t best = std::bit_ceil(n);
  for (std::size_t p7 = 1; p7 < best; p7 *= 7)
    for (std::size_t p5 = p7; p5 < best; p5 *= 5)
      for (std::size_t p3 = p5; p3 < best; p3 *= 3) {
        std::size_t v = p3;
        while (v < n) v *= 2;
        best = std::min(best, v);
      }
  return best;
}

/// Forward and inverse real transform of one fixed length, with its own
/// work buffers. Not thread-safe per instance; give each thread its own.
class RealTransform {
 public:
  explicit RealTransform(std::size_t length)
      : n_(length),
        plans_(detail::plans_for(length)),
        real_(detail::alloc_real(length)),
        spectrum_(detail::alloc_complex(length / 2 + 1)) {
    qrng::detail::require(length >= 1 && length <= (std::size_t{1} << 30), "transform length out of range");
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

  /// Time-domain buffer (length size()).
  std::span<double> real() noexcept { return {real_.get(), n_}; }

  /// Frequency-domain buffer (length size()/2 + 1).
  std::span<std::complex<double>> spectrum() noexcept {
    return {reinterpret_cast<std::complex<double>*>(spectrum_.get()), spectrum_size()};
  }

  /// real() -> spectrum(). Unnormalized.
  void forward() { fftw_execute_dft_r2c(plans_.forward, real_.get(), spectrum_.get()); }

  /// spectrum() -> real(), scaled by 1/size() so forward then inverse is
  /// the identity. Overwrites spectrum().
  void inverse() {
    fftw_execute_dft_c2r(plans_.inverse, spectrum_.get(), real_.get());
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) real_[i] *= scale;
  }

 private:
  std::size_t n_;
  detail::PlanPair plans_;
  detail::FftwBuffer<double> real_;
  detail::FftwBuffer<fftw_complex> spectrum_;
};

}  // namespace qrng::fft

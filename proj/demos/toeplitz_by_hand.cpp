// The three extractor routes on a 3-bit block, next to the matrix they
// implement.

#include <iostream>

#include "qrng/qrng.hpp"

namespace {

void print(const char* label, const qrng::BitSequence& bits) {
  std::cout << label;
  for (std::size_t i = 0; i < bits.size(); ++i) std::cout << ' ' << bits[i];
  std::cout << '\n';
}

}  // namespace

int main() {
  const qrng::Seed seed(qrng::BitSequence{1, 0, 1, 1});
  const qrng::BitSequence raw{1, 1, 0};
  const qrng::ExtractorParams params{3, 2, qrng::Variant::standard};

  std::cout << "T =\n";
  for (std::size_t i = 0; i < params.m; ++i) {
    for (std::size_t j = 0; j < params.n; ++j) std::cout << ' ' << qrng::circulant_row_element(seed, i, j);
    std::cout << '\n';
  }
  print("r =", raw);
  print("naive    k =", qrng::extract_naive(seed, raw, params));
  print("fft      k =", qrng::extract_fft(seed, raw, params));

  // Reduced seed: n bits instead of n + m - 1.
  const qrng::Seed short_seed(qrng::BitSequence{1, 0, 1});
  print("modified k =", qrng::extract_modified(short_seed, raw, 2));
}

#pragma once

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qrng/bitio.hpp"

namespace testutil {

inline oracle::Bits to_bits(const qrng::BitSequence& s) {
  oracle::Bits out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i];
  return out;
}

inline qrng::BitSequence from_bits(const oracle::Bits& b) {
  qrng::BitSequence s(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) s.set(i, b[i] != 0);
  return s;
}

/// Bits of `value`, LSB first, `width` long.
inline qrng::BitSequence from_integer(std::uint64_t value, std::size_t width) {
  qrng::BitSequence s(width);
  for (std::size_t i = 0; i < width; ++i) s.set(i, (value >> i) & 1u);
  return s;
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    for (int k = 0;; ++k) {
      path_ = base / ("qrng-test-" + std::to_string(::getpid()) + "-" + std::to_string(k));
      if (std::filesystem::create_directory(path_)) break;
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil

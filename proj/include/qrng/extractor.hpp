#pragma once

// Toeplitz-hashing randomness extractor.
//
// The seed a (length L) is the first column of an L x L circulant
// A[i][j] = a[(i - j) mod L]. The standard extractor uses L = n + m - 1 and
// hashes with the top-left m x n block of A, which is Toeplitz:
//
//   k_i = sum_{j<n} a[(i - j) mod L] r_j   (mod 2),   0 <= i < m
//
// Zero-padding r to length L turns this into the first m outputs of the
// circular convolution a * r', which the FFT path computes as
// IDFT(DFT(a) . DFT(r')), rounded and reduced mod 2.
//
// The modified extractor takes an n-bit seed. Its matrix is the top-left
// m x (n - m) block of the n x n circulant followed by an m x m identity,
// so the key is conv(a', r')[0..m) xor r[n-m..n), with r' the first n - m
// raw bits padded to n.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrng/bitio.hpp"
#include "qrng/error.hpp"
#include "qrng/fft.hpp"
#include "qrng/rng.hpp"

namespace qrng {

enum class Variant { standard, modified };

inline const char* to_string(Variant v) { return v == Variant::standard ? "standard" : "modified"; }

inline Variant parse_variant(const std::string& s) {
  if (s == "standard") return Variant::standard;
  if (s == "modified") return Variant::modified;
  throw ValidationError("unknown extractor variant: " + s);
}

struct ExtractorParams {
  std::size_t n = 0;
  std::size_t m = 0;
  Variant variant = Variant::standard;

  std::size_t seed_length() const { return variant == Variant::standard ? n + m - 1 : n; }

  void validate() const {
    detail::require(m > 0, "output length m must be > 0");
    detail::require(m < n, "m must be < n");
  }
};

struct SecurityParams {
  unsigned bit_depth = 5;
  double h_min = 0.0;
  double epsilon = 0x1.0p-50;

  void validate() const {
    detail::require(bit_depth >= 1, "bit depth must be >= 1");
    detail::require(std::isfinite(h_min) && h_min > 0.0 && h_min <= static_cast<double>(bit_depth),
                    "h_min must lie in (0, bit_depth]");
    detail::require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  }
};

/// Trusted random bits that select the hash function.
class Seed {
 public:
  Seed() = default;
  explicit Seed(BitSequence bits) : bits_(std::move(bits)) {}

  static Seed random(Xoshiro256& rng, std::size_t length) { return Seed(BitSequence::random(rng, length)); }

  const BitSequence& bits() const noexcept { return bits_; }
  std::size_t size() const noexcept { return bits_.size(); }
  bool operator[](std::size_t i) const noexcept { return bits_[i]; }

 private:
  BitSequence bits_;
};

/// Leftover-hash output length: floor(n * h_min / N - 2 log2(1/eps)).
inline std::size_t output_length(std::size_t n, const SecurityParams& sec) {
  sec.validate();
  detail::require(n > 0, "block length must be > 0");
  const double m = static_cast<double>(n) * sec.h_min / static_cast<double>(sec.bit_depth) +
                   2.0 * std::log2(sec.epsilon);
  if (!(m >= 1.0))
    throw ValidationError("block of " + std::to_string(n) + " bits is too short for the requested security (m <= 0)");
  return static_cast<std::size_t>(std::floor(m));
}

/// Entry (i, j) of the circulant whose first column is the seed.
inline bool circulant_row_element(const Seed& seed, std::size_t i, std::size_t j) {
  const std::size_t len = seed.size();
  detail::require(i < len && j < len, "circulant index out of range");
  return seed[i >= j ? i - j : i + len - j];
}

namespace detail {

inline void check_standard(const Seed& seed, const BitSequence& raw, const ExtractorParams& params) {
  params.validate();
  require(params.variant == Variant::standard, "expected the standard variant");
  require(raw.size() == params.n, "raw block length must equal n");
  require(seed.size() == params.n + params.m - 1, "standard seed length must be n + m - 1");
}

inline void check_modified(const Seed& seed, const BitSequence& raw, std::size_t m) {
  require(m > 0, "output length m must be > 0");
  require(m < raw.size(), "m must be < n");
  require(seed.size() == raw.size(), "modified seed length must equal n");
}

/// Bits [offset, offset + count) of `bits` as 0.0 / 1.0, zero-filled to
/// out.size().
inline void load_bits(const BitSequence& bits, std::size_t offset, std::size_t count, std::span<double> out) {
  std::size_t i = 0;
  if ((offset & 7) == 0) {
    const auto bytes = bits.bytes().subspan(offset >> 3);
    for (; i + 8 <= count; i += 8) {
      const unsigned b = bytes[i >> 3];
      for (unsigned k = 0; k < 8; ++k) out[i + k] = static_cast<double>((b >> k) & 1u);
    }
  }
  for (; i < count; ++i) out[i] = bits[offset + i] ? 1.0 : 0.0;
  std::fill(out.begin() + static_cast<std::ptrdiff_t>(count), out.end(), 0.0);
}

/// Rounds the first `count` entries of a convolution and reduces mod 2.
/// Throws when any entry, kept or not, is 0.25 or more from an integer.
inline BitSequence round_mod2(std::span<const double> values, std::size_t count, double* max_residual) {
  BitSequence out(count);
  double worst = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double r = std::nearbyint(values[i]);
    const double residual = std::abs(values[i] - r);
    if (residual > worst) worst = residual;
    if (i < count && (static_cast<std::int64_t>(r) & 1)) out.set(i, true);
  }
  if (max_residual) *max_residual = worst;
  if (!(worst < 0.25))
    throw ConvolutionGuardError("convolution residual " + std::to_string(worst) + " at length " +
                                std::to_string(values.size()) + " exceeds 0.25");
  return out;
}

}  // namespace detail

/// GF(2) product with the circulant whose first column is `column`,
/// evaluated by transform with the column's spectrum cached, so hashing
/// many blocks with one seed costs one forward and one inverse transform
/// per block.
///
/// When only the first `used` input bits can be non-zero and only the first
/// `count` outputs are wanted, the product only touches column entries at
/// offsets -(used-1) .. count-1 (mod L). Those entries are placed at the same
/// offsets mod P in a length-P column, which gives identical sums for any
/// P >= used + count - 1, so P can be a fast transform length.
class CirculantHasher {
 public:
  /// Full circular convolution: length-L input, all L outputs.
  explicit CirculantHasher(const BitSequence& column)
      : CirculantHasher(column, column.size(), column.size(), column.size()) {}

  CirculantHasher(const BitSequence& column, std::size_t used, std::size_t count, std::size_t transform_length)
      : used_(used), count_(count), transform_(checked_length(column, used, count, transform_length)) {
    const std::size_t len = column.size(), p = transform_length;
    auto buf = transform_.real();
    if (p == len) {
      detail::load_bits(column, 0, len, buf);
    } else {
      std::fill(buf.begin(), buf.end(), 0.0);
      for (std::size_t k = 0; k < count; ++k) buf[k] = column[k];
      for (std::size_t d = 1; d < used; ++d) buf[p - d] = column[len - d];
    }
    transform_.forward();
    auto spec = transform_.spectrum();
    spectrum_ = std::make_shared<const std::vector<std::complex<double>>>(spec.begin(), spec.end());
  }

  /// Another hasher for the same column with its own work buffers.
  CirculantHasher clone() const { return CirculantHasher(spectrum_, used_, count_, transform_.size()); }

  std::size_t transform_length() const noexcept { return transform_.size(); }
  std::size_t used() const noexcept { return used_; }
  std::size_t count() const noexcept { return count_; }

  /// Product with input bits [offset, offset + used()), zero-extended;
  /// returns the first count() outputs.
  BitSequence convolve(const BitSequence& input, std::size_t offset = 0, double* max_residual = nullptr) {
    detail::require(offset <= input.size() && input.size() - offset >= used_, "convolution input too short");
    detail::load_bits(input, offset, used_, transform_.real());
    transform_.forward();
    auto spec = transform_.spectrum();
    const auto& col = *spectrum_;
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= col[k];
    transform_.inverse();
    return detail::round_mod2(transform_.real(), count_, max_residual);
  }

 private:
  CirculantHasher(std::shared_ptr<const std::vector<std::complex<double>>> spectrum, std::size_t used,
                  std::size_t count, std::size_t p)
      : used_(used), count_(count), transform_(p), spectrum_(std::move(spectrum)) {}

  static std::size_t checked_length(const BitSequence& column, std::size_t used, std::size_t count, std::size_t p) {
    const std::size_t len = column.size();
    detail::require(len > 0, "circulant column must be non-empty");
    detail::require(used >= 1 && used <= len && count >= 1 && count <= len, "circulant window out of range");
    detail::require(p == len || (p >= used + count - 1 && used + count - 1 <= len),
                    "transform length too short for the circulant window");
    return p;
  }

  std::size_t used_;
  std::size_t count_;
  fft::RealTransform transform_;
  std::shared_ptr<const std::vector<std::complex<double>>> spectrum_;
};

/// z_i = sum_j a_j b_{(i-j) mod L} mod 2, via the transform. The optional
/// out-parameter receives the largest pre-rounding residual.
inline BitSequence circular_convolve_gf2(const BitSequence& a, const BitSequence& b, double* max_residual = nullptr) {
  detail::require(a.size() == b.size(), "convolution inputs must have equal length");
  detail::require(!a.empty(), "convolution inputs must be non-empty");
  CirculantHasher hasher(a);
  return hasher.convolve(b, 0, max_residual);
}

/// Direct O(mn) product with the Toeplitz block.
inline BitSequence extract_naive(const Seed& seed, const BitSequence& raw, const ExtractorParams& params) {
  detail::check_standard(seed, raw, params);
  const std::size_t len = seed.size();
  BitSequence key(params.m);
  for (std::size_t i = 0; i < params.m; ++i) {
    bool acc = false;
    for (std::size_t j = 0; j < params.n; ++j) acc ^= seed[i >= j ? i - j : i + len - j] && raw[j];
    key.set(i, acc);
  }
  return key;
}

/// As extract_naive, but gives up once `deadline` passes (checked per row).
inline std::optional<BitSequence> extract_naive_until(const Seed& seed, const BitSequence& raw,
                                                      const ExtractorParams& params,
                                                      std::chrono::steady_clock::time_point deadline) {
  detail::check_standard(seed, raw, params);
  const std::size_t len = seed.size();
  BitSequence key(params.m);
  for (std::size_t i = 0; i < params.m; ++i) {
    if (std::chrono::steady_clock::now() > deadline) return std::nullopt;
    bool acc = false;
    for (std::size_t j = 0; j < params.n; ++j) acc ^= seed[i >= j ? i - j : i + len - j] && raw[j];
    key.set(i, acc);
  }
  return key;
}

inline BitSequence extract_fft(const Seed& seed, const BitSequence& raw, const ExtractorParams& params) {
  detail::check_standard(seed, raw, params);
  CirculantHasher hasher(seed.bits(), params.n, params.m, fft::good_size(seed.size()));
  return hasher.convolve(raw);
}

inline BitSequence extract_modified(const Seed& seed, const BitSequence& raw, std::size_t m) {
  detail::check_modified(seed, raw, m);
  const std::size_t n = raw.size();
  CirculantHasher hasher(seed.bits(), n - m, m, fft::good_size(n));
  return hasher.convolve(raw) ^ raw.slice(n - m, m);
}

/// Direct O(m(n-m)) evaluation of the modified construction.
inline BitSequence extract_modified_naive(const Seed& seed, const BitSequence& raw, std::size_t m) {
  detail::check_modified(seed, raw, m);
  const std::size_t n = raw.size();
  BitSequence key(m);
  for (std::size_t i = 0; i < m; ++i) {
    bool acc = raw[n - m + i];
    for (std::size_t j = 0; j < n - m; ++j) acc ^= seed[i >= j ? i - j : i + n - j] && raw[j];
    key.set(i, acc);
  }
  return key;
}

/// Block extractor for either variant with the seed transform done once.
class BlockExtractor {
 public:
  BlockExtractor(const Seed& seed, const ExtractorParams& params) : params_(params), hasher_(make(seed, params)) {}

  const ExtractorParams& params() const noexcept { return params_; }

  BlockExtractor clone() const { return BlockExtractor(params_, hasher_.clone()); }

  /// Hashes bits [offset, offset + n) of `raw`.
  BitSequence extract(const BitSequence& raw, std::size_t offset = 0) {
    detail::require(offset <= raw.size() && raw.size() - offset >= params_.n, "raw block shorter than n");
    if (params_.variant == Variant::standard) return hasher_.convolve(raw, offset);
    const std::size_t n = params_.n, m = params_.m;
    return hasher_.convolve(raw, offset) ^ raw.slice(offset + n - m, m);
  }

 private:
  BlockExtractor(const ExtractorParams& params, CirculantHasher hasher) : params_(params), hasher_(std::move(hasher)) {}

  static CirculantHasher make(const Seed& seed, const ExtractorParams& params) {
    params.validate();
    detail::require(seed.size() == params.seed_length(), "seed length does not match extractor variant");
    const std::size_t used = params.variant == Variant::standard ? params.n : params.n - params.m;
    return CirculantHasher(seed.bits(), used, params.m, fft::good_size(seed.size()));
  }

  ExtractorParams params_;
  CirculantHasher hasher_;
};

inline void to_json(nlohmann::json& j, const ExtractorParams& p) {
  j = nlohmann::json{{"n", p.n}, {"m", p.m}, {"variant", to_string(p.variant)}, {"seed_length", p.seed_length()}};
}

inline void to_json(nlohmann::json& j, const SecurityParams& s) {
  j = nlohmann::json{{"bit_depth", s.bit_depth}, {"h_min", s.h_min}, {"epsilon", s.epsilon}};
}

}  // namespace qrng

#pragma once

// Packed bit sequences and the on-disk formats for raw bitstreams, seeds,
// keys and ADC symbol streams.
//
// Bitstream file: ceil(len/8) octets, bit i stored in octet i/8 at bit
// position i%8 (LSB-first). Pad bits in the last octet are zero.
// Symbol file: one octet per symbol, value < 2^N.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qrng/error.hpp"
#include "qrng/rng.hpp"

namespace qrng {

class BitSequence {
 public:
  BitSequence() = default;

  /// `length` zero bits.
  explicit BitSequence(std::size_t length) : bytes_((length + 7) / 8, 0), length_(length) {}

  BitSequence(std::initializer_list<int> bits) : BitSequence(bits.size()) {
    std::size_t i = 0;
    for (int b : bits) set(i++, b != 0);
  }

  /// Takes `length` bits from packed LSB-first octets; anything past
  /// `length` is discarded.
  static BitSequence from_bytes(std::span<const std::uint8_t> bytes, std::size_t length) {
    detail::require(length <= bytes.size() * 8, "from_bytes: not enough octets for requested length");
    BitSequence out;
    out.length_ = length;
    out.bytes_.assign(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>((length + 7) / 8));
    out.clear_padding();
    return out;
  }

  /// One element per bit, any non-zero value is a one.
  static BitSequence from_unpacked(std::span<const std::uint8_t> bits) {
    BitSequence out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (bits[i]) out.bytes_[i >> 3] |= static_cast<std::uint8_t>(1u << (i & 7));
    return out;
  }

  static BitSequence random(Xoshiro256& rng, std::size_t length) {
    BitSequence out(length);
    std::size_t i = 0;
    for (; i + 8 <= out.bytes_.size(); i += 8) {
      const std::uint64_t w = rng();
      for (int k = 0; k < 8; ++k) out.bytes_[i + k] = static_cast<std::uint8_t>(w >> (8 * k));
    }
    if (i < out.bytes_.size()) {
      const std::uint64_t w = rng();
      for (int k = 0; i < out.bytes_.size(); ++i, ++k) out.bytes_[i] = static_cast<std::uint8_t>(w >> (8 * k));
    }
    out.clear_padding();
    return out;
  }

  std::size_t size() const noexcept { return length_; }
  bool empty() const noexcept { return length_ == 0; }
  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }

  bool operator[](std::size_t i) const noexcept { return (bytes_[i >> 3] >> (i & 7)) & 1u; }

  bool at(std::size_t i) const {
    detail::require(i < length_, "bit index out of range");
    return (*this)[i];
  }

  void set(std::size_t i, bool value) {
    const auto mask = static_cast<std::uint8_t>(1u << (i & 7));
    if (value)
      bytes_[i >> 3] |= mask;
    else
      bytes_[i >> 3] &= static_cast<std::uint8_t>(~mask);
  }

  void push_back(bool value) {
    if ((length_ & 7) == 0) bytes_.push_back(0);
    ++length_;
    set(length_ - 1, value);
  }

  void append(const BitSequence& other) {
    if ((length_ & 7) == 0) {
      bytes_.insert(bytes_.end(), other.bytes_.begin(), other.bytes_.end());
      length_ += other.length_;
      return;
    }
    const unsigned shift = length_ & 7;
    std::size_t pos = length_ >> 3;
    length_ += other.length_;
    bytes_.resize((length_ + 7) / 8, 0);
    for (auto b : other.bytes_) {
      bytes_[pos] |= static_cast<std::uint8_t>(b << shift);
      if (++pos < bytes_.size()) bytes_[pos] = static_cast<std::uint8_t>(b >> (8 - shift));
    }
  }

  /// Bits [start, start + count).
  BitSequence slice(std::size_t start, std::size_t count) const {
    detail::require(start <= length_ && count <= length_ - start, "slice out of range");
    if ((start & 7) == 0) return from_bytes(std::span(bytes_).subspan(start >> 3), count);
    BitSequence out(count);
    const unsigned shift = start & 7;
    const std::size_t first = start >> 3;
    for (std::size_t k = 0; k < out.bytes_.size(); ++k) {
      unsigned lo = bytes_[first + k] >> shift;
      unsigned hi = first + k + 1 < bytes_.size() ? bytes_[first + k + 1] << (8 - shift) : 0u;
      out.bytes_[k] = static_cast<std::uint8_t>(lo | hi);
    }
    out.clear_padding();
    return out;
  }

  /// One octet (0 or 1) per bit.
  std::vector<std::uint8_t> unpack() const {
    std::vector<std::uint8_t> out(length_);
    for (std::size_t i = 0; i < length_; ++i) out[i] = (*this)[i];
    return out;
  }

  std::size_t count_ones() const noexcept {
    std::size_t n = 0;
    for (auto b : bytes_) n += static_cast<std::size_t>(std::popcount(b));
    return n;
  }

  friend bool operator==(const BitSequence&, const BitSequence&) = default;

 private:
  void clear_padding() {
    if (length_ & 7) bytes_.back() &= static_cast<std::uint8_t>((1u << (length_ & 7)) - 1);
  }

  std::vector<std::uint8_t> bytes_;
  std::size_t length_ = 0;
};

/// Bitwise exclusive-or (addition over GF(2)).
inline BitSequence operator^(const BitSequence& a, const BitSequence& b) {
  detail::require(a.size() == b.size(), "xor: length mismatch");
  std::vector<std::uint8_t> out(a.bytes().size());
  std::transform(a.bytes().begin(), a.bytes().end(), b.bytes().begin(), out.begin(),
                 [](std::uint8_t x, std::uint8_t y) { return static_cast<std::uint8_t>(x ^ y); });
  return BitSequence::from_bytes(out, a.size());
}

inline BitSequence bit_xor(const BitSequence& a, const BitSequence& b) { return a ^ b; }

/// N-bit ADC output samples, N in 1..8.
class SymbolSequence {
 public:
  SymbolSequence() = default;

  SymbolSequence(unsigned bit_depth, std::vector<std::uint8_t> symbols)
      : bit_depth_(bit_depth), symbols_(std::move(symbols)) {
    detail::require(bit_depth_ >= 1 && bit_depth_ <= 8, "symbol bit depth must be in 1..8");
    const unsigned limit = 1u << bit_depth_;
    for (auto s : symbols_) detail::require(s < limit, "symbol out of range for bit depth");
  }

  unsigned bit_depth() const noexcept { return bit_depth_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  std::span<const std::uint8_t> symbols() const noexcept { return symbols_; }
  std::uint8_t operator[](std::size_t i) const noexcept { return symbols_[i]; }

  friend bool operator==(const SymbolSequence&, const SymbolSequence&) = default;

 private:
  unsigned bit_depth_ = 1;
  std::vector<std::uint8_t> symbols_;
};

/// Each symbol contributes N bits, least significant first.
inline BitSequence symbols_to_bits(const SymbolSequence& s) {
  const unsigned depth = s.bit_depth();
  BitSequence out(s.size() * depth);
  std::size_t pos = 0;
  for (auto sym : s.symbols())
    for (unsigned b = 0; b < depth; ++b, ++pos)
      if ((sym >> b) & 1u) out.set(pos, true);
  return out;
}

inline SymbolSequence bits_to_symbols(const BitSequence& bits, unsigned bit_depth) {
  detail::require(bit_depth >= 1 && bit_depth <= 8, "symbol bit depth must be in 1..8");
  detail::require(bits.size() % bit_depth == 0, "bit length is not a multiple of the symbol depth");
  std::vector<std::uint8_t> symbols(bits.size() / bit_depth);
  std::size_t pos = 0;
  for (auto& sym : symbols) {
    unsigned v = 0;
    for (unsigned b = 0; b < bit_depth; ++b, ++pos) v |= static_cast<unsigned>(bits[pos]) << b;
    sym = static_cast<std::uint8_t>(v);
  }
  return SymbolSequence(bit_depth, std::move(symbols));
}

namespace detail {

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path, std::size_t max_bytes) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw IoError("file not found: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  const auto size = static_cast<std::size_t>(std::filesystem::file_size(path));
  std::vector<std::uint8_t> data(std::min(size, max_bytes));
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (in.gcount() != static_cast<std::streamsize>(data.size())) throw IoError("short read: " + path.string());
  return data;
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace detail

inline constexpr std::size_t kAllBits = std::numeric_limits<std::size_t>::max();

/// Reads min(max_bits, 8 * file size) bits.
inline BitSequence load_bits(const std::filesystem::path& path, std::size_t max_bits = kAllBits) {
  const std::size_t max_bytes = max_bits == kAllBits ? kAllBits : (max_bits + 7) / 8;
  auto data = detail::read_file(path, max_bytes);
  if (data.empty() && max_bits > 0) throw IoError("empty bitstream file: " + path.string());
  return BitSequence::from_bytes(data, std::min(max_bits, data.size() * 8));
}

inline void store_bits(const BitSequence& seq, const std::filesystem::path& path) {
  detail::write_file(path, seq.bytes());
}

inline SymbolSequence load_symbols(const std::filesystem::path& path, unsigned bit_depth) {
  auto data = detail::read_file(path, kAllBits);
  if (data.empty()) throw IoError("empty symbol file: " + path.string());
  return SymbolSequence(bit_depth, std::move(data));
}

inline void store_symbols(const SymbolSequence& s, const std::filesystem::path& path) {
  detail::write_file(path, s.symbols());
}

}  // namespace qrng

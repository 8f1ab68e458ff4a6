#include <gtest/gtest.h>

#include <fstream>

#include "qrng/bitio.hpp"
#include "test_util.hpp"

using namespace qrng;

namespace {

std::vector<unsigned char> read_raw(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_raw(const std::filesystem::path& p, std::vector<unsigned char> bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST(BitSequence, PaddingBitsStayZero) {
  Xoshiro256 rng(3);
  for (std::size_t len : {1u, 7u, 9u, 63u, 100u}) {
    auto s = BitSequence::random(rng, len);
    if (len % 8) EXPECT_EQ(s.bytes().back() >> (len % 8), 0) << len;
    auto t = s.slice(len / 3, len - len / 3);
    if (t.size() % 8) EXPECT_EQ(t.bytes().back() >> (t.size() % 8), 0);
  }
}

TEST(BitSequence, SliceAndAppendAgreeWithPerBitCopy) {
  Xoshiro256 rng(11);
  auto s = BitSequence::random(rng, 1000);
  for (std::size_t start : {0u, 1u, 5u, 8u, 13u, 999u}) {
    const std::size_t count = (1000 - start) / 2;
    auto t = s.slice(start, count);
    ASSERT_EQ(t.size(), count);
    for (std::size_t i = 0; i < count; ++i) ASSERT_EQ(t[i], s[start + i]);
  }
  BitSequence joined;
  std::vector<bool> expect;
  for (std::size_t len : {3u, 8u, 13u, 0u, 21u, 64u, 5u}) {
    auto piece = BitSequence::random(rng, len);
    joined.append(piece);
    for (std::size_t i = 0; i < len; ++i) expect.push_back(piece[i]);
  }
  ASSERT_EQ(joined.size(), expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_EQ(joined[i], expect[i]);
}

TEST(BitSequence, SliceOutOfRangeThrows) {
  BitSequence s(10);
  EXPECT_THROW(s.slice(5, 6), ValidationError);
  EXPECT_THROW(s.at(10), ValidationError);
}

TEST(LoadBits, LsbFirstWithinOctet) {
  testutil::TempDir dir;
  write_raw(dir / "one.bin", {0x01});
  EXPECT_EQ(load_bits(dir / "one.bin", 8), (BitSequence{1, 0, 0, 0, 0, 0, 0, 0}));
}

TEST(LoadBits, TruncatesToMaxBits) {
  testutil::TempDir dir;
  write_raw(dir / "ff00.bin", {0xFF, 0x00});
  EXPECT_EQ(load_bits(dir / "ff00.bin", 4), (BitSequence{1, 1, 1, 1}));
  EXPECT_EQ(load_bits(dir / "ff00.bin").size(), 16u);
}

TEST(LoadBits, MissingAndEmptyFilesAreErrors) {
  testutil::TempDir dir;
  EXPECT_THROW(load_bits(dir / "nope.bin"), IoError);
  write_raw(dir / "empty.bin", {});
  EXPECT_THROW(load_bits(dir / "empty.bin", 8), IoError);
  EXPECT_TRUE(load_bits(dir / "empty.bin", 0).empty());
}

TEST(StoreBits, PacksAndPadsWithZeros) {
  testutil::TempDir dir;
  store_bits(BitSequence{1, 0, 1}, dir / "x.bin");
  EXPECT_EQ(read_raw(dir / "x.bin"), (std::vector<unsigned char>{0x05}));
  store_bits(BitSequence{}, dir / "e.bin");
  EXPECT_EQ(std::filesystem::file_size(dir / "e.bin"), 0u);
}

TEST(StoreBits, RoundTripOf10007RandomBits) {
  testutil::TempDir dir;
  Xoshiro256 rng(10007);
  auto s = BitSequence::random(rng, 10007);
  store_bits(s, dir / "r.bin");
  EXPECT_EQ(std::filesystem::file_size(dir / "r.bin"), (10007u + 7) / 8);
  EXPECT_EQ(load_bits(dir / "r.bin", 10007), s);
}

TEST(Xor, IdentityAndSelfInverse) {
  BitSequence a{1, 0, 1, 0};
  EXPECT_EQ(a ^ BitSequence(4), a);
  EXPECT_EQ(a ^ a, (BitSequence{0, 0, 0, 0}));
  EXPECT_THROW(a ^ BitSequence(2), ValidationError);
}

TEST(Xor, MatchesPerBitLoop) {
  Xoshiro256 rng(64);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = BitSequence::random(rng, 64), b = BitSequence::random(rng, 64);
    auto c = bit_xor(a, b);
    for (std::size_t i = 0; i < 64; ++i) ASSERT_EQ(c[i], a[i] != b[i]);
  }
}

TEST(Xor, AssociativeAndCommutative) {
  Xoshiro256 rng(5);
  for (std::size_t len : {1u, 13u, 200u}) {
    auto a = BitSequence::random(rng, len), b = BitSequence::random(rng, len), c = BitSequence::random(rng, len);
    EXPECT_EQ(a ^ b, b ^ a);
    EXPECT_EQ((a ^ b) ^ c, a ^ (b ^ c));
    EXPECT_EQ((a ^ b) ^ b, a);
  }
}

TEST(Symbols, BinaryExpansionLsbFirst) {
  EXPECT_EQ(symbols_to_bits(SymbolSequence(3, {5})), (BitSequence{1, 0, 1}));
  EXPECT_EQ(symbols_to_bits(SymbolSequence(1, {1, 0, 1})), (BitSequence{1, 0, 1}));
}

TEST(Symbols, RejectsOutOfRangeValues) {
  EXPECT_THROW(SymbolSequence(3, {8}), ValidationError);
  EXPECT_THROW(SymbolSequence(0, {0}), ValidationError);
  EXPECT_THROW(SymbolSequence(9, {0}), ValidationError);
}

TEST(Symbols, RoundTripAtEveryDepth) {
  Xoshiro256 rng(8);
  for (unsigned depth = 1; depth <= 8; ++depth) {
    std::vector<std::uint8_t> v(1000);
    for (auto& x : v) x = static_cast<std::uint8_t>(rng.below(1u << depth));
    SymbolSequence s(depth, v);
    auto bits = symbols_to_bits(s);
    ASSERT_EQ(bits.size(), depth * 1000u);
    EXPECT_EQ(bits_to_symbols(bits, depth), s) << depth;
  }
}

TEST(Symbols, FileRoundTrip) {
  testutil::TempDir dir;
  SymbolSequence s(5, {0, 31, 16, 7});
  store_symbols(s, dir / "s.sym");
  EXPECT_EQ(read_raw(dir / "s.sym"), (std::vector<unsigned char>{0, 31, 16, 7}));
  EXPECT_EQ(load_symbols(dir / "s.sym", 5), s);
  EXPECT_THROW(load_symbols(dir / "s.sym", 4), ValidationError);
}

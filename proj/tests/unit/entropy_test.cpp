#include <gtest/gtest.h>

#include "mscodec/entropy.hpp"
#include "test_support.hpp"

using namespace mscodec;
using testing_support::Rng;

namespace {

std::vector<std::uint8_t> random_bytes(Rng& rng, std::size_t n) {
  std::vector<std::uint8_t> v(n);
  for (auto& b : v) b = static_cast<std::uint8_t>(rng.bits());
  return v;
}

}  // namespace

TEST(Entropy, EmptyInput) {
  const auto coded = entropy_encode({});
  EXPECT_TRUE(entropy_decode(coded, 0).empty());
}

TEST(Entropy, RandomRoundTrip) {
  Rng rng(1);
  const auto data = random_bytes(rng, 10000);
  EXPECT_EQ(entropy_decode(entropy_encode(data), data.size()), data);
}

TEST(Entropy, ZerosCompress) {
  const std::vector<std::uint8_t> zeros(1000, 0);
  const auto coded = entropy_encode(zeros);
  EXPECT_LT(coded.size(), 100u);
  EXPECT_EQ(entropy_decode(coded, zeros.size()), zeros);
}

TEST(Entropy, UniformDataBarelyExpands) {
  Rng rng(2);
  const auto data = random_bytes(rng, 65536);
  const auto coded = entropy_encode(data);
  EXPECT_GE(coded.size(), data.size() * 99 / 100);
  EXPECT_LE(coded.size(), data.size() * 105 / 100);
}

TEST(Entropy, SkewedAlphabetRoundTrip) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint8_t> data(static_cast<std::size_t>(rng.integer(1, 3000)));
    const int alphabet = rng.integer(1, 8);
    for (auto& b : data) b = static_cast<std::uint8_t>(rng.integer(0, alphabet - 1) * 37);
    EXPECT_EQ(entropy_decode(entropy_encode(data), data.size()), data);
  }
}

TEST(Entropy, Deterministic) {
  Rng rng(4);
  const auto data = random_bytes(rng, 5000);
  EXPECT_EQ(entropy_encode(data), entropy_encode(data));
}

TEST(Entropy, TruncatedStreamThrows) {
  Rng rng(5);
  const auto data = random_bytes(rng, 2000);
  auto coded = entropy_encode(data);
  coded.resize(coded.size() / 2);
  EXPECT_THROW(entropy_decode(coded, data.size()), EntropyError);
}

TEST(Entropy, TrailingBytesThrow) {
  const std::vector<std::uint8_t> data{1, 2, 3, 4, 5};
  auto coded = entropy_encode(data);
  coded.push_back(0xAB);
  EXPECT_THROW(entropy_decode(coded, data.size()), EntropyError);
}

TEST(Entropy, WrongLengthThrows) {
  const std::vector<std::uint8_t> data(300, 9);
  const auto coded = entropy_encode(data);
  EXPECT_THROW(entropy_decode(coded, data.size() * 10), EntropyError);
}

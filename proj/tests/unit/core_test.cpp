#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "mscodec/image.hpp"
#include "mscodec/metrics.hpp"
#include "mscodec/pgm.hpp"
#include "mscodec/quantizer.hpp"
#include "test_support.hpp"

using namespace mscodec;
using testing_support::Rng;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& header, std::vector<std::uint8_t> data) {
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), data.begin(), data.end());
  return out;
}

PgmError::Code pgm_error_code(const std::vector<std::uint8_t>& bytes) {
  try {
    read_pgm(bytes);
  } catch (const PgmError& e) {
    return e.code();
  }
  ADD_FAILURE() << "read_pgm accepted a malformed file";
  return PgmError::Code::MalformedHeader;
}

}  // namespace

TEST(Image, RejectsOutOfRangeSamplesAndBadSizes) {
  EXPECT_THROW(Image(2, 1, std::vector<double>{0.0, 256.0}), std::invalid_argument);
  EXPECT_THROW(Image(2, 1, std::vector<double>{-0.5, 0.0}), std::invalid_argument);
  EXPECT_THROW(Image(2, 2, std::vector<double>{1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(Image(0, 3), std::invalid_argument);
}

TEST(Image, SetClampsToRange) {
  Image img(2, 1);
  img.set(0, 0, 300.0);
  img.set(1, 0, -4.0);
  EXPECT_EQ(img.at(0, 0), 255.0);
  EXPECT_EQ(img.at(1, 0), 0.0);
}

TEST(Image, CanonicalLabelsFollowFirstOccurrence) {
  const std::vector<int> labels{7, 7, 3, 9, 3, 7};
  EXPECT_EQ(canonicalize_labels(labels), (std::vector<int>{0, 0, 1, 2, 1, 0}));
}

TEST(Pgm, ReadsTwoByOne) {
  const Image img = read_pgm(bytes_of("P5\n2 1\n255\n", {0, 255}));
  EXPECT_EQ(img.width(), 2);
  EXPECT_EQ(img.height(), 1);
  EXPECT_EQ(img.at(0, 0), 0.0);
  EXPECT_EQ(img.at(1, 0), 255.0);
}

TEST(Pgm, SkipsComments) {
  const Image img = read_pgm(bytes_of("P5\n# c\n1 1\n255\n", {7}));
  EXPECT_EQ(img.at(0, 0), 7.0);
}

TEST(Pgm, DistinctErrors) {
  EXPECT_EQ(pgm_error_code(bytes_of("P5\n2 2\n255\n", {1, 2, 3})), PgmError::Code::TruncatedData);
  EXPECT_EQ(pgm_error_code(bytes_of("P5\n1 1\n65535\n", {0, 0})), PgmError::Code::UnsupportedMaxval);
  EXPECT_EQ(pgm_error_code(bytes_of("P2\n1 1\n255\n", {0})), PgmError::Code::MalformedHeader);
  EXPECT_EQ(pgm_error_code(bytes_of("P5\n1\n", {})), PgmError::Code::MalformedHeader);
  EXPECT_EQ(pgm_error_code({}), PgmError::Code::MalformedHeader);
}

TEST(Pgm, WritesExactHeader) {
  EXPECT_EQ(write_pgm(Image(1, 1, 0.0)), bytes_of("P5\n1 1\n255\n", {0}));
}

TEST(Pgm, RoundsToNearest) {
  const std::vector<std::uint8_t> out = write_pgm(Image(1, 1, std::vector<double>{127.6}));
  EXPECT_EQ(out.back(), 128);
}

TEST(Pgm, RoundTripOfIntegerImageIsExact) {
  Rng rng(11);
  const Image img = testing_support::random_image(rng, 16, 16);
  EXPECT_EQ(read_pgm(write_pgm(img)), img);
}

TEST(Quantizer, Examples) {
  const Quantizer q2(2);
  EXPECT_EQ(q2.quantize(200.0), 1);
  EXPECT_EQ(q2.dequantize(1), 255.0);
  for (int levels = 2; levels <= 256; ++levels) {
    const Quantizer q(levels);
    EXPECT_EQ(q.quantize(0.0), 0);
    EXPECT_EQ(q.dequantize(0), 0.0);
    EXPECT_EQ(q.quantize(255.0), levels - 1);
    EXPECT_EQ(q.dequantize(levels - 1), 255.0);
  }
  const Quantizer q256(256);
  for (int v = 0; v <= 255; ++v) {
    EXPECT_EQ(q256.quantize(v), v);
    EXPECT_EQ(q256.dequantize(v), v);
  }
}

TEST(Quantizer, RejectsInvalidLevels) {
  EXPECT_THROW(Quantizer(1), std::invalid_argument);
  EXPECT_THROW(Quantizer(257), std::invalid_argument);
}

TEST(Quantizer, MatchesRoundingFormulaAndInvariants) {
  for (int levels = 2; levels <= 256; ++levels) {
    const Quantizer q(levels);
    for (int i = 0; i < levels; ++i) {
      // Reference: round half up of i * 255 / (q - 1) in exact rationals.
      const long num = 2L * i * 255 + (levels - 1);
      EXPECT_EQ(q.dequantize(i), static_cast<double>(num / (2L * (levels - 1))));
      EXPECT_EQ(q.quantize(q.dequantize(i)), i) << "q=" << levels << " i=" << i;
      if (i > 0) EXPECT_GT(q.dequantize(i), q.dequantize(i - 1));
    }
    int prev = 0;
    for (double v = 0.0; v <= 255.0; v += 0.25) {
      const int idx = q.quantize(v);
      EXPECT_GE(idx, prev);
      prev = idx;
    }
  }
}

TEST(Metrics, PsnrExamples) {
  Image a(4, 4, 0.0), b(4, 4, 255.0);
  EXPECT_TRUE(is_lossless(psnr(a, a)));
  EXPECT_DOUBLE_EQ(psnr(a, b), 0.0);
  EXPECT_NEAR(10.0 * std::log10(65025.0 / 6.5025), 40.0, 1e-12);
  // mse 6.5025 on one pixel
  Image c(1, 1, 100.0), d(1, 1, 100.0 + std::sqrt(6.5025));
  EXPECT_NEAR(mse(c, d), 6.5025, 1e-12);
  EXPECT_NEAR(psnr(c, d), 40.0, 1e-9);
}

TEST(Metrics, PsnrSymmetricAndStrictlyDecreasing) {
  Rng rng(5);
  const Image a = testing_support::random_image(rng, 8, 8, false);
  Image b = testing_support::random_image(rng, 8, 8, false);
  EXPECT_EQ(psnr(a, b), psnr(b, a));
  const double before = psnr(a, b);
  const double v = b.at(3, 3);
  b.set(3, 3, a.at(3, 3) < 128 ? 255.0 : 0.0);
  ASSERT_NE(v, b.at(3, 3));
  if (std::abs(b.at(3, 3) - a.at(3, 3)) > std::abs(v - a.at(3, 3))) EXPECT_LT(psnr(a, b), before);
}

TEST(Metrics, DimensionMismatchThrows) {
  EXPECT_THROW(mse(Image(2, 2), Image(2, 3)), std::invalid_argument);
}

TEST(Metrics, BitsPerPixel) {
  EXPECT_DOUBLE_EQ(bits_per_pixel(100, Image(100, 100)), 0.08);
  EXPECT_DOUBLE_EQ(bits_per_pixel(0, Image(3, 3)), 0.0);
  EXPECT_DOUBLE_EQ(bits_per_pixel(1, Image(1, 1)), 8.0);
}

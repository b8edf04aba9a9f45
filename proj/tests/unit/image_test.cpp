#include <gtest/gtest.h>

#include <limits>

#include "tmqi/error.hpp"
#include "tmqi/image.hpp"

namespace tmqi {
namespace {

template <typename Fn>
Errc code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no tmqi::Error thrown";
  return Errc::kIo;
}

TEST(Luma, WeightsSumToExactlyOne) {
  EXPECT_EQ(luma(1.0, 1.0, 1.0), 1.0);
  EXPECT_EQ(luma(255.0, 255.0, 255.0), 255.0);
}

TEST(Luma, SinglePrimaries) {
  const LdrImage red(1, 1, {255, 0, 0});
  EXPECT_NEAR(luminance(red)[0], 76.245, 1e-12);
  const LdrImage blue(1, 1, {0, 0, 255});
  EXPECT_NEAR(to_grayscale_f64(blue)[0], 29.07, 1e-12);
  const LdrImage black(1, 1, {0, 0, 0});
  EXPECT_EQ(luminance(black)[0], 0.0);
}

TEST(Luma, UniformGrayKeepsValueAndShape) {
  const LdrImage gray(3, 2, std::vector<std::uint8_t>(18, 128));
  const Plane p = to_grayscale_f64(gray);
  ASSERT_EQ(p.width(), 3u);
  ASSERT_EQ(p.height(), 2u);
  for (const double v : p.values()) EXPECT_EQ(v, 128.0);

  const Plane one = to_grayscale_f64(LdrImage(1, 1, {1, 2, 3}));
  EXPECT_EQ(one.width(), 1u);
  EXPECT_EQ(one.height(), 1u);
}

TEST(Luma, HdrLuminanceMatchesManualSum) {
  const HdrImage img(2, 1, {1.0, 2.0, 3.0, 1000.0, 0.5, 0.0});
  const Plane p = luminance(img);
  EXPECT_DOUBLE_EQ(p[0], 0.299 * 1.0 + 0.587 * 2.0 + 0.114 * 3.0);
  EXPECT_DOUBLE_EQ(p[1], 0.299 * 1000.0 + 0.587 * 0.5);
}

TEST(HdrImage, RejectsBadSamples) {
  EXPECT_EQ(code_of([] { HdrImage(1, 1, {1.0, -0.5, 0.0}); }), Errc::kInvalidImage);
  EXPECT_EQ(code_of([] { HdrImage(1, 1, {1.0, std::numeric_limits<double>::quiet_NaN(), 0.0}); }),
            Errc::kNonFiniteSample);
  EXPECT_EQ(code_of([] { HdrImage(1, 1, {std::numeric_limits<double>::infinity(), 0.0, 0.0}); }),
            Errc::kNonFiniteSample);
  EXPECT_EQ(code_of([] { HdrImage(2, 1, {1.0, 1.0, 1.0}); }), Errc::kInvalidImage);
  EXPECT_EQ(code_of([] { HdrImage(0, 1, {}); }), Errc::kInvalidImage);
}

TEST(LdrImage, RejectsWrongSampleCount) {
  EXPECT_EQ(code_of([] { LdrImage(2, 2, std::vector<std::uint8_t>(11)); }), Errc::kInvalidImage);
}

TEST(Channels, SplitsInterleavedSamples) {
  const HdrImage img(2, 1, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
  EXPECT_EQ(img.channel(1)[1], 5.0);
  const LdrImage ldr(2, 1, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(ldr.channel(2)[0], 3.0);
}

TEST(Normalize, EndpointsAndAffineMiddle) {
  const Plane a = normalize_hdr_luminance(Plane(2, 1, {0.0, 1.0}));
  EXPECT_EQ(a[0], 0.0);
  EXPECT_EQ(a[1], 255.0);

  const Plane b = normalize_hdr_luminance(Plane(3, 1, {2.0, 4.0, 6.0}));
  EXPECT_EQ(b[0], 0.0);
  EXPECT_DOUBLE_EQ(b[1], 127.5);
  EXPECT_EQ(b[2], 255.0);
}

TEST(Normalize, FullRangeIsIdentity) {
  Plane p(16, 1);
  for (std::size_t i = 0; i < 16; ++i) p[i] = 17.0 * i;
  const Plane n = normalize_hdr_luminance(p);
  for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(n[i], p[i], 1e-12);
}

TEST(Normalize, StaysInRangeAndMonotone) {
  Plane p(5, 1, {1e-6, 3.0, 3.0 + 1e-12, 7e5, 1e9});
  const Plane n = normalize_hdr_luminance(p);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_GE(n[i], 0.0);
    EXPECT_LE(n[i], 255.0);
    if (i > 0) EXPECT_GE(n[i], n[i - 1]);
  }
  EXPECT_EQ(n[4], 255.0);
}

TEST(Normalize, ConstantPlane) {
  EXPECT_EQ(code_of([] { normalize_hdr_luminance(Plane(4, 4, 3.0)); }), Errc::kConstantImage);
  const Plane z = normalize_or_zero(Plane(4, 4, 3.0));
  for (const double v : z.values()) EXPECT_EQ(v, 0.0);
}

TEST(Error, MessageCarriesCodeName) {
  const Error e(Errc::kTooFewItems, "set 3");
  EXPECT_EQ(std::string(e.what()), "TooFewItems: set 3");
  EXPECT_EQ(e.detail(), "set 3");
}

}  // namespace
}  // namespace tmqi

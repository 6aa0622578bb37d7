#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>

#include "oracles.hpp"
#include "patchlr/errors.hpp"
#include "patchlr/image.hpp"

using namespace patchlr;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(LoadPgm, AsciiTwoByTwo) {
  const auto img = load_pgm(bytes_of("P2\n2 2\n255\n0 255\n128 64\n"));
  ASSERT_EQ(img.rows(), 2u);
  ASSERT_EQ(img.cols(), 2u);
  EXPECT_EQ(img(0, 0), 0.0);
  EXPECT_EQ(img(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(img(1, 0), 128.0 / 255.0);
  EXPECT_DOUBLE_EQ(img(1, 1), 64.0 / 255.0);
}

TEST(LoadPgm, BinarySaturated) {
  auto data = bytes_of("P5\n3 2\n255\n");
  data.insert(data.end(), 6, 255);
  const auto img = load_pgm(data);
  for (double v : img.data()) EXPECT_EQ(v, 1.0);
}

TEST(LoadPgm, CommentsAndSixteenBit) {
  auto data = bytes_of("P5\n# a comment\n2 1\n65535\n");
  for (std::uint8_t b : {0xFF, 0xFF, 0x80, 0x00}) data.push_back(b);
  const auto img = load_pgm(data);
  EXPECT_EQ(img(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(img(0, 1), 32768.0 / 65535.0);
}

TEST(LoadPgm, MatchesIndependentWriter) {
  std::mt19937 gen(7);
  std::vector<std::uint8_t> px(256 * 256);
  for (auto& b : px) b = static_cast<std::uint8_t>(gen() & 0xFF);
  const auto img = load_pgm(oracle::write_p5(256, 256, px));
  ASSERT_EQ(img.rows(), 256u);
  ASSERT_EQ(img.cols(), 256u);
  for (std::size_t i = 0; i < px.size(); ++i) {
    ASSERT_DOUBLE_EQ(img.data()[i], px[i] / 255.0);
  }
}

TEST(LoadPgm, Errors) {
  EXPECT_THROW(load_pgm(bytes_of("P6\n1 1\n255\n")), ParseError);
  EXPECT_THROW(load_pgm(bytes_of("P5\n2 2\n70000\n")), ParseError);
  EXPECT_THROW(load_pgm(bytes_of("P5\n2 2\n255\n\x01\x02")), TruncationError);
  EXPECT_THROW(load_pgm(bytes_of("P2\n2 2\n255\n0 1 2\n")), TruncationError);
  try {
    load_pgm(bytes_of("P5\nx 2\n255\n"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 3u);
  }
}

TEST(SavePgm, HalfRoundsUp) {
  const ImageMatrix img(1, 1, {0.5});
  const auto out = save_pgm(img);
  EXPECT_EQ(out.back(), 128);
}

TEST(SavePgm, ZerosAfterHeader) {
  const ImageMatrix img(4, 4, std::vector<double>(16, 0.0));
  const auto out = save_pgm(img);
  const std::string header = "P5\n4 4\n255\n";
  ASSERT_EQ(out.size(), header.size() + 16);
  EXPECT_TRUE(std::equal(header.begin(), header.end(), out.begin()));
  for (std::size_t i = header.size(); i < out.size(); ++i) EXPECT_EQ(out[i], 0);
}

TEST(SavePgm, RoundTripWithinHalfStep) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(64);
    for (auto& x : v) x = u(gen);
    const ImageMatrix img(8, 8, v);
    const auto back = load_pgm(save_pgm(img));
    for (std::size_t i = 0; i < v.size(); ++i) {
      ASSERT_LE(std::abs(back.data()[i] - v[i]), 1.0 / 510.0 + 1e-15);
    }
  }
}

TEST(SavePgm, RejectsOddMaxval) {
  const ImageMatrix img(1, 1, {0.5});
  EXPECT_THROW(save_pgm(img, 100), InvalidArgument);
}

TEST(ImageMatrixTest, RejectsBadValues) {
  EXPECT_THROW(ImageMatrix(2, 2, {0, 0, 0}), ShapeError);
  EXPECT_THROW(ImageMatrix(1, 2, {0.0, 1.5}), DomainError);
  EXPECT_THROW(ImageMatrix(1, 1, {std::nan("")}), DomainError);
  EXPECT_THROW(ImageMatrix(0, 3, {}), ShapeError);
}

TEST(ImageMatrixTest, FromClampedClipsAndZeroesNan) {
  Eigen::MatrixXd m(1, 3);
  m << -0.5, 1.5, std::nan("");
  const auto img = ImageMatrix::from_clamped(m);
  EXPECT_EQ(img(0, 0), 0.0);
  EXPECT_EQ(img(0, 1), 1.0);
  EXPECT_EQ(img(0, 2), 0.0);
}

TEST(Synth, Gradient) {
  const auto img = synth_image(SynthKind::Gradient, 2, 2, 99);
  EXPECT_EQ(img(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(img(0, 1), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(img(1, 0), 2.0 / 3.0);
  EXPECT_EQ(img(1, 1), 1.0);
}

TEST(Synth, Checkerboard) {
  const auto img = synth_image(SynthKind::Checkerboard, 16, 16, 0);
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t j = 0; j < 16; ++j) {
      EXPECT_EQ(img(i, j), ((i / 8 + j / 8) % 2) ? 1.0 : 0.0);
    }
  }
}

TEST(Synth, DeterministicPerSeed) {
  for (auto kind : {SynthKind::UniformNoise, SynthKind::GaussianBlobs}) {
    EXPECT_EQ(synth_image(kind, 32, 48, 5), synth_image(kind, 32, 48, 5));
    EXPECT_FALSE(synth_image(kind, 32, 48, 5) == synth_image(kind, 32, 48, 6));
  }
}

TEST(Synth, BlobsSpanUnitRange) {
  const auto img = synth_image(SynthKind::GaussianBlobs, 64, 64, 3);
  const auto [lo, hi] = std::minmax_element(img.data().begin(), img.data().end());
  EXPECT_EQ(*lo, 0.0);
  EXPECT_EQ(*hi, 1.0);
}

TEST(Synth, NameParsing) {
  for (auto kind : {SynthKind::Gradient, SynthKind::Checkerboard, SynthKind::GaussianBlobs,
                    SynthKind::UniformNoise}) {
    EXPECT_EQ(parse_synth_kind(to_string(kind)), kind);
  }
  EXPECT_THROW(parse_synth_kind("plaid"), InvalidArgument);
  EXPECT_THROW(synth_image(SynthKind::UniformNoise, 2, 8, 1), InvalidArgument);
}

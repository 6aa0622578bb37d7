#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "patchlr/errors.hpp"
#include "patchlr/footprint.hpp"
#include "patchlr/pipeline.hpp"
#include "patchlr/reorder.hpp"

using namespace patchlr;

namespace {

const PipelineConfig kNoSsim{NmfConfig{}, SsimConfig{}, false};

}  // namespace

TEST(Direct, FullRankIsExact) {
  const auto img = synth_image(SynthKind::UniformNoise, 16, 16, 3);
  const auto res = encode_decode_direct(img, Backend::Svd, 16, kNoSsim);
  EXPECT_EQ(res.record.psnr_db, std::numeric_limits<double>::infinity());
  EXPECT_LE((res.unclamped - img.to_matrix()).norm(), 1e-8 * img.to_matrix().norm());
}

TEST(Direct, FootprintAndRecord) {
  const auto img = synth_image(SynthKind::GaussianBlobs, 256, 256, 1);
  const auto res = encode_decode_direct(img, Backend::Svd, 32, kNoSsim, "blobs");
  EXPECT_EQ(res.record.footprint, 16384u);
  EXPECT_EQ(res.record.image, "blobs");
  EXPECT_EQ(res.record.mode, Mode::Direct);
  EXPECT_EQ(res.record.p, 0u);
  EXPECT_EQ(res.record.khat, 32u);
  EXPECT_EQ(res.record.nmf_iters, 0u);
}

TEST(Direct, SvdBeatsNmf) {
  const auto img = synth_image(SynthKind::GaussianBlobs, 32, 32, 2);
  for (std::size_t k : {2u, 5u, 10u}) {
    const auto svd = encode_decode_direct(img, Backend::Svd, k, kNoSsim);
    const auto nmf = encode_decode_direct(img, Backend::Nmf, k, kNoSsim);
    EXPECT_GE(nmf.factorization.final_error, svd.factorization.final_error - 1e-9);
    EXPECT_GT(nmf.record.nmf_iters, 0u);
  }
}

TEST(Patched, FullRankIsExact) {
  const auto img = synth_image(SynthKind::UniformNoise, 32, 32, 5);
  for (std::size_t p : {2u, 4u}) {
    const auto res = encode_decode_patched(img, Backend::Svd, p * p, p, kNoSsim);
    EXPECT_LE((res.unclamped - img.to_matrix()).norm(), 1e-8 * img.to_matrix().norm());
    EXPECT_EQ(res.record.psnr_db, std::numeric_limits<double>::infinity());
  }
}

TEST(Patched, PsnrMonotoneInRank) {
  const auto img = synth_image(SynthKind::GaussianBlobs, 64, 64, 3);
  double prev = -1.0;
  for (std::size_t khat = 1; khat <= 64; khat += 7) {
    const auto res = encode_decode_patched(img, Backend::Svd, khat, 8, kNoSsim);
    EXPECT_GE(res.record.psnr_db, prev - 1e-9) << "khat " << khat;
    prev = res.record.psnr_db;
  }
}

TEST(Patched, MatchedBudgetFootprint) {
  const auto img = synth_image(SynthKind::GaussianBlobs, 256, 256, 1);
  const auto res = encode_decode_patched(img, Backend::Svd, 32, 16, kNoSsim);
  EXPECT_EQ(res.record.footprint, 16384u);
  EXPECT_EQ(res.record.footprint, footprint(FootprintKind::Direct, 256, 256, 32));
  const auto direct = encode_decode_direct(img, Backend::Svd, 32, kNoSsim);
  EXPECT_GE(res.record.psnr_db, direct.record.psnr_db);
}

TEST(Patched, ReconstructionClamped) {
  const auto img = synth_image(SynthKind::UniformNoise, 32, 32, 1);
  const auto res = encode_decode_patched(img, Backend::Svd, 2, 4, kNoSsim);
  for (double v : res.reconstruction.data()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Encoded, RoundTripDirectAndPatched) {
  const auto img = synth_image(SynthKind::GaussianBlobs, 32, 48, 4);
  for (auto [p, rank] : {std::pair<std::size_t, std::size_t>{0, 6}, {8, 10}}) {
    for (auto backend : {Backend::Svd, Backend::Nmf}) {
      NmfConfig nmf;
      nmf.max_iters = 50;
      const auto enc = encode_image(img, backend, rank, p, nmf);
      const auto bytes = serialize_encoded(enc);
      const auto back = deserialize_encoded(bytes);
      EXPECT_EQ(back.n, 32u);
      EXPECT_EQ(back.m, 48u);
      EXPECT_EQ(back.p, p);
      EXPECT_TRUE(back.factorization.w == enc.factorization.w);
      EXPECT_TRUE(back.factorization.h == enc.factorization.h);
      EXPECT_EQ(back.factorization.backend, backend);
      EXPECT_EQ(back.factorization.final_error, enc.factorization.final_error);
      EXPECT_EQ(decode_image(back), decode_image(enc));
    }
  }
}

TEST(Encoded, CorruptionDetected) {
  const auto img = synth_image(SynthKind::GaussianBlobs, 16, 16, 4);
  auto bytes = serialize_encoded(encode_image(img, Backend::Svd, 3, 4, NmfConfig{}));
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(deserialize_encoded(bad), ParseError);
  bad = bytes;
  bad[12] = 8;  // claims p = 8: factor shapes no longer match
  EXPECT_THROW(deserialize_encoded(bad), ShapeError);
  EXPECT_THROW(deserialize_encoded(std::span(bytes).first(30)), TruncationError);
}

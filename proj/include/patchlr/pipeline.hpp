#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patchlr/factor.hpp"
#include "patchlr/image.hpp"
#include "patchlr/metrics.hpp"

namespace patchlr {

enum class Mode { Direct, Patched };

std::string_view to_string(Mode mode);

/// One experiment row: a single (image, backend, k, p) reconstruction.
struct SweepRecord {
  std::string image;
  Backend backend = Backend::Svd;
  Mode mode = Mode::Direct;
  std::size_t k = 0;
  std::size_t p = 0;     // 0 for direct
  std::size_t khat = 0;  // equals k for direct
  std::uint64_t footprint = 0;
  double mse = 0.0;
  double psnr_db = 0.0;
  double mssim = 0.0;
  double wall_time_ms = 0.0;
  std::size_t nmf_iters = 0;
  std::uint64_t seed = 0;
  /// ||A - WH||_F before clamping. Reordering is a permutation, so this is
  /// the same in image space and patch space. Not written to CSV.
  double factor_error = 0.0;
};

struct PipelineConfig {
  NmfConfig nmf;
  SsimConfig ssim;
  bool compute_mssim = true;
};

struct PipelineResult {
  ImageMatrix reconstruction;  // clamped to [0, 1]
  Eigen::MatrixXd unclamped;   // decoded product before clamping
  Factorization factorization;
  SweepRecord record;
};

/// T_k: factor the image matrix itself at rank k and decode W H.
PipelineResult encode_decode_direct(const ImageMatrix& img, Backend backend, std::size_t k,
                                    const PipelineConfig& cfg, std::string_view name = {});

/// Q_{khat,p}: reorder into patch columns, factor at rank khat, multiply and
/// scatter the patches back. record.k is set to khat; sweeps overwrite it with
/// the direct rank whose budget was matched.
PipelineResult encode_decode_patched(const ImageMatrix& img, Backend backend, std::size_t khat,
                                     std::size_t p, const PipelineConfig& cfg,
                                     std::string_view name = {});

// Encoded image ("LRE1"):
//   bytes 0..3 magic "LRE1", then n, m, p as u32 little-endian, zero padding
//   to 24 bytes (p = 0 marks a direct encoding);
//   W as an RMX1 blob, H as an RMX1 blob;
//   the factorization sidecar line terminated by '\n'.
struct EncodedImage {
  std::uint32_t n = 0;
  std::uint32_t m = 0;
  std::uint32_t p = 0;
  Factorization factorization;
};

/// p = 0 encodes directly, otherwise through the patch reordering.
EncodedImage encode_image(const ImageMatrix& img, Backend backend, std::size_t rank,
                          std::size_t p, const NmfConfig& nmf);

std::vector<std::uint8_t> serialize_encoded(const EncodedImage& enc);
EncodedImage deserialize_encoded(std::span<const std::uint8_t> bytes);

/// Multiplies the factors, undoes the reordering when p > 0, clamps to [0, 1].
ImageMatrix decode_image(const EncodedImage& enc);

}  // namespace patchlr

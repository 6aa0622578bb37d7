#include "patchlr/pipeline.hpp"

#include <chrono>
#include <cstring>

#include "patchlr/errors.hpp"
#include "patchlr/footprint.hpp"
#include "patchlr/matrix_io.hpp"
#include "patchlr/reorder.hpp"

namespace patchlr {

std::string_view to_string(Mode mode) { return mode == Mode::Direct ? "direct" : "patched"; }

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

PipelineResult finish(const ImageMatrix& img, Eigen::MatrixXd unclamped, Factorization fact,
                      SweepRecord rec, const PipelineConfig& cfg) {
  auto recon = ImageMatrix::from_clamped(unclamped);
  rec.mse = mse(img, recon);
  rec.psnr_db = psnr_from_mse(rec.mse);
  rec.mssim = cfg.compute_mssim ? mssim(img, recon, cfg.ssim) : 0.0;
  rec.nmf_iters = fact.backend == Backend::Nmf ? fact.iterations : 0;
  rec.seed = fact.backend == Backend::Nmf ? cfg.nmf.seed : 0;
  rec.factor_error = fact.final_error;
  return {std::move(recon), std::move(unclamped), std::move(fact), std::move(rec)};
}

}  // namespace

PipelineResult encode_decode_direct(const ImageMatrix& img, Backend backend, std::size_t k,
                                    const PipelineConfig& cfg, std::string_view name) {
  const auto start = Clock::now();
  auto fact = factorize(img.to_matrix(), k, backend, cfg.nmf);
  Eigen::MatrixXd product = fact.product();
  SweepRecord rec;
  rec.wall_time_ms = elapsed_ms(start);
  rec.image = name;
  rec.backend = backend;
  rec.mode = Mode::Direct;
  rec.k = k;
  rec.khat = k;
  rec.footprint = footprint(FootprintKind::Direct, img.rows(), img.cols(), k);
  return finish(img, std::move(product), std::move(fact), std::move(rec), cfg);
}

PipelineResult encode_decode_patched(const ImageMatrix& img, Backend backend, std::size_t khat,
                                     std::size_t p, const PipelineConfig& cfg,
                                     std::string_view name) {
  const auto start = Clock::now();
  const auto patches = reorder(img, p);
  auto fact = factorize(patches.data(), khat, backend, cfg.nmf);
  Eigen::MatrixXd product = inverse_reorder_matrix(fact.product(), img.rows(), img.cols(), p);
  SweepRecord rec;
  rec.wall_time_ms = elapsed_ms(start);
  rec.image = name;
  rec.backend = backend;
  rec.mode = Mode::Patched;
  rec.k = khat;
  rec.p = p;
  rec.khat = khat;
  rec.footprint = footprint(FootprintKind::Patched, img.rows(), img.cols(), 0, khat, p);
  return finish(img, std::move(product), std::move(fact), std::move(rec), cfg);
}

EncodedImage encode_image(const ImageMatrix& img, Backend backend, std::size_t rank,
                          std::size_t p, const NmfConfig& nmf) {
  EncodedImage enc;
  enc.n = static_cast<std::uint32_t>(img.rows());
  enc.m = static_cast<std::uint32_t>(img.cols());
  enc.p = static_cast<std::uint32_t>(p);
  if (p == 0) {
    enc.factorization = factorize(img.to_matrix(), rank, backend, nmf);
  } else {
    enc.factorization = factorize(reorder(img, p).data(), rank, backend, nmf);
  }
  return enc;
}

std::vector<std::uint8_t> serialize_encoded(const EncodedImage& enc) {
  std::vector<std::uint8_t> out = {'L', 'R', 'E', '1'};
  for (std::uint32_t v : {enc.n, enc.m, enc.p}) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  out.resize(kRmxHeaderBytes, 0);
  for (const auto* mat : {&enc.factorization.w, &enc.factorization.h}) {
    const auto blob = encode_rmx(to_raw(*mat));
    out.insert(out.end(), blob.begin(), blob.end());
  }
  const std::string line = sidecar_line(enc.factorization) + "\n";
  out.insert(out.end(), line.begin(), line.end());
  return out;
}

EncodedImage deserialize_encoded(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kRmxHeaderBytes) throw TruncationError("encoded image header is truncated");
  if (std::memcmp(bytes.data(), "LRE1", 4) != 0) {
    throw ParseError("bad encoded image magic, expected LRE1", 0);
  }
  auto u32 = [&](std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[at + i]) << (8 * i);
    return v;
  };
  EncodedImage enc;
  enc.n = u32(4);
  enc.m = u32(8);
  enc.p = u32(12);

  std::size_t at = kRmxHeaderBytes;
  std::size_t used = 0;
  auto w = decode_rmx(bytes.subspan(at), &used);
  at += used;
  auto h = decode_rmx(bytes.subspan(at), &used);
  at += used;
  const std::string_view rest(reinterpret_cast<const char*>(bytes.data()) + at,
                              bytes.size() - at);
  const auto info = parse_sidecar_line(rest.substr(0, rest.find('\n')));

  if (w.data.cols() != h.data.rows() ||
      static_cast<std::size_t>(w.data.cols()) != info.rank) {
    throw ShapeError("encoded factors disagree on rank");
  }
  const std::uint64_t rows = enc.p == 0 ? enc.n : std::uint64_t{enc.p} * enc.p;
  const std::uint64_t cols =
      enc.p == 0 ? enc.m : (std::uint64_t{enc.n} / enc.p) * (enc.m / enc.p);
  if (enc.p != 0) check_patch_size(enc.n, enc.m, enc.p);
  if (static_cast<std::uint64_t>(w.data.rows()) != rows ||
      static_cast<std::uint64_t>(h.data.cols()) != cols) {
    throw ShapeError("encoded factor shapes do not match the (n, m, p) header");
  }

  enc.factorization.w = std::move(w.data);
  enc.factorization.h = std::move(h.data);
  enc.factorization.rank = info.rank;
  enc.factorization.backend = info.backend;
  enc.factorization.iterations = info.iterations;
  enc.factorization.final_error = info.final_error;
  return enc;
}

ImageMatrix decode_image(const EncodedImage& enc) {
  const Eigen::MatrixXd product = enc.factorization.product();
  if (enc.p == 0) return ImageMatrix::from_clamped(product);
  return ImageMatrix::from_clamped(inverse_reorder_matrix(product, enc.n, enc.m, enc.p));
}

}  // namespace patchlr

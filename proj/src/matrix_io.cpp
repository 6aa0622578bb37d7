#include "patchlr/matrix_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "patchlr/errors.hpp"

namespace patchlr {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[at + i]) << (8 * i);
  return v;
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

double get_f64(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[at + i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

std::uint32_t checked_u32(Eigen::Index v) {
  if (v < 0 || static_cast<std::uint64_t>(v) > std::numeric_limits<std::uint32_t>::max()) {
    throw ShapeError("matrix dimension does not fit in 32 bits");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::vector<std::uint8_t> encode_rmx(const RawMatrix& rm) {
  std::vector<std::uint8_t> out;
  out.reserve(kRmxHeaderBytes + 8 * static_cast<std::size_t>(rm.data.size()));
  for (char c : {'R', 'M', 'X', '1'}) out.push_back(static_cast<std::uint8_t>(c));
  put_u32(out, rm.p);
  put_u32(out, rm.n);
  put_u32(out, rm.m);
  out.resize(kRmxHeaderBytes, 0);
  for (Eigen::Index r = 0; r < rm.data.rows(); ++r) {
    for (Eigen::Index c = 0; c < rm.data.cols(); ++c) put_f64(out, rm.data(r, c));
  }
  return out;
}

RawMatrix decode_rmx(std::span<const std::uint8_t> bytes, std::size_t* consumed) {
  if (bytes.size() < kRmxHeaderBytes) {
    throw TruncationError("raw matrix header needs 24 bytes, got " +
                          std::to_string(bytes.size()));
  }
  if (std::memcmp(bytes.data(), "RMX1", 4) != 0) {
    throw ParseError("bad raw matrix magic, expected RMX1", 0);
  }
  RawMatrix rm;
  rm.p = get_u32(bytes, 4);
  rm.n = get_u32(bytes, 8);
  rm.m = get_u32(bytes, 12);

  std::uint64_t rows = rm.n;
  std::uint64_t cols = rm.m;
  if (rm.p != 0) {
    check_patch_size(rm.n, rm.m, rm.p);
    rows = static_cast<std::uint64_t>(rm.p) * rm.p;
    cols = (static_cast<std::uint64_t>(rm.n) / rm.p) * (rm.m / rm.p);
  }
  const std::uint64_t need = kRmxHeaderBytes + rows * cols * 8;
  if (bytes.size() < need) {
    throw TruncationError("raw matrix payload holds " +
                          std::to_string((bytes.size() - kRmxHeaderBytes) / 8) +
                          " values, header declares " + std::to_string(rows * cols));
  }
  rm.data.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::size_t at = kRmxHeaderBytes;
  for (Eigen::Index r = 0; r < rm.data.rows(); ++r) {
    for (Eigen::Index c = 0; c < rm.data.cols(); ++c, at += 8) rm.data(r, c) = get_f64(bytes, at);
  }
  if (consumed) *consumed = at;
  return rm;
}

RawMatrix to_raw(const ReorderedMatrix& rm) {
  return {static_cast<std::uint32_t>(rm.patch_size()),
          static_cast<std::uint32_t>(rm.orig_rows()),
          static_cast<std::uint32_t>(rm.orig_cols()), rm.data()};
}

RawMatrix to_raw(const Eigen::MatrixXd& m) {
  return {0, checked_u32(m.rows()), checked_u32(m.cols()), m};
}

ReorderedMatrix to_reordered(RawMatrix raw) {
  if (raw.p == 0) throw ShapeError("raw matrix carries no patch size");
  return ReorderedMatrix(raw.p, raw.n, raw.m, std::move(raw.data));
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error("write failed for " + path);
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace patchlr

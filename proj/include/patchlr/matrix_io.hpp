#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "patchlr/reorder.hpp"

namespace patchlr {

// Raw matrix format ("RMX1"):
//
//   bytes  0..3   magic "RMX1"
//   bytes  4..7   p  (u32 little-endian)
//   bytes  8..11  n  (u32 little-endian)
//   bytes 12..15  m  (u32 little-endian)
//   bytes 16..23  zero padding
//   then rows*cols IEEE-754 doubles, little-endian, row-major.
//
// For a reordered matrix p > 0 and (n, m) are the original image dimensions;
// the payload is p^2 x nm/p^2. A plain matrix (factor W or H) is written
// with p = 0 and (n, m) = (rows, cols).

inline constexpr std::size_t kRmxHeaderBytes = 24;

struct RawMatrix {
  std::uint32_t p = 0;
  std::uint32_t n = 0;
  std::uint32_t m = 0;
  Eigen::MatrixXd data;
};

std::vector<std::uint8_t> encode_rmx(const RawMatrix& rm);

/// Decodes one RMX1 blob starting at bytes[0]. `consumed` receives the number
/// of bytes read so blobs can be concatenated.
RawMatrix decode_rmx(std::span<const std::uint8_t> bytes, std::size_t* consumed = nullptr);

RawMatrix to_raw(const ReorderedMatrix& rm);
RawMatrix to_raw(const Eigen::MatrixXd& m);
ReorderedMatrix to_reordered(RawMatrix raw);

void write_file(const std::string& path, std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_file(const std::string& path);

}  // namespace patchlr

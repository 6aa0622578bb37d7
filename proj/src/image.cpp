#include "patchlr/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <string>

#include "patchlr/errors.hpp"
#include "patchlr/random.hpp"

namespace patchlr {

ImageMatrix::ImageMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows_ == 0 || cols_ == 0) {
    throw ShapeError("image dimensions must be positive");
  }
  if (data_.size() != rows_ * cols_) {
    throw ShapeError("image buffer holds " + std::to_string(data_.size()) +
                     " values, expected " + std::to_string(rows_ * cols_));
  }
  for (double v : data_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("image intensity outside [0, 1]: " + std::to_string(v));
    }
  }
}

ImageMatrix ImageMatrix::from_clamped(
    const Eigen::Ref<const Eigen::MatrixXd>& m) {
  const auto rows = static_cast<std::size_t>(m.rows());
  const auto cols = static_cast<std::size_t>(m.cols());
  std::vector<double> data(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      data[r * cols + c] = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
    }
  }
  return ImageMatrix(rows, cols, std::move(data));
}

namespace {

bool is_space(std::uint8_t b) {
  return b == ' ' || b == '\t' || b == '\n' || b == '\r' || b == '\v' ||
         b == '\f';
}

// Cursor over PGM bytes. Header tokens may be separated by whitespace and
// '#' comments running to end of line.
class PgmReader {
 public:
  explicit PgmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ >= bytes_.size(); }

  void skip_space_and_comments() {
    while (!at_end()) {
      if (bytes_[pos_] == '#') {
        while (!at_end() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (is_space(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::uint64_t read_header_uint(const char* field) {
    skip_space_and_comments();
    return read_uint(field, /*in_header=*/true);
  }

  std::uint64_t read_ascii_sample() {
    while (!at_end() && is_space(bytes_[pos_])) ++pos_;
    if (at_end()) throw TruncationError("PGM pixel data ended early");
    return read_uint("pixel", /*in_header=*/false);
  }

  std::uint8_t byte() {
    if (at_end()) throw TruncationError("PGM pixel data ended early");
    return bytes_[pos_++];
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

  std::uint8_t peek() const { return bytes_[pos_]; }
  void advance() { ++pos_; }

 private:
  std::uint64_t read_uint(const char* field, bool in_header) {
    const std::size_t start = pos_;
    std::uint64_t value = 0;
    while (!at_end() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > std::numeric_limits<std::uint32_t>::max()) {
        throw ParseError(std::string("PGM ") + field + " value too large", start);
      }
      ++pos_;
    }
    if (pos_ == start) {
      if (at_end() && in_header) {
        throw ParseError(std::string("PGM header ended before ") + field, pos_);
      }
      throw ParseError(std::string("expected an integer for PGM ") + field, pos_);
    }
    if (!at_end() && !is_space(bytes_[pos_]) && bytes_[pos_] != '#') {
      throw ParseError(std::string("unexpected character after PGM ") + field,
                       pos_);
    }
    return value;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

ImageMatrix load_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw ParseError("not a PGM file: magic must be P2 or P5", 0);
  }
  const bool binary = bytes[1] == '5';
  PgmReader in(bytes);
  in.advance();
  in.advance();
  if (!in.at_end() && !is_space(in.peek()) && in.peek() != '#') {
    throw ParseError("missing whitespace after PGM magic", in.pos());
  }

  const std::size_t width_at = in.pos();
  const auto width = in.read_header_uint("width");
  const auto height = in.read_header_uint("height");
  if (width == 0 || height == 0) {
    throw ParseError("PGM dimensions must be positive", width_at);
  }
  const std::size_t maxval_at = in.pos();
  const auto maxval = in.read_header_uint("maxval");
  if (maxval == 0 || maxval > 65535) {
    throw ParseError("PGM maxval must lie in [1, 65535]", maxval_at);
  }

  const std::size_t count = width * height;
  std::vector<double> data(count);
  const double scale = 1.0 / static_cast<double>(maxval);

  if (binary) {
    // Exactly one whitespace byte separates maxval from the raster.
    if (in.at_end() || !is_space(in.peek())) {
      throw ParseError("missing whitespace before PGM raster", in.pos());
    }
    in.advance();
    const std::size_t sample_bytes = maxval < 256 ? 1 : 2;
    if (in.remaining() < count * sample_bytes) {
      throw TruncationError("PGM raster holds " +
                            std::to_string(in.remaining() / sample_bytes) +
                            " samples, header declares " + std::to_string(count));
    }
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t at = in.pos();
      std::uint32_t s = in.byte();
      if (sample_bytes == 2) s = (s << 8) | in.byte();
      if (s > maxval) throw ParseError("PGM sample exceeds maxval", at);
      data[i] = s * scale;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t at = in.pos();
      const auto s = in.read_ascii_sample();
      if (s > maxval) throw ParseError("PGM sample exceeds maxval", at);
      data[i] = static_cast<double>(s) * scale;
    }
  }
  return ImageMatrix(height, width, std::move(data));
}

ImageMatrix load_pgm_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  return load_pgm(bytes);
}

std::vector<std::uint8_t> save_pgm(const ImageMatrix& img, std::uint32_t maxval) {
  if (maxval != 255 && maxval != 65535) {
    throw InvalidArgument("PGM maxval must be 255 or 65535");
  }
  const std::string header = "P5\n" + std::to_string(img.cols()) + " " +
                             std::to_string(img.rows()) + "\n" +
                             std::to_string(maxval) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + img.size() * (maxval > 255 ? 2 : 1));
  for (double v : img.data()) {
    const auto s = static_cast<std::uint32_t>(
        std::clamp(std::lround(v * maxval), 0L, static_cast<long>(maxval)));
    if (maxval > 255) out.push_back(static_cast<std::uint8_t>(s >> 8));
    out.push_back(static_cast<std::uint8_t>(s & 0xff));
  }
  return out;
}

void save_pgm_file(const ImageMatrix& img, const std::string& path,
                   std::uint32_t maxval) {
  const auto bytes = save_pgm(img, maxval);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
}

SynthKind parse_synth_kind(std::string_view name) {
  if (name == "gradient") return SynthKind::Gradient;
  if (name == "checkerboard") return SynthKind::Checkerboard;
  if (name == "gaussian-blobs") return SynthKind::GaussianBlobs;
  if (name == "uniform-noise") return SynthKind::UniformNoise;
  throw InvalidArgument("unknown synthetic image kind '" + std::string(name) + "'");
}

std::string_view to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::Gradient: return "gradient";
    case SynthKind::Checkerboard: return "checkerboard";
    case SynthKind::GaussianBlobs: return "gaussian-blobs";
    case SynthKind::UniformNoise: return "uniform-noise";
  }
  return "?";
}

namespace {

std::vector<double> gaussian_blobs(std::size_t n, std::size_t m,
                                   std::uint64_t seed) {
  constexpr int kBlobs = 5;
  struct Blob {
    double cy, cx, cos_t, sin_t, inv_major, inv_minor, amplitude;
  };
  Rng rng(seed);
  const double side = static_cast<double>(std::min(n, m));
  Blob blobs[kBlobs];
  for (auto& b : blobs) {
    b.cy = rng.uniform(0.0, static_cast<double>(n));
    b.cx = rng.uniform(0.0, static_cast<double>(m));
    const double major = side * rng.uniform(0.2, 0.5);
    const double minor = major * rng.uniform(0.02, 0.06);
    const double theta = rng.uniform(0.0, std::numbers::pi);
    b.cos_t = std::cos(theta);
    b.sin_t = std::sin(theta);
    b.inv_major = 1.0 / (major * major);
    b.inv_minor = 1.0 / (minor * minor);
    b.amplitude = rng.uniform(0.4, 1.0);
  }

  std::vector<double> v(n * m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (const auto& b : blobs) {
        const double dy = static_cast<double>(i) - b.cy;
        const double dx = static_cast<double>(j) - b.cx;
        const double u = b.cos_t * dx + b.sin_t * dy;
        const double w = -b.sin_t * dx + b.cos_t * dy;
        s += b.amplitude * std::exp(-0.5 * (u * u * b.inv_major + w * w * b.inv_minor));
      }
      v[i * m + j] = s;
    }
  }
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double min = *lo;
  const double range = *hi - *lo;
  for (double& x : v) x = range > 0.0 ? std::clamp((x - min) / range, 0.0, 1.0) : 0.0;
  return v;
}

}  // namespace

ImageMatrix synth_image(SynthKind kind, std::size_t n, std::size_t m,
                        std::uint64_t seed) {
  const bool tiny_gradient = kind == SynthKind::Gradient && n * m >= 2;
  if ((n < 4 || m < 4) && !tiny_gradient) {
    throw InvalidArgument("synthetic images need at least 4 rows and 4 columns");
  }
  std::vector<double> v(n * m);
  switch (kind) {
    case SynthKind::Gradient: {
      const double denom = static_cast<double>(n * m - 1);
      for (std::size_t i = 0; i < n * m; ++i) v[i] = static_cast<double>(i) / denom;
      break;
    }
    case SynthKind::Checkerboard:
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) v[i * m + j] = ((i / 8 + j / 8) % 2) ? 1.0 : 0.0;
      }
      break;
    case SynthKind::GaussianBlobs:
      v = gaussian_blobs(n, m, seed);
      break;
    case SynthKind::UniformNoise: {
      Rng rng(seed);
      for (double& x : v) x = rng.uniform();
      break;
    }
  }
  return ImageMatrix(n, m, std::move(v));
}

}  // namespace patchlr

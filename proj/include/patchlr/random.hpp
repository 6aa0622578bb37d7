#pragma once

#include <cstdint>
#include <random>

namespace patchlr {

/// Seeded generator with a platform-independent double stream.
///
/// std::uniform_real_distribution is implementation-defined, so sweeps would
/// not be byte-reproducible across standard libraries. The 53-bit mapping
/// below is fixed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_closed() { return 1.0 - uniform(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace patchlr

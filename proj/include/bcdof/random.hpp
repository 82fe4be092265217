// SPDX-License-Identifier: Apache-2.0
//
// Seeded standard-normal source with a fixed algorithm, so generated channels
// are reproducible across platforms and standard libraries.
#pragma once

#include "bcdof/channel.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace bcdof {

class GaussianSource {
public:
  static constexpr const char* kAlgorithm = "mt19937_64/box-muller";

  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Integer uniform on [lo, hi] by rejection-free modulo over 64 bits (bias < 2^-50 here).
  std::uint64_t integer(std::uint64_t lo, std::uint64_t hi) { return lo + engine_() % (hi - lo + 1); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Row-major fill.
  Matrix matrix(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal();
    }
    return m;
  }

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// H1 (r1 x t) then H2 (r2 x t), both row-major from one stream.
inline channel::MimoBcChannel random_channel(std::size_t t, std::size_t r1, std::size_t r2,
                                             std::uint64_t seed, double power = 1.0) {
  GaussianSource src(seed);
  channel::MimoBcChannel ch;
  ch.h1 = src.matrix(static_cast<Eigen::Index>(r1), static_cast<Eigen::Index>(t));
  ch.h2 = src.matrix(static_cast<Eigen::Index>(r2), static_cast<Eigen::Index>(t));
  ch.power = power;
  return ch;
}

} // namespace bcdof

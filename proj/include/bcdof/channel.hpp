// SPDX-License-Identifier: Apache-2.0
//
// Two-receiver Gaussian MIMO broadcast channel and its GSVD image: a parallel
// broadcast channel with unmatched sub-channels under a relaxed power budget.
#pragma once

#include "bcdof/matdecomp.hpp"

#include <cstddef>
#include <map>
#include <vector>

namespace bcdof {

/// Sizes of the three sub-channel groups: seen by receiver 1 only, by both, by receiver 2 only.
struct SetSizes {
  std::size_t s1 = 0;
  std::size_t sc = 0;
  std::size_t s2 = 0;

  std::size_t total() const { return s1 + sc + s2; }
  friend bool operator==(const SetSizes&, const SetSizes&) = default;
};

namespace channel {

/// Y_j = H_j X + N_j with tr(E[X X^T]) <= power.
struct MimoBcChannel {
  Matrix h1;
  Matrix h2;
  double power = 1.0;
};

/// Throws ContractViolation unless h1/h2 are non-empty, finite, share a column count and power > 0.
void validate(const MimoBcChannel& ch);

/// Sub-channel indices, 0-based, ordered s1 | sc | s2.
struct SubchannelPartition {
  std::vector<std::size_t> s1;
  std::vector<std::size_t> sc;
  std::vector<std::size_t> s2;
  std::vector<std::size_t> sc1; ///< sc members with h1^2 >= h2^2 (ties land here)
  std::vector<std::size_t> sc2; ///< remaining sc members

  SetSizes sizes() const { return {s1.size(), sc.size(), s2.size()}; }
  std::size_t total() const { return s1.size() + sc.size() + s2.size(); }
};

struct ParallelChannel {
  std::map<std::size_t, double> gains1; ///< defined on s1 and sc
  std::map<std::size_t, double> gains2; ///< defined on sc and s2
  SubchannelPartition partition;
  double zeta = 1.0;          ///< [omega^-1 0]^T [omega^-1 0] <= zeta I, minimal choice
  double relaxed_power = 1.0; ///< zeta * P

  std::size_t size() const { return partition.total(); }
};

/// Split the shared sub-channels by which receiver has the stronger gain.
void partition_common(const std::map<std::size_t, double>& gains1,
                      const std::map<std::size_t, double>& gains2,
                      const std::vector<std::size_t>& sc, std::vector<std::size_t>& sc1,
                      std::vector<std::size_t>& sc2);

/// Smallest zeta with [omega^-1 0]^T [omega^-1 0] <= zeta I, i.e. 1 / sigma_min(omega)^2.
/// Returns 1 for an empty omega (any positive value is admissible there).
double relaxation_factor(const Matrix& omega);

/// Read the sub-channel gains off the sigma blocks and relax the power budget.
ParallelChannel transform_channel(const MimoBcChannel& ch, const matdecomp::GsvdFactors& factors);

} // namespace channel
} // namespace bcdof

// SPDX-License-Identifier: Apache-2.0
//
// Closed-form rate expressions: dirty-paper coding with a Gaussian common
// message, the GSVD zero-forcing variant, the unmatched parallel-channel outer
// bound, and secant estimates of the pre-log (DoF) slopes.
#pragma once

#include "bcdof/channel.hpp"
#include "bcdof/matdecomp.hpp"

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

namespace bcdof::rates {

/// Rates in bits per channel use.
struct RateTriple {
  double r0 = 0; ///< common message
  double r1 = 0; ///< private message of receiver 1
  double r2 = 0; ///< private message of receiver 2
};

/// Pre-log slopes estimated from finite-power rates.
struct DofEstimate {
  double d0 = 0;
  double d1 = 0;
  double d2 = 0;
};

/// Integer split of the shared and private sub-channels between the three messages.
struct DofParams {
  std::size_t alpha1 = 0; ///< shared sub-channels given to receiver 1's private message
  std::size_t alpha2 = 0; ///< shared sub-channels given to receiver 2's private message
  std::size_t beta = 0;   ///< private sub-channels of each receiver lent to the common message
};

/// Throws ValidationError naming the violated bound.
void validate(const DofParams& params, const SetSizes& sizes);

/// All integer parameter triples admissible for `sizes`.
std::vector<DofParams> feasible_params(const SetSizes& sizes);

/// (|Sc| - a1 - a2 + b, a1 + |S1| - b, a2 + |S2| - b)
std::array<std::size_t, 3> target_dof(const DofParams& params, const SetSizes& sizes);

/// 0/1 diagonals of the three message covariances in GSVD coordinates.
struct LambdaPattern {
  std::vector<int> common;
  std::vector<int> private1;
  std::vector<int> private2;
};

LambdaPattern lambda_pattern(const DofParams& params, const SetSizes& sizes);

/// K_u = (xi P) psi0 [omega; 0] Lambda_u [omega^T 0] psi0^T, normalized so tr(K0+K1+K2) = P.
///
/// The square-root generators G_u (K_u = G_u G_u^T) are kept alongside; the log-det
/// rates are evaluated from them so that no P-scaled product is ever formed.
struct CovarianceProfile {
  Vector lambda0;
  Vector lambda1;
  Vector lambda2;
  double xi = 0;
  double power = 0;
  Matrix k0;
  Matrix k1;
  Matrix k2;
  Matrix g0; ///< t x k
  Matrix g1;
  Matrix g2;
};

CovarianceProfile build_dpc_covariances(const DofParams& params,
                                        const matdecomp::GsvdFactors& factors,
                                        const channel::SubchannelPartition& partition,
                                        double power);

/// log2 |I + M M^T| through a QR factorization of [M^T; I].
double log2_det_identity_plus_gram(const Matrix& m);

/// DPC region corner (common message decoded first, receiver 2 encoded first) from
/// arbitrary PSD covariances. Throws ContractViolation for non-PSD or mis-sized input.
RateTriple dpc_rates(const Matrix& k0, const Matrix& k1, const Matrix& k2, const Matrix& h1,
                     const Matrix& h2);

/// Same rates from the covariance generators (r_j x r_j determinants, no products of K).
RateTriple dpc_rates(const CovarianceProfile& profile, const Matrix& h1, const Matrix& h2);

/// Same rates from the diagonal k x k form |xi P Lambda Sigma_j^T Sigma_j + I|.
RateTriple dpc_rates_diagonal(const CovarianceProfile& profile,
                              const matdecomp::GsvdFactors& factors);

/// |det(AB + I) - det(BA + I)|
double sylvester_check(const Matrix& a, const Matrix& b);

/// zeta P / k on every sub-channel.
std::vector<double> equal_power_split(const channel::ParallelChannel& pch);

/// Independent Gaussian coding over the ZF sub-channels: the common message uses
/// the Lambda_0 positions, each private message its own positions.
RateTriple zf_rates(const DofParams& params, const channel::ParallelChannel& pch,
                    const std::vector<double>& subpower);

/// Superposition split and power per sub-channel for the parallel-channel bound.
struct AllocationProfile {
  std::vector<double> gamma;    ///< share of power for the cloud center, in [0, 1]
  std::vector<double> subpower; ///< sums to zeta P
};

/// Right-hand sides of the six rate bounds of the unmatched parallel channel:
/// R0 <= b[0], R0 <= b[1], R0+R1 <= b[2], R0+R2 <= b[3], R0+R1+R2 <= b[4], R0+R1+R2 <= b[5].
std::array<double, 6> parallel_region_bounds(const channel::ParallelChannel& pch,
                                             const AllocationProfile& alloc);

bool satisfies_bounds(const RateTriple& r, const std::array<double, 6>& b, double slack = 0.0);

/// 1/2 log2(1 + x)
double gaussian_capacity(double x);

/// Secant slope over the two largest powers: (R(Pb) - R(Pa)) / (1/2 log2(Pb/Pa)).
/// Throws ValidationError for fewer than two points or non-increasing powers.
DofEstimate estimate_dof(const std::vector<std::pair<double, RateTriple>>& curve);

} // namespace bcdof::rates

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "channel_spec.hpp"

#include "bcdof/matdecomp.hpp"
#include "bcdof/rates.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace bcdof::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitCheckFailed = 2, kExitNumerical = 3 };

struct Tolerances {
  double reconstruction = 1e-8; ///< relative: ||residual||_F / (1 + ||H||_F)
  double rank = matdecomp::kDefaultRankTol;
  double slope = 0.05;
};

inline constexpr double kOrthonormalityTol = 1e-10;
inline constexpr double kPatternTol = 1e-10;
inline constexpr double kRateAgreementBits = 1e-8;

enum class Which { inner, outer, both };
enum class Scheme { dpc, zf };

struct Report {
  nlohmann::json json;
  std::string csv;         ///< sweep table; empty for other commands
  int exit_code = kExitOk;
  std::string diagnostic;  ///< one-line summary of failed checks
};

Report cmd_gsvd(const ChannelSpec& spec, const Tolerances& tol);
Report cmd_region(const SetSizes& sizes, Which which);
Report cmd_sweep(const ChannelSpec& spec, const rates::DofParams& params, const std::vector<double>& powers,
                 Scheme scheme, const Tolerances& tol);
Report cmd_verify(std::size_t trials, const std::array<std::size_t, 3>& max_dims, std::uint64_t seed,
                  const Tolerances& tol);

/// "a,b,c" of non-negative integers.
std::array<std::size_t, 3> parse_triple(const std::string& text, const char* what);
/// "start:stop:count" (geometric) or an explicit comma list; at least two increasing positive powers.
std::vector<double> parse_power_grid(const std::string& text);
Which parse_which(const std::string& text);
Scheme parse_scheme(const std::string& text);

/// "fnv1a64:<16 hex digits>" of the compact JSON dump.
std::string inputs_digest(const nlohmann::json& inputs);

} // namespace bcdof::cli
